//! Exact planar ball-bodies.
//!
//! A [`DiskPolygon`] is an intersection of unit disks stored by its active
//! arcs. Every operation of the c-duality calculus (dual, hull, extremal
//! points) reduces to one primitive: given centers in convex position, find
//! the c-extremal ones. The dual of a point set then has arcs centered at
//! those points and vertices at the "left" unit centers of consecutive pairs,
//! and the c-hull swaps the two roles.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::geom::{convex_hull, left_unit_center, Vec2, EPS_GEOM};
use crate::seb::smallest_enclosing_disk;
use crate::support::{Piece, SupportFunction, SupportProfile};

/// A nonempty planar point set with duplicates merged.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<Vec2>,
}

impl PointSet {
    pub fn new(points: Vec<Vec2>) -> Result<Self> {
        Self::with_eps(points, EPS_GEOM)
    }

    pub fn with_eps(points: Vec<Vec2>, eps: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyInput("point set"));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidArgument("non-finite point".into()));
        }
        Ok(Self {
            points: dedup(points, eps),
        })
    }

    pub fn points(&self) -> &[Vec2] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn to_json(&self) -> String {
        let mut s = String::from("{\"points\": ");
        write_points(&mut s, &self.points);
        s.push('}');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Doc {
            points: Vec<[f64; 2]>,
        }
        let doc: Doc = serde_json::from_str(text).map_err(|e| Error::Serialization(e.to_string()))?;
        Self::new(doc.points.into_iter().map(Vec2::from).collect())
    }
}

fn dedup(mut points: Vec<Vec2>, eps: f64) -> Vec<Vec2> {
    points.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    let mut out: Vec<Vec2> = Vec::with_capacity(points.len());
    for p in points {
        // sorted by x, so only a short tail can hold a near-duplicate
        let dup = out
            .iter()
            .rev()
            .take_while(|q| p.x - q.x <= eps)
            .any(|q| q.dist(p) <= eps);
        if !dup {
            out.push(p);
        }
    }
    out
}

/// Classification tag of a [`DiskPolygon`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Empty,
    SinglePoint,
    FullDisk,
    Proper,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Empty => "Empty",
            Classification::SinglePoint => "SinglePoint",
            Classification::FullDisk => "FullDisk",
            Classification::Proper => "Proper",
        }
    }
}

/// Cyclic arc structure of a proper disk-polygon.
///
/// `arc_centers[i]` carries the unit arc from `vertices[i]` to
/// `vertices[i + 1]`, counterclockwise. The first vertex is the
/// lexicographically smallest.
#[derive(Debug, Clone, PartialEq)]
pub struct Arcs {
    vertices: Vec<Vec2>,
    arc_centers: Vec<Vec2>,
}

impl Arcs {
    /// Rotates the cycle so it starts at the lexicographically smallest vertex.
    pub(crate) fn normalized(vertices: Vec<Vec2>, arc_centers: Vec<Vec2>, eps: f64) -> Self {
        debug_assert_eq!(vertices.len(), arc_centers.len());
        let mut start = 0;
        for i in 1..vertices.len() {
            if vertices[i].lex_less(vertices[start], eps) {
                start = i;
            }
        }
        let mut v = vertices;
        let mut c = arc_centers;
        v.rotate_left(start);
        c.rotate_left(start);
        Self {
            vertices: v,
            arc_centers: c,
        }
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn arc_centers(&self) -> &[Vec2] {
        &self.arc_centers
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Normal angle range `(start, end)` of arc `i`, with `end − start ∈ [0, π]`.
    pub fn arc_angles(&self, i: usize) -> (f64, f64) {
        let m = self.vertices.len();
        let c = self.arc_centers[i];
        let a = (self.vertices[i] - c).angle();
        let mut b = (self.vertices[(i + 1) % m] - c).angle();
        while b < a {
            b += TAU;
        }
        (a, b)
    }
}

/// An intersection of unit disks.
#[derive(Debug, Clone, PartialEq)]
pub enum DiskPolygon {
    Empty,
    SinglePoint(Vec2),
    FullDisk(Vec2),
    Proper(Arcs),
}

/// Exact intersection of the unit disks centered at `centers`.
pub fn intersect_unit_disks(centers: &[Vec2]) -> Result<DiskPolygon> {
    intersect_unit_disks_with(centers, EPS_GEOM)
}

pub fn intersect_unit_disks_with(centers: &[Vec2], eps: f64) -> Result<DiskPolygon> {
    let set = PointSet::with_eps(centers.to_vec(), eps)?;
    let pts = set.points();
    if pts.len() == 1 {
        return Ok(DiskPolygon::FullDisk(pts[0]));
    }
    let (c, r) = smallest_enclosing_disk(pts)?;
    if r > 1.0 + eps {
        return Ok(DiskPolygon::Empty);
    }
    if r >= 1.0 - eps {
        return Ok(DiskPolygon::SinglePoint(c));
    }
    let ext = extremal_cycle(pts, c, eps);
    let m = ext.len();
    let vertices: Vec<Vec2> = (0..m)
        .map(|i| left_unit_center(ext[(i + m - 1) % m], ext[i]))
        .collect();
    Ok(DiskPolygon::Proper(Arcs::normalized(vertices, ext, eps)))
}

/// c-extremal points of `pts` in counterclockwise order.
///
/// Requires out-radius below 1 and at least two distinct points; `seb_center`
/// is the center of the smallest enclosing disk. Only convex hull vertices can
/// be c-extremal; among them a Graham-type scan drops every point lying under
/// the unit arc spanned by its surviving neighbours. The scan starts at the
/// point farthest from `seb_center`, which is always c-extremal.
fn extremal_cycle(pts: &[Vec2], seb_center: Vec2, eps: f64) -> Vec<Vec2> {
    let hull = convex_hull(pts);
    if hull.len() <= 2 {
        return hull;
    }
    let start = (0..hull.len())
        .max_by(|&i, &j| {
            hull[i]
                .dist(seb_center)
                .total_cmp(&hull[j].dist(seb_center))
        })
        .expect("hull is nonempty");
    let n = hull.len();
    let mut stack: Vec<Vec2> = Vec::with_capacity(n + 1);
    stack.push(hull[start]);
    for k in 1..=n {
        let q = hull[(start + k) % n];
        while stack.len() >= 2 {
            let t = stack[stack.len() - 1];
            let s = stack[stack.len() - 2];
            if t.dist(left_unit_center(s, q)) <= 1.0 + eps {
                stack.pop();
            } else {
                break;
            }
        }
        stack.push(q);
    }
    stack.pop();
    stack
}

/// The c-dual `A^c`: intersection of unit disks centered at the points of `A`.
pub fn cdual(a: &PointSet) -> Result<DiskPolygon> {
    intersect_unit_disks(a.points())
}

/// The c-hull `A^{cc}`.
pub fn chull(a: &PointSet) -> Result<DiskPolygon> {
    chull_with(a.points(), EPS_GEOM)
}

pub fn chull_with(points: &[Vec2], eps: f64) -> Result<DiskPolygon> {
    match intersect_unit_disks_with(points, eps)? {
        DiskPolygon::Empty => {
            let (_, r) = smallest_enclosing_disk(points)?;
            Err(Error::WholePlane(r))
        }
        DiskPolygon::SinglePoint(c) => Ok(DiskPolygon::FullDisk(c)),
        DiskPolygon::FullDisk(c) => Ok(DiskPolygon::SinglePoint(c)),
        DiskPolygon::Proper(arcs) => intersect_unit_disks_with(arcs.vertices(), eps),
    }
}

impl DiskPolygon {
    pub fn classification(&self) -> Classification {
        match self {
            DiskPolygon::Empty => Classification::Empty,
            DiskPolygon::SinglePoint(_) => Classification::SinglePoint,
            DiskPolygon::FullDisk(_) => Classification::FullDisk,
            DiskPolygon::Proper(_) => Classification::Proper,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, DiskPolygon::Empty)
    }

    /// Vertices of a proper polygon; empty otherwise.
    pub fn vertices(&self) -> &[Vec2] {
        match self {
            DiskPolygon::Proper(a) => a.vertices(),
            _ => &[],
        }
    }

    /// Centers of the defining disks (one for a full disk).
    pub fn arc_centers(&self) -> &[Vec2] {
        match self {
            DiskPolygon::Proper(a) => a.arc_centers(),
            DiskPolygon::FullDisk(c) => std::slice::from_ref(c),
            _ => &[],
        }
    }

    pub fn arcs(&self) -> Option<&Arcs> {
        match self {
            DiskPolygon::Proper(a) => Some(a),
            _ => None,
        }
    }

    /// The c-extremal points: vertices, or the point itself.
    pub fn c_extremal(&self) -> Result<PointSet> {
        match self {
            DiskPolygon::Empty => Err(Error::EmptyBody),
            DiskPolygon::FullDisk(_) => Err(Error::NoExtremalRepresentation),
            DiskPolygon::SinglePoint(p) => PointSet::new(vec![*p]),
            DiskPolygon::Proper(a) => PointSet::new(a.vertices().to_vec()),
        }
    }

    /// Shoelace area of the vertex polygon plus one circular segment per arc.
    pub fn area(&self) -> f64 {
        match self {
            DiskPolygon::Empty | DiskPolygon::SinglePoint(_) => 0.0,
            DiskPolygon::FullDisk(_) => PI,
            DiskPolygon::Proper(a) => {
                let v = a.vertices();
                let m = v.len();
                let mut shoelace = 0.0;
                let mut segments = 0.0;
                for i in 0..m {
                    let p = v[i];
                    let q = v[(i + 1) % m];
                    shoelace += p.cross(q);
                    let d = (0.5 * p.dist(q)).min(1.0);
                    segments += d.asin() - d * (1.0 - d * d).sqrt();
                }
                0.5 * shoelace + segments
            }
        }
    }

    pub fn contains(&self, p: Vec2) -> bool {
        self.contains_with(p, EPS_GEOM)
    }

    pub fn contains_with(&self, p: Vec2, eps: f64) -> bool {
        match self {
            DiskPolygon::Empty => false,
            DiskPolygon::SinglePoint(q) => q.dist(p) <= eps,
            _ => self.arc_centers().iter().all(|c| c.dist(p) <= 1.0 + eps),
        }
    }

    /// Exact piecewise support function.
    pub fn support_function(&self) -> Result<SupportFunction> {
        match self {
            DiskPolygon::Empty => Err(Error::EmptyBody),
            DiskPolygon::SinglePoint(p) => Ok(SupportFunction::disk(*p, 0.0)),
            DiskPolygon::FullDisk(c) => Ok(SupportFunction::disk(*c, 1.0)),
            DiskPolygon::Proper(a) => {
                let m = a.len();
                let mut pieces = Vec::with_capacity(2 * m);
                let mut last = f64::NEG_INFINITY;
                let mut push = |start: f64, point: Vec2, offset: f64, pieces: &mut Vec<Piece>| {
                    let mut s = start;
                    if last.is_finite() {
                        while s < last - PI {
                            s += TAU;
                        }
                        while s > last + PI {
                            s -= TAU;
                        }
                    }
                    last = s.max(if last.is_finite() { last } else { s });
                    pieces.push(Piece {
                        start: last,
                        point,
                        offset,
                    });
                };
                for i in 0..m {
                    let (alpha, beta) = a.arc_angles(i);
                    push(alpha, a.arc_centers()[i], 1.0, &mut pieces);
                    push(beta, a.vertices()[(i + 1) % m], 0.0, &mut pieces);
                }
                Ok(SupportFunction::from_pieces(pieces))
            }
        }
    }

    /// `h_K(θ)`, the larger of the vertex and active-arc candidates.
    pub fn support(&self, theta: f64) -> Result<f64> {
        Ok(self.support_function()?.value(theta))
    }

    pub fn support_profile(&self, n: usize) -> Result<SupportProfile> {
        Ok(self.support_function()?.profile(n))
    }

    /// Mean of the support function over the circle (normalized measure).
    pub fn mean_width(&self) -> Result<f64> {
        Ok(self.support_function()?.mean_width())
    }

    /// Hausdorff distance, computed as the sup-distance of support functions.
    pub fn hausdorff(&self, other: &DiskPolygon) -> Result<f64> {
        Ok(self
            .support_function()?
            .sup_distance(&other.support_function()?))
    }

    /// Boundary points: vertices plus `per_arc` interior samples of every arc.
    pub fn boundary_samples(&self, per_arc: usize) -> Vec<Vec2> {
        match self {
            DiskPolygon::Empty => Vec::new(),
            DiskPolygon::SinglePoint(p) => vec![*p],
            DiskPolygon::FullDisk(c) => (0..per_arc.max(3))
                .map(|k| *c + Vec2::polar(TAU * k as f64 / per_arc.max(3) as f64))
                .collect(),
            DiskPolygon::Proper(a) => {
                let mut out = Vec::with_capacity(a.len() * (per_arc + 1));
                for i in 0..a.len() {
                    out.push(a.vertices()[i]);
                    let (s, e) = a.arc_angles(i);
                    for k in 1..=per_arc {
                        let t = s + (e - s) * k as f64 / (per_arc + 1) as f64;
                        out.push(a.arc_centers()[i] + Vec2::polar(t));
                    }
                }
                out
            }
        }
    }

    /// About `total` boundary points spread proportionally to arc angle.
    pub fn boundary_samples_total(&self, total: usize) -> Vec<Vec2> {
        match self {
            DiskPolygon::Proper(a) => {
                let spans: Vec<(f64, f64)> = (0..a.len()).map(|i| a.arc_angles(i)).collect();
                let sum: f64 = spans.iter().map(|(s, e)| e - s).sum();
                let mut out = Vec::with_capacity(total + a.len());
                for (i, (s, e)) in spans.iter().enumerate() {
                    out.push(a.vertices()[i]);
                    let k = ((e - s) / sum * total as f64).round() as usize;
                    for j in 1..=k {
                        let t = s + (e - s) * j as f64 / (k + 1) as f64;
                        out.push(a.arc_centers()[i] + Vec2::polar(t));
                    }
                }
                out
            }
            _ => self.boundary_samples(total),
        }
    }

    /// JSON document with 17 significant digits per coordinate.
    pub fn to_json(&self) -> String {
        let (verts, centers): (Vec<Vec2>, Vec<Vec2>) = match self {
            DiskPolygon::Empty => (vec![], vec![]),
            DiskPolygon::SinglePoint(p) => (vec![*p], vec![]),
            DiskPolygon::FullDisk(c) => (vec![], vec![*c]),
            DiskPolygon::Proper(a) => (a.vertices().to_vec(), a.arc_centers().to_vec()),
        };
        let mut s = String::new();
        write!(s, "{{\"classification\": \"{}\", \"vertices\": ", self.classification().as_str())
            .unwrap();
        write_points(&mut s, &verts);
        s.push_str(", \"arc_centers\": ");
        write_points(&mut s, &centers);
        s.push('}');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Doc {
            classification: String,
            vertices: Vec<[f64; 2]>,
            arc_centers: Vec<[f64; 2]>,
        }
        let doc: Doc = serde_json::from_str(text).map_err(|e| Error::Serialization(e.to_string()))?;
        let verts: Vec<Vec2> = doc.vertices.into_iter().map(Vec2::from).collect();
        let centers: Vec<Vec2> = doc.arc_centers.into_iter().map(Vec2::from).collect();
        let bad = |what: &str| Error::Serialization(format!("malformed {what} document"));
        match doc.classification.as_str() {
            "Empty" => Ok(DiskPolygon::Empty),
            "SinglePoint" if verts.len() == 1 => Ok(DiskPolygon::SinglePoint(verts[0])),
            "FullDisk" if centers.len() == 1 => Ok(DiskPolygon::FullDisk(centers[0])),
            "Proper" if verts.len() == centers.len() && verts.len() >= 2 => {
                Ok(DiskPolygon::Proper(Arcs {
                    vertices: verts,
                    arc_centers: centers,
                }))
            }
            other => Err(bad(other)),
        }
    }

    /// Checks the stored-arc invariants within `eps`.
    pub fn check_invariants(&self, eps: f64) -> bool {
        let Some(a) = self.arcs() else {
            return true;
        };
        let m = a.len();
        if m < 2 {
            return false;
        }
        (0..m).all(|i| {
            let c = a.arc_centers()[i];
            let ok_ends = (a.vertices()[i].dist(c) - 1.0).abs() <= eps
                && (a.vertices()[(i + 1) % m].dist(c) - 1.0).abs() <= eps;
            let (s, e) = a.arc_angles(i);
            let minor = e - s <= PI + eps;
            let inside = a
                .vertices()
                .iter()
                .all(|v| a.arc_centers().iter().all(|c| v.dist(*c) <= 1.0 + eps));
            ok_ends && minor && inside
        })
    }
}

pub(crate) fn write_points(s: &mut String, pts: &[Vec2]) {
    s.push('[');
    for (i, p) in pts.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        write!(s, "[{:.16e}, {:.16e}]", p.x, p.y).unwrap();
    }
    s.push(']');
}
