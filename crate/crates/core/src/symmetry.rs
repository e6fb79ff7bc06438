//! Symmetrizations of planar ball-bodies.
//!
//! Every symmetral is computed in the frame where the symmetrization
//! direction `u` is the second coordinate axis (see [`AxisFrame`]).
//!
//! * Minkowski: `½K + ½R_uK`, carried exactly as a support function.
//! * Steiner: sampled as an [`EnvelopeBody`], since the average of two
//!   unit-circle graphs is not a circular arc. The active circle of every
//!   fiber endpoint is recorded, so curvature is evaluated in closed form.
//! * Two-point: applied cellwise to boolean rasters whose lattice is mapped
//!   onto itself by the reflection.

use std::io::Write;

use serde::Serialize;

use crate::disk::{chull_with, intersect_unit_disks, Arcs, DiskPolygon, PointSet};
use crate::error::{Error, Result};
use crate::geom::{AxisFrame, Vec2, EPS_GEOM};
use crate::quad::integrate;
use crate::support::SupportFunction;

/// Default Steiner sampling grid.
pub const STEINER_GRID: usize = 2048;
/// Boundary samples used when a dual is computed from samples.
pub const DUAL_SAMPLES: usize = 4096;
/// Samples skipped on each side of a piece change or interval end.
pub const BREAKPOINT_MARGIN: usize = 3;

/// The line `{x : ⟨x, u⟩ = offset}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionAxis {
    direction: Vec2,
    offset: f64,
}

impl ReflectionAxis {
    pub fn new(direction: Vec2, offset: f64) -> Result<Self> {
        if !direction.is_finite() || (direction.norm() - 1.0).abs() > 1e-12 || !offset.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "reflection axis needs a unit direction, got ({}, {})",
                direction.x, direction.y
            )));
        }
        Ok(Self { direction, offset })
    }

    /// The linear line `u⊥`.
    pub fn through_origin(direction: Vec2) -> Result<Self> {
        Self::new(direction, 0.0)
    }

    pub fn direction(&self) -> Vec2 {
        self.direction
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    #[inline]
    pub fn reflect_point(&self, p: Vec2) -> Vec2 {
        p - self.direction * (2.0 * (p.dot(self.direction) - self.offset))
    }

    /// Signed distance; positive on the side `u` points to.
    #[inline]
    pub fn side(&self, p: Vec2) -> f64 {
        p.dot(self.direction) - self.offset
    }
}

/// Mirror image of `k`.
pub fn reflect(k: &DiskPolygon, ax: &ReflectionAxis) -> DiskPolygon {
    match k {
        DiskPolygon::Empty => DiskPolygon::Empty,
        DiskPolygon::SinglePoint(p) => DiskPolygon::SinglePoint(ax.reflect_point(*p)),
        DiskPolygon::FullDisk(c) => DiskPolygon::FullDisk(ax.reflect_point(*c)),
        DiskPolygon::Proper(a) => {
            // reflection reverses orientation: walk the cycle backwards
            let m = a.len();
            let vertices = (0..m)
                .map(|k| ax.reflect_point(a.vertices()[(m - k) % m]))
                .collect();
            let centers = (0..m)
                .map(|k| ax.reflect_point(a.arc_centers()[(2 * m - k - 1) % m]))
                .collect();
            DiskPolygon::Proper(Arcs::normalized(vertices, centers, EPS_GEOM))
        }
    }
}

/// Minkowski symmetral `½K + ½R_uK` with its derived measures.
#[derive(Debug, Clone)]
pub struct MinkowskiSymmetral {
    pub support: SupportFunction,
    pub area: f64,
    pub mean_width: f64,
}

pub fn minkowski_symmetral(k: &DiskPolygon, u: Vec2) -> Result<MinkowskiSymmetral> {
    let ax = ReflectionAxis::through_origin(u)?;
    let h = k.support_function()?;
    let hr = h.reflect(ax.direction(), ax.offset());
    let support = h.combine(0.5, &hr, 0.5);
    let area = support.area(1e-12)?;
    let mean_width = support.mean_width();
    Ok(MinkowskiSymmetral {
        support,
        area,
        mean_width,
    })
}

/// Sampled Steiner symmetral: `lower = −upper` over a uniform grid on the
/// projection interval, in the frame where `u = e₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeBody {
    pub axis: Vec2,
    pub xs: Vec<f64>,
    pub upper: Vec<f64>,
    pub lower: Vec<f64>,
    /// Index into `centers` of the circle carrying the top of the source fiber.
    pub piece_upper: Vec<Option<usize>>,
    pub piece_lower: Vec<Option<usize>>,
    /// Defining unit-circle centers of the source body, in frame coordinates.
    pub centers: Vec<Vec2>,
    /// Midpoints of the source fibers.
    pub shift: Vec<f64>,
}

impl EnvelopeBody {
    /// Envelope without circle data; curvature falls back to finite differences.
    pub fn from_samples(axis: Vec2, xs: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if xs.len() != upper.len() || xs.len() < 2 * BREAKPOINT_MARGIN + 3 {
            return Err(Error::InvalidArgument("envelope needs matching, long enough samples".into()));
        }
        let n = xs.len();
        Ok(Self {
            axis,
            lower: upper.iter().map(|h| -h).collect(),
            xs,
            upper,
            piece_upper: vec![None; n],
            piece_lower: vec![None; n],
            centers: Vec::new(),
            shift: vec![0.0; n],
        })
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        (self.xs[self.xs.len() - 1] - self.xs[0]) / (self.xs.len() - 1) as f64
    }

    pub fn frame(&self) -> AxisFrame {
        AxisFrame::new(self.axis)
    }

    /// Boundary samples in world coordinates, upper chain then lower chain.
    pub fn boundary_points(&self) -> Vec<Vec2> {
        let f = self.frame();
        let n = self.len();
        let mut out = Vec::with_capacity(2 * n);
        for i in 0..n {
            out.push(f.from_frame(Vec2::new(self.xs[i], self.upper[i])));
        }
        for i in (1..n - 1).rev() {
            out.push(f.from_frame(Vec2::new(self.xs[i], self.lower[i])));
        }
        out
    }

    /// Trapezoid rule on the sampled fiber lengths.
    pub fn area_trapezoid(&self) -> f64 {
        let dx = self.spacing();
        let len: Vec<f64> = self.upper.iter().zip(&self.lower).map(|(u, l)| u - l).collect();
        dx * (len.iter().sum::<f64>() - 0.5 * (len[0] + len[len.len() - 1]))
    }

    /// Area by adaptive quadrature of the exact fiber length when circle data
    /// is present, otherwise the trapezoid rule.
    pub fn area(&self) -> Result<f64> {
        if self.centers.is_empty() {
            return Ok(self.area_trapezoid());
        }
        let a = self.xs[0];
        let b = self.xs[self.len() - 1];
        integrate(|x| fiber(&self.centers, x).map_or(0.0, |f| f.top - f.bottom), a, b, 1e-12)
    }

    /// The supporting-disk test at both ends of the projection interval.
    pub fn fits_endpoint_disks(&self, eps: f64) -> bool {
        let a = self.xs[0];
        let b = self.xs[self.len() - 1];
        let left = Vec2::new(a + 1.0, 0.0);
        let right = Vec2::new(b - 1.0, 0.0);
        (0..self.len()).all(|i| {
            let p = Vec2::new(self.xs[i], self.upper[i]);
            let q = Vec2::new(self.xs[i], self.lower[i]);
            [p, q]
                .iter()
                .all(|z| z.dist(left) <= 1.0 + eps && z.dist(right) <= 1.0 + eps)
        })
    }

    /// CSV with columns `x, upper, lower, piece_upper, piece_lower` (−1 = none).
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let ser = |e: csv::Error| Error::Serialization(e.to_string());
        w.write_record(["x", "upper", "lower", "piece_upper", "piece_lower"]).map_err(ser)?;
        let idx = |p: Option<usize>| p.map_or(-1, |v| v as i64).to_string();
        for i in 0..self.len() {
            w.write_record([
                format!("{:.16e}", self.xs[i]),
                format!("{:.16e}", self.upper[i]),
                format!("{:.16e}", self.lower[i]),
                idx(self.piece_upper[i]),
                idx(self.piece_lower[i]),
            ])
            .map_err(ser)?;
        }
        w.flush().map_err(|e| Error::Serialization(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy)]
struct Fiber {
    top: f64,
    bottom: f64,
    top_piece: usize,
    bottom_piece: usize,
    top_tie: bool,
    bottom_tie: bool,
}

/// Vertical fiber at `x` through the intersection of unit disks at `centers`.
fn fiber(centers: &[Vec2], x: f64) -> Option<Fiber> {
    let mut top = (f64::INFINITY, 0usize, f64::INFINITY);
    let mut bottom = (f64::NEG_INFINITY, 0usize, f64::NEG_INFINITY);
    for (i, c) in centers.iter().enumerate() {
        let dx = x - c.x;
        let s = (1.0 - dx * dx).max(0.0).sqrt();
        let t = c.y + s;
        let b = c.y - s;
        if t < top.0 {
            top = (t, i, top.0);
        } else if t < top.2 {
            top.2 = t;
        }
        if b > bottom.0 {
            bottom = (b, i, bottom.0);
        } else if b > bottom.2 {
            bottom.2 = b;
        }
    }
    if top.0 < bottom.0 - 1e-12 {
        return None;
    }
    Some(Fiber {
        top: top.0,
        bottom: bottom.0.min(top.0),
        top_piece: top.1,
        bottom_piece: bottom.1,
        top_tie: top.2 - top.0 <= EPS_GEOM,
        bottom_tie: bottom.0 - bottom.2 <= EPS_GEOM,
    })
}

/// Bottom and top of the fiber at frame abscissa `x`.
pub(crate) fn fiber_extent(centers: &[Vec2], x: f64) -> Option<(f64, f64)> {
    fiber(centers, x).map(|f| (f.bottom, f.top))
}

/// Projection of the body onto the first frame axis, read off the support function.
pub(crate) fn projection_interval(h: &SupportFunction, frame: &AxisFrame) -> (f64, f64) {
    let phi = frame.offset();
    (-h.value(phi + std::f64::consts::PI), h.value(phi))
}

/// Steiner symmetral of `k` in direction `u`, sampled on `grid` points.
pub fn steiner_symmetral(k: &DiskPolygon, u: Vec2, grid: usize) -> Result<EnvelopeBody> {
    if grid < 2 * BREAKPOINT_MARGIN + 3 {
        return Err(Error::InvalidArgument(format!("grid too small: {grid}")));
    }
    let (h, centers_world) = match k {
        DiskPolygon::Empty | DiskPolygon::SinglePoint(_) => return Err(Error::DegenerateSymmetral),
        _ => (k.support_function()?, k.arc_centers().to_vec()),
    };
    let frame = AxisFrame::new(u);
    let centers: Vec<Vec2> = centers_world.iter().map(|&c| frame.to_frame(c)).collect();
    let (a, b) = projection_interval(&h, &frame);
    let n = grid;
    let mut env = EnvelopeBody {
        axis: u,
        xs: Vec::with_capacity(n),
        upper: Vec::with_capacity(n),
        lower: Vec::with_capacity(n),
        piece_upper: Vec::with_capacity(n),
        piece_lower: Vec::with_capacity(n),
        centers,
        shift: Vec::with_capacity(n),
    };
    for i in 0..n {
        let x = a + (b - a) * i as f64 / (n - 1) as f64;
        let f = fiber(&env.centers, x).unwrap_or(Fiber {
            top: 0.0,
            bottom: 0.0,
            top_piece: 0,
            bottom_piece: 0,
            top_tie: true,
            bottom_tie: true,
        });
        let half = 0.5 * (f.top - f.bottom).max(0.0);
        env.xs.push(x);
        env.upper.push(half);
        env.lower.push(-half);
        env.piece_upper.push(Some(f.top_piece));
        env.piece_lower.push(Some(f.bottom_piece));
        env.shift.push(0.5 * (f.top + f.bottom));
    }
    // the extreme fibers are single points
    env.upper[0] = 0.0;
    env.lower[0] = 0.0;
    env.upper[n - 1] = 0.0;
    env.lower[n - 1] = 0.0;
    Ok(env)
}

/// Curvature samples of the upper boundary `x ↦ h(x)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CurvatureProfile {
    pub samples: Vec<(f64, f64)>,
    /// Indices skipped because two circles tie for a fiber endpoint.
    pub ambiguous: Vec<usize>,
}

impl CurvatureProfile {
    pub fn min_curvature(&self) -> f64 {
        self.samples.iter().map(|s| s.1).fold(f64::INFINITY, f64::min)
    }
}

/// Closed-form `(h, h′, h″)` of `h = (U − L)/2` with `U` on the upper half of
/// the unit circle at `top` and `L` on the lower half of the one at `bottom`.
pub fn averaged_arc_derivatives(top: Vec2, bottom: Vec2, x: f64) -> (f64, f64, f64) {
    let s = |c: Vec2| {
        let dx = x - c.x;
        let v = (1.0 - dx * dx).sqrt();
        (v, -dx / v, -1.0 / (v * v * v))
    };
    let (su, du, ddu) = s(top);
    let (sl, dl, ddl) = s(bottom);
    (
        0.5 * (top.y - bottom.y) + 0.5 * (su + sl),
        0.5 * (du + dl),
        0.5 * (ddu + ddl),
    )
}

/// `|h″| / (1 + h′²)^{3/2}`.
#[inline]
pub fn graph_curvature(d1: f64, d2: f64) -> f64 {
    d2.abs() / (1.0 + d1 * d1).powf(1.5)
}

pub fn curvature_profile(e: &EnvelopeBody) -> Result<CurvatureProfile> {
    let n = e.len();
    let m = BREAKPOINT_MARGIN;
    if n < 2 * m + 3 {
        return Err(Error::InvalidArgument("envelope too short".into()));
    }
    let mut out = CurvatureProfile::default();
    if e.centers.is_empty() {
        let dx = e.spacing();
        for i in m..n - m {
            let d1 = (e.upper[i + 1] - e.upper[i - 1]) / (2.0 * dx);
            let d2 = (e.upper[i + 1] - 2.0 * e.upper[i] + e.upper[i - 1]) / (dx * dx);
            out.samples.push((e.xs[i], graph_curvature(d1, d2)));
        }
        return Ok(out);
    }
    let piece_changes = |p: &[Option<usize>], i: usize| p[i - m..=i + m].iter().any(|q| *q != p[i]);
    for i in m..n - m {
        if piece_changes(&e.piece_upper, i) || piece_changes(&e.piece_lower, i) {
            continue;
        }
        let x = e.xs[i];
        let Some(f) = fiber(&e.centers, x) else {
            continue;
        };
        if f.top_tie || f.bottom_tie {
            out.ambiguous.push(i);
            continue;
        }
        let (_, d1, d2) = averaged_arc_derivatives(e.centers[f.top_piece], e.centers[f.bottom_piece], x);
        out.samples.push((x, graph_curvature(d1, d2)));
    }
    Ok(out)
}

/// Outcome of the class-membership test for a Steiner symmetral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct S2Verdict {
    pub min_curvature: f64,
    pub hausdorff_to_chull: f64,
    pub endpoint_support: bool,
    pub pass: bool,
}

/// Curvature ≥ 1 − 1e-6 away from breakpoints, Hausdorff distance to the
/// c-hull of the samples within five grid spacings, and supporting unit disks
/// at both ends.
pub fn verify_in_s2(e: &EnvelopeBody) -> Result<S2Verdict> {
    let profile = curvature_profile(e)?;
    let min_curvature = profile.min_curvature();
    let pts = e.boundary_points();
    let hull = chull_with(&pts, EPS_GEOM)?;
    let hausdorff_to_chull = SupportFunction::of_points(&pts).sup_distance(&hull.support_function()?);
    let endpoint_support = e.fits_endpoint_disks(1e-9);
    let pass = min_curvature >= 1.0 - 1e-6
        && hausdorff_to_chull <= 5.0 * e.spacing()
        && endpoint_support;
    Ok(S2Verdict {
        min_curvature,
        hausdorff_to_chull,
        endpoint_support,
        pass,
    })
}

/// Areas of `K^c` and `(S_uK)^c`, both from dense boundary samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DualVolumeCheck {
    pub before: f64,
    pub after: f64,
}

impl DualVolumeCheck {
    pub fn holds(&self, slack: f64) -> bool {
        self.after >= self.before - slack
    }
}

pub fn steiner_dual_volume_check(k: &DiskPolygon, u: Vec2) -> Result<DualVolumeCheck> {
    if matches!(k, DiskPolygon::Empty | DiskPolygon::SinglePoint(_)) {
        return Err(Error::DegenerateSymmetral);
    }
    let frame = AxisFrame::new(u);
    let centers: Vec<Vec2> = k.arc_centers().iter().map(|&c| frame.to_frame(c)).collect();
    let (a, b) = projection_interval(&k.support_function()?, &frame);
    // Both bodies are sampled on the same fibers, clustered towards the ends
    // of the projection so the spacing along the boundary is roughly even.
    let n = DUAL_SAMPLES / 2;
    let mut body = Vec::with_capacity(2 * n);
    let mut sym = Vec::with_capacity(2 * n);
    for i in 0..n {
        let t = std::f64::consts::PI * i as f64 / (n - 1) as f64;
        let x = a + 0.5 * (b - a) * (1.0 - t.cos());
        let Some(f) = fiber(&centers, x) else { continue };
        let half = 0.5 * (f.top - f.bottom).max(0.0);
        body.push(frame.from_frame(Vec2::new(x, f.top)));
        body.push(frame.from_frame(Vec2::new(x, f.bottom)));
        sym.push(frame.from_frame(Vec2::new(x, half)));
        sym.push(frame.from_frame(Vec2::new(x, -half)));
    }
    Ok(DualVolumeCheck {
        before: intersect_unit_disks(&body)?.area(),
        after: intersect_unit_disks(&sym)?.area(),
    })
}

/// Areas entering the planar Santaló-type bounds for a generator set `A`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SantaloCheck {
    pub dual_area: f64,
    /// `(1 − r)²π` with `r = w(conv_c A)`.
    pub mean_width_bound: f64,
    /// `(1 − ρ)²π` with `πρ² = area(conv_c A)`.
    pub volume_bound: f64,
}

pub fn santalo_check(a: &PointSet) -> Result<SantaloCheck> {
    let hull = crate::disk::chull(a)?;
    let dual = crate::disk::cdual(a)?;
    let r = hull.mean_width()? / DiskPolygon::FullDisk(Vec2::ZERO).mean_width()?;
    let rho = (hull.area() / std::f64::consts::PI).sqrt();
    let pi = std::f64::consts::PI;
    Ok(SantaloCheck {
        dual_area: dual.area(),
        mean_width_bound: (1.0 - r).powi(2) * pi,
        volume_bound: (1.0 - rho).powi(2) * pi,
    })
}

/// A boolean raster of square cells; cell `(i, j)` has center
/// `origin + ((i + ½)·cell, (j + ½)·cell)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    pub origin: Vec2,
    pub cell: f64,
    pub nx: usize,
    pub ny: usize,
    cells: Vec<bool>,
}

impl Raster {
    pub fn empty(origin: Vec2, cell: f64, nx: usize, ny: usize) -> Self {
        Self {
            origin,
            cell,
            nx,
            ny,
            cells: vec![false; nx * ny],
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.cells[j * self.nx + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        self.cells[j * self.nx + i] = v;
    }

    pub fn count(&self) -> usize {
        self.cells.iter().filter(|c| **c).count()
    }

    #[inline]
    pub fn center(&self, i: usize, j: usize) -> Vec2 {
        self.origin + Vec2::new((i as f64 + 0.5) * self.cell, (j as f64 + 0.5) * self.cell)
    }

    /// A raster of the same window with the cells whose centers lie in `k`.
    pub fn rasterize(&self, k: &DiskPolygon) -> Raster {
        let mut out = Raster::empty(self.origin, self.cell, self.nx, self.ny);
        let centers = k.arc_centers();
        if centers.is_empty() {
            return out;
        }
        for j in 0..self.ny {
            let y = self.center(0, j).y;
            let mut lo = f64::NEG_INFINITY;
            let mut hi = f64::INFINITY;
            for c in centers {
                let dy = y - c.y;
                if dy.abs() > 1.0 {
                    hi = f64::NEG_INFINITY;
                    break;
                }
                let s = (1.0 - dy * dy).sqrt();
                lo = lo.max(c.x - s);
                hi = hi.min(c.x + s);
            }
            if hi < lo {
                continue;
            }
            let i0 = ((lo - self.origin.x) / self.cell - 0.5).ceil().max(0.0) as usize;
            let i1 = ((hi - self.origin.x) / self.cell - 0.5).floor();
            if i1 < 0.0 {
                continue;
            }
            let i1 = (i1 as usize).min(self.nx - 1);
            for i in i0..=i1 {
                out.set(i, j, true);
            }
        }
        out
    }

    /// Centers of the first and last set cell of every row.
    pub fn row_extremes(&self) -> Vec<Vec2> {
        let mut out = Vec::new();
        for j in 0..self.ny {
            let row = &self.cells[j * self.nx..(j + 1) * self.nx];
            if let Some(first) = row.iter().position(|c| *c) {
                let last = row.iter().rposition(|c| *c).expect("row has a set cell");
                out.push(self.center(first, j));
                if last != first {
                    out.push(self.center(last, j));
                }
            }
        }
        out
    }

    /// Set cells of `self` farther than one cell (8-neighbourhood) from `other`.
    pub fn cells_outside(&self, other: &Raster) -> usize {
        let mut bad = 0;
        for j in 0..self.ny {
            for i in 0..self.nx {
                if !self.get(i, j) {
                    continue;
                }
                let near = (j.saturating_sub(1)..=(j + 1).min(self.ny - 1)).any(|jj| {
                    (i.saturating_sub(1)..=(i + 1).min(self.nx - 1)).any(|ii| other.get(ii, jj))
                });
                if !near {
                    bad += 1;
                }
            }
        }
        bad
    }

    /// Square window of `n × n` cells containing `points` padded by two
    /// cells, symmetric under reflection in `ax` (which must be a coordinate
    /// axis direction) so that the reflection permutes cells.
    pub fn symmetric_window(points: &[Vec2], ax: &ReflectionAxis, n: usize) -> Result<Raster> {
        let vertical = lattice_axis(ax)?;
        let line = ax.offset() * if vertical { ax.direction().x } else { ax.direction().y };
        let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for p in points.iter().flat_map(|&p| [p, ax.reflect_point(p)]) {
            x0 = x0.min(p.x);
            x1 = x1.max(p.x);
            y0 = y0.min(p.y);
            y1 = y1.max(p.y);
        }
        let n = n + n % 2;
        let (across_lo, across_hi, along_lo, along_hi) = if vertical {
            (x0, x1, y0, y1)
        } else {
            (y0, y1, x0, x1)
        };
        let half_width = (line - across_lo).abs().max((across_hi - line).abs());
        let cell = (2.0 * half_width / (n - 4) as f64).max((along_hi - along_lo) / (n - 4) as f64);
        let across_origin = line - (n / 2) as f64 * cell;
        let along_origin = 0.5 * (along_lo + along_hi) - (n / 2) as f64 * cell;
        let origin = if vertical {
            Vec2::new(across_origin, along_origin)
        } else {
            Vec2::new(along_origin, across_origin)
        };
        Ok(Raster::empty(origin, cell, n, n))
    }
}

/// True for a vertical mirror line (`u = ±e₁`), false for horizontal.
fn lattice_axis(ax: &ReflectionAxis) -> Result<bool> {
    let u = ax.direction();
    if u.y.abs() < 1e-12 {
        Ok(true)
    } else if u.x.abs() < 1e-12 {
        Ok(false)
    } else {
        Err(Error::InvalidArgument(
            "two-point symmetrization on a raster needs an axis-parallel mirror".into(),
        ))
    }
}

/// Cellwise `τ_H(M) = (M ∩ R_H M) ∪ ((M ∪ R_H M) ∩ H⁺)`, with `H⁺` the side
/// the axis direction points to.
pub fn two_point_symmetral_grid(mask: &Raster, ax: &ReflectionAxis) -> Result<Raster> {
    let vertical = lattice_axis(ax)?;
    let line = ax.offset() * if vertical { ax.direction().x } else { ax.direction().y };
    let (origin, count) = if vertical {
        (mask.origin.x, mask.nx)
    } else {
        (mask.origin.y, mask.ny)
    };
    // cell k reflects to cell (twice_line − 1 − k)
    let t = 2.0 * (line - origin) / mask.cell;
    let twice_line = t.round();
    if (t - twice_line).abs() > 1e-6 {
        return Err(Error::InvalidArgument("mirror line is not on the raster lattice".into()));
    }
    let twice_line = twice_line as i64;
    let mirror = |k: usize| -> Option<usize> {
        let r = twice_line - 1 - k as i64;
        (0..count as i64).contains(&r).then_some(r as usize)
    };
    let mut out = Raster::empty(mask.origin, mask.cell, mask.nx, mask.ny);
    for j in 0..mask.ny {
        for i in 0..mask.nx {
            let here = mask.get(i, j);
            let (ri, rj) = if vertical { (mirror(i), Some(j)) } else { (Some(i), mirror(j)) };
            let there = match (ri, rj) {
                (Some(a), Some(b)) => mask.get(a, b),
                _ if here => return Err(Error::ReflectionLeavesWindow),
                _ => false,
            };
            let positive = ax.side(mask.center(i, j)) >= 0.0;
            out.set(i, j, (here && there) || ((here || there) && positive));
        }
    }
    Ok(out)
}

/// Raster comparison of `τ_H(K^c)` with `(τ_H K)^c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoPointCheck {
    pub cells_body: usize,
    pub cells_body_symmetral: usize,
    pub cells_dual: usize,
    pub cells_dual_symmetral: usize,
    /// Cells of `τ_H(K^c)` more than one cell away from `(τ_H K)^c`.
    pub inclusion_violations: usize,
}

impl TwoPointCheck {
    pub fn holds(&self) -> bool {
        self.cells_body == self.cells_body_symmetral
            && self.cells_dual == self.cells_dual_symmetral
            && self.inclusion_violations == 0
    }
}

pub fn two_point_dual_check(k: &DiskPolygon, ax: &ReflectionAxis, resolution: usize) -> Result<TwoPointCheck> {
    let dual = intersect_unit_disks(&k.c_extremal()?.points().to_vec())?;
    let mut extent = k.boundary_samples(64);
    extent.extend(dual.boundary_samples(64));
    // arc apexes can bulge past the samples by a sagitta
    let pad: Vec<Vec2> = extent
        .iter()
        .flat_map(|&p| [p + Vec2::new(0.01, 0.01), p - Vec2::new(0.01, 0.01)])
        .collect();
    let window = Raster::symmetric_window(&pad, ax, resolution)?;
    let body = window.rasterize(k);
    let body_sym = two_point_symmetral_grid(&body, ax)?;
    let dual_mask = window.rasterize(&dual);
    let dual_sym = two_point_symmetral_grid(&dual_mask, ax)?;
    let sym_dual = intersect_unit_disks(&body_sym.row_extremes())?;
    let sym_dual_mask = window.rasterize(&sym_dual);
    Ok(TwoPointCheck {
        cells_body: body.count(),
        cells_body_symmetral: body_sym.count(),
        cells_dual: dual_mask.count(),
        cells_dual_symmetral: dual_sym.count(),
        inclusion_violations: dual_sym.cells_outside(&sym_dual_mask),
    })
}
