//! Geometric primitives shared by every kernel.
//!
//! Two point types live here: [`Vec2`] is the `Copy` workhorse of the planar
//! kernel, [`Point`] is the dimension-generic coordinate vector used by the
//! enclosing-ball solver and the lens machinery.

use std::f64::consts::PI;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance for point and distance equalities.
pub const EPS_GEOM: f64 = 1e-9;

/// Tolerances and sampling defaults used across the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    pub eps_geom: f64,
    pub eps_quad: f64,
    pub grid_default: usize,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            eps_geom: EPS_GEOM,
            eps_quad: 1e-12,
            grid_default: 2048,
        }
    }
}

impl ToleranceConfig {
    pub fn new(eps_geom: f64, eps_quad: f64, grid_default: usize) -> Result<Self> {
        if !(eps_geom > 0.0 && eps_geom < 1e-3) {
            return Err(Error::InvalidArgument(format!(
                "eps_geom must lie in (0, 1e-3), got {eps_geom}"
            )));
        }
        if !(eps_quad > 0.0 && eps_quad < 1e-4) {
            return Err(Error::InvalidArgument(format!(
                "eps_quad must lie in (0, 1e-4), got {eps_quad}"
            )));
        }
        if grid_default < 64 {
            return Err(Error::InvalidArgument(format!(
                "grid_default must be at least 64, got {grid_default}"
            )));
        }
        Ok(Self {
            eps_geom,
            eps_quad,
            grid_default,
        })
    }
}

/// A point or vector in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Unit vector at angle `theta`.
    #[inline]
    pub fn polar(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self { x: c, y: s }
    }

    #[inline]
    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    #[inline]
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn dist(self, o: Vec2) -> f64 {
        (self - o).norm()
    }

    /// Counterclockwise quarter turn.
    #[inline]
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    #[inline]
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Lexicographic comparison with ties on `x` resolved within `eps`.
    pub fn lex_less(self, o: Vec2, eps: f64) -> bool {
        if (self.x - o.x).abs() > eps {
            self.x < o.x
        } else {
            self.y < o.y
        }
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    #[inline]
    fn mul(self, v: Vec2) -> Vec2 {
        v * self
    }
}

impl Div<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn div(self, s: f64) -> Vec2 {
        Vec2::new(self.x / s, self.y / s)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl From<[f64; 2]> for Vec2 {
    fn from(a: [f64; 2]) -> Self {
        Vec2::new(a[0], a[1])
    }
}

/// A point in ℝⁿ with finite coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyInput("point coordinates"));
        }
        if let Some(bad) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "non-finite coordinate {bad}"
            )));
        }
        Ok(Self(coords))
    }

    pub fn origin(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dist2(&self, o: &Point) -> f64 {
        self.0.iter().zip(&o.0).map(|(a, b)| (a - b) * (a - b)).sum()
    }

    pub fn dist(&self, o: &Point) -> f64 {
        self.dist2(o).sqrt()
    }

    pub fn to_vec2(&self) -> Vec2 {
        Vec2::new(self.0[0], self.0[1])
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Point::new(v)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.0
    }
}

impl From<Vec2> for Point {
    fn from(v: Vec2) -> Self {
        Point(vec![v.x, v.y])
    }
}

/// A unit vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction(Vec<f64>);

impl Direction {
    /// Accepts vectors whose norm is 1 within 1e-12.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        let n = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !n.is_finite() || (n - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "direction must have unit norm, got {n}"
            )));
        }
        Ok(Self(coords))
    }

    /// Normalizes a nonzero vector.
    pub fn normalized(coords: Vec<f64>) -> Result<Self> {
        let n = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::InvalidArgument("zero direction".into()));
        }
        Ok(Self(coords.into_iter().map(|c| c / n).collect()))
    }

    /// The i-th standard basis vector of ℝⁿ.
    pub fn axis(dim: usize, i: usize) -> Self {
        let mut c = vec![0.0; dim];
        c[i] = 1.0;
        Self(c)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Planar view; panics on other dimensions.
    pub fn to_vec2(&self) -> Vec2 {
        assert_eq!(self.0.len(), 2, "planar direction expected");
        Vec2::new(self.0[0], self.0[1])
    }
}

impl From<Vec2> for Direction {
    fn from(v: Vec2) -> Self {
        let n = v.norm();
        Direction(vec![v.x / n, v.y / n])
    }
}

/// A Euclidean ball.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
}

/// Volume of the unit ball in ℝⁿ, `π^{n/2} / Γ(n/2 + 1)`.
pub fn unit_ball_volume(n: usize) -> f64 {
    // κ_0 = 1, κ_1 = 2, κ_n = 2π/n · κ_{n-2}
    let mut k = if n % 2 == 0 { 1.0 } else { 2.0 };
    let mut m = if n % 2 == 0 { 2 } else { 3 };
    while m <= n {
        k *= 2.0 * PI / m as f64;
        m += 2;
    }
    k
}

/// Points at distance `r` from both `c1` and `c2`.
///
/// Two solutions are ordered so the first lies to the left of `c1 → c2`.
/// Pairs within `eps` of tangency are snapped to the midpoint.
pub fn circle_circle_intersection(c1: Vec2, c2: Vec2, r: f64, eps: f64) -> Result<Vec<Vec2>> {
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {r}")));
    }
    let d = c2 - c1;
    let dist = d.norm();
    if dist <= eps {
        return Err(Error::DegenerateCenterPair);
    }
    let half = dist / 2.0;
    if half > r + eps {
        return Ok(Vec::new());
    }
    let mid = c1 + d * 0.5;
    if (half - r).abs() <= eps {
        return Ok(vec![mid]);
    }
    let h = (r * r - half * half).sqrt();
    let off = d.perp() * (h / dist);
    Ok(vec![mid + off, mid - off])
}

/// Center of the unit circle through `a` and `b` lying to the left of `a → b`.
///
/// Requires `0 < |a - b| ≤ 2`; distances slightly above 2 are clamped.
#[inline]
pub(crate) fn left_unit_center(a: Vec2, b: Vec2) -> Vec2 {
    let d = b - a;
    let dist2 = d.norm2();
    let h = (1.0 / dist2 - 0.25).max(0.0).sqrt();
    (a + b) * 0.5 + d.perp() * h
}

/// Convex hull in counterclockwise order, collinear points dropped.
pub fn convex_hull(points: &[Vec2]) -> Vec<Vec2> {
    let mut pts: Vec<Vec2> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Vec2> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Vec2>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 {
                let a = hull[hull.len() - 2];
                let b = hull[hull.len() - 1];
                if (b - a).cross(p - a) <= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Rotation taking a planar direction `u` to `e₂`.
///
/// `to_frame(p) = (⟨p, u⊥⟩, ⟨p, u⟩)` with `u⊥ = (u_y, −u_x)`; the pair
/// `(u⊥, u)` is positively oriented so this is a proper rotation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisFrame {
    u: Vec2,
    u_perp: Vec2,
}

impl AxisFrame {
    pub fn new(u: Vec2) -> Self {
        Self {
            u,
            u_perp: Vec2::new(u.y, -u.x),
        }
    }

    #[inline]
    pub fn to_frame(&self, p: Vec2) -> Vec2 {
        Vec2::new(p.dot(self.u_perp), p.dot(self.u))
    }

    #[inline]
    pub fn from_frame(&self, q: Vec2) -> Vec2 {
        self.u_perp * q.x + self.u * q.y
    }

    /// Angle offset: a direction at angle `φ` in the frame is at `φ + offset()`
    /// in world coordinates.
    pub fn offset(&self) -> f64 {
        self.u_perp.angle()
    }

    pub fn axis(&self) -> Vec2 {
        self.u
    }
}
