//! Piecewise support functions of planar bodies bounded by circular arcs.
//!
//! On every piece the support function has the form `h(θ) = ⟨p, u(θ)⟩ + s`:
//! a vertex contributes `s = 0`, an arc of radius `s` centered at `p`
//! contributes `s`. Sums and averages of such functions stay in this form,
//! which makes Minkowski combinations, mean width and Hausdorff distance exact.

use std::f64::consts::{PI, TAU};

use crate::error::Result;
use crate::geom::Vec2;
use crate::quad::integrate;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    /// First angle covered by the piece.
    pub start: f64,
    pub point: Vec2,
    pub offset: f64,
}

impl Piece {
    #[inline]
    fn value(&self, theta: f64) -> f64 {
        self.point.dot(Vec2::polar(theta)) + self.offset
    }

    #[inline]
    fn derivative(&self, theta: f64) -> f64 {
        self.point.dot(Vec2::polar(theta).perp())
    }
}

/// Support function stored as pieces covering `[base, base + 2π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportFunction {
    pieces: Vec<Piece>,
}

impl SupportFunction {
    /// Builds from pieces with non-decreasing starts spanning less than 2π.
    pub(crate) fn from_pieces(mut pieces: Vec<Piece>) -> Self {
        assert!(!pieces.is_empty(), "support function needs at least one piece");
        let base = pieces[0].start;
        let mut prev = base;
        for p in pieces.iter_mut() {
            if p.start < prev {
                p.start = prev;
            }
            if p.start > base + TAU {
                p.start = base + TAU;
            }
            prev = p.start;
        }
        Self { pieces }
    }

    /// Constant-form support of a disk (or a point when `radius = 0`).
    pub fn disk(center: Vec2, radius: f64) -> Self {
        Self {
            pieces: vec![Piece {
                start: 0.0,
                point: center,
                offset: radius,
            }],
        }
    }

    /// Support function of the convex hull of `points`.
    pub fn of_points(points: &[Vec2]) -> Self {
        let hull = crate::geom::convex_hull(points);
        match hull.len() {
            0 => panic!("support of an empty point set"),
            1 => Self::disk(hull[0], 0.0),
            _ => {
                let m = hull.len();
                // vertex i is extreme for normals between the normals of
                // edges (i-1, i) and (i, i+1); edge normal = outward = -perp
                let normal = |i: usize| {
                    let e = hull[(i + 1) % m] - hull[i];
                    Vec2::new(e.y, -e.x).angle()
                };
                let mut pieces = Vec::with_capacity(m);
                let mut start = normal(m - 1);
                for i in 0..m {
                    if i > 0 {
                        let mut a = normal(i - 1);
                        while a < start {
                            a += TAU;
                        }
                        start = a;
                    }
                    pieces.push(Piece {
                        start,
                        point: hull[i],
                        offset: 0.0,
                    });
                }
                Self::from_pieces(pieces)
            }
        }
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    fn base(&self) -> f64 {
        self.pieces[0].start
    }

    fn locate(&self, theta: f64) -> &Piece {
        let base = self.base();
        let t = base + (theta - base).rem_euclid(TAU);
        let idx = self.pieces.partition_point(|p| p.start <= t);
        &self.pieces[idx.saturating_sub(1)]
    }

    pub fn value(&self, theta: f64) -> f64 {
        self.locate(theta).value(theta)
    }

    pub fn derivative(&self, theta: f64) -> f64 {
        self.locate(theta).derivative(theta)
    }

    /// Piece intervals `(a, b, piece)` covering one full turn.
    fn intervals(&self) -> impl Iterator<Item = (f64, f64, &Piece)> + '_ {
        let end = self.base() + TAU;
        self.pieces.iter().enumerate().map(move |(i, p)| {
            let b = self.pieces.get(i + 1).map_or(end, |q| q.start);
            (p.start, b, p)
        })
    }

    /// Merged breakpoints of `self` and `other` inside `[base, base + 2π]`.
    fn common_breaks(&self, other: &SupportFunction) -> Vec<f64> {
        let base = self.base();
        let mut br: Vec<f64> = self.pieces.iter().map(|p| p.start).collect();
        br.extend(
            other
                .pieces
                .iter()
                .map(|p| base + (p.start - base).rem_euclid(TAU)),
        );
        br.push(base + TAU);
        br.sort_by(f64::total_cmp);
        br.dedup();
        br
    }

    /// `wa·self + wb·other`, exactly.
    pub fn combine(&self, wa: f64, other: &SupportFunction, wb: f64) -> SupportFunction {
        let br = self.common_breaks(other);
        let pieces = br
            .windows(2)
            .filter(|w| w[1] > w[0])
            .map(|w| {
                let mid = 0.5 * (w[0] + w[1]);
                let p = self.locate(mid);
                let q = other.locate(mid);
                Piece {
                    start: w[0],
                    point: p.point * wa + q.point * wb,
                    offset: p.offset * wa + q.offset * wb,
                }
            })
            .collect::<Vec<_>>();
        if pieces.is_empty() {
            // both are single full-turn pieces
            let p = &self.pieces[0];
            let q = &other.pieces[0];
            return SupportFunction::disk(p.point * wa + q.point * wb, p.offset * wa + q.offset * wb);
        }
        SupportFunction::from_pieces(pieces)
    }

    /// Support function of the image under the reflection `x ↦ x − 2(⟨x,n⟩ − c)n`.
    pub fn reflect(&self, normal: Vec2, offset: f64) -> SupportFunction {
        let refl = |p: Vec2| p - normal * (2.0 * (p.dot(normal) - offset));
        // the reflection maps the direction at angle θ to angle 2φ − θ with φ
        // the angle of the mirror line
        let phi = normal.perp().angle();
        let mut pieces: Vec<Piece> = self
            .intervals()
            .map(|(_, b, p)| Piece {
                start: 2.0 * phi - b,
                point: refl(p.point),
                offset: p.offset,
            })
            .collect();
        pieces.reverse();
        let base = pieces[0].start;
        for p in pieces.iter_mut() {
            p.start = base + (p.start - base).rem_euclid(TAU);
            if p.start >= base + TAU - 1e-15 {
                p.start = base;
            }
        }
        pieces.sort_by(|a, b| a.start.total_cmp(&b.start));
        SupportFunction::from_pieces(pieces)
    }

    /// The support of the c-dual of a ball-body: `1 − h(θ + π)`.
    pub fn c_dual(&self) -> SupportFunction {
        // 1 − (⟨p, u(θ+π)⟩ + s) = ⟨p, u(θ)⟩ + (1 − s)
        let pieces: Vec<Piece> = self
            .pieces
            .iter()
            .map(|p| Piece {
                start: p.start - PI,
                point: p.point,
                offset: 1.0 - p.offset,
            })
            .collect();
        SupportFunction::from_pieces(pieces)
    }

    /// Mean of `h` over the circle, integrated in closed form.
    pub fn mean_width(&self) -> f64 {
        let total: f64 = self
            .intervals()
            .map(|(a, b, p)| {
                p.point.x * (b.sin() - a.sin()) - p.point.y * (b.cos() - a.cos())
                    + p.offset * (b - a)
            })
            .sum();
        total / TAU
    }

    /// Area `½∫(h² − h′²) dθ`, by adaptive quadrature on each smooth piece.
    pub fn area(&self, tol: f64) -> Result<f64> {
        let n = self.pieces.len() as f64;
        let mut total = 0.0;
        for (a, b, p) in self.intervals() {
            if b > a {
                total += integrate(
                    |t| {
                        let h = p.value(t);
                        let d = p.derivative(t);
                        h * h - d * d
                    },
                    a,
                    b,
                    tol / n,
                )?;
            }
        }
        Ok(0.5 * total)
    }

    /// `sup_θ |h_self(θ) − h_other(θ)|`, exact on every common piece.
    pub fn sup_distance(&self, other: &SupportFunction) -> f64 {
        self.sup_gap(other, true)
    }

    /// `sup_θ (h_self(θ) − h_other(θ))`; nonpositive iff `self ⊆ other`.
    pub fn max_excess(&self, other: &SupportFunction) -> f64 {
        self.sup_gap(other, false)
    }

    fn sup_gap(&self, other: &SupportFunction, absolute: bool) -> f64 {
        let br = self.common_breaks(other);
        let mut best: f64 = if absolute { 0.0 } else { f64::NEG_INFINITY };
        for w in br.windows(2) {
            let (a, b) = (w[0], w[1]);
            let mid = 0.5 * (a + b);
            let p = self.locate(mid);
            let q = other.locate(mid);
            let dp = p.point - q.point;
            let ds = p.offset - q.offset;
            let f = |t: f64| {
                let g = dp.dot(Vec2::polar(t)) + ds;
                if absolute {
                    g.abs()
                } else {
                    g
                }
            };
            best = best.max(f(a)).max(f(b));
            if dp.norm2() > 0.0 {
                let phi = dp.angle();
                for cand in [phi, phi + PI] {
                    let t = a + (cand - a).rem_euclid(TAU);
                    if t <= b {
                        best = best.max(f(t));
                    }
                }
            }
        }
        best
    }

    /// Samples on the uniform grid `2πk/n`.
    pub fn profile(&self, n: usize) -> SupportProfile {
        let angles: Vec<f64> = (0..n).map(|k| TAU * k as f64 / n as f64).collect();
        let values = angles.iter().map(|&t| self.value(t)).collect();
        let derivatives = angles.iter().map(|&t| self.derivative(t)).collect();
        SupportProfile {
            angles,
            values,
            derivatives,
        }
    }

    /// Boundary point with outer normal `u(θ)`: `h u + h′ u⊥`.
    pub fn boundary_point(&self, theta: f64) -> Vec2 {
        let u = Vec2::polar(theta);
        u * self.value(theta) + u.perp() * self.derivative(theta)
    }
}

/// Support function sampled on a uniform angle grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportProfile {
    pub angles: Vec<f64>,
    pub values: Vec<f64>,
    pub derivatives: Vec<f64>,
}

impl SupportProfile {
    /// Largest pointwise gap between two profiles on the same grid.
    pub fn max_abs_diff(&self, other: &SupportProfile) -> f64 {
        assert_eq!(self.values.len(), other.values.len(), "profiles on different grids");
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// `h(θ) + h(θ + π) ≥ −tol` on the grid (even grid sizes only).
    pub fn widths_nonnegative(&self, tol: f64) -> bool {
        let n = self.values.len();
        if n % 2 != 0 {
            return true;
        }
        (0..n / 2).all(|k| self.values[k] + self.values[k + n / 2] >= -tol)
    }

    /// Grid average of `h`.
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn square() -> SupportFunction {
        SupportFunction::of_points(&[
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(0.0, 1.0),
        ])
    }

    #[test]
    fn polygon_support_values() {
        let h = square();
        assert_abs_diff_eq!(h.value(0.0), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(h.value(PI), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(h.value(PI / 4.0), 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(h.value(-3.0 * PI / 4.0), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn polygon_area_and_mean_width() {
        let h = square();
        assert_abs_diff_eq!(h.area(1e-12).unwrap(), 1.0, epsilon = 1e-10);
        // perimeter / (2π)
        assert_abs_diff_eq!(h.mean_width(), 4.0 / TAU, epsilon = 1e-14);
    }

    #[test]
    fn disk_support() {
        let h = SupportFunction::disk(Vec2::new(0.3, -0.2), 1.0);
        assert_abs_diff_eq!(h.area(1e-12).unwrap(), PI, epsilon = 1e-10);
        assert_abs_diff_eq!(h.mean_width(), 1.0, epsilon = 1e-14);
        let p = h.boundary_point(0.7);
        assert_abs_diff_eq!(p.dist(Vec2::new(0.3, -0.2)), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn combination_of_square_and_disk() {
        // Steiner formula: area(K + rB) = A + rL + πr²
        let s = square().combine(1.0, &SupportFunction::disk(Vec2::ZERO, 0.5), 1.0);
        assert_abs_diff_eq!(s.area(1e-12).unwrap(), 1.0 + 0.5 * 4.0 + PI * 0.25, epsilon = 1e-10);
    }

    #[test]
    fn reflection_of_square() {
        // mirror in the vertical line x = 2
        let r = square().reflect(Vec2::new(1.0, 0.0), 2.0);
        let expected = SupportFunction::of_points(&[
            Vec2::new(3.0, 0.0),
            Vec2::new(4.0, 0.0),
            Vec2::new(4.0, 1.0),
            Vec2::new(3.0, 1.0),
        ]);
        assert!(r.sup_distance(&expected) < 1e-14);
    }

    #[test]
    fn sup_distance_of_translates() {
        let a = SupportFunction::disk(Vec2::ZERO, 1.0);
        let b = SupportFunction::disk(Vec2::new(0.3, 0.4), 1.0);
        assert_abs_diff_eq!(a.sup_distance(&b), 0.5, epsilon = 1e-15);
    }
}
