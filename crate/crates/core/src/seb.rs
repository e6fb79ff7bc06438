//! Smallest enclosing ball in any dimension.
//!
//! Randomized incremental construction in the style of Welzl, written with
//! loops over prefixes so the recursion depth is bounded by the number of
//! support points (at most n + 1) rather than the input size.

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geom::{Ball, Point, Vec2};

/// Seed of the deterministic shuffle.
pub const SEB_SEED: u64 = 0x5eb0_5eb0;

#[derive(Debug, Clone)]
struct RawBall {
    center: Vec<f64>,
    r2: f64,
}

impl RawBall {
    fn contains(&self, p: &[f64]) -> bool {
        let d2: f64 = p.iter().zip(&self.center).map(|(a, b)| (a - b) * (a - b)).sum();
        d2 <= self.r2 * (1.0 + 1e-12) + 1e-24
    }
}

/// Smallest ball containing all `points`.
pub fn smallest_enclosing_ball(points: &[Point]) -> Result<Ball> {
    let first = points.first().ok_or(Error::EmptyInput("point set"))?;
    let dim = first.dim();
    if points.iter().any(|p| p.dim() != dim) {
        return Err(Error::InvalidArgument("mixed dimensions in point set".into()));
    }
    let coords: Vec<&[f64]> = points.iter().map(|p| p.coords()).collect();
    let raw = seb_raw(coords, dim);
    Ok(Ball {
        center: Point::new(raw.center)?,
        radius: raw.r2.sqrt(),
    })
}

/// Planar convenience wrapper returning `(center, radius)`.
pub fn smallest_enclosing_disk(points: &[Vec2]) -> Result<(Vec2, f64)> {
    if points.is_empty() {
        return Err(Error::EmptyInput("point set"));
    }
    let owned: Vec<[f64; 2]> = points.iter().map(|p| [p.x, p.y]).collect();
    let coords: Vec<&[f64]> = owned.iter().map(|p| &p[..]).collect();
    let raw = seb_raw(coords, 2);
    Ok((Vec2::new(raw.center[0], raw.center[1]), raw.r2.sqrt()))
}

fn seb_raw(mut pts: Vec<&[f64]>, dim: usize) -> RawBall {
    let mut rng = ChaCha8Rng::seed_from_u64(SEB_SEED);
    pts.shuffle(&mut rng);
    let mut support: Vec<&[f64]> = Vec::with_capacity(dim + 1);
    with_support(&pts, &mut support, dim)
}

fn with_support<'a>(pts: &[&'a [f64]], support: &mut Vec<&'a [f64]>, dim: usize) -> RawBall {
    let mut ball = circumball(support, dim);
    if support.len() == dim + 1 {
        return ball;
    }
    for i in 0..pts.len() {
        if !ball.contains(pts[i]) {
            support.push(pts[i]);
            ball = with_support(&pts[..i], support, dim);
            support.pop();
        }
    }
    ball
}

/// Smallest ball with every point of `support` on its boundary.
fn circumball(support: &[&[f64]], dim: usize) -> RawBall {
    match support.len() {
        0 => RawBall {
            center: vec![0.0; dim],
            r2: -1.0,
        },
        1 => RawBall {
            center: support[0].to_vec(),
            r2: 0.0,
        },
        k => {
            let q0 = support[0];
            let diffs: Vec<Vec<f64>> = support[1..]
                .iter()
                .map(|q| q.iter().zip(q0).map(|(a, b)| a - b).collect())
                .collect();
            let m = k - 1;
            let gram = DMatrix::from_fn(m, m, |i, j| {
                2.0 * diffs[i].iter().zip(&diffs[j]).map(|(a, b)| a * b).sum::<f64>()
            });
            let rhs = DVector::from_fn(m, |i, _| diffs[i].iter().map(|a| a * a).sum::<f64>());
            let lambda = gram
                .clone()
                .lu()
                .solve(&rhs)
                .filter(|l| l.iter().all(|v| v.is_finite()))
                .or_else(|| gram.svd(true, true).solve(&rhs, 1e-14).ok());
            let center: Vec<f64> = match lambda {
                Some(l) => (0..dim)
                    .map(|c| q0[c] + (0..m).map(|i| l[i] * diffs[i][c]).sum::<f64>())
                    .collect(),
                None => (0..dim)
                    .map(|c| support.iter().map(|q| q[c]).sum::<f64>() / k as f64)
                    .collect(),
            };
            let r2 = support
                .iter()
                .map(|q| q.iter().zip(&center).map(|(a, b)| (a - b) * (a - b)).sum::<f64>())
                .fold(0.0, f64::max);
            RawBall { center, r2 }
        }
    }
}
