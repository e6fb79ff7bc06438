//! Independent oracles for tests.
//!
//! These deliberately avoid the code paths they check: the disk
//! intersection is computed circle by circle from angular constraints, and
//! areas are estimated by sampling membership.

use std::f64::consts::TAU;

use rand::Rng;

pub use crate::random::random_points;

use crate::disk::{Arcs, DiskPolygon, PointSet};
use crate::geom::Vec2;
use crate::seb::smallest_enclosing_disk;

/// Intersection of unit disks by per-circle arc clipping, O(m²).
pub fn brute_force_intersection(centers: &[Vec2], eps: f64) -> DiskPolygon {
    let set = PointSet::with_eps(centers.to_vec(), eps).expect("nonempty centers");
    let pts = set.points();
    if pts.len() == 1 {
        return DiskPolygon::FullDisk(pts[0]);
    }
    let (c, r) = smallest_enclosing_disk(pts).expect("nonempty");
    if r > 1.0 + eps {
        return DiskPolygon::Empty;
    }
    if r >= 1.0 - eps {
        return DiskPolygon::SinglePoint(c);
    }
    let mut arcs: Vec<(f64, f64, Vec2)> = Vec::new();
    for (i, &ci) in pts.iter().enumerate() {
        let mut range: Option<(f64, f64)> = None;
        let mut empty = false;
        for (j, &cj) in pts.iter().enumerate() {
            if i == j {
                continue;
            }
            let d = ci.dist(cj);
            let half = (d / 2.0).min(1.0).acos();
            let phi = (cj - ci).angle();
            range = match range {
                None => Some((phi - half, phi + half)),
                Some((lo, hi)) => {
                    let mid = 0.5 * (lo + hi);
                    let phi = mid + (phi - mid + TAU / 2.0).rem_euclid(TAU) - TAU / 2.0;
                    let nlo = lo.max(phi - half);
                    let nhi = hi.min(phi + half);
                    if nhi - nlo < eps {
                        empty = true;
                        break;
                    }
                    Some((nlo, nhi))
                }
            };
        }
        if !empty {
            let (lo, hi) = range.expect("at least two centers");
            arcs.push((lo.rem_euclid(TAU), hi - lo, ci));
        }
    }
    arcs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let vertices = arcs.iter().map(|&(lo, _, c)| c + Vec2::polar(lo)).collect();
    let centers = arcs.iter().map(|&(_, _, c)| c).collect();
    DiskPolygon::Proper(Arcs::normalized(vertices, centers, eps))
}

/// Area estimate by uniform sampling in the bounding box, with its standard error.
pub fn monte_carlo_area<R: Rng + ?Sized>(k: &DiskPolygon, samples: usize, rng: &mut R) -> (f64, f64) {
    let pts = k.boundary_samples(64);
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for p in &pts {
        x0 = x0.min(p.x);
        x1 = x1.max(p.x);
        y0 = y0.min(p.y);
        y1 = y1.max(p.y);
    }
    // sampled boundary can miss arc apexes by a sagitta; pad generously
    let pad = 0.05;
    let (x0, x1, y0, y1) = (x0 - pad, x1 + pad, y0 - pad, y1 + pad);
    let box_area = (x1 - x0) * (y1 - y0);
    let hits = (0..samples)
        .filter(|_| {
            let p = Vec2::new(rng.gen_range(x0..x1), rng.gen_range(y0..y1));
            k.contains_with(p, 0.0)
        })
        .count();
    let frac = hits as f64 / samples as f64;
    let se = box_area * (frac * (1.0 - frac) / samples as f64).sqrt();
    (box_area * frac, se)
}
