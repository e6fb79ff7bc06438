//! Seeded random instances.

use std::f64::consts::TAU;

use rand::Rng;

use crate::disk::{chull, DiskPolygon, PointSet};
use crate::geom::Vec2;

/// Radius of the disk random generators are drawn from.
pub const GENERATOR_RADIUS: f64 = 0.45;

/// `m` points uniform in the disk of radius `radius` about the origin.
pub fn random_points<R: Rng + ?Sized>(rng: &mut R, m: usize, radius: f64) -> Vec<Vec2> {
    (0..m)
        .map(|_| {
            let r = radius * rng.gen::<f64>().sqrt();
            Vec2::polar(rng.gen::<f64>() * TAU) * r
        })
        .collect()
}

/// A uniformly random unit vector.
pub fn random_direction<R: Rng + ?Sized>(rng: &mut R) -> Vec2 {
    Vec2::polar(rng.gen::<f64>() * TAU)
}

/// The c-hull of between 3 and `max_generators` random points.
///
/// Redraws the rare degenerate samples so the result is always proper.
pub fn random_disk_polygon<R: Rng + ?Sized>(rng: &mut R, max_generators: usize) -> DiskPolygon {
    loop {
        let m = rng.gen_range(3..=max_generators.max(3));
        let pts = random_points(rng, m, GENERATOR_RADIUS);
        let Ok(set) = PointSet::new(pts) else {
            continue;
        };
        if let Ok(k @ DiskPolygon::Proper(_)) = chull(&set) {
            return k;
        }
    }
}
