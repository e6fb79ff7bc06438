use ballbody::random::{random_direction, random_disk_polygon, random_points};
use ballbody::symmetry::{
    curvature_profile, minkowski_symmetral, reflect, santalo_check, steiner_dual_volume_check, steiner_symmetral,
    two_point_dual_check, verify_in_s2, EnvelopeBody, ReflectionAxis, STEINER_GRID,
};
use ballbody::{cdual, chull, DiskPolygon, PointSet, Vec2};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn mean_width_of_dual_complements() {
    let mut rng = ChaCha8Rng::seed_from_u64(200);
    for _ in 0..50 {
        let a = PointSet::new(random_points(&mut rng, 5, 0.45)).unwrap();
        let w = chull(&a).unwrap().mean_width().unwrap();
        let wc = cdual(&a).unwrap().mean_width().unwrap();
        assert!((w + wc - 1.0).abs() <= 1e-9);
    }
}

#[test]
fn minkowski_symmetral_is_symmetric() {
    let mut rng = ChaCha8Rng::seed_from_u64(201);
    for _ in 0..20 {
        let k = random_disk_polygon(&mut rng, 8);
        let u = random_direction(&mut rng);
        let m = minkowski_symmetral(&k, u).unwrap().support;
        let mirrored = m.reflect(u, 0.0);
        assert!(m.sup_distance(&mirrored) < 1e-12);
    }
}

#[test]
fn steiner_symmetrals_stay_in_class() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for _ in 0..25 {
        let k = random_disk_polygon(&mut rng, 8);
        let e = steiner_symmetral(&k, random_direction(&mut rng), STEINER_GRID).unwrap();
        let v = verify_in_s2(&e).unwrap();
        assert!(v.pass, "{v:?}");
        assert!(curvature_profile(&e).unwrap().samples.len() > STEINER_GRID / 2);
    }
}

#[test]
fn envelope_with_a_flat_spot_is_rejected() {
    // a unit circle arc flattened in the middle
    let n = 1001;
    let xs: Vec<f64> = (0..n).map(|i| -0.8 + 1.6 * i as f64 / (n - 1) as f64).collect();
    let up: Vec<f64> = xs
        .iter()
        .map(|&x| (1.0 - x * x).sqrt() - 0.6 + if x.abs() < 0.2 { 0.05 * (1.0 - (x / 0.2).powi(2)).powi(3) } else { 0.0 })
        .collect();
    let e = EnvelopeBody::from_samples(Vec2::new(0.0, 1.0), xs, up).unwrap();
    assert!(!verify_in_s2(&e).unwrap().pass);
}

#[test]
fn dual_area_does_not_shrink() {
    let mut rng = ChaCha8Rng::seed_from_u64(203);
    for _ in 0..20 {
        let k = random_disk_polygon(&mut rng, 8);
        let c = steiner_dual_volume_check(&k, random_direction(&mut rng)).unwrap();
        assert!(c.holds(1e-6), "{c:?}");
    }
}

#[test]
fn santalo_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(204);
    for _ in 0..50 {
        let s = santalo_check(&PointSet::new(random_points(&mut rng, 6, 0.45)).unwrap()).unwrap();
        assert!(s.dual_area <= s.mean_width_bound + 1e-6);
        assert!(s.dual_area <= s.volume_bound + 1e-6);
    }
}

#[test]
fn reflection_preserves_area() {
    let mut rng = ChaCha8Rng::seed_from_u64(205);
    for _ in 0..20 {
        let k = random_disk_polygon(&mut rng, 8);
        let ax = ReflectionAxis::new(random_direction(&mut rng), 0.1).unwrap();
        assert!((reflect(&k, &ax).area() - k.area()).abs() < 1e-12);
    }
    assert_eq!(
        reflect(&DiskPolygon::Empty, &ReflectionAxis::through_origin(Vec2::new(1.0, 0.0)).unwrap()),
        DiskPolygon::Empty
    );
}

#[test]
fn two_point_inclusion() {
    let mut rng = ChaCha8Rng::seed_from_u64(206);
    for i in 0..6 {
        let k = random_disk_polygon(&mut rng, 8);
        let dirs = [Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0), Vec2::new(-1.0, 0.0), Vec2::new(0.0, -1.0)];
        let ax = ReflectionAxis::new(dirs[i % 4], 0.05).unwrap();
        let c = two_point_dual_check(&k, &ax, 256).unwrap();
        assert!(c.holds(), "{c:?}");
    }
}
