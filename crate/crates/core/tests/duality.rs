use ballbody::testing::brute_force_intersection;
use ballbody::{cdual, chull, intersect_unit_disks, DiskPolygon, PointSet, Vec2, EPS_GEOM};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_set(rng: &mut ChaCha8Rng) -> PointSet {
    let m = rng.gen_range(1..=10);
    PointSet::new(ballbody::random::random_points(rng, m, 0.45)).unwrap()
}

fn same_vertices(a: &DiskPolygon, b: &DiskPolygon, tol: f64) -> bool {
    a.classification() == b.classification()
        && a.vertices().len() == b.vertices().len()
        && a.vertices().iter().zip(b.vertices()).all(|(p, q)| p.dist(*q) <= tol)
}

#[test]
fn generators_lie_in_their_hull() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for _ in 0..100 {
        let a = random_set(&mut rng);
        let k = chull(&a).unwrap();
        assert!(a.points().iter().all(|&p| k.contains_with(p, EPS_GEOM)));
    }
}

#[test]
fn triple_dual_is_the_dual() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..100 {
        let a = random_set(&mut rng);
        let ac = cdual(&a).unwrap();
        let acc = chull(&a).unwrap();
        // the dual of a disk-polygon is cut out by its vertices
        let accc = match acc {
            DiskPolygon::Proper(_) => intersect_unit_disks(acc.vertices()).unwrap(),
            DiskPolygon::FullDisk(c) => DiskPolygon::SinglePoint(c),
            DiskPolygon::SinglePoint(c) => DiskPolygon::FullDisk(c),
            DiskPolygon::Empty => unreachable!("hulls are nonempty"),
        };
        assert!(same_vertices(&ac, &accc, 1e-9), "{ac:?} vs {accc:?}");
    }
}

#[test]
fn hull_is_idempotent() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for _ in 0..100 {
        let a = random_set(&mut rng);
        let k = chull(&a).unwrap();
        if let DiskPolygon::Proper(_) = k {
            let again = chull(&PointSet::new(k.vertices().to_vec()).unwrap()).unwrap();
            assert!(same_vertices(&k, &again, 1e-9));
        }
    }
}

#[test]
fn duality_reverses_inclusion() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for _ in 0..100 {
        let a = random_set(&mut rng);
        let mut bigger = a.points().to_vec();
        bigger.extend(ballbody::random::random_points(&mut rng, 3, 0.45));
        let b = PointSet::new(bigger).unwrap();
        let (ac, bc) = (cdual(&a).unwrap(), cdual(&b).unwrap());
        // B^c ⊆ A^c: every vertex of B^c lies in A^c
        assert!(bc.vertices().iter().all(|&p| ac.contains_with(p, 1e-9)));
        assert!(bc.area() <= ac.area() + 1e-12);
    }
}

#[test]
fn scan_agrees_with_arc_clipping() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    for _ in 0..200 {
        let m = rng.gen_range(2..=40);
        let radius = rng.gen_range(0.2..1.05);
        let pts = ballbody::random::random_points(&mut rng, m, radius);
        let fast = intersect_unit_disks(&pts).unwrap();
        let slow = brute_force_intersection(&pts, EPS_GEOM);
        assert_eq!(fast.classification(), slow.classification());
        if let DiskPolygon::Proper(_) = fast {
            assert!(fast.hausdorff(&slow).unwrap() < 1e-9);
        }
    }
}

#[test]
fn lens_from_two_points() {
    let a = PointSet::new(vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0)]).unwrap();
    let k = cdual(&a).unwrap();
    let s = 0.75f64.sqrt();
    assert!(k.vertices().iter().any(|v| v.dist(Vec2::new(0.5, s)) < 1e-12));
    assert!(k.vertices().iter().any(|v| v.dist(Vec2::new(0.5, -s)) < 1e-12));
    let expected = 2.0 * std::f64::consts::PI / 3.0 - s;
    assert!((k.area() - expected).abs() < 1e-12);
    let json = k.to_json();
    assert_eq!(DiskPolygon::from_json(&json).unwrap(), k);
}

#[test]
fn large_inputs_stay_fast() {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let pts = ballbody::random::random_points(&mut rng, 4096, 0.45);
    let start = std::time::Instant::now();
    let k = chull(&PointSet::new(pts).unwrap()).unwrap();
    assert!(k.check_invariants(1e-9));
    assert!(start.elapsed().as_secs_f64() < 2.0);
}
