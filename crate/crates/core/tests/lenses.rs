use ballbody::lens::{
    construct_lens_with_gradients, f_n, flat_counterexample, lens_volume, lens_volume_derivative_check, psi, psi_gap,
    psi_gap_via_psi, steiner_fiber_curvature, two_point_chull_volume, verify_counterexample, FiberKind, Lens,
};
use ballbody::Point;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn counterexample_report_serializes_every_quantity() {
    let r = verify_counterexample().unwrap();
    assert!(r.pass);
    let json = serde_json::to_value(&r).unwrap();
    for q in json["quantities"].as_array().unwrap() {
        for key in ["name", "computed", "paper_value", "tolerance", "pass"] {
            assert!(q.get(key).is_some(), "{q}");
        }
    }
    assert_eq!(json["verdict"], "violation");
}

#[test]
fn flat_lenses_get_flatter() {
    let mut last = 1.0;
    for eps in [0.5, 0.1, 0.01] {
        let r = flat_counterexample(eps, 3).unwrap();
        assert!(r.pass);
        assert!(r.curvature < eps && r.curvature < last);
        last = r.curvature;
    }
}

#[test]
fn prescribed_gradients_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(300);
    for _ in 0..30 {
        let u: Vec<f64> = (0..2).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let v: Vec<f64> = (0..2).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let c = construct_lens_with_gradients(&u, &v).unwrap();
        assert!(c.pass, "{c:?}");
        assert_eq!(c.classification, FiberKind::Cross);
        // sphere caps have |∂₁₁S| = ψ(∇S), so κ is a ratio of ψ values
        let k = steiner_fiber_curvature(&c.lens, &[0.0, 0.0], &[1.0, 0.0], false).unwrap();
        let mid = [0.5 * (u[0] + v[0]), 0.5 * (u[1] + v[1])];
        let expected = 0.5 * (psi(u[0], u[1].abs()) + psi(v[0], v[1].abs())) / psi(mid[0], mid[1].abs());
        assert!((k - expected).abs() <= 1e-9 * expected, "{k} vs {expected}");
    }
}

#[test]
fn psi_gap_is_unbounded() {
    assert!(psi_gap(1e4, 2.0) > 1e3);
    let mut rng = ChaCha8Rng::seed_from_u64(301);
    for _ in 0..200 {
        let t = rng.gen_range(0.001..1000.0);
        let k = rng.gen_range(1.01..4.0);
        let (a, b) = (psi_gap(t, k), psi_gap_via_psi(t, k));
        assert!((a - b).abs() <= 1e-10 * a.max(1.0));
    }
}

#[test]
fn lens_volume_properties() {
    for n in 2..=5 {
        let mut prev = -1.0;
        for i in 0..=200 {
            let d = i as f64 / 200.0;
            let v = lens_volume(n, d).unwrap().value();
            assert!(v > prev);
            prev = v;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(302);
    for _ in 0..50 {
        let d = rng.gen_range(0.01..0.98);
        let n = rng.gen_range(2..=5);
        let (l, r) = lens_volume_derivative_check(n, d).unwrap();
        assert!((l - r).abs() <= 1e-6 * r.max(1.0));
    }
    assert!((f_n(2, 1.0).unwrap() - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
}

#[test]
fn spindle_volume_of_planar_points() {
    let x = Point::new(vec![0.1, 0.2]).unwrap();
    let y = Point::new(vec![0.7, -0.4]).unwrap();
    let d: f64 = 0.5 * x.dist(&y);
    let closed = 2.0 * (d.asin() - d * (1.0 - d * d).sqrt());
    assert!((two_point_chull_volume(&x, &y).unwrap().value() - closed).abs() < 1e-11);
}

#[test]
fn lens_rejects_bad_centers() {
    let p = |v: Vec<f64>| Point::new(v).unwrap();
    assert!(Lens::new(p(vec![0.0, 0.0, 1.5]), p(vec![0.0, 0.0, -1.5])).is_err());
    assert!(Lens::new(p(vec![0.0, 0.0]), p(vec![0.0, 0.0, 0.1])).is_err());
}
