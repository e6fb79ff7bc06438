//! End-to-end acceptance run: one pass/fail line per criterion.

use std::time::{Duration, Instant};

use ballbody_cli::suites::{run_suite, SuiteName, SuiteReport};
use ballbody_cli::{cmd_counterexample, cmd_flat, RunConfig};

const SEED: u64 = 20_240_601;

struct Line {
    id: usize,
    name: &'static str,
    pass: bool,
    detail: String,
    elapsed: Duration,
    limit: Duration,
}

fn run(id: usize, name: &'static str, limit_s: u64, f: impl FnOnce() -> (bool, String)) -> Line {
    let start = Instant::now();
    let (pass, detail) = f();
    let elapsed = start.elapsed();
    let limit = Duration::from_secs(limit_s);
    Line {
        id,
        name,
        pass: pass && elapsed <= limit,
        detail,
        elapsed,
        limit,
    }
}

fn cfg() -> RunConfig {
    RunConfig {
        seed: SEED,
        ..RunConfig::default()
    }
}

fn range(r: &SuiteReport, metric: &str) -> (f64, f64) {
    r.metric_range(metric).map_or((f64::NAN, f64::NAN), |m| (m.min, m.max))
}

fn suite(name: SuiteName) -> SuiteReport {
    run_suite(name, &cfg())
}

fn failures(r: &SuiteReport) -> String {
    let seeds: Vec<String> = r.failures().take(5).map(|c| c.seed.to_string()).collect();
    if seeds.is_empty() {
        String::new()
    } else {
        format!(" failing seeds {}", seeds.join(","))
    }
}

fn counterexample() -> (bool, String) {
    let out = cmd_counterexample(&cfg(), None, None, None).expect("counterexample runs");
    let kappa = out.report["curvature"].as_f64().unwrap_or(f64::NAN);
    let quantities_ok = out.report["quantities"]
        .as_array()
        .is_some_and(|qs| qs.len() == 11 && qs.iter().all(|q| q["pass"] == true));
    let pass = out.pass && quantities_ok && kappa < 1.0 && (kappa - 0.9708).abs() <= 0.003;
    (pass, format!("kappa {kappa:.6}, all reported quantities in tolerance: {quantities_ok}"))
}

fn flat() -> (bool, String) {
    let mut pass = true;
    let mut parts = Vec::new();
    for eps in [0.5, 0.1, 0.01] {
        let out = cmd_flat(&cfg(), eps, 3).expect("flat runs");
        let kappa = out.report["curvature"].as_f64().unwrap_or(f64::NAN);
        let r = out.report["psi_gap"].as_f64().unwrap_or(f64::NAN);
        let ok = out.pass && kappa < eps && (kappa * r - 1.0).abs() <= 1e-6;
        pass &= ok;
        parts.push(format!("eps {eps}: kappa {kappa:.3e}, kappa*R-1 {:.1e}", kappa * r - 1.0));
    }
    (pass, parts.join("; "))
}

fn steiner() -> (bool, String) {
    let r = suite(SuiteName::Steiner2d);
    let (kmin, _) = range(&r, "min_curvature");
    let (_, hmax) = range(&r, "hausdorff_over_spacing");
    let pass = r.cases == 200 && r.pass && kmin >= 1.0 - 1e-6 && hmax <= 5.0;
    (
        pass,
        format!(
            "{}/{} cases, min curvature {kmin:.6}, max hausdorff {hmax:.3} spacings{}",
            r.passed,
            r.cases,
            failures(&r)
        ),
    )
}

fn dual_volume() -> (bool, String) {
    let r = suite(SuiteName::DualVolume);
    let (gmin, _) = range(&r, "dual_area_gain");
    let pass = r.cases == 100 && r.pass && gmin >= -1e-6;
    (pass, format!("{}/{} cases, min gain {gmin:.3e}{}", r.passed, r.cases, failures(&r)))
}

fn lps() -> (bool, String) {
    let r = suite(SuiteName::Lps2d);
    let (v, _) = range(&r, "volume_worst_second_difference");
    let (d, _) = range(&r, "dual_root_worst_second_difference");
    let (o, _) = range(&r, "outradius_worst_second_difference");
    let pass = r.cases == 100 && r.pass && v >= -1e-7 && d >= -1e-7 && o >= -1e-9;
    (
        pass,
        format!(
            "{}/{} systems, worst oriented second differences {v:.1e} / {d:.1e} / {o:.1e}{}",
            r.passed,
            r.cases,
            failures(&r)
        ),
    )
}

fn lens() -> (bool, String) {
    let r = suite(SuiteName::Lens);
    let g = r.global.as_ref().expect("lens suite has global checks");
    let f2 = g.metrics["f2_closed_form_error"];
    let (_, deriv) = range(&r, "derivative_identity_error");
    let pass = r.cases == 50 && r.pass && g.pass && f2 <= 1e-8 && deriv <= 1e-6;
    (
        pass,
        format!(
            "F2 error {f2:.1e}, min second difference {:.1e}, derivative identity error {deriv:.1e}",
            g.metrics["min_second_difference"]
        ),
    )
}

fn duality() -> (bool, String) {
    let r = suite(SuiteName::Duality);
    let worst = [
        "generator_excess",
        "triple_dual_gap",
        "idempotence_gap",
        "reversal_dual_excess",
        "reversal_hull_excess",
    ]
    .iter()
    .map(|m| range(&r, m).1)
    .fold(0.0, f64::max);
    let pass = r.cases == 200 && r.pass && worst <= 1e-9;
    (pass, format!("{}/{} point sets, worst gap {worst:.1e}{}", r.passed, r.cases, failures(&r)))
}

fn minkowski() -> (bool, String) {
    let r = suite(SuiteName::Minkowski);
    let (_, comm) = range(&r, "commutation_gap");
    let (_, width) = range(&r, "mean_width_gap");
    let (ws, _) = range(&r, "mean_width_bound_slack");
    let (vs, _) = range(&r, "volume_bound_slack");
    let pass = r.cases == 100 && r.pass && comm <= 1e-6 && width <= 1e-9 && ws >= -1e-6 && vs >= -1e-6;
    (
        pass,
        format!(
            "{}/{} cases, commutation {comm:.1e}, width gap {width:.1e}, bound slacks {ws:.3e} / {vs:.3e}{}",
            r.passed,
            r.cases,
            failures(&r)
        ),
    )
}

fn two_point() -> (bool, String) {
    let r = suite(SuiteName::TwoPoint);
    let (b0, b1) = range(&r, "cells_body_count_change");
    let (d0, d1) = range(&r, "cells_dual_count_change");
    let (_, viol) = range(&r, "inclusion_violations");
    let pass = r.cases == 50 && r.pass && b0 == 0.0 && b1 == 0.0 && d0 == 0.0 && d1 == 0.0 && viol == 0.0;
    (
        pass,
        format!("{}/{} cases, max inclusion violations {viol}{}", r.passed, r.cases, failures(&r)),
    )
}

fn main() {
    let lines = [
        run(1, "counterexample reproduction", 1, counterexample),
        run(2, "flat symmetrals", 1, flat),
        run(3, "planar steiner preservation", 120, steiner),
        run(4, "dual-volume monotonicity", 120, dual_volume),
        run(5, "parameter system convexity", 180, lps),
        run(6, "lens volume", 10, lens),
        run(7, "duality algebra", 60, duality),
        run(8, "minkowski symmetrization", 120, minkowski),
        run(9, "two-point symmetrization", 60, two_point),
    ];
    for l in &lines {
        println!(
            "{} {} {} ({:.2}s of {}s): {}",
            if l.pass { "PASS" } else { "FAIL" },
            l.id,
            l.name,
            l.elapsed.as_secs_f64(),
            l.limit.as_secs(),
            l.detail
        );
    }
    let failed: Vec<usize> = lines.iter().filter(|l| !l.pass).map(|l| l.id).collect();
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
    println!("acceptance: {} of {} criteria pass", lines.len(), lines.len());
}
