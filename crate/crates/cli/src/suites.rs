//! Seeded randomized property suites.
//!
//! Case `i` of a run with seed `s` draws from `ChaCha8Rng::seed_from_u64(s + i)`,
//! so any case replays alone with `--seed <case seed> --cases 1`.

use std::collections::BTreeMap;

use ballbody::lens::{f_n, lens_volume_derivative_check, psi_gap, psi_gap_via_psi};
use ballbody::lps::{convexity_verdict, dual_volume_trace, outradius_trace, random_system, volume_trace, Shape, TRACE_POINTS};
use ballbody::random::{random_direction, random_disk_polygon, random_points, GENERATOR_RADIUS};
use ballbody::symmetry::{
    minkowski_symmetral, santalo_check, steiner_dual_volume_check, steiner_symmetral, two_point_dual_check,
    verify_in_s2, ReflectionAxis,
};
use ballbody::{cdual, chull, intersect_unit_disks, DiskPolygon, PointSet, Vec2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::RunConfig;

/// Raster resolution of the two-point suite.
pub const RASTER: usize = 512;
/// Slack allowed for the dual-area comparison.
pub const DUAL_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteName {
    Duality,
    Steiner2d,
    DualVolume,
    Lps2d,
    Minkowski,
    Santalo,
    TwoPoint,
    Lens,
}

impl SuiteName {
    pub fn default_cases(self) -> usize {
        match self {
            SuiteName::Duality | SuiteName::Steiner2d => 200,
            SuiteName::DualVolume | SuiteName::Lps2d | SuiteName::Minkowski | SuiteName::Santalo => 100,
            SuiteName::TwoPoint | SuiteName::Lens => 50,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::Duality => "duality",
            SuiteName::Steiner2d => "steiner2d",
            SuiteName::DualVolume => "dual-volume",
            SuiteName::Lps2d => "lps2d",
            SuiteName::Minkowski => "minkowski",
            SuiteName::Santalo => "santalo",
            SuiteName::TwoPoint => "two-point",
            SuiteName::Lens => "lens",
        }
    }
}

pub type Metrics = BTreeMap<&'static str, f64>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseResult {
    pub index: usize,
    pub seed: u64,
    pub pass: bool,
    pub metrics: Metrics,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Range {
    pub min: f64,
    pub max: f64,
}

/// Checks that do not depend on a random case.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GlobalChecks {
    pub pass: bool,
    pub metrics: Metrics,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: SuiteName,
    pub seed: u64,
    pub cases: usize,
    pub passed: usize,
    pub pass_rate: f64,
    pub summary: BTreeMap<&'static str, Range>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub global: Option<GlobalChecks>,
    pub results: Vec<CaseResult>,
    pub pass: bool,
}

impl SuiteReport {
    pub fn metric_range(&self, name: &str) -> Option<&Range> {
        self.summary.get(name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseResult> {
        self.results.iter().filter(|r| !r.pass)
    }
}

type CaseFn = fn(&mut ChaCha8Rng, &RunConfig) -> ballbody::Result<(bool, Metrics)>;

pub fn run_suite(name: SuiteName, cfg: &RunConfig) -> SuiteReport {
    let cases = cfg.cases.unwrap_or_else(|| name.default_cases());
    let case: CaseFn = match name {
        SuiteName::Duality => duality_case,
        SuiteName::Steiner2d => steiner_case,
        SuiteName::DualVolume => dual_volume_case,
        SuiteName::Lps2d => lps_case,
        SuiteName::Minkowski => minkowski_case,
        SuiteName::Santalo => santalo_case,
        SuiteName::TwoPoint => two_point_case,
        SuiteName::Lens => lens_case,
    };
    let results: Vec<CaseResult> = (0..cases)
        .into_par_iter()
        .map(|index| {
            let seed = cfg.seed.wrapping_add(index as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            match case(&mut rng, cfg) {
                Ok((pass, metrics)) => CaseResult {
                    index,
                    seed,
                    pass,
                    metrics,
                    error: None,
                },
                Err(e) => CaseResult {
                    index,
                    seed,
                    pass: false,
                    metrics: Metrics::new(),
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    let global = (name == SuiteName::Lens).then(lens_global);
    let mut summary: BTreeMap<&'static str, Range> = BTreeMap::new();
    for r in &results {
        for (&k, &v) in &r.metrics {
            let e = summary.entry(k).or_insert(Range {
                min: f64::INFINITY,
                max: f64::NEG_INFINITY,
            });
            e.min = e.min.min(v);
            e.max = e.max.max(v);
        }
    }
    let passed = results.iter().filter(|r| r.pass).count();
    SuiteReport {
        suite: name,
        seed: cfg.seed,
        cases,
        passed,
        pass_rate: passed as f64 / cases as f64,
        summary,
        pass: passed == cases && global.as_ref().is_none_or(|g| g.pass),
        global,
        results,
    }
}

fn gap(a: &DiskPolygon, b: &DiskPolygon) -> f64 {
    if a.classification() != b.classification() || a.vertices().len() != b.vertices().len() {
        return f64::INFINITY;
    }
    a.vertices().iter().zip(b.vertices()).map(|(p, q)| p.dist(*q)).fold(0.0, f64::max)
}

/// How far any of `points` sticks out of the unit disks at `centers`.
fn excess(points: &[Vec2], centers: &[Vec2]) -> f64 {
    points
        .iter()
        .flat_map(|p| centers.iter().map(move |c| p.dist(*c) - 1.0))
        .fold(f64::NEG_INFINITY, f64::max)
}

fn duality_case(rng: &mut ChaCha8Rng, _: &RunConfig) -> ballbody::Result<(bool, Metrics)> {
    let m = rng.gen_range(1..=10);
    let a = PointSet::new(random_points(rng, m, GENERATOR_RADIUS))?;
    let mut more = a.points().to_vec();
    more.extend(random_points(rng, 3, GENERATOR_RADIUS));
    let b = PointSet::new(more)?;
    let hull = chull(&a)?;
    let triple = match &hull {
        DiskPolygon::Proper(_) => intersect_unit_disks(hull.vertices())?,
        DiskPolygon::SinglePoint(c) => DiskPolygon::FullDisk(*c),
        DiskPolygon::FullDisk(c) => DiskPolygon::SinglePoint(*c),
        DiskPolygon::Empty => DiskPolygon::Empty,
    };
    let triple_gap = gap(&cdual(&a)?, &triple);
    let idempotence_gap = match &hull {
        DiskPolygon::FullDisk(_) => 0.0,
        _ => gap(&hull, &chull(&hull.c_extremal()?)?),
    };
    let generator_excess = excess(a.points(), hull.arc_centers()).max(0.0);
    // A ⊆ B: B^c ⊆ A^c and A^cc ⊆ B^cc
    let dual_excess = excess(cdual(&b)?.vertices(), a.points()).max(0.0);
    let hull_excess = excess(hull.vertices(), chull(&b)?.arc_centers()).max(0.0);
    let metrics = Metrics::from([
        ("generator_excess", generator_excess),
        ("triple_dual_gap", triple_gap),
        ("idempotence_gap", idempotence_gap),
        ("reversal_dual_excess", dual_excess),
        ("reversal_hull_excess", hull_excess),
    ]);
    let pass = metrics.values().all(|&v| v <= 1e-9);
    Ok((pass, metrics))
}

fn steiner_case(rng: &mut ChaCha8Rng, cfg: &RunConfig) -> ballbody::Result<(bool, Metrics)> {
    let k = random_disk_polygon(rng, 8);
    let u = random_direction(rng);
    let env = steiner_symmetral(&k, u, cfg.grid)?;
    let v = verify_in_s2(&env)?;
    let d = steiner_dual_volume_check(&k, u)?;
    let metrics = Metrics::from([
        ("min_curvature", v.min_curvature),
        ("hausdorff_to_chull", v.hausdorff_to_chull),
        ("hausdorff_over_spacing", v.hausdorff_to_chull / env.spacing()),
        ("dual_area_before", d.before),
        ("dual_area_after", d.after),
        ("dual_area_gain", d.after - d.before),
    ]);
    Ok((v.pass && d.holds(DUAL_SLACK), metrics))
}

fn dual_volume_case(rng: &mut ChaCha8Rng, _: &RunConfig) -> ballbody::Result<(bool, Metrics)> {
    let k = random_disk_polygon(rng, 8);
    let u = random_direction(rng);
    let d = steiner_dual_volume_check(&k, u)?;
    let metrics = Metrics::from([
        ("dual_area_before", d.before),
        ("dual_area_after", d.after),
        ("dual_area_gain", d.after - d.before),
    ]);
    Ok((d.holds(DUAL_SLACK), metrics))
}

fn lps_case(rng: &mut ChaCha8Rng, cfg: &RunConfig) -> ballbody::Result<(bool, Metrics)> {
    let sys = random_system(rng);
    let ts = sys.default_grid(TRACE_POINTS)?;
    let tol = cfg.tol.unwrap_or(1e-7);
    let vol = convexity_verdict(&volume_trace(&sys, &ts)?, Shape::Convex, tol)?;
    let (_, root) = dual_volume_trace(&sys, &ts)?;
    let root = convexity_verdict(&root, Shape::Concave, tol)?;
    let rad = convexity_verdict(&outradius_trace(&sys, &ts)?, Shape::Convex, 1e-9)?;
    let metrics = Metrics::from([
        ("points", sys.base_points().len() as f64),
        ("t_min", ts[0]),
        ("t_max", ts[ts.len() - 1]),
        ("volume_worst_second_difference", vol.worst_violation),
        ("dual_root_worst_second_difference", root.worst_violation),
        ("outradius_worst_second_difference", rad.worst_violation),
    ]);
    let pass = vol.is_convex_or_concave && root.is_convex_or_concave && rad.is_convex_or_concave;
    Ok((pass, metrics))
}

fn minkowski_case(rng: &mut ChaCha8Rng, _: &RunConfig) -> ballbody::Result<(bool, Metrics)> {
    let m = rng.gen_range(2..=8);
    let a = PointSet::new(random_points(rng, m, GENERATOR_RADIUS))?;
    let u = random_direction(rng);
    let (k, kc) = (chull(&a)?, cdual(&a)?);
    let left = minkowski_symmetral(&kc, u)?.support;
    let right = minkowski_symmetral(&k, u)?.support.c_dual();
    let commutation = left.sup_distance(&right);
    let width_gap = (k.mean_width()? + kc.mean_width()? - 1.0).abs();
    let s = santalo_check(&a)?;
    let metrics = Metrics::from([
        ("commutation_gap", commutation),
        ("mean_width_gap", width_gap),
        ("dual_area", s.dual_area),
        ("mean_width_bound_slack", s.mean_width_bound - s.dual_area),
        ("volume_bound_slack", s.volume_bound - s.dual_area),
    ]);
    let pass = commutation <= 1e-6
        && width_gap <= 1e-9
        && s.dual_area <= s.mean_width_bound + 1e-6
        && s.dual_area <= s.volume_bound + 1e-6;
    Ok((pass, metrics))
}

fn santalo_case(rng: &mut ChaCha8Rng, _: &RunConfig) -> ballbody::Result<(bool, Metrics)> {
    let m = rng.gen_range(1..=8);
    let s = santalo_check(&PointSet::new(random_points(rng, m, GENERATOR_RADIUS))?)?;
    let metrics = Metrics::from([
        ("dual_area", s.dual_area),
        ("mean_width_bound_slack", s.mean_width_bound - s.dual_area),
        ("volume_bound_slack", s.volume_bound - s.dual_area),
    ]);
    Ok((s.dual_area <= s.mean_width_bound + 1e-6 && s.dual_area <= s.volume_bound + 1e-6, metrics))
}

fn two_point_case(rng: &mut ChaCha8Rng, _: &RunConfig) -> ballbody::Result<(bool, Metrics)> {
    let k = random_disk_polygon(rng, 8);
    let axes = [Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0), Vec2::new(-1.0, 0.0), Vec2::new(0.0, -1.0)];
    let ax = ReflectionAxis::new(axes[rng.gen_range(0..4)], rng.gen_range(-0.1..0.1))?;
    let c = two_point_dual_check(&k, &ax, RASTER)?;
    let metrics = Metrics::from([
        ("cells_body", c.cells_body as f64),
        ("cells_body_count_change", c.cells_body_symmetral as f64 - c.cells_body as f64),
        ("cells_dual", c.cells_dual as f64),
        ("cells_dual_count_change", c.cells_dual_symmetral as f64 - c.cells_dual as f64),
        ("inclusion_violations", c.inclusion_violations as f64),
    ]);
    Ok((c.holds(), metrics))
}

fn lens_case(rng: &mut ChaCha8Rng, _: &RunConfig) -> ballbody::Result<(bool, Metrics)> {
    let n = rng.gen_range(2..=5);
    let d = rng.gen_range(0.01..0.99);
    let (lhs, rhs) = lens_volume_derivative_check(n, d)?;
    let err = (lhs - rhs).abs() / rhs.max(1.0);
    let metrics = Metrics::from([("n", n as f64), ("d", d), ("derivative_identity_error", err)]);
    Ok((err <= 1e-6, metrics))
}

fn lens_global() -> GlobalChecks {
    let mut metrics = Metrics::new();
    let mut f2_err: f64 = 0.0;
    for i in 0..=400 {
        let d = i as f64 / 400.0;
        let closed = 0.5 * (d.asin() - d * (1.0 - d * d).sqrt());
        f2_err = f2_err.max(f_n(2, d).map_or(f64::INFINITY, |v| (v - closed).abs()));
    }
    metrics.insert("f2_closed_form_error", f2_err);
    let mut second: f64 = f64::INFINITY;
    let mut first: f64 = f64::INFINITY;
    for n in 2..=5 {
        let v: Vec<f64> = (0..=400)
            .map(|i| f_n(n, 0.99 * i as f64 / 400.0).unwrap_or(f64::NAN))
            .collect();
        for i in 1..v.len() {
            first = first.min(v[i] - v[i - 1]);
            if i + 1 < v.len() {
                second = second.min(v[i + 1] - 2.0 * v[i] + v[i - 1]);
            }
        }
    }
    metrics.insert("min_second_difference", second);
    metrics.insert("min_first_difference", first);
    let mut routes: f64 = 0.0;
    for i in 0..200 {
        let t = 10f64.powf(-2.0 + 5.0 * i as f64 / 199.0);
        let a = psi_gap(t, 2.0);
        routes = routes.max((a - psi_gap_via_psi(t, 2.0)).abs() / a.max(1.0));
    }
    metrics.insert("psi_gap_route_disagreement", routes);
    let pass = f2_err <= 1e-8 && second >= -1e-9 && first > 0.0 && routes <= 1e-10;
    GlobalChecks { pass, metrics }
}
