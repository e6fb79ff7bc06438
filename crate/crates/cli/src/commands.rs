use std::fs;
use std::path::Path;

use ballbody::lens::{flat_counterexample, verify_counterexample_at, Quantity, COUNTEREXAMPLE_C0, COUNTEREXAMPLE_W};
use ballbody::lps::{
    convexity_verdict, dual_volume_trace, outradius_trace, volume_trace, LinearParameterSystem, Shape, VolumeTrace,
};
use ballbody::random::random_disk_polygon;
use ballbody::symmetry::{steiner_dual_volume_check, steiner_symmetral, verify_in_s2};
use ballbody::{chull, PointSet, Vec2};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::suites::{run_suite, SuiteName, DUAL_SLACK};
use crate::{csv_table, envelope, opt, pretty, to_value, CliError, CliResult, Format, Outcome, RunConfig};

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn quantity_rows(qs: &[Quantity]) -> Vec<Vec<String>> {
    qs.iter()
        .map(|q| {
            vec![
                q.name.clone(),
                q.computed.to_string(),
                opt(q.paper_value),
                opt(q.tolerance),
                q.pass.to_string(),
            ]
        })
        .collect()
}

const QUANTITY_HEADER: [&str; 5] = ["name", "computed", "paper_value", "tolerance", "pass"];

/// Recomputes the three-dimensional lens counterexample.
pub fn cmd_counterexample(
    cfg: &RunConfig,
    c0: Option<[f64; 3]>,
    w: Option<[f64; 2]>,
    direction: Option<[f64; 2]>,
) -> CliResult<Outcome> {
    cfg.validate()?;
    let overridden = c0.is_some() || w.is_some() || direction.is_some();
    let report = verify_counterexample_at(
        c0.unwrap_or(COUNTEREXAMPLE_C0),
        w.unwrap_or(COUNTEREXAMPLE_W),
        direction.unwrap_or([1.0, 0.0]),
    )
    .map_err(|e| if overridden { usage(e) } else { e.into() })?;
    let pass = report.pass;
    let text = match cfg.format {
        Format::Json => pretty(&envelope("counterexample", pass, to_value(&report))),
        Format::Csv => csv_table(&QUANTITY_HEADER, &quantity_rows(&report.quantities)),
    };
    Ok(Outcome {
        pass,
        report: to_value(&report),
        text,
    })
}

/// Builds a lens whose symmetral has curvature below `epsilon`.
pub fn cmd_flat(cfg: &RunConfig, epsilon: f64, dim: usize) -> CliResult<Outcome> {
    cfg.validate()?;
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(usage(format!("--epsilon must lie in (0, 1), got {epsilon}")));
    }
    if dim < 3 {
        return Err(usage(format!("--dim must be at least 3, got {dim}")));
    }
    let report = flat_counterexample(epsilon, dim)?;
    let lens = &report.certificate.lens;
    let pass = report.pass;
    let value = to_value(&report);
    let text = match cfg.format {
        Format::Json => pretty(&envelope(
            "flat",
            pass,
            json!({
                "report": value,
                "c_plus": lens.c_plus().coords(),
                "c_minus": lens.c_minus().coords(),
            }),
        )),
        Format::Csv => {
            let mut rows = quantity_rows(&report.quantities);
            for (name, p) in [("c_plus", lens.c_plus()), ("c_minus", lens.c_minus())] {
                for (i, x) in p.coords().iter().enumerate() {
                    rows.push(vec![format!("{name}[{i}]"), x.to_string(), String::new(), String::new(), String::new()]);
                }
            }
            csv_table(&QUANTITY_HEADER, &rows)
        }
    };
    Ok(Outcome {
        pass,
        report: value,
        text,
    })
}

/// Traces volume, dual volume and out-radius of a linear parameter system.
pub fn cmd_lps(cfg: &RunConfig, spec: &Path, t_range: Option<(f64, f64)>, points: usize) -> CliResult<Outcome> {
    cfg.validate()?;
    if points < 3 {
        return Err(usage(format!("--points must be at least 3, got {points}")));
    }
    let text = fs::read_to_string(spec).map_err(|e| usage(format!("{}: {e}", spec.display())))?;
    let sys = LinearParameterSystem::from_json(&text).map_err(usage)?;
    let interval = sys.feasibility_interval()?;
    let ts = match t_range {
        Some((a, b)) => {
            if !(a.is_finite() && b.is_finite() && a < b) {
                return Err(usage(format!("need t-min < t-max, got [{a}, {b}]")));
            }
            (0..points).map(|i| a + (b - a) * i as f64 / (points - 1) as f64).collect()
        }
        None => sys.default_grid(points)?,
    };
    let vol = volume_trace(&sys, &ts)?;
    let (dual, root) = dual_volume_trace(&sys, &ts)?;
    let rad = outradius_trace(&sys, &ts)?;
    let tol = cfg.tol.unwrap_or(1e-7);
    let verdicts = [
        convexity_verdict(&vol, Shape::Convex, tol)?,
        convexity_verdict(&root, Shape::Concave, tol)?,
        convexity_verdict(&rad, Shape::Convex, cfg.tol.unwrap_or(1e-9))?,
    ];
    let pass = verdicts.iter().all(|v| v.is_convex_or_concave);
    let value = json!({
        "system": sys.to_spec(),
        "interval": interval,
        "tolerance": tol,
        "verdicts": verdicts,
        "traces": [vol, dual, root, rad],
    });
    let text = match cfg.format {
        Format::Json => pretty(&envelope("lps", pass, value.clone())),
        Format::Csv => {
            eprintln!("{}", serde_json::to_string(&verdicts).expect("reports serialize"));
            traces_csv(&[&vol, &dual, &root, &rad])?
        }
    };
    Ok(Outcome {
        pass,
        report: value,
        text,
    })
}

fn traces_csv(traces: &[&VolumeTrace]) -> CliResult<String> {
    let mut out = String::new();
    for (i, t) in traces.iter().enumerate() {
        let mut buf = Vec::new();
        t.write_csv(&mut buf)?;
        let s = String::from_utf8(buf).expect("csv is utf-8");
        // one header for the whole table
        out.push_str(if i == 0 { &s } else { s.split_once('\n').map_or("", |x| x.1) });
    }
    Ok(out)
}

/// Steiner symmetral of a disk-polygon with its class and dual-area checks.
pub fn cmd_steiner2d(cfg: &RunConfig, body: Option<&Path>, direction: Option<[f64; 2]>) -> CliResult<Outcome> {
    cfg.validate()?;
    let k = match body {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            chull(&PointSet::from_json(&text).map_err(usage)?).map_err(usage)?
        }
        None => random_disk_polygon(&mut ChaCha8Rng::seed_from_u64(cfg.seed), 8),
    };
    let [dx, dy] = direction.unwrap_or([0.0, 1.0]);
    let u = Vec2::new(dx, dy);
    let n = u.norm();
    if !(n > 0.0 && n.is_finite()) {
        return Err(usage("--direction must be a nonzero vector"));
    }
    let u = u * (1.0 / n);
    let env = steiner_symmetral(&k, u, cfg.grid)?;
    let verdict = verify_in_s2(&env)?;
    let dual = steiner_dual_volume_check(&k, u)?;
    let pass = verdict.pass && dual.holds(DUAL_SLACK);
    let value = json!({
        "body": serde_json::from_str::<serde_json::Value>(&k.to_json()).expect("body json"),
        "direction": [u.x, u.y],
        "grid": cfg.grid,
        "area": env.area()?,
        "verdict": verdict,
        "dual_area": dual,
    });
    let text = match cfg.format {
        Format::Json => pretty(&envelope("steiner2d", pass, value.clone())),
        Format::Csv => {
            let mut buf = Vec::new();
            env.write_csv(&mut buf)?;
            String::from_utf8(buf).expect("csv is utf-8")
        }
    };
    Ok(Outcome {
        pass,
        report: value,
        text,
    })
}

/// Runs a randomized property suite.
pub fn cmd_suite(cfg: &RunConfig, name: SuiteName) -> CliResult<Outcome> {
    cfg.validate()?;
    let report = run_suite(name, cfg);
    let value = to_value(&report);
    let text = match cfg.format {
        Format::Json => pretty(&envelope("suite", report.pass, value.clone())),
        Format::Csv => {
            let rows: Vec<Vec<String>> = report
                .results
                .iter()
                .map(|r| {
                    let metrics = r.metrics.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";");
                    vec![
                        r.index.to_string(),
                        r.seed.to_string(),
                        r.pass.to_string(),
                        metrics,
                        r.error.clone().unwrap_or_default(),
                    ]
                })
                .collect();
            csv_table(&["index", "seed", "pass", "metrics", "error"], &rows)
        }
    };
    Ok(Outcome {
        pass: report.pass,
        report: value,
        text,
    })
}
