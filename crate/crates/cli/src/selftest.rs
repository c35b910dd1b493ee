//! Built-in invariant suites behind `parisian selftest`.

use parisian_ruin::model::{
    critical_point, delta0_exact_classical, exact_classical_ruin, inverse_time_change, time_change, DriftSpec,
    ModelParams,
};
use parisian_ruin::montecarlo::{estimate_ruin_prob, ExperimentConfig, Sampler};
use parisian_ruin::normal::std_normal_sf;
use parisian_ruin::paths::{horizon_for_tolerance, sample_replicate, GridSpec};
use parisian_ruin::pickands::{estimate_f, estimate_p, estimate_p_infty, FQuery, LadderStatus, PickandsQuery};
use parisian_ruin::ruin::{detect_parisian, parisian_ruin_time, window_points};

use crate::error::CliError;

type Check = Result<(), String>;
type Suite = fn() -> Check;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn close(x: f64, y: f64, rel: f64, what: &str) -> Check {
    ensure((x - y).abs() <= rel * y.abs().max(1e-300), || {
        format!("{what}: {x} vs {y}")
    })
}

fn model_err(e: parisian_ruin::Error) -> String {
    e.to_string()
}

fn closed_forms() -> Check {
    close(std_normal_sf(0.0).map_err(model_err)?, 0.5, 1e-15, "Psi(0)")?;
    let p = ModelParams::classical(0.0, 1.3, 0.7, 0.4).map_err(model_err)?;
    close(
        exact_classical_ruin(&p).map_err(model_err)?,
        1.0,
        1e-15,
        "exact ruin at u=0",
    )?;
    let q = ModelParams::classical(1.0, 1.0, 2f64.sqrt(), 0.0).map_err(model_err)?;
    close(
        delta0_exact_classical(&q).map_err(model_err)?,
        (-1f64).exp(),
        1e-15,
        "zero-interest ruin",
    )?;
    let r = ModelParams::classical(9.0, 1.0, 1.0, 1.0).map_err(model_err)?;
    let cp = critical_point(&r).map_err(model_err)?;
    close(cp.t_star_s, 0.01, 1e-14, "critical point")?;
    close(cp.t_star_time, 10f64.ln(), 1e-14, "critical time")?;
    for x in [0.1, 1.0, 10.0] {
        let back = inverse_time_change(time_change(x, 0.5).map_err(model_err)?, 0.5).map_err(model_err)?;
        close(back, x, 1e-14, "time change round trip")?;
    }
    let s = ModelParams::classical(1.0, 1.0, 2f64.sqrt(), 1.0).map_err(model_err)?;
    let h = horizon_for_tolerance(&s, (-5f64).exp()).map_err(model_err)?;
    close(h.t_max, 5.0, 1e-12, "tolerance horizon")?;
    ensure(h.residual_sd <= (-5f64).exp() * (1.0 + 1e-12), || {
        "residual above tolerance".into()
    })
}

/// First window of `w` points strictly above `u`, as (right end, last point
/// at or below `u` before it).
fn naive_scan(values: &[f64], u: f64, w: usize) -> Option<(usize, usize)> {
    (0..values.len().saturating_sub(w - 1))
        .find(|&i| values[i..i + w].iter().all(|&v| v > u))
        .map(|i| {
            let eta = i + w - 1;
            (eta, (0..eta).rev().find(|&j| values[j] <= u).unwrap_or(0))
        })
}

fn detector_oracle() -> Check {
    let combos = [(0.0, 0.05), (0.05, 0.05), (0.1, 0.02), (0.5, 0.1)];
    for (k, &(t_window, h)) in combos.iter().enumerate() {
        let p = ModelParams::new(0.4, 0.5, 1.0, 0.5, t_window).map_err(model_err)?;
        let grid = GridSpec::with_step(4.0, h).map_err(model_err)?;
        let w = window_points(h, t_window).map_err(model_err)?;
        for i in 0..250 {
            let path = sample_replicate(&grid, &p, 40 + k as u64, i, None).map_err(model_err)?;
            let expected = naive_scan(&path.values, p.u, w);
            let out = parisian_ruin_time(&path, &p).map_err(model_err)?;
            let got = out.eta.zip(out.kappa);
            let want = expected.map(|(e, k)| (path.times[e], path.times[k]));
            ensure(
                detect_parisian(&path, &p).map_err(model_err)? == expected.is_some() && got == want,
                || format!("path {i} with T={t_window}, h={h}: {got:?} vs {want:?}"),
            )?;
        }
    }
    Ok(())
}

fn pathwise_monotonicity() -> Check {
    let grid = GridSpec::with_step(3.0, 0.01).map_err(model_err)?;
    for i in 0..200 {
        let ruined = |u: f64, t: f64| -> Result<bool, String> {
            let p = ModelParams::new(u, 1.0, 1.0, 1.0, t).map_err(model_err)?;
            detect_parisian(&sample_replicate(&grid, &p, 11, i, None).map_err(model_err)?, &p).map_err(model_err)
        };
        let by_u = [ruined(0.0, 0.1)?, ruined(0.2, 0.1)?, ruined(0.5, 0.1)?];
        let by_t = [ruined(0.2, 0.0)?, ruined(0.2, 0.1)?, ruined(0.2, 0.3)?];
        ensure(by_u.windows(2).all(|w| w[0] >= w[1]), || {
            format!("path {i}: ruin gained as u grew")
        })?;
        ensure(by_t.windows(2).all(|w| w[0] >= w[1]), || {
            format!("path {i}: ruin gained as T grew")
        })?;
    }
    Ok(())
}

fn degenerate_constant() -> Check {
    let q = PickandsQuery::new(DriftSpec::new(1.0, 0.0).map_err(model_err)?, 1.0, 64, 8, 500, 5);
    let ladder = estimate_p_infty(&q, 0.01, 8.0).map_err(model_err)?;
    ensure(ladder.status == LadderStatus::Converged, || {
        "a=0 ladder did not converge".into()
    })?;
    for s in &ladder.steps {
        ensure(s.estimate.value == (-1f64).exp() && s.estimate.std_err == 0.0, || {
            format!(
                "a=0 at lambda={}: {} +/- {}",
                s.lambda, s.estimate.value, s.estimate.std_err
            )
        })?;
    }
    Ok(())
}

fn constant_monotonicity() -> Check {
    let drift = DriftSpec::new(1.0, 1.0).map_err(model_err)?;
    let base = PickandsQuery::new(drift, 1.0, 64, 8, 2000, 9);
    let mut prev = 0.0;
    for k in 0..4 {
        let v = estimate_p(&base.doubled(k)).map_err(model_err)?.value;
        ensure(v >= prev, || format!("constant fell from {prev} to {v} at step {k}"))?;
        prev = v;
    }
    let mut prev = f64::INFINITY;
    for t in [0.0, 0.2, 0.5, 1.0] {
        let v = estimate_f(&FQuery::new(t, 10.0, 1000, 500, 3))
            .map_err(model_err)?
            .value;
        ensure(v <= prev, || format!("F rose from {prev} to {v} at T={t}"))?;
        prev = v;
    }
    Ok(())
}

fn worker_independence() -> Check {
    let p = ModelParams::classical(1.0, 1.0, 1.0, 1.0).map_err(model_err)?;
    let grid = GridSpec::with_step(6.0, 0.02).map_err(model_err)?;
    let run = |threads: usize, sampler: Sampler| -> Result<String, String> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| e.to_string())?;
        let cfg = ExperimentConfig::new(p, grid, 4000, 21).with_sampler(sampler);
        let est = pool.install(|| estimate_ruin_prob(&cfg)).map_err(model_err)?;
        Ok(format!("{:?}", est))
    };
    for sampler in [Sampler::Plain, Sampler::MeanShift] {
        let (a, b) = (run(1, sampler)?, run(3, sampler)?);
        ensure(a == b, || format!("{sampler:?}: {a} vs {b}"))?;
    }
    Ok(())
}

pub const SUITES: &[(&str, Suite)] = &[
    ("closed-forms", closed_forms),
    ("detector-oracle", detector_oracle),
    ("pathwise-monotonicity", pathwise_monotonicity),
    ("degenerate-constant", degenerate_constant),
    ("constant-monotonicity", constant_monotonicity),
    ("worker-independence", worker_independence),
];

/// Runs every suite, printing one line each.
pub fn run() -> Result<String, CliError> {
    let mut lines = Vec::new();
    let mut failed = Vec::new();
    for (name, suite) in SUITES {
        match suite() {
            Ok(()) => lines.push(format!("PASS {name}")),
            Err(e) => {
                lines.push(format!("FAIL {name}: {e}"));
                failed.push(*name);
            }
        }
    }
    let summary = lines.join("\n");
    if failed.is_empty() {
        Ok(summary)
    } else {
        println!("{summary}");
        Err(CliError::Invariant(failed.join(", ")))
    }
}
