use std::fmt::Write as _;

use parisian_ruin::model::{
    delta0_exact_classical, exact_classical_ruin, ruin_time_cdf_asymptotic, ruin_time_horizon, DriftSpec, ModelParams,
};
use parisian_ruin::montecarlo::{
    compare_report, comparison_csv, estimate_ruin_prob, estimate_ruin_time_cdf, AsymptoticConstant, ExperimentConfig,
    Flag, Sampler,
};
use parisian_ruin::paths::{horizon_for_tolerance, GridSpec};
use parisian_ruin::pickands::{
    estimate_f, estimate_p_curve, estimate_p_infty, Estimator, FQuery, LadderResult, PickandsQuery,
    EXTRAPOLATION_FACTOR,
};
use parisian_ruin::stats::kolmogorov_distance;
use parisian_ruin::Estimate;
use serde_json::{json, Value};

use crate::args::{CompareArgs, ConstantArgs, ConstantSettings, ModelArgs, RuinProbArgs, RuinTimeArgs, SimArgs};
use crate::config::Resolver;
use crate::error::CliError;
use crate::report::{sci, Report};

const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const DEFAULT_EPS: f64 = 1e-4;
pub const DEFAULT_STEP: f64 = 0.01;
pub const DEFAULT_PATHS: usize = 100_000;
/// Horizon for zero interest, where no tolerance rule applies.
pub const DEFAULT_T_MAX_ZERO_INTEREST: f64 = 50.0;

fn model(r: &Resolver, m: &ModelArgs, need_u: bool) -> Result<ModelParams<f64>, CliError> {
    let u = if need_u {
        r.required(m.u, "u")?
    } else {
        r.or(m.u, "u", 0.0)?
    };
    Ok(ModelParams::new(
        u,
        r.or(m.c, "c", 1.0)?,
        r.or(m.sigma, "sigma", 1.0)?,
        r.or(m.delta, "delta", 1.0)?,
        r.or(m.t_window, "T", 0.0)?,
    )?)
}

fn experiment(
    r: &Resolver,
    p: ModelParams<f64>,
    s: &SimArgs,
    default_sampler: Sampler,
) -> Result<(ExperimentConfig<f64>, Value), CliError> {
    let (t_max, horizon) = match r.opt(s.t_max, "t-max")? {
        Some(t) => (t, json!({"rule": "explicit", "t_max": t})),
        None if p.delta > 0.0 => {
            let eps = r.or(s.eps, "eps", DEFAULT_EPS)?;
            let h = horizon_for_tolerance(&p, eps)?;
            (
                h.t_max,
                json!({"rule": "tolerance", "eps": eps, "t_max": h.t_max, "residual_sd": h.residual_sd}),
            )
        }
        None => (
            DEFAULT_T_MAX_ZERO_INTEREST,
            json!({"rule": "default", "t_max": DEFAULT_T_MAX_ZERO_INTEREST}),
        ),
    };
    let grid = match r.opt(s.n_steps, "n-steps")? {
        Some(n) => GridSpec::new(t_max, n)?,
        None => GridSpec::with_step(t_max, r.or(s.h, "h", DEFAULT_STEP)?)?,
    };
    let mut cfg = ExperimentConfig::new(p, grid, r.or(s.n_paths, "n-paths", DEFAULT_PATHS)?, r.seed(s.seed)?)
        .with_sampler(r.or(s.sampler, "sampler", default_sampler)?);
    if let Some(m) = r.opt(s.monitoring, "monitoring")? {
        cfg = cfg.with_monitoring(m);
    }
    cfg.conf_level = r.or(s.conf_level, "conf-level", cfg.conf_level)?;
    cfg.validate()?;
    Ok((cfg, horizon))
}

fn default_sampler(p: &ModelParams<f64>) -> Sampler {
    if p.delta > 0.0 {
        Sampler::MeanShift
    } else {
        Sampler::Plain
    }
}

fn flag_names(flags: &[Flag]) -> Vec<&'static str> {
    flags
        .iter()
        .map(|f| match f {
            Flag::Insufficient => "insufficient",
            Flag::DriftNotDominant => "drift-not-dominant",
        })
        .collect()
}

fn exact_value(p: &ModelParams<f64>) -> Result<Option<f64>, CliError> {
    if p.t_window != 0.0 {
        return Ok(None);
    }
    Ok(Some(if p.delta > 0.0 {
        exact_classical_ruin(p)?
    } else {
        delta0_exact_classical(p)?
    }))
}

pub fn ruin_prob(r: &Resolver, args: &RuinProbArgs) -> Result<Report, CliError> {
    let p = model(r, &args.model, true)?;
    let (cfg, horizon) = experiment(r, p, &args.sim, Sampler::Plain)?;
    let est = estimate_ruin_prob(&cfg)?;
    let ci = est.estimate.probability_interval();
    let exact = exact_value(&p)?;
    let flags = flag_names(&est.flags);

    let mut summary = format!(
        "P(ruin) = {} +/- {} ({}% CI [{}, {}]), {} hits in {} paths",
        sci(est.estimate.value),
        sci(est.estimate.std_err),
        cfg.conf_level * 100.0,
        sci(ci.lo),
        sci(ci.hi),
        est.hits,
        cfg.n_paths
    );
    if let Some(e) = exact {
        write!(summary, "\nexact = {}", sci(e)).ok();
    }
    for f in &flags {
        write!(summary, "\nflag={f}").ok();
    }
    let csv = format!(
        "u,estimate,std_err,ci_low,ci_high,n_paths,hits,exact,flags\n{},{},{},{},{},{},{},{},{}\n",
        sci(p.u),
        sci(est.estimate.value),
        sci(est.estimate.std_err),
        sci(ci.lo),
        sci(ci.hi),
        cfg.n_paths,
        est.hits,
        exact.map(sci).unwrap_or_default(),
        flags.join(";")
    );
    let json = json!({
        "command": "ruin-prob",
        "version": VERSION,
        "seed": cfg.seed,
        "config": cfg,
        "horizon": horizon,
        "estimate": est.estimate,
        "interval": ci,
        "hits": est.hits,
        "exact": exact,
        "flags": flags,
    });
    Ok(Report { summary, csv, json })
}

/// Defaults of the constant estimators.
struct ConstantDefaults {
    lambda: f64,
    lambda_max: f64,
    t_step: f64,
    n_reps: usize,
    extrapolate: bool,
}

const PICKANDS_DEFAULTS: ConstantDefaults = ConstantDefaults {
    lambda: 8.0,
    lambda_max: 16.0,
    t_step: 1.0 / 512.0,
    n_reps: 20_000,
    extrapolate: true,
};

const F_DEFAULTS: ConstantDefaults = ConstantDefaults {
    lambda: 50.0,
    lambda_max: 50.0,
    t_step: 0.005,
    n_reps: 10_000,
    extrapolate: false,
};

fn outer_steps(lambda: f64, t_step: f64, multiple: usize) -> Result<usize, CliError> {
    if t_step <= 0.0 || !t_step.is_finite() {
        return Err(CliError::Usage(format!("t-step must be > 0, got {t_step}")));
    }
    let n = ((lambda / t_step) - 1e-9).ceil().max(1.0) as usize;
    Ok(n.div_ceil(multiple) * multiple)
}

fn pickands_query(
    r: &Resolver,
    c: &ConstantSettings,
    p: &ModelParams<f64>,
    seed: u64,
    allow_extrapolation: bool,
) -> Result<(PickandsQuery<f64>, f64, f64), CliError> {
    let d = &PICKANDS_DEFAULTS;
    let (a, b) = (r.opt(c.a, "a")?, r.opt(c.b, "b")?);
    let drift = match (a, b) {
        (Some(a), Some(b)) => DriftSpec::new(b, a)?,
        _ => {
            let derived = p.drift_spec()?;
            DriftSpec::new(b.unwrap_or(derived.b), a.unwrap_or(derived.a))?
        }
    };
    let lambda = r.or(c.lambda, "lambda", d.lambda)?;
    let lambda_max = r.or(c.lambda_max, "lambda-max", d.lambda_max)?;
    let tol = r.or(c.tol, "tol", 0.01)?;
    let estimator = r.or(c.estimator, "estimator", Estimator::Tilted)?;
    let extrapolate = r.or(c.extrapolate, "extrapolate", d.extrapolate && allow_extrapolation)?;
    let multiple = if extrapolate { EXTRAPOLATION_FACTOR } else { 1 };
    let n_t = outer_steps(lambda, r.or(c.t_step, "t-step", d.t_step)?, multiple)?;
    let q = PickandsQuery::new(
        drift,
        lambda,
        n_t,
        r.or(c.n_grid_s, "n-grid-s", 8)?,
        r.or(c.n_reps, "n-reps", d.n_reps)?,
        seed,
    )
    .with_estimator(estimator, extrapolate);
    q.validate()?;
    Ok((q, tol, lambda_max))
}

fn f_query(r: &Resolver, c: &ConstantSettings, p: &ModelParams<f64>, seed: u64) -> Result<FQuery<f64>, CliError> {
    let d = &F_DEFAULTS;
    let lambda = r.or(c.lambda, "lambda", d.lambda)?;
    let n = outer_steps(lambda, r.or(c.t_step, "t-step", d.t_step)?, 1)?;
    Ok(
        FQuery::new(p.scaled_window(), lambda, n, r.or(c.n_reps, "n-reps", d.n_reps)?, seed).with_estimator(r.or(
            c.estimator,
            "estimator",
            Estimator::Tilted,
        )?),
    )
}

enum ConstantRun {
    Pickands {
        query: PickandsQuery<f64>,
        tol: f64,
        lambda_max: f64,
        ladder: LadderResult<f64>,
    },
    ZeroInterest {
        query: FQuery<f64>,
        estimate: Estimate,
    },
}

impl ConstantRun {
    fn estimate(r: &Resolver, c: &ConstantSettings, p: &ModelParams<f64>, seed: u64) -> Result<Self, CliError> {
        let explicit = r.opt(c.a, "a")?.is_some() || r.opt(c.b, "b")?.is_some();
        if p.delta == 0.0 && !explicit {
            let query = f_query(r, c, p, seed)?;
            let estimate = estimate_f(&query)?;
            return Ok(ConstantRun::ZeroInterest { query, estimate });
        }
        let (query, tol, lambda_max) = pickands_query(r, c, p, seed, true)?;
        let ladder = estimate_p_infty(&query, tol, lambda_max)?;
        Ok(ConstantRun::Pickands {
            query,
            tol,
            lambda_max,
            ladder,
        })
    }

    fn constant(&self) -> AsymptoticConstant<f64> {
        match self {
            ConstantRun::Pickands { ladder, .. } => AsymptoticConstant::Pickands(ladder.estimate),
            ConstantRun::ZeroInterest { estimate, .. } => AsymptoticConstant::ZeroInterest(*estimate),
        }
    }

    fn value(&self) -> Estimate {
        match self.constant() {
            AsymptoticConstant::Pickands(e) | AsymptoticConstant::ZeroInterest(e) => e,
        }
    }

    fn json(&self) -> Value {
        match self {
            ConstantRun::Pickands {
                query,
                tol,
                lambda_max,
                ladder,
            } => json!({
                "kind": "pickands",
                "query": query,
                "tol": tol,
                "lambda_max": lambda_max,
                "ladder": ladder,
            }),
            ConstantRun::ZeroInterest { query, estimate } => json!({
                "kind": "zero-interest",
                "query": query,
                "estimate": estimate,
            }),
        }
    }

    fn csv(&self) -> String {
        match self {
            ConstantRun::Pickands { ladder, .. } => ladder.to_csv(),
            ConstantRun::ZeroInterest { query, estimate } => format!(
                "t_scaled,lambda,estimate,std_err,n_reps\n{},{},{},{},{}\n",
                sci(query.t_scaled),
                sci(query.lambda_horizon),
                sci(estimate.value),
                sci(estimate.std_err),
                estimate.n_reps
            ),
        }
    }

    fn describe(&self) -> String {
        let e = self.value();
        match self {
            ConstantRun::Pickands { ladder, query, .. } => format!(
                "P(a={}, b={}) = {} +/- {} [{}]",
                query.a,
                query.b,
                sci(e.value),
                sci(e.std_err),
                match ladder.status {
                    parisian_ruin::pickands::LadderStatus::Converged => "converged",
                    parisian_ruin::pickands::LadderStatus::LadderExhausted => "ladder-exhausted",
                }
            ),
            ConstantRun::ZeroInterest { query, .. } => {
                format!("F({}) = {} +/- {}", query.t_scaled, sci(e.value), sci(e.std_err))
            }
        }
    }
}

pub fn constant(r: &Resolver, args: &ConstantArgs) -> Result<Report, CliError> {
    let p = model(r, &args.model, false)?;
    let seed = r.seed(args.seed)?;
    let run = ConstantRun::estimate(r, &args.constant, &p, seed)?;
    Ok(Report {
        summary: run.describe(),
        csv: run.csv(),
        json: json!({
            "command": "constant",
            "version": VERSION,
            "seed": seed,
            "model": p,
            "constant": run.json(),
            "estimate": run.value(),
        }),
    })
}

pub fn compare(r: &Resolver, args: &CompareArgs) -> Result<Report, CliError> {
    let p = model(r, &args.model, false)?;
    let us = r.or(args.u_values.clone(), "u-values", vec![4.0, 6.0, 8.0])?;
    let (base, horizon) = experiment(r, p, &args.sim, default_sampler(&p))?;
    let run = ConstantRun::estimate(r, &args.constant, &p, base.seed)?;
    let rows = compare_report(&us, &base, &run.constant())?;

    let mut summary = run.describe();
    summary.push_str("\n         u           mc       stderr   asymptotic        exact        ratio");
    for row in &rows {
        write!(
            summary,
            "\n{:>10.4} {:>12.5e} {:>12.5e} {:>12.5e} {:>12} {:>12.6}",
            row.u,
            row.mc_estimate.value,
            row.mc_estimate.std_err,
            row.asymptotic,
            row.exact.map_or("-".to_string(), |e| format!("{e:.5e}")),
            row.ratio_mc_over_asym
        )
        .ok();
        for f in flag_names(&row.flags) {
            write!(summary, " flag={f}").ok();
        }
    }
    Ok(Report {
        summary,
        csv: comparison_csv(&rows),
        json: json!({
            "command": "compare",
            "version": VERSION,
            "seed": base.seed,
            "config": base,
            "horizon": horizon,
            "u_values": us,
            "constant": run.json(),
            "rows": rows,
        }),
    })
}

/// Abscissae whose horizons split `(0, 8 max(b^2, 1)]` into 40 equal parts.
fn default_abscissae(p: &ModelParams<f64>) -> Vec<f64> {
    let b2 = p.c * p.c / (p.sigma * p.sigma * p.delta);
    let top = 8.0 * b2.max(1.0);
    (1..=40)
        .map(|k| {
            let lambda = top * k as f64 / 40.0;
            (lambda * p.sigma * p.sigma - p.c * p.c / p.delta) / p.delta
        })
        .collect()
}

pub fn ruin_time(r: &Resolver, args: &RuinTimeArgs) -> Result<Report, CliError> {
    let p = model(r, &args.model, true)?;
    if p.delta <= 0.0 {
        return Err(parisian_ruin::Error::ForceOfInterest("the ruin-time law needs delta > 0".into()).into());
    }
    let xs = match r.opt(args.x_values.clone(), "x-values")? {
        Some(xs) => xs,
        None => default_abscissae(&p),
    };
    let lambdas = xs
        .iter()
        .map(|&x| ruin_time_horizon(&p, x))
        .collect::<Result<Vec<f64>, _>>()?;
    let (cfg, horizon) = experiment(r, p, &args.sim, Sampler::MeanShift)?;
    let cdf = estimate_ruin_time_cdf(&cfg, &xs)?;

    let (mut q, _, lambda_max) = pickands_query(r, &args.constant, &p, cfg.seed, false)?;
    if q.extrapolate {
        return Err(CliError::Usage(
            "extrapolation is not available for the ruin-time law".into(),
        ));
    }
    let top = lambdas.iter().copied().fold(lambda_max, f64::max);
    let t_step = q.lambda_horizon / q.n_grid_t as f64;
    q.n_grid_t = outer_steps(top, t_step, 1)?;
    q.lambda_horizon = t_step * q.n_grid_t as f64;
    let mut checkpoints = lambdas.clone();
    checkpoints.push(q.lambda_horizon);
    let curve = estimate_p_curve(&q, &checkpoints)?;
    let p_inf = curve.at(q.lambda_horizon)?;
    let asym = xs
        .iter()
        .map(|&x| Ok((x, ruin_time_cdf_asymptotic(&p, x, |l| curve.at(l), &p_inf)?.value)))
        .collect::<Result<Vec<(f64, f64)>, CliError>>()?;
    let ks = kolmogorov_distance(&cdf.points, &asym)?;

    let mut csv = String::from("x,cdf_mc,cdf_asym\n");
    for (&(x, f), &(_, g)) in cdf.points.iter().zip(&asym) {
        writeln!(csv, "{},{},{}", sci(x), sci(f), sci(g)).ok();
    }
    let mut summary = format!(
        "{} ruined paths; Kolmogorov distance to the limit law = {}",
        cdf.n_ruined,
        sci(ks)
    );
    if cdf.insufficient {
        summary.push_str("\nflag=insufficient");
    }
    Ok(Report {
        summary,
        csv,
        json: json!({
            "command": "ruin-time",
            "version": VERSION,
            "seed": cfg.seed,
            "config": cfg,
            "horizon": horizon,
            "constant_query": q,
            "p_inf": p_inf,
            "n_ruined": cdf.n_ruined,
            "insufficient": cdf.insufficient,
            "kolmogorov_distance": ks,
            "points": cdf.points.iter().zip(&asym).map(|(&(x, f), &(_, g))| json!({"x": x, "cdf_mc": f, "cdf_asym": g})).collect::<Vec<_>>(),
        }),
    })
}
