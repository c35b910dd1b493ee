//! Monte Carlo estimation of the Pickands-type constants
//!
//! ```text
//! P^f_a[0, lambda] = E[ sup_{t in [0, lambda]} inf_{s in [a, 1]} exp(sqrt(2) B(st) - st - f(st)) ]
//! ```
//!
//! with `f(t) = (sqrt(t) - b)^2`, their `lambda -> inf` limit, and the
//! zero-interest constant
//!
//! ```text
//! F(T) = lim (1/lambda) E[ sup_{t in [0, lambda]} inf_{s in [0, T]} exp(sqrt(2) B(t+s) - (t+s)) ].
//! ```
//!
//! The outer supremum runs over a uniform grid of `[0, lambda]`, the inner
//! infimum over a uniform grid of `[a, 1]` with both end points, and `B(st)`
//! is linearly interpolated from a Brownian path on a grid fine enough that
//! every `st` falls within one Brownian step of a simulated point.
//!
//! Replicate `r` always draws from stream `r` of the query seed, and the
//! Brownian step does not change along a horizon ladder, so estimates for
//! nested horizons or nested grids are ordered replicate by replicate.
//!
//! Two estimators of the same discretised expectation are available. The
//! direct one averages the functional itself, whose tail is close to
//! `y^{-2}`. The tilted one draws a grid point `x_k` with probability
//! proportional to `e^{-f(x_k)}`, adds the drift `sqrt(2) min(x, x_k)` to the
//! Brownian path and averages `C Y / sum_j Z_j`, where
//! `Z_j = exp(sqrt(2) B(x_j) - x_j - f(x_j))` and `C = sum_k e^{-f(x_k)}`.
//! For `a = 1` this ratio lies in `(0, C]`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::model::DriftSpec;
use crate::paths::fill_bm;
use crate::rng::{replicate_stream, StreamRng};
use crate::ruin::{window_points, SlidingMin};
use crate::scalar::Scalar;
use crate::stats::{EstimateCI, Moments, DEFAULT_CONF_LEVEL};

/// Coarsening factor of the companion grid used for extrapolation.
pub const EXTRAPOLATION_FACTOR: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Estimator {
    #[default]
    Direct,
    Tilted,
}

/// One constant `P^f_a[0, lambda]` and how to estimate it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct PickandsQuery<T> {
    pub a: T,
    pub b: T,
    pub lambda_horizon: T,
    /// Steps of the outer grid on `[0, lambda]`.
    pub n_grid_t: usize,
    /// Steps of the inner grid on `[a, 1]`; ignored when `a = 1`.
    pub n_grid_s: usize,
    pub n_reps: usize,
    pub seed: u64,
    /// Brownian steps on `[0, lambda]`. Defaults to `n_grid_t * n_grid_s`
    /// (`n_grid_t` when `a = 1`); must be a multiple of `n_grid_t`.
    #[serde(default)]
    pub bm_steps: Option<usize>,
    #[serde(default)]
    pub estimator: Estimator,
    /// Removes the leading `sqrt(h)` grid bias by combining each replicate
    /// with the same path read on a grid [`EXTRAPOLATION_FACTOR`] times
    /// coarser: `2 Y_h - Y_{4h}`.
    #[serde(default)]
    pub extrapolate: bool,
    pub conf_level: T,
}

impl<T: Scalar> PickandsQuery<T> {
    pub fn new(
        drift: DriftSpec<T>,
        lambda_horizon: T,
        n_grid_t: usize,
        n_grid_s: usize,
        n_reps: usize,
        seed: u64,
    ) -> Self {
        Self {
            a: drift.a,
            b: drift.b,
            lambda_horizon,
            n_grid_t,
            n_grid_s,
            n_reps,
            seed,
            bm_steps: None,
            estimator: Estimator::Direct,
            extrapolate: false,
            conf_level: T::lit(DEFAULT_CONF_LEVEL),
        }
    }

    pub fn with_estimator(self, estimator: Estimator, extrapolate: bool) -> Self {
        Self {
            estimator,
            extrapolate,
            ..self
        }
    }

    pub fn drift(&self) -> Result<DriftSpec<T>> {
        DriftSpec::new(self.b, self.a)
    }

    fn inner_steps(&self) -> usize {
        if self.a == T::one() {
            1
        } else {
            self.n_grid_s
        }
    }

    fn brownian_steps(&self) -> usize {
        self.bm_steps.unwrap_or(self.n_grid_t * self.inner_steps())
    }

    pub fn validate(&self) -> Result<()> {
        self.drift()?;
        if !(self.lambda_horizon >= T::zero()) || !self.lambda_horizon.is_finite() {
            return Err(crate::error::Error::Domain(format!(
                "horizon must be finite and >= 0, got {}",
                self.lambda_horizon
            )));
        }
        if self.n_grid_t == 0 {
            return Err(invalid("n_grid_t", "must be >= 1"));
        }
        if self.n_grid_s == 0 {
            return Err(invalid("n_grid_s", "must be >= 1"));
        }
        if self.n_reps == 0 {
            return Err(invalid("n_reps", "must be >= 1"));
        }
        let m = self.brownian_steps();
        if m == 0 || !m.is_multiple_of(self.n_grid_t) {
            return Err(invalid(
                "bm_steps",
                format!("{m} is not a multiple of n_grid_t = {}", self.n_grid_t),
            ));
        }
        if m < self.n_grid_t * self.inner_steps() {
            return Err(invalid(
                "bm_steps",
                format!("{m} Brownian steps are coarser than the evaluation grid"),
            ));
        }
        if !(self.conf_level > T::zero() && self.conf_level < T::one()) {
            return Err(invalid("conf_level", "must lie in (0,1)"));
        }
        if self.extrapolate
            && (!self.n_grid_t.is_multiple_of(EXTRAPOLATION_FACTOR) || !m.is_multiple_of(EXTRAPOLATION_FACTOR))
        {
            return Err(invalid(
                "extrapolate",
                format!("grids must be divisible by {EXTRAPOLATION_FACTOR}"),
            ));
        }
        Ok(())
    }

    fn coarsened(&self) -> Self {
        Self {
            n_grid_t: self.n_grid_t / EXTRAPOLATION_FACTOR,
            bm_steps: Some(self.brownian_steps() / EXTRAPOLATION_FACTOR),
            extrapolate: false,
            ..*self
        }
    }

    /// Same grids and seed on the horizon `lambda * 2^k`.
    pub fn doubled(&self, k: u32) -> Self {
        let m = 1usize << k;
        Self {
            lambda_horizon: self.lambda_horizon * T::from_count(m),
            n_grid_t: self.n_grid_t * m,
            bm_steps: self.bm_steps.map(|s| s * m),
            ..*self
        }
    }
}

/// Evaluates the discretised sup-inf functional replicate by replicate.
struct Functional<T> {
    drift: DriftSpec<T>,
    n_t: usize,
    /// Brownian steps per outer step.
    ratio: usize,
    h_b: T,
    inner: Vec<T>,
}

impl<T: Scalar> Functional<T> {
    fn new(q: &PickandsQuery<T>) -> Result<Self> {
        q.validate()?;
        let m = q.brownian_steps();
        let n_s = q.inner_steps();
        let inner = if q.a == T::one() {
            vec![T::one()]
        } else {
            let span = T::one() - q.a;
            (0..=n_s)
                .map(|j| q.a + span * T::from_count(j) / T::from_count(n_s))
                .collect()
        };
        Ok(Self {
            drift: q.drift()?,
            n_t: q.n_grid_t,
            ratio: m / q.n_grid_t,
            h_b: q.lambda_horizon / T::from_count(m),
            inner,
        })
    }

    /// Exponent `sqrt(2) B(x) - x - f(x)` at Brownian grid position `pos`.
    #[inline]
    fn exponent(&self, bm: &[T], pos: T) -> T {
        let k = pos.floor();
        let ki = k.to_usize().unwrap_or(0).min(bm.len() - 1);
        let frac = pos - k;
        let b = if frac > T::zero() && ki + 1 < bm.len() {
            bm[ki] + frac * (bm[ki + 1] - bm[ki])
        } else {
            bm[ki]
        };
        let x = pos * self.h_b;
        T::SQRT_2() * b - x - self.drift.f(x)
    }

    /// `min_j exponent(s_j t_i)` for outer index `i`.
    #[inline]
    fn inner_min(&self, bm: &[T], i: usize) -> T {
        let base = T::from_count(i * self.ratio);
        self.inner
            .iter()
            .map(|&s| self.exponent(bm, s * base))
            .fold(T::infinity(), T::min)
    }

    /// Running `sup_i inner_min` recorded at each checkpoint outer index
    /// (sorted ascending). Returned in log scale.
    fn running_sup(&self, bm: &[T], checkpoints: &[usize], out: &mut Vec<T>) {
        out.clear();
        let mut sup = T::neg_infinity();
        let mut next = 0;
        for i in 0..=self.n_t {
            sup = sup.max(self.inner_min(bm, i));
            while next < checkpoints.len() && checkpoints[next] == i {
                out.push(sup);
                next += 1;
            }
            if next == checkpoints.len() {
                break;
            }
        }
    }

    fn brownian_steps(&self) -> usize {
        self.n_t * self.ratio
    }

    /// `log sum_j Z_j` over the Brownian grid.
    fn log_mass(&self, bm: &[T]) -> T {
        log_sum_exp((0..bm.len()).map(|j| self.exponent(bm, T::from_count(j))))
    }
}

fn log_sum_exp<T: Scalar, I: Iterator<Item = T> + Clone>(xs: I) -> T {
    let m = xs.clone().fold(T::neg_infinity(), T::max);
    if m == T::neg_infinity() {
        return m;
    }
    m + xs.map(|x| (x - m).exp()).sum::<T>().ln()
}

/// Sampling law of the tilting point.
struct Tilt<T> {
    log_total: T,
    cumulative: Vec<T>,
    drift: Vec<T>,
}

impl<T: Scalar> Tilt<T> {
    fn new(fun: &Functional<T>) -> Self {
        let m = fun.brownian_steps();
        let xs: Vec<T> = (0..=m).map(|j| T::from_count(j) * fun.h_b).collect();
        let logw: Vec<T> = xs.iter().map(|&x| -fun.drift.f(x)).collect();
        let log_total = log_sum_exp(logw.iter().copied());
        let mut acc = T::zero();
        let cumulative = logw
            .iter()
            .map(|&l| {
                acc = acc + (l - log_total).exp();
                acc
            })
            .collect();
        Self {
            log_total,
            cumulative,
            drift: xs.iter().map(|&x| T::SQRT_2() * x).collect(),
        }
    }

    fn draw(&self, rng: &mut StreamRng) -> usize {
        let u = T::open_uniform(rng) * self.cumulative[self.cumulative.len() - 1];
        self.cumulative
            .partition_point(|&c| c < u)
            .min(self.cumulative.len() - 1)
    }

    fn apply(&self, k: usize, bm: &mut [T]) {
        for (j, b) in bm.iter_mut().enumerate() {
            *b = *b + self.drift[j.min(k)];
        }
    }
}

/// Log-scale running sups of one replicate, plus the tilting correction.
struct Replicator<T> {
    fun: Functional<T>,
    coarse: Option<Functional<T>>,
    tilt: Option<Tilt<T>>,
    seed: u64,
}

impl<T: Scalar> Replicator<T> {
    fn new(q: &PickandsQuery<T>) -> Result<Self> {
        let fun = Functional::new(q)?;
        let coarse = if q.extrapolate {
            Some(Functional::new(&q.coarsened())?)
        } else {
            None
        };
        let tilt = match q.estimator {
            Estimator::Direct => None,
            Estimator::Tilted => Some(Tilt::new(&fun)),
        };
        Ok(Self {
            fun,
            coarse,
            tilt,
            seed: q.seed,
        })
    }

    /// Simulates replicate `r` and returns the log correction added to every
    /// log sup (zero for the direct estimator).
    fn simulate(&self, r: usize, bm: &mut Vec<T>) -> T {
        bm.clear();
        let mut rng = replicate_stream(self.seed, r as u64);
        let k = self.tilt.as_ref().map(|t| t.draw(&mut rng));
        fill_bm(bm, self.fun.h_b, self.fun.brownian_steps(), &mut rng);
        match (&self.tilt, k) {
            (Some(t), Some(k)) => {
                t.apply(k, bm);
                t.log_total - self.fun.log_mass(bm)
            }
            _ => T::zero(),
        }
    }

    /// Replicate value at the full horizon, extrapolated when requested.
    fn value(&self, r: usize, bm: &mut Vec<T>, coarse_bm: &mut Vec<T>, out: &mut Vec<T>) -> T {
        let scale = self.simulate(r, bm);
        self.fun.running_sup(bm, &[self.fun.n_t], out);
        let fine = (out[0] + scale).exp();
        match &self.coarse {
            None => fine,
            Some(c) => {
                coarse_bm.clear();
                coarse_bm.extend(bm.iter().step_by(EXTRAPOLATION_FACTOR).copied());
                c.running_sup(coarse_bm, &[c.n_t], out);
                let rough = (out[0] + scale).exp();
                T::lit(2.0) * fine - rough
            }
        }
    }
}

/// Per-replicate values of the discretised functional (not log scale).
pub fn replicate_values<T: Scalar>(q: &PickandsQuery<T>) -> Result<Vec<T>> {
    q.validate()?;
    // With a = 0 the functional is identically e^{-b^2}; only the direct
    // estimator reproduces that without noise.
    if q.lambda_horizon == T::zero() || (q.a == T::zero() && q.estimator == Estimator::Tilted) {
        return Ok(vec![q.drift()?.degenerate_value(); q.n_reps]);
    }
    let rep = Replicator::new(q)?;
    Ok((0..q.n_reps)
        .into_par_iter()
        .map_init(
            || (Vec::new(), Vec::new(), Vec::new()),
            |(bm, coarse, out), r| rep.value(r, bm, coarse, out),
        )
        .collect())
}

/// Estimate of `P^f_a[0, lambda]`.
pub fn estimate_p<T: Scalar>(q: &PickandsQuery<T>) -> Result<EstimateCI<T>> {
    let values = replicate_values(q)?;
    EstimateCI::from_samples(&values, q.conf_level)
}

/// Estimates of `P^f_a[0, lambda]` along a set of horizons from a single run
/// on `[0, q.lambda_horizon]`. Each requested horizon is snapped to the
/// nearest outer grid point; all estimates share replicates, so they are
/// nondecreasing in `lambda`. Extrapolation is not supported here.
pub fn estimate_p_curve<T: Scalar>(q: &PickandsQuery<T>, lambdas: &[T]) -> Result<PickandsCurve<T>> {
    q.validate()?;
    if q.extrapolate {
        return Err(invalid("extrapolate", "not available for horizon curves"));
    }
    if lambdas.is_empty() {
        return Err(invalid("lambdas", "no horizons requested"));
    }
    let dt = q.lambda_horizon / T::from_count(q.n_grid_t);
    let mut idx: Vec<usize> = Vec::with_capacity(lambdas.len());
    for &l in lambdas {
        if !(l >= T::zero()) || l > q.lambda_horizon * (T::one() + T::lit(1e-12)) {
            return Err(crate::error::Error::Domain(format!(
                "horizon {l} outside [0, {}]",
                q.lambda_horizon
            )));
        }
        let k = if dt > T::zero() {
            (l / dt).round().to_usize().unwrap_or(0)
        } else {
            0
        };
        idx.push(k.min(q.n_grid_t));
    }
    idx.sort_unstable();
    idx.dedup();

    let per_rep: Vec<Vec<T>> = if q.lambda_horizon == T::zero() {
        vec![vec![-q.b * q.b]; q.n_reps]
    } else {
        let rep = Replicator::new(q)?;
        (0..q.n_reps)
            .into_par_iter()
            .map_init(Vec::new, |bm, r| {
                let mut out = Vec::with_capacity(idx.len());
                let scale = rep.simulate(r, bm);
                rep.fun.running_sup(bm, &idx, &mut out);
                for v in out.iter_mut() {
                    *v = *v + scale;
                }
                out
            })
            .collect()
    };

    let mut points = Vec::with_capacity(idx.len());
    let mut column = vec![T::zero(); q.n_reps];
    for (c, &k) in idx.iter().enumerate() {
        for (dst, rep) in column.iter_mut().zip(&per_rep) {
            *dst = rep[c].exp();
        }
        let m = Moments::of(&column)?;
        points.push(CurvePoint {
            lambda: dt * T::from_count(k),
            estimate: EstimateCI::new(m.mean, m.std_err(), q.n_reps as u64, q.conf_level)?,
        });
    }
    Ok(PickandsCurve { points })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct CurvePoint<T> {
    pub lambda: T,
    pub estimate: EstimateCI<T>,
}

/// `lambda -> P^f_a[0, lambda]` from one common-random-number run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct PickandsCurve<T> {
    pub points: Vec<CurvePoint<T>>,
}

impl<T: Scalar> PickandsCurve<T> {
    /// Linear interpolation between checkpoints, constant beyond the ends.
    pub fn at(&self, lambda: T) -> Result<EstimateCI<T>> {
        let pts = &self.points;
        let first = pts.first().ok_or_else(|| invalid("curve", "empty curve"))?;
        if lambda <= first.lambda {
            return Ok(first.estimate);
        }
        for w in pts.windows(2) {
            let (lo, hi) = (&w[0], &w[1]);
            if lambda <= hi.lambda {
                let frac = (lambda - lo.lambda) / (hi.lambda - lo.lambda);
                let mix = |x: T, y: T| x + frac * (y - x);
                return EstimateCI::new(
                    mix(lo.estimate.value, hi.estimate.value),
                    mix(lo.estimate.std_err, hi.estimate.std_err),
                    lo.estimate.n_reps,
                    lo.estimate.conf_level,
                );
            }
        }
        Ok(pts[pts.len() - 1].estimate)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LadderStatus {
    Converged,
    LadderExhausted,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct LadderStep<T> {
    pub lambda: T,
    pub estimate: EstimateCI<T>,
    /// Whether the increment from the previous step passed the stopping test.
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct LadderResult<T> {
    pub steps: Vec<LadderStep<T>>,
    pub estimate: EstimateCI<T>,
    pub status: LadderStatus,
}

impl<T: Scalar> LadderResult<T> {
    /// `lambda,estimate,std_err,n_reps,converged`, one row per ladder step.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("lambda,estimate,std_err,n_reps,converged\n");
        for st in &self.steps {
            s.push_str(&format!(
                "{:.8e},{:.8e},{:.8e},{},{}\n",
                st.lambda, st.estimate.value, st.estimate.std_err, st.estimate.n_reps, st.converged
            ));
        }
        s
    }
}

/// `P^f_a[0, inf)` by a geometric horizon ladder `lambda, 2 lambda, 4 lambda, ...`
/// (at most `lambda_max`) on common random numbers.
///
/// Stops at the first step whose increment over the previous one is below
/// `max(tol, 2 std_err)`. The rule is a heuristic: there is no known rate for
/// the convergence in `lambda`. The first step is always evaluated, even when
/// it exceeds `lambda_max`. Steps are ordered replicate by replicate only for
/// the direct estimator without extrapolation.
pub fn estimate_p_infty<T: Scalar>(q: &PickandsQuery<T>, tol: T, lambda_max: T) -> Result<LadderResult<T>> {
    if !(tol > T::zero()) {
        return Err(invalid("tol", format!("must be > 0, got {tol}")));
    }
    q.validate()?;
    if !(q.lambda_horizon > T::zero()) {
        return Err(invalid("lambda_horizon", "ladder needs a positive starting horizon"));
    }
    let mut steps: Vec<LadderStep<T>> = Vec::new();
    for k in 0.. {
        let qk = q.doubled(k);
        if k > 0 && qk.lambda_horizon > lambda_max {
            break;
        }
        let est = estimate_p(&qk)?;
        let converged = match steps.last() {
            Some(prev) => (est.value - prev.estimate.value) < tol.max(T::lit(2.0) * est.std_err),
            None => false,
        };
        steps.push(LadderStep {
            lambda: qk.lambda_horizon,
            estimate: est,
            converged,
        });
        if converged {
            return Ok(LadderResult {
                estimate: est,
                steps,
                status: LadderStatus::Converged,
            });
        }
        if k >= 40 {
            break;
        }
    }
    let estimate = steps[steps.len() - 1].estimate;
    Ok(LadderResult {
        steps,
        estimate,
        status: LadderStatus::LadderExhausted,
    })
}

/// Query for the zero-interest constant `F(T)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct FQuery<T> {
    /// Window `T` on the scaled time axis.
    pub t_scaled: T,
    pub lambda_horizon: T,
    /// Steps on `[0, lambda]`; the grid extends past `lambda` by the window.
    pub n_grid: usize,
    pub n_reps: usize,
    pub seed: u64,
    pub conf_level: T,
    /// The tilted estimator draws its index uniformly over the grid of
    /// `[0, lambda]`, so the denominator does not depend on the window.
    #[serde(default)]
    pub estimator: Estimator,
}

impl<T: Scalar> FQuery<T> {
    pub fn new(t_scaled: T, lambda_horizon: T, n_grid: usize, n_reps: usize, seed: u64) -> Self {
        Self {
            t_scaled,
            lambda_horizon,
            n_grid,
            n_reps,
            seed,
            conf_level: T::lit(DEFAULT_CONF_LEVEL),
            estimator: Estimator::Direct,
        }
    }

    pub fn with_estimator(self, estimator: Estimator) -> Self {
        Self { estimator, ..self }
    }

    fn validate(&self) -> Result<()> {
        if !(self.t_scaled >= T::zero()) || !self.t_scaled.is_finite() {
            return Err(invalid(
                "t_scaled",
                format!("must be finite and >= 0, got {}", self.t_scaled),
            ));
        }
        if !(self.lambda_horizon > T::zero()) || !self.lambda_horizon.is_finite() {
            return Err(invalid("lambda_horizon", "must be finite and > 0"));
        }
        if self.n_grid == 0 || self.n_reps == 0 {
            return Err(invalid("n_grid", "grid and replicate counts must be >= 1"));
        }
        Ok(())
    }
}

/// Per-replicate values of `sup_t inf_{s in [0,T]} exp(sqrt(2) B(t+s) - (t+s))`
/// on the grid of step `lambda / n_grid`.
///
/// Each `exp(sqrt(2) B(x) - x)` has mean one, so the tilted replicate is
/// `(n + 1) Y / sum_{j <= n} Z_j` with `B` carrying the drift
/// `sqrt(2) min(x, x_k)` for a uniform grid index `k <= n`. For `T = 0` it
/// never exceeds `n + 1`, while the direct value has a tail `P(Y > y) ~ 1/y`.
pub fn f_replicate_values<T: Scalar>(q: &FQuery<T>) -> Result<Vec<T>> {
    q.validate()?;
    let h = q.lambda_horizon / T::from_count(q.n_grid);
    let width = window_points(h, q.t_scaled)?;
    let total = q.n_grid + width - 1;
    let tilted = q.estimator == Estimator::Tilted;
    Ok((0..q.n_reps)
        .into_par_iter()
        .map_init(
            || (Vec::with_capacity(total + 1), SlidingMin::new(width)),
            |(bm, window), r| {
                bm.clear();
                window.reset();
                let mut rng = replicate_stream(q.seed, r as u64);
                let k = tilted.then(|| {
                    let u = T::open_uniform(&mut rng) * T::from_count(q.n_grid + 1);
                    u.floor().to_usize().unwrap_or(q.n_grid).min(q.n_grid)
                });
                fill_bm(bm, h, total, &mut rng);
                if let Some(k) = k {
                    for (j, b) in bm.iter_mut().enumerate() {
                        *b = *b + T::SQRT_2() * h * T::from_count(j.min(k));
                    }
                }
                let mut sup = T::neg_infinity();
                for (i, &b) in bm.iter().enumerate() {
                    let t = h * T::from_count(i);
                    if let Some(m) = window.push(T::SQRT_2() * b - t) {
                        sup = sup.max(m);
                    }
                }
                match k {
                    None => sup.exp(),
                    Some(_) => {
                        let log_mass = log_sum_exp(
                            bm[..=q.n_grid]
                                .iter()
                                .enumerate()
                                .map(|(i, &b)| T::SQRT_2() * b - h * T::from_count(i)),
                        );
                        (sup - log_mass).exp() * T::from_count(q.n_grid + 1)
                    }
                }
            },
        )
        .collect())
}

/// Estimate of `F(T)`: `(1/lambda)` times the replicate mean.
pub fn estimate_f<T: Scalar>(q: &FQuery<T>) -> Result<EstimateCI<T>> {
    let values = f_replicate_values(q)?;
    let m = Moments::of(&values)?;
    EstimateCI::new(
        m.mean / q.lambda_horizon,
        m.std_err() / q.lambda_horizon,
        q.n_reps as u64,
        q.conf_level,
    )
}
