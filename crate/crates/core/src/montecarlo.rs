//! Ruin-probability estimation harness: plain and mean-shift importance
//! sampling, empirical ruin-time laws and comparison tables against the
//! closed-form and asymptotic expressions.
//!
//! Path `i` of an experiment always uses replicate stream `i` of the seed, and
//! per-path results are reduced in index order, so estimates do not depend on
//! the number of worker threads.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::model::{
    asymptotic_parisian_ruin, critical_point, delta0_asymptotic_parisian, delta0_exact_classical, exact_classical_ruin,
    loss_mean, loss_variance, ruin_time_horizon, ModelParams,
};
use crate::paths::{drift_dominance, require_grid_for_window, GridSpec, PathPlan, DRIFT_DOMINANCE_MIN};
use crate::rng::{auxiliary_stream, replicate_stream, StreamRng};
use crate::ruin::{transform_ruin_time, window_points, ParisianScanner, RuinIndex};
use crate::scalar::Scalar;
use crate::stats::{pairwise_sum, EstimateCI, Moments, DEFAULT_CONF_LEVEL};

/// Hits below which a ruin-probability estimate is flagged.
pub const MIN_HITS: u64 = 100;
/// Conditioned samples below which an empirical ruin-time law is flagged.
pub const MIN_CONDITIONED: usize = 200;

/// Bridge-crossing probabilities below this are treated as zero.
const BRIDGE_CUTOFF: f64 = 1e-18;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sampler {
    Plain,
    /// One shift anchored at the grid point nearest the critical epoch.
    MeanShift,
}

/// How ruin between grid points is handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Monitoring {
    /// Ruin is checked at grid points only.
    Grid,
    /// Classical ruin only: additionally samples, for every step that ends
    /// below the barrier, whether the Brownian bridge between the two grid
    /// values crossed it. Exact for zero interest; for positive interest the
    /// error is of order `h` per step instead of `sqrt(h)` over the path.
    Bridge,
}

impl Monitoring {
    /// Bridge for classical ruin, grid otherwise.
    pub fn default_for<T: Scalar>(params: &ModelParams<T>) -> Self {
        if params.t_window == T::zero() {
            Monitoring::Bridge
        } else {
            Monitoring::Grid
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct ExperimentConfig<T> {
    pub params: ModelParams<T>,
    pub grid: GridSpec<T>,
    pub n_paths: usize,
    pub seed: u64,
    pub sampler: Sampler,
    pub monitoring: Monitoring,
    pub conf_level: T,
}

impl<T: Scalar> ExperimentConfig<T> {
    pub fn new(params: ModelParams<T>, grid: GridSpec<T>, n_paths: usize, seed: u64) -> Self {
        Self {
            params,
            grid,
            n_paths,
            seed,
            sampler: Sampler::Plain,
            monitoring: Monitoring::default_for(&params),
            conf_level: T::lit(DEFAULT_CONF_LEVEL),
        }
    }

    pub fn with_sampler(self, sampler: Sampler) -> Self {
        Self { sampler, ..self }
    }

    pub fn with_monitoring(self, monitoring: Monitoring) -> Self {
        Self { monitoring, ..self }
    }

    pub fn with_u(&self, u: T) -> Result<Self> {
        Ok(Self {
            params: self.params.with_u(u)?,
            ..*self
        })
    }

    /// Replaces the window length and resets monitoring to its default.
    pub fn with_window(&self, t_window: T) -> Result<Self> {
        let params = self.params.with_window(t_window)?;
        Ok(Self {
            params,
            monitoring: Monitoring::default_for(&params),
            ..*self
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        require_grid_for_window(&self.grid, &self.params)?;
        if self.n_paths == 0 {
            return Err(invalid("n_paths", "must be >= 1"));
        }
        if !(self.conf_level > T::zero() && self.conf_level < T::one()) {
            return Err(invalid("conf_level", "must lie in (0,1)"));
        }
        if self.sampler == Sampler::MeanShift && !(self.params.delta > T::zero()) {
            return Err(Error::ForceOfInterest(
                "mean-shift sampling is anchored at the critical point and needs delta > 0".into(),
            ));
        }
        if self.monitoring == Monitoring::Bridge && self.params.t_window > T::zero() {
            return Err(invalid(
                "monitoring",
                "bridge monitoring applies to classical ruin only",
            ));
        }
        Ok(())
    }
}

/// Deterministic shift `theta * Cov(L(t), L(t_k)) / Var(L(t_k))` that centres
/// `L(t_k)` on the barrier, where `t_k` is the grid point nearest the
/// critical epoch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct MeanShift<T> {
    pub anchor_index: usize,
    pub anchor_time: T,
    /// Shift applied at and after the anchor: `u - E L(t_k)`.
    pub amplitude: T,
    pub anchor_variance: T,
}

impl<T: Scalar> MeanShift<T> {
    pub fn anchored(params: &ModelParams<T>, grid: &GridSpec<T>) -> Result<Self> {
        let t_star = critical_point(params)?.t_star_time;
        let k = (t_star / grid.step())
            .round()
            .to_usize()
            .unwrap_or(grid.n_steps)
            .clamp(1, grid.n_steps);
        let anchor_time = grid.time(k);
        Ok(Self {
            anchor_index: k,
            anchor_time,
            amplitude: params.u - loss_mean(params, anchor_time),
            anchor_variance: loss_variance(params, anchor_time),
        })
    }

    /// Shift at every grid point.
    pub fn profile(&self, params: &ModelParams<T>, grid: &GridSpec<T>) -> Vec<T> {
        (0..=grid.n_steps)
            .map(|i| {
                if i >= self.anchor_index {
                    self.amplitude
                } else {
                    self.amplitude * loss_variance(params, grid.time(i)) / self.anchor_variance
                }
            })
            .collect()
    }

    /// Log likelihood ratio of the unshifted law against the shifted one,
    /// given the unshifted driftless value `z` at the anchor.
    #[inline]
    pub fn log_weight(&self, z: T) -> T {
        let th = self.amplitude;
        -(th * z) / self.anchor_variance - th * th / (T::lit(2.0) * self.anchor_variance)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct PathResult<T> {
    ruin: Option<RuinIndex>,
    log_weight: T,
}

/// Per-path simulation and detection.
struct Kernel<T> {
    plan: PathPlan<T>,
    step_var: Vec<T>,
    u: T,
    width: usize,
    shift: Option<MeanShift<T>>,
    bridge: bool,
    seed: u64,
}

impl<T: Scalar> Kernel<T> {
    fn new(cfg: &ExperimentConfig<T>) -> Result<Self> {
        cfg.validate()?;
        let shift = match cfg.sampler {
            Sampler::Plain => None,
            Sampler::MeanShift => Some(MeanShift::anchored(&cfg.params, &cfg.grid)?),
        };
        let profile = shift.map(|s| s.profile(&cfg.params, &cfg.grid));
        let plan = PathPlan::new(&cfg.grid, &cfg.params, profile.as_deref())?;
        let step_var = plan.step_sd.iter().map(|&s| s * s).collect();
        Ok(Self {
            plan,
            step_var,
            u: cfg.params.u,
            width: window_points(cfg.grid.step(), cfg.params.t_window)?,
            shift,
            bridge: cfg.monitoring == Monitoring::Bridge,
            seed: cfg.seed,
        })
    }

    /// Simulates path `index` up to its ruin index (or the horizon).
    ///
    /// Under the shifted law the likelihood ratio `dP/dQ` restricted to the
    /// information at time `t <= t_k` is `exp(-a z_t - a^2 V_t / 2)`, with
    /// `a = theta / V_k`, `z_t` the unshifted driftless value and `V_t` its
    /// variance; past the anchor it stays at its anchor value. The weight is
    /// that ratio at the ruin index, which is a stopping time.
    fn run(&self, index: usize) -> PathResult<T> {
        let mut rng = replicate_stream(self.seed, index as u64);
        let mut aux: Option<StreamRng> = None;
        let mut scanner = ParisianScanner::new(self.u, self.width);
        let mut ruin = scanner.push(T::zero());
        let (mut l, mut z, mut var) = (T::zero(), T::zero(), T::zero());
        let (mut z_stop, mut var_stop) = (T::zero(), T::zero());
        let anchor = self.shift.map_or(0, |s| s.anchor_index);
        for i in 0..self.plan.grid.n_steps {
            if ruin.is_some() {
                break;
            }
            let dz = self.plan.step_sd[i] * T::std_normal(&mut rng);
            let prev = l;
            z = z + dz;
            var = var + self.step_var[i];
            l = l + dz + self.plan.step_mean[i];
            if i < anchor {
                z_stop = z;
                var_stop = var;
            }
            ruin = scanner.push(l);
            if ruin.is_none() && self.bridge && l <= self.u {
                let p = (-T::lit(2.0) * (self.u - prev) * (self.u - l) / self.step_var[i]).exp();
                if p > T::lit(BRIDGE_CUTOFF) {
                    let rng = aux.get_or_insert_with(|| auxiliary_stream(self.seed, index as u64));
                    if T::open_uniform(rng) < p {
                        ruin = Some(RuinIndex { eta: i + 1, kappa: i });
                    }
                }
            }
        }
        let log_weight = match (&self.shift, ruin) {
            (Some(s), Some(_)) => {
                let a = s.amplitude / s.anchor_variance;
                -a * z_stop - a * a * var_stop / T::lit(2.0)
            }
            _ => T::zero(),
        };
        PathResult { ruin, log_weight }
    }

    fn run_all(&self, n: usize) -> Vec<PathResult<T>> {
        (0..n).into_par_iter().map(|i| self.run(i)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flag {
    /// Fewer than [`MIN_HITS`] ruined paths.
    Insufficient,
    /// Zero interest with a horizon too short for the drift to dominate.
    DriftNotDominant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct RuinEstimate<T> {
    pub estimate: EstimateCI<T>,
    /// Number of ruined paths.
    pub hits: u64,
    pub flags: Vec<Flag>,
}

fn horizon_flags<T: Scalar>(cfg: &ExperimentConfig<T>) -> Vec<Flag> {
    let p = &cfg.params;
    if p.delta == T::zero() && drift_dominance(p, cfg.grid.t_max) < T::lit(DRIFT_DOMINANCE_MIN) {
        vec![Flag::DriftNotDominant]
    } else {
        Vec::new()
    }
}

/// Probability of (Parisian) ruin before the grid horizon.
///
/// Plain sampling reports the hit fraction with its binomial standard error;
/// mean-shift sampling reports the mean of the weighted indicators with their
/// sample standard error.
pub fn estimate_ruin_prob<T: Scalar>(cfg: &ExperimentConfig<T>) -> Result<RuinEstimate<T>> {
    let kernel = Kernel::new(cfg)?;
    let results = kernel.run_all(cfg.n_paths);
    let hits = results.iter().filter(|r| r.ruin.is_some()).count() as u64;
    let estimate = match cfg.sampler {
        Sampler::Plain => EstimateCI::binomial(hits, cfg.n_paths as u64, cfg.conf_level)?,
        Sampler::MeanShift => {
            let weighted: Vec<T> = results
                .iter()
                .map(|r| {
                    if r.ruin.is_some() {
                        r.log_weight.exp()
                    } else {
                        T::zero()
                    }
                })
                .collect();
            let m = Moments::of(&weighted)?;
            EstimateCI::new(m.mean, m.std_err(), cfg.n_paths as u64, cfg.conf_level)?
        }
    };
    let mut flags = horizon_flags(cfg);
    if hits < MIN_HITS {
        flags.push(Flag::Insufficient);
    }
    Ok(RuinEstimate { estimate, hits, flags })
}

/// Empirical conditional law of `u^2 (e^{-2 delta eta} - t_u)` given ruin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct RuinTimeCdf<T> {
    /// `(x, P(stat <= x | ruin))`.
    pub points: Vec<(T, T)>,
    pub n_ruined: usize,
    pub insufficient: bool,
}

/// Empirical conditional distribution function of the transformed ruin time
/// at each `x`. With mean-shift sampling the weights are self-normalised over
/// the ruined paths.
pub fn estimate_ruin_time_cdf<T: Scalar>(cfg: &ExperimentConfig<T>, xs: &[T]) -> Result<RuinTimeCdf<T>> {
    let p = &cfg.params;
    p.require_positive_delta("ruin-time law")?;
    if !(p.u > T::zero()) {
        return Err(invalid("u", "ruin-time law needs u > 0"));
    }
    for &x in xs {
        ruin_time_horizon(p, x)?;
    }
    let kernel = Kernel::new(cfg)?;
    let results = kernel.run_all(cfg.n_paths);
    let times = cfg.grid.times();
    let mut ruined: Vec<(T, T)> = Vec::new();
    for r in &results {
        if let Some(idx) = r.ruin {
            ruined.push((transform_ruin_time(times[idx.eta], p)?, r.log_weight));
        }
    }
    let n_ruined = ruined.len();
    ruined.sort_by(|a, b| a.0.total_order(&b.0));
    // self-normalised, so the largest weight can be scaled to one
    let top = ruined.iter().map(|r| r.1).fold(T::neg_infinity(), T::max);
    let weights: Vec<T> = ruined.iter().map(|r| (r.1 - top).exp()).collect();
    let total = pairwise_sum(&weights);
    let mut cumulative = Vec::with_capacity(weights.len() + 1);
    cumulative.push(T::zero());
    let mut acc = T::zero();
    for &w in &weights {
        acc = acc + w;
        cumulative.push(acc);
    }
    let points = xs
        .iter()
        .map(|&x| {
            let k = ruined.partition_point(|r| r.0 <= x);
            let f = if total > T::zero() {
                (cumulative[k] / acc).min(T::one())
            } else {
                T::zero()
            };
            (x, f)
        })
        .collect();
    Ok(RuinTimeCdf {
        points,
        n_ruined,
        insufficient: n_ruined < MIN_CONDITIONED,
    })
}

/// Estimated constant multiplying the large-reserve asymptotic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar", rename_all = "kebab-case")]
pub enum AsymptoticConstant<T> {
    /// `P^f_a[0, inf)`, for positive interest.
    Pickands(EstimateCI<T>),
    /// `F(2 c^2 T / sigma^2)`, for zero interest.
    ZeroInterest(EstimateCI<T>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct ComparisonRow<T> {
    pub u: T,
    pub mc_estimate: EstimateCI<T>,
    /// Asymptotic value clipped to `[0, 1]`.
    pub asymptotic: T,
    pub asymptotic_clamped: bool,
    /// Exact classical ruin probability, when the window is zero.
    pub exact: Option<T>,
    /// Monte Carlo over the unclipped asymptotic.
    pub ratio_mc_over_asym: T,
    pub hits: u64,
    pub flags: Vec<Flag>,
}

/// One comparison row per reserve level, sorted by `u`, all on the seed of
/// `base` so neighbouring rows share random numbers.
pub fn compare_report<T: Scalar>(
    u_values: &[T],
    base: &ExperimentConfig<T>,
    constant: &AsymptoticConstant<T>,
) -> Result<Vec<ComparisonRow<T>>> {
    let mut us = u_values.to_vec();
    us.sort_by(|a, b| a.total_order(b));
    let mut rows = Vec::with_capacity(us.len());
    for u in us {
        let cfg = base.with_u(u)?;
        let p = &cfg.params;
        let asym = match (constant, p.delta > T::zero()) {
            (AsymptoticConstant::Pickands(k), true) => asymptotic_parisian_ruin(p, k)?,
            (AsymptoticConstant::ZeroInterest(k), false) => delta0_asymptotic_parisian(p, k)?,
            _ => {
                return Err(Error::ForceOfInterest(
                    "constant kind does not match the force of interest".into(),
                ))
            }
        };
        let exact = if p.t_window == T::zero() {
            Some(if p.delta > T::zero() {
                exact_classical_ruin(p)?
            } else {
                delta0_exact_classical(p)?
            })
        } else {
            None
        };
        let mc = estimate_ruin_prob(&cfg)?;
        rows.push(ComparisonRow {
            u,
            ratio_mc_over_asym: mc.estimate.value / asym.raw,
            mc_estimate: mc.estimate,
            asymptotic: asym.value,
            asymptotic_clamped: asym.clamped,
            exact,
            hits: mc.hits,
            flags: mc.flags,
        });
    }
    Ok(rows)
}

/// `u,mc,stderr,asymptotic,exact,ratio`; `exact` is empty when unavailable.
pub fn comparison_csv<T: Scalar>(rows: &[ComparisonRow<T>]) -> String {
    let mut s = String::from("u,mc,stderr,asymptotic,exact,ratio\n");
    for r in rows {
        let exact = r.exact.map_or(String::new(), |e| format!("{e:.8e}"));
        s.push_str(&format!(
            "{:.8e},{:.8e},{:.8e},{:.8e},{},{:.8e}\n",
            r.u, r.mc_estimate.value, r.mc_estimate.std_err, r.asymptotic, exact, r.ratio_mc_over_asym
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::{horizon_for_tolerance, sample_replicate};
    use crate::ruin::parisian_ruin_time;

    fn unit_cfg(u: f64, n_paths: usize) -> ExperimentConfig<f64> {
        let p = ModelParams::classical(u, 1.0, 1.0, 1.0).unwrap();
        let h = horizon_for_tolerance(&p, 1e-3).unwrap();
        ExperimentConfig::new(p, GridSpec::with_step(h.t_max, 0.01).unwrap(), n_paths, 42)
    }

    #[test]
    fn kernel_agrees_with_stored_paths() {
        for &t_window in &[0.0, 0.05, 0.3] {
            let p = ModelParams::new(0.3, 1.0, 1.0, 1.0, t_window).unwrap();
            let cfg =
                ExperimentConfig::new(p, GridSpec::new(4.0, 400).unwrap(), 300, 9).with_monitoring(Monitoring::Grid);
            let kernel = Kernel::new(&cfg).unwrap();
            for i in 0..cfg.n_paths {
                let path = sample_replicate(&cfg.grid, &p, cfg.seed, i as u64, None).unwrap();
                let out = parisian_ruin_time(&path, &p).unwrap();
                let k = kernel.run(i);
                assert_eq!(out.eta, k.ruin.map(|r| cfg.grid.time(r.eta)), "path {i}");
                assert_eq!(out.kappa, k.ruin.map(|r| cfg.grid.time(r.kappa)), "path {i}");
            }
        }
    }

    #[test]
    fn zero_reserve_is_ruined_immediately() {
        let e = estimate_ruin_prob(&unit_cfg(0.0, 2000)).unwrap();
        assert!(e.estimate.value >= 1.0 - 3.0 * e.estimate.std_err);
        assert!(e.estimate.value > 0.99);
    }

    #[test]
    fn config_validation() {
        let p0 = ModelParams::classical(1.0, 1.0, 1.0, 0.0).unwrap();
        let cfg = ExperimentConfig::new(p0, GridSpec::new(10.0, 100).unwrap(), 10, 1);
        assert!(matches!(
            estimate_ruin_prob(&cfg.with_sampler(Sampler::MeanShift)),
            Err(Error::ForceOfInterest(_))
        ));
        let pw = ModelParams::new(1.0, 1.0, 1.0, 1.0, 0.5).unwrap();
        let cfg = ExperimentConfig::new(pw, GridSpec::new(10.0, 100).unwrap(), 10, 1);
        assert!(estimate_ruin_prob(&cfg.with_monitoring(Monitoring::Bridge)).is_err());
        let cfg = ExperimentConfig::new(pw, GridSpec::new(10.0, 10).unwrap(), 10, 1);
        assert!(matches!(
            estimate_ruin_prob(&cfg),
            Err(Error::UnresolvableWindow { .. })
        ));
    }

    #[test]
    fn shift_profile_centres_anchor_on_barrier() {
        let cfg = unit_cfg(6.0, 1);
        let s = MeanShift::anchored(&cfg.params, &cfg.grid).unwrap();
        assert_eq!(s.anchor_index, (7.0_f64.ln() / 0.01).round() as usize);
        let prof = s.profile(&cfg.params, &cfg.grid);
        assert_eq!(prof[0], 0.0);
        let mean_at_anchor = loss_mean(&cfg.params, s.anchor_time) + prof[s.anchor_index];
        assert!((mean_at_anchor - 6.0).abs() < 1e-12);
        assert!(prof.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn importance_sampling_agrees_with_plain() {
        let base = unit_cfg(1.5, 40_000);
        let plain = estimate_ruin_prob(&base).unwrap().estimate;
        let shifted = estimate_ruin_prob(&base.with_sampler(Sampler::MeanShift))
            .unwrap()
            .estimate;
        let combined = (plain.std_err.powi(2) + shifted.std_err.powi(2)).sqrt();
        assert!(
            (plain.value - shifted.value).abs() <= 3.0 * combined,
            "{plain:?} vs {shifted:?}"
        );
        assert!(shifted.std_err < plain.std_err);
    }

    #[test]
    fn stopped_weights_track_the_exact_value_far_out() {
        let cfg = unit_cfg(6.0, 20_000).with_sampler(Sampler::MeanShift);
        let e = estimate_ruin_prob(&cfg).unwrap().estimate;
        let exact = exact_classical_ruin(&cfg.params).unwrap();
        assert!(e.std_err < 0.03 * e.value, "{e:?}");
        assert!(
            (e.value - exact).abs() <= 4.0 * e.std_err + 0.01 * exact,
            "{e:?} vs {exact}"
        );
    }

    #[test]
    fn bridge_monitoring_only_adds_ruin() {
        let base = unit_cfg(1.0, 5_000).with_monitoring(Monitoring::Grid);
        let grid = Kernel::new(&base).unwrap();
        let bridge = Kernel::new(&base.with_monitoring(Monitoring::Bridge)).unwrap();
        for i in 0..base.n_paths {
            let g = grid.run(i).ruin;
            let b = bridge.run(i).ruin;
            if let Some(gi) = g {
                assert!(b.unwrap().eta <= gi.eta);
            }
        }
    }

    #[test]
    fn ruin_time_cdf_shape() {
        let cfg = unit_cfg(2.0, 5_000).with_sampler(Sampler::MeanShift);
        let xs = [-0.5, 0.0, 0.5, 2.0, 50.0];
        let cdf = estimate_ruin_time_cdf(&cfg, &xs).unwrap();
        assert!(cdf.n_ruined >= MIN_CONDITIONED);
        assert!(cdf.points.windows(2).all(|w| w[0].1 <= w[1].1));
        assert!((cdf.points[4].1 - 1.0).abs() < 1e-12);
        assert!(matches!(estimate_ruin_time_cdf(&cfg, &[-1.0]), Err(Error::Domain(_))));
    }

    #[test]
    fn comparison_rows_sorted_with_exact_column() {
        let base = unit_cfg(0.0, 2_000);
        let k = AsymptoticConstant::Pickands(EstimateCI::exact(4.677));
        let rows = compare_report(&[1.0, 0.0, 0.5], &base, &k).unwrap();
        assert_eq!(rows.iter().map(|r| r.u).collect::<Vec<_>>(), vec![0.0, 0.5, 1.0]);
        assert_eq!(rows[0].exact, Some(1.0));
        assert!(rows[0].mc_estimate.value > 0.99);
        assert!(rows.iter().all(|r| r.exact.is_some()));
        let csv = comparison_csv(&rows);
        assert!(csv.starts_with("u,mc,stderr,asymptotic,exact,ratio\n"));
        let wrong = AsymptoticConstant::ZeroInterest(EstimateCI::exact(1.0));
        assert!(compare_report(&[1.0], &base, &wrong).is_err());
    }
}
