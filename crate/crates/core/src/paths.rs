//! Exact-in-distribution sampling of the discounted loss on uniform grids.
//!
//! `L` has independent Gaussian increments, so drawing each increment with its
//! exact mean and variance gives the law of `L` at the grid points with no
//! discretisation bias. Only the supremum between grid points is lost.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::model::{loss_mean, loss_variance, ModelParams};
use crate::rng::{replicate_stream, StreamRng};
use crate::scalar::Scalar;

/// Uniform time grid `t_i = i * t_max / n_steps`, `i = 0..=n_steps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct GridSpec<T> {
    pub t_max: T,
    pub n_steps: usize,
}

impl<T: Scalar> GridSpec<T> {
    pub fn new(t_max: T, n_steps: usize) -> Result<Self> {
        if !(t_max > T::zero()) || !t_max.is_finite() {
            return Err(invalid("t_max", format!("horizon must be finite and > 0, got {t_max}")));
        }
        if n_steps < 2 {
            return Err(invalid("n_steps", format!("need at least 2 steps, got {n_steps}")));
        }
        Ok(Self { t_max, n_steps })
    }

    /// Grid with step `h` covering at least `[0, t_max]`; the horizon is
    /// rounded up to a whole number of steps.
    pub fn with_step(t_max: T, h: T) -> Result<Self> {
        if !(h > T::zero()) {
            return Err(invalid("step", format!("must be > 0, got {h}")));
        }
        let ratio = t_max / h;
        let n = snap_up(ratio).max(2);
        Self::new(h * T::from_count(n), n)
    }

    #[inline]
    pub fn step(&self) -> T {
        self.t_max / T::from_count(self.n_steps)
    }

    #[inline]
    pub fn time(&self, i: usize) -> T {
        self.t_max * T::from_count(i) / T::from_count(self.n_steps)
    }

    pub fn times(&self) -> Vec<T> {
        (0..=self.n_steps).map(|i| self.time(i)).collect()
    }

    /// The same horizon with twice as many steps.
    pub fn refined(&self) -> Self {
        Self {
            t_max: self.t_max,
            n_steps: self.n_steps * 2,
        }
    }
}

/// `ceil(x)`, except that values within `1e-9` (relative) of an integer snap to it.
pub(crate) fn snap_up<T: Scalar>(x: T) -> usize {
    let r = x.round();
    let tol = T::lit(1e-9) * x.abs().max(T::one());
    let n = if (x - r).abs() <= tol { r } else { x.ceil() };
    n.to_usize().unwrap_or(0)
}

/// One sampled trajectory of `L` on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct PathSample<T> {
    pub times: Vec<T>,
    pub values: Vec<T>,
    /// Deterministic additive shift included in `values`, if any.
    pub shift: Option<Vec<T>>,
}

impl<T: Scalar> PathSample<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Uniform step of the path's grid.
    pub fn step(&self) -> T {
        match self.times.len() {
            0 | 1 => T::zero(),
            n => self.times[n - 1] / T::from_count(n - 1),
        }
    }

    /// Writes `t,L` rows, one per grid point.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "t,L")?;
        for (t, l) in self.times.iter().zip(&self.values) {
            writeln!(out, "{:.8e},{:.8e}", t, l)?;
        }
        Ok(())
    }
}

/// Precomputed per-step increment law of `L` on a grid.
#[derive(Debug, Clone)]
pub struct PathPlan<T> {
    pub grid: GridSpec<T>,
    /// Standard deviation of the Gaussian part of step `i -> i+1`.
    pub step_sd: Vec<T>,
    /// Deterministic part of step `i -> i+1` (drift plus shift).
    pub step_mean: Vec<T>,
    shift: Option<Vec<T>>,
}

impl<T: Scalar> PathPlan<T> {
    /// `shift`, when given, holds one additive value per grid point and must
    /// vanish at `t = 0`.
    pub fn new(grid: &GridSpec<T>, p: &ModelParams<T>, shift: Option<&[T]>) -> Result<Self> {
        p.validate()?;
        let n = grid.n_steps;
        if let Some(s) = shift {
            if s.len() != n + 1 {
                return Err(invalid("shift", format!("expected {} values, got {}", n + 1, s.len())));
            }
            if s[0] != T::zero() {
                return Err(invalid("shift", "shift must vanish at t = 0"));
            }
        }
        let times = grid.times();
        let mut step_sd = Vec::with_capacity(n);
        let mut step_mean = Vec::with_capacity(n);
        let h = grid.step();
        for i in 0..n {
            step_sd.push(increment_variance(p, times[i], h).sqrt());
            let mut m = loss_mean(p, times[i + 1]) - loss_mean(p, times[i]);
            if let Some(s) = shift {
                m = m + (s[i + 1] - s[i]);
            }
            step_mean.push(m);
        }
        Ok(Self {
            grid: *grid,
            step_sd,
            step_mean,
            shift: shift.map(<[T]>::to_vec),
        })
    }

    pub fn shift(&self) -> Option<&[T]> {
        self.shift.as_deref()
    }

    /// Fills a full path from `rng`. Draws exactly `n_steps` normals in order.
    pub fn sample_with(&self, rng: &mut StreamRng) -> PathSample<T> {
        let mut values = Vec::with_capacity(self.grid.n_steps + 1);
        let mut l = T::zero();
        values.push(l);
        for (sd, m) in self.step_sd.iter().zip(&self.step_mean) {
            l = l + *sd * T::std_normal(rng) + *m;
            values.push(l);
        }
        PathSample {
            times: self.grid.times(),
            values,
            shift: self.shift.clone(),
        }
    }
}

/// Variance of `L(t + h) - L(t)`: `sigma^2 e^{-2 delta t} (1 - e^{-2 delta h}) / (2 delta)`,
/// reducing to `sigma^2 h` at `delta = 0`.
pub fn increment_variance<T: Scalar>(p: &ModelParams<T>, t: T, h: T) -> T {
    if p.delta == T::zero() {
        p.sigma * p.sigma * h
    } else {
        (-T::lit(2.0) * p.delta * t).exp() * loss_variance(p, h)
    }
}

/// Samples `L` on `grid` from replicate stream 0 of `seed`.
pub fn sample_path<T: Scalar>(
    grid: &GridSpec<T>,
    p: &ModelParams<T>,
    seed: u64,
    shift: Option<&[T]>,
) -> Result<PathSample<T>> {
    sample_replicate(grid, p, seed, 0, shift)
}

/// Samples `L` on `grid` from replicate stream `index` of `seed`; this is the
/// path the Monte Carlo harness sees for that replicate.
pub fn sample_replicate<T: Scalar>(
    grid: &GridSpec<T>,
    p: &ModelParams<T>,
    seed: u64,
    index: u64,
    shift: Option<&[T]>,
) -> Result<PathSample<T>> {
    let plan = PathPlan::new(grid, p, shift)?;
    Ok(plan.sample_with(&mut replicate_stream(seed, index)))
}

/// Standard Brownian motion on `[0, lambda]` with `n_steps` exact increments.
pub fn sample_bm<T: Scalar>(lambda: T, n_steps: usize, seed: u64) -> Result<PathSample<T>> {
    let grid = GridSpec::new(lambda, n_steps)?;
    let mut rng = replicate_stream(seed, 0);
    let mut values = Vec::with_capacity(n_steps + 1);
    fill_bm(&mut values, grid.step(), n_steps, &mut rng);
    Ok(PathSample {
        times: grid.times(),
        values,
        shift: None,
    })
}

/// Appends `B(0) = 0, B(h), ..., B(n h)` to `out`.
pub(crate) fn fill_bm<T: Scalar>(out: &mut Vec<T>, h: T, n_steps: usize, rng: &mut StreamRng) {
    let sd = h.sqrt();
    let mut b = T::zero();
    out.push(b);
    for _ in 0..n_steps {
        b = b + sd * T::std_normal(rng);
        out.push(b);
    }
}

/// Truncation horizon for the infinite-time problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Horizon<T> {
    pub t_max: T,
    /// Standard deviation of `L(inf) - L(t_max)`.
    pub residual_sd: T,
}

/// Resolution to which [`horizon_for_tolerance`] rounds its answer.
pub const HORIZON_QUANTUM: f64 = 1.0 / 1024.0;

/// Smallest horizon on the `1/1024` lattice whose residual standard
/// deviation `sqrt(sigma^2 e^{-2 delta t} / (2 delta))` is at most `eps`.
///
/// After `t_max` the driftless part of `L` moves by at most a few `eps`, so
/// ruin after the horizon is negligible once `eps` is small against the gap
/// between `u` and the limiting loss.
pub fn horizon_for_tolerance<T: Scalar>(p: &ModelParams<T>, eps: T) -> Result<Horizon<T>> {
    p.require_positive_delta("horizon truncation")?;
    if !(eps > T::zero()) {
        return Err(invalid("eps", format!("tolerance must be > 0, got {eps}")));
    }
    let two_delta = T::lit(2.0) * p.delta;
    let exact = (p.sigma * p.sigma / (two_delta * eps * eps)).ln() / two_delta;
    let q = T::lit(HORIZON_QUANTUM);
    let t_max = q * T::from_count(snap_up(exact.max(T::zero()) / q).max(1));
    let residual_sd = (p.sigma * p.sigma * (-two_delta * t_max).exp() / two_delta).sqrt();
    Ok(Horizon { t_max, residual_sd })
}

/// Ratio `c sqrt(t_max) / sigma` of accumulated drift to noise at the
/// horizon; zero-interest runs below [`DRIFT_DOMINANCE_MIN`] have not yet
/// separated from the barrier.
pub fn drift_dominance<T: Scalar>(p: &ModelParams<T>, t_max: T) -> T {
    p.c * t_max.sqrt() / p.sigma
}

pub const DRIFT_DOMINANCE_MIN: f64 = 5.0;

pub(crate) fn require_grid_for_window<T: Scalar>(grid: &GridSpec<T>, p: &ModelParams<T>) -> Result<()> {
    let h = grid.step();
    if p.t_window > T::zero() && h > p.t_window * (T::one() + T::lit(1e-9)) {
        return Err(Error::UnresolvableWindow {
            window: p.t_window.to_f64().unwrap_or(f64::NAN),
            step: h.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_basics() {
        let g = GridSpec::new(2.0, 8).unwrap();
        assert_eq!(g.step(), 0.25);
        assert_eq!(g.time(0), 0.0);
        assert_eq!(g.time(8), 2.0);
        assert!(GridSpec::new(0.0, 8).is_err());
        assert!(GridSpec::new(1.0, 1).is_err());
        let g = GridSpec::with_step(1.0_f64, 0.3).unwrap();
        assert_eq!(g.n_steps, 4);
        assert!((g.t_max - 1.2).abs() < 1e-12);
        let g = GridSpec::with_step(5.0, 0.01).unwrap();
        assert_eq!(g.n_steps, 500);
    }

    #[test]
    fn path_starts_at_zero_and_is_deterministic() {
        let p = ModelParams::new(1.0, 1.0, 1.0, 0.5, 0.2).unwrap();
        let g = GridSpec::new(3.0, 300).unwrap();
        let a = sample_path(&g, &p, 11, None).unwrap();
        let b = sample_path(&g, &p, 11, None).unwrap();
        assert_eq!(a.values[0], 0.0);
        assert_eq!(a.len(), 301);
        assert_eq!(a, b);
        assert_ne!(a, sample_path(&g, &p, 12, None).unwrap());
    }

    #[test]
    fn shift_is_added_and_reported() {
        let p = ModelParams::classical(1.0_f64, 1.0, 1.0, 1.0).unwrap();
        let g = GridSpec::new(1.0, 4).unwrap();
        let shift = [0.0, 0.5, 1.0, 1.0, 1.0];
        let plain = sample_path(&g, &p, 3, None).unwrap();
        let shifted = sample_path(&g, &p, 3, Some(&shift)).unwrap();
        for ((s, p), d) in shifted.values.iter().zip(&plain.values).zip(shift) {
            assert!((s - p - d).abs() < 1e-12);
        }
        assert_eq!(shifted.shift.as_deref(), Some(&shift[..]));
        assert!(sample_path(&g, &p, 3, Some(&shift[..4])).is_err());
        assert!(sample_path(&g, &p, 3, Some(&[1.0, 1.0, 1.0, 1.0, 1.0])).is_err());
    }

    #[test]
    fn variance_continuity_at_small_delta() {
        let p0 = ModelParams::classical(1.0_f64, 1.0, 1.3, 0.0).unwrap();
        let pe = ModelParams::classical(1.0, 1.0, 1.3, 1e-12).unwrap();
        for &(t, h) in &[(0.0, 0.01), (5.0, 0.1), (40.0, 1e-4)] {
            let a = increment_variance(&p0, t, h);
            let b = increment_variance(&pe, t, h);
            assert!(((a - b) / a).abs() < 1e-6, "t={t} h={h}: {a} vs {b}");
        }
    }

    #[test]
    fn horizon_examples() {
        let p = ModelParams::classical(1.0, 1.0, 2.0_f64.sqrt(), 1.0).unwrap();
        let h = horizon_for_tolerance(&p, (-5.0_f64).exp()).unwrap();
        assert_eq!(h.t_max, 5.0);
        assert!(h.residual_sd <= (-5.0_f64).exp() * (1.0 + 1e-12));
        let p = ModelParams::classical(1.0, 1.0, 1.0, 1.0).unwrap();
        for &eps in &[1e-2, 1e-4, 1e-8, 10.0] {
            let h = horizon_for_tolerance(&p, eps).unwrap();
            assert!(h.residual_sd <= eps * (1.0 + 1e-9));
            assert!(h.t_max > 0.0);
        }
        let p0 = ModelParams::classical(1.0, 1.0, 1.0, 0.0).unwrap();
        assert!(horizon_for_tolerance(&p0, 1e-3).is_err());
        assert!(horizon_for_tolerance(&p, 0.0).is_err());
    }

    #[test]
    fn bm_path_shape() {
        let b = sample_bm(2.0_f64, 100, 5).unwrap();
        assert_eq!(b.values[0], 0.0);
        assert_eq!(b.len(), 101);
        assert_eq!(b.times[100], 2.0);
    }

    #[test]
    fn csv_dump_has_header_and_rows() {
        let b = sample_bm(1.0_f64, 4, 5).unwrap();
        let mut buf = Vec::new();
        b.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,L");
        assert_eq!(lines.len(), 6);
        assert!(lines[1].starts_with("0.00000000e0,0.00000000e0"));
    }

    #[test]
    fn window_must_be_resolvable() {
        let p = ModelParams::new(1.0, 1.0, 1.0, 1.0, 0.05).unwrap();
        assert!(require_grid_for_window(&GridSpec::new(1.0, 10).unwrap(), &p).is_err());
        assert!(require_grid_for_window(&GridSpec::new(1.0, 20).unwrap(), &p).is_ok());
    }
}
