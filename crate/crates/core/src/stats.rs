//! Monte Carlo estimates, confidence intervals and order-fixed reductions.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::normal::two_sided_z;
use crate::scalar::Scalar;

pub const DEFAULT_CONF_LEVEL: f64 = 0.95;

/// A Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct EstimateCI<T> {
    pub value: T,
    pub std_err: T,
    pub n_reps: u64,
    pub conf_level: T,
}

/// Confidence interval, possibly clamped to the probability range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Interval<T> {
    pub lo: T,
    pub hi: T,
    pub clamped: bool,
}

impl<T: Scalar> EstimateCI<T> {
    pub fn new(value: T, std_err: T, n_reps: u64, conf_level: T) -> Result<Self> {
        if !value.is_finite() {
            return Err(invalid("value", format!("non-finite estimate {value}")));
        }
        if !(std_err >= T::zero()) || !std_err.is_finite() {
            return Err(invalid("std_err", format!("must be finite and >= 0, got {std_err}")));
        }
        if n_reps == 0 {
            return Err(invalid("n_reps", "must be positive"));
        }
        if !(conf_level > T::zero() && conf_level < T::one()) {
            return Err(invalid("conf_level", format!("must lie in (0,1), got {conf_level}")));
        }
        Ok(Self {
            value,
            std_err,
            n_reps,
            conf_level,
        })
    }

    /// A known value carried as a zero-variance estimate.
    pub fn exact(value: T) -> Self {
        Self {
            value,
            std_err: T::zero(),
            n_reps: 1,
            conf_level: T::lit(DEFAULT_CONF_LEVEL),
        }
    }

    pub fn half_width(&self) -> T {
        two_sided_z(self.conf_level).map_or(T::nan(), |z| z * self.std_err)
    }

    pub fn interval(&self) -> Interval<T> {
        let hw = self.half_width();
        Interval {
            lo: self.value - hw,
            hi: self.value + hw,
            clamped: false,
        }
    }

    /// Interval for a probability: clipped to `[0, 1]`, flagged when clipping
    /// changed either endpoint.
    pub fn probability_interval(&self) -> Interval<T> {
        let raw = self.interval();
        let lo = raw.lo.max(T::zero()).min(T::one());
        let hi = raw.hi.max(T::zero()).min(T::one());
        Interval {
            lo,
            hi,
            clamped: lo != raw.lo || hi != raw.hi,
        }
    }

    /// Mean and standard error of a replicate sample.
    pub fn from_samples(samples: &[T], conf_level: T) -> Result<Self> {
        let m = Moments::of(samples)?;
        Self::new(m.mean, m.std_err(), samples.len() as u64, conf_level)
    }

    /// Binomial proportion with the normal-approximation standard error.
    pub fn binomial(hits: u64, n: u64, conf_level: T) -> Result<Self> {
        if n == 0 {
            return Err(invalid("n_reps", "must be positive"));
        }
        if hits > n {
            return Err(invalid("hits", format!("{hits} hits out of {n} trials")));
        }
        let nf = T::lit(n as f64);
        let p = T::lit(hits as f64) / nf;
        let se = (p * (T::one() - p) / nf).sqrt();
        Self::new(p, se, n, conf_level)
    }
}

/// Pairwise (cascade) sum in index order. Deterministic for a given slice and
/// monotone: if `x[i] <= y[i]` for all `i`, then `pairwise_sum(x) <= pairwise_sum(y)`.
pub fn pairwise_sum<T: Scalar>(xs: &[T]) -> T {
    const LEAF: usize = 64;
    if xs.len() <= LEAF {
        return xs.iter().fold(T::zero(), |acc, &x| acc + x);
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Sample mean and variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments<T> {
    pub n: usize,
    pub mean: T,
    pub variance: T,
}

impl<T: Scalar> Moments<T> {
    /// Two-pass moments. The mean is clipped to `[min, max]` of the sample,
    /// which keeps it exact for constant data and preserves pointwise
    /// ordering between two samples of equal length.
    pub fn of(xs: &[T]) -> Result<Self> {
        if xs.is_empty() {
            return Err(invalid("samples", "empty sample"));
        }
        let n = xs.len();
        let (lo, hi) = xs.iter().fold((T::infinity(), T::neg_infinity()), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
        let mean = (pairwise_sum(xs) / T::from_count(n)).max(lo).min(hi);
        let variance = if n > 1 {
            let sq: Vec<T> = xs.iter().map(|&x| (x - mean) * (x - mean)).collect();
            pairwise_sum(&sq) / T::from_count(n - 1)
        } else {
            T::zero()
        };
        Ok(Self { n, mean, variance })
    }

    pub fn std_err(&self) -> T {
        (self.variance / T::from_count(self.n)).sqrt()
    }
}

/// Largest absolute difference between two distribution functions evaluated
/// on a common set of abscissae.
pub fn kolmogorov_distance<T: Scalar>(empirical: &[(T, T)], model: &[(T, T)]) -> Result<T> {
    if empirical.len() != model.len() {
        return Err(invalid("model", "distribution functions evaluated on different grids"));
    }
    let mut worst = T::zero();
    for (&(x1, f), &(x2, g)) in empirical.iter().zip(model) {
        if x1 != x2 {
            return Err(invalid("model", format!("abscissae differ: {x1} vs {x2}")));
        }
        worst = worst.max((f - g).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_sample_mean_is_exact() {
        let v = vec![(-1.0_f64).exp(); 12_345];
        let m = Moments::of(&v).unwrap();
        assert_eq!(m.mean, (-1.0_f64).exp());
        assert_eq!(m.variance, 0.0);
    }

    #[test]
    fn binomial_standard_error() {
        let e = EstimateCI::<f64>::binomial(25, 100, 0.95).unwrap();
        assert_eq!(e.value, 0.25);
        assert!((e.std_err - (0.25_f64 * 0.75 / 100.0).sqrt()).abs() < 1e-15);
        assert!((e.half_width() - 1.959963984540054 * e.std_err).abs() < 1e-12);
    }

    #[test]
    fn probability_interval_is_clamped_and_flagged() {
        let e = EstimateCI::new(0.995_f64, 0.01, 1000, 0.95).unwrap();
        let iv = e.probability_interval();
        assert_eq!(iv.hi, 1.0);
        assert!(iv.clamped);
        let e = EstimateCI::new(0.5_f64, 0.01, 1000, 0.95).unwrap();
        assert!(!e.probability_interval().clamped);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(EstimateCI::new(0.5_f64, -1.0, 10, 0.95).is_err());
        assert!(EstimateCI::new(0.5_f64, 1.0, 0, 0.95).is_err());
        assert!(EstimateCI::new(0.5_f64, 1.0, 10, 1.0).is_err());
        assert!(EstimateCI::<f64>::binomial(11, 10, 0.95).is_err());
        assert!(Moments::<f64>::of(&[]).is_err());
    }

    #[test]
    fn kolmogorov_distance_is_sup_gap() {
        let a = [(0.0_f64, 0.1_f64), (1.0, 0.5), (2.0, 0.9)];
        let b = [(0.0, 0.2), (1.0, 0.45), (2.0, 1.0)];
        let d = kolmogorov_distance(&a, &b).unwrap();
        assert!((d - 0.1).abs() < 1e-15);
    }

    proptest::proptest! {
        #[test]
        fn mean_preserves_pointwise_order(xs in proptest::collection::vec(0.0f64..10.0, 1..300),
                                          bumps in proptest::collection::vec(0.0f64..1.0, 300)) {
            let ys: Vec<f64> = xs.iter().zip(&bumps).map(|(x, b)| x + b).collect();
            let mx = Moments::of(&xs).unwrap().mean;
            let my = Moments::of(&ys).unwrap().mean;
            proptest::prop_assert!(mx <= my);
        }
    }
}
