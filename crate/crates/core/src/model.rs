//! Risk model parameters and every closed-form or asymptotic expression
//! attached to it.
//!
//! The surplus with force of interest `delta` is
//! `R(t) = e^{delta t} (u + c int_0^t e^{-delta v} dv - sigma int_0^t e^{-delta v} dB(v))`.
//! Ruin only depends on the sign of the bracket, so the simulation works with
//! the discounted loss `L(t) = sigma int_0^t e^{-delta v} dB(v) - c int_0^t e^{-delta v} dv`
//! and ruin at `t` means `L(t) > u`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::normal::std_normal_sf;
use crate::scalar::Scalar;
use crate::stats::EstimateCI;

/// Brownian risk model with force of interest and a Parisian window.
///
/// The window `t_window` is held constant in `u`; only its limit enters the
/// asymptotics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct ModelParams<T> {
    /// Initial reserve.
    pub u: T,
    /// Premium rate.
    pub c: T,
    /// Volatility of the claims.
    pub sigma: T,
    /// Force of interest.
    pub delta: T,
    /// Parisian window: the surplus must stay negative this long.
    pub t_window: T,
}

impl<T: Scalar> ModelParams<T> {
    pub fn new(u: T, c: T, sigma: T, delta: T, t_window: T) -> Result<Self> {
        let p = Self {
            u,
            c,
            sigma,
            delta,
            t_window,
        };
        p.validate()?;
        Ok(p)
    }

    /// Classical ruin (`t_window = 0`).
    pub fn classical(u: T, c: T, sigma: T, delta: T) -> Result<Self> {
        Self::new(u, c, sigma, delta, T::zero())
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |name, x: T| {
            if x.is_finite() {
                Ok(())
            } else {
                Err(invalid(name, format!("must be finite, got {x}")))
            }
        };
        finite("u", self.u)?;
        finite("c", self.c)?;
        finite("sigma", self.sigma)?;
        finite("delta", self.delta)?;
        finite("t_window", self.t_window)?;
        if self.u < T::zero() {
            return Err(invalid("u", format!("initial reserve must be >= 0, got {}", self.u)));
        }
        if self.c <= T::zero() {
            return Err(invalid("c", format!("premium rate must be > 0, got {}", self.c)));
        }
        if self.sigma <= T::zero() {
            return Err(invalid("sigma", format!("volatility must be > 0, got {}", self.sigma)));
        }
        if self.delta < T::zero() {
            return Err(invalid(
                "delta",
                format!("force of interest must be >= 0, got {}", self.delta),
            ));
        }
        if self.t_window < T::zero() {
            return Err(invalid(
                "t_window",
                format!("window must be >= 0, got {}", self.t_window),
            ));
        }
        Ok(())
    }

    pub fn with_u(&self, u: T) -> Result<Self> {
        Self::new(u, self.c, self.sigma, self.delta, self.t_window)
    }

    pub fn with_window(&self, t_window: T) -> Result<Self> {
        Self::new(self.u, self.c, self.sigma, self.delta, t_window)
    }

    pub(crate) fn require_positive_delta(&self, what: &str) -> Result<()> {
        self.validate()?;
        if self.delta > T::zero() {
            Ok(())
        } else {
            Err(Error::ForceOfInterest(format!("{what} requires delta > 0")))
        }
    }

    pub(crate) fn require_zero_delta(&self, what: &str) -> Result<()> {
        self.validate()?;
        if self.delta == T::zero() {
            Ok(())
        } else {
            Err(Error::ForceOfInterest(format!(
                "{what} requires delta = 0, got {}",
                self.delta
            )))
        }
    }

    /// Drift coefficient `b` and window parameter `a` of the limiting constant.
    pub fn drift_spec(&self) -> Result<DriftSpec<T>> {
        self.require_positive_delta("drift spec")?;
        DriftSpec::new(
            self.c / (self.sigma * self.delta.sqrt()),
            time_change(self.t_window, self.delta)?,
        )
    }

    /// Window argument `2 c^2 T / sigma^2` of the zero-interest constant `F`.
    pub fn scaled_window(&self) -> T {
        T::lit(2.0) * self.c * self.c * self.t_window / (self.sigma * self.sigma)
    }
}

/// Parameters of the constant `P^f_a`: `f(t) = (sqrt(t) - b)^2` and the
/// inner window `[a, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct DriftSpec<T> {
    pub b: T,
    pub a: T,
}

impl<T: Scalar> DriftSpec<T> {
    /// `a = 1` is classical ruin, `a = 0` an infinite window.
    pub fn new(b: T, a: T) -> Result<Self> {
        if !(b > T::zero()) || !b.is_finite() {
            return Err(invalid("b", format!("drift coefficient must be > 0, got {b}")));
        }
        if !(a >= T::zero() && a <= T::one()) {
            return Err(invalid("a", format!("window parameter must lie in [0,1], got {a}")));
        }
        Ok(Self { b, a })
    }

    #[inline]
    pub fn f(&self, t: T) -> T {
        let d = t.sqrt() - self.b;
        d * d
    }

    /// `e^{-f(0)}`, the value of the constant on a degenerate horizon.
    pub fn degenerate_value(&self) -> T {
        (-(self.b * self.b)).exp()
    }
}

/// Result of an asymptotic formula, clipped to `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Asymptotic<T> {
    pub value: T,
    /// Uncertainty carried over from the estimated constant.
    pub std_err: T,
    /// Value before clipping.
    pub raw: T,
    pub clamped: bool,
}

impl<T: Scalar> Asymptotic<T> {
    fn clip(raw: T, std_err: T) -> Self {
        let value = raw.max(T::zero()).min(T::one());
        Self {
            value,
            std_err,
            raw,
            clamped: value != raw,
        }
    }
}

/// Location of the most likely ruin epoch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct CriticalPoint<T> {
    /// In the time-changed coordinate `s = e^{-2 delta t}`.
    pub t_star_s: T,
    /// In original time.
    pub t_star_time: T,
}

/// `s = e^{-2 delta t}`, mapping `[0, inf)` onto `(0, 1]`.
pub fn time_change<T: Scalar>(t: T, delta: T) -> Result<T> {
    if !(t >= T::zero()) {
        return Err(Error::Domain(format!("time change needs t >= 0, got {t}")));
    }
    if !(delta > T::zero()) {
        return Err(Error::ForceOfInterest(format!(
            "time change needs delta > 0, got {delta}"
        )));
    }
    Ok((-T::lit(2.0) * delta * t).exp())
}

/// Inverse of [`time_change`]: `t = -ln(s) / (2 delta)`.
pub fn inverse_time_change<T: Scalar>(s: T, delta: T) -> Result<T> {
    if !(s > T::zero() && s <= T::one()) {
        return Err(Error::Domain(format!("inverse time change needs s in (0,1], got {s}")));
    }
    if !(delta > T::zero()) {
        return Err(Error::ForceOfInterest(format!(
            "time change needs delta > 0, got {delta}"
        )));
    }
    Ok(-s.ln() / (T::lit(2.0) * delta))
}

/// Mean of the discounted loss `L(t)`: `-(c/delta)(1 - e^{-delta t})`, or `-c t`
/// without interest.
pub fn loss_mean<T: Scalar>(p: &ModelParams<T>, t: T) -> T {
    if p.delta == T::zero() {
        -p.c * t
    } else {
        p.c * (-p.delta * t).exp_m1() / p.delta
    }
}

/// Variance of `L(t)`: `sigma^2 (1 - e^{-2 delta t}) / (2 delta)`, or
/// `sigma^2 t` without interest. Stable as `delta -> 0`.
pub fn loss_variance<T: Scalar>(p: &ModelParams<T>, t: T) -> T {
    let s2 = p.sigma * p.sigma;
    if p.delta == T::zero() {
        s2 * t
    } else {
        let two_delta = T::lit(2.0) * p.delta;
        -s2 * (-two_delta * t).exp_m1() / two_delta
    }
}

/// Exact infinite-horizon classical ruin probability with interest,
/// `Psi(sqrt(2 delta)(u + c/delta)/sigma) / Psi(sqrt(2) c / (sigma sqrt(delta)))`.
pub fn exact_classical_ruin<T: Scalar>(p: &ModelParams<T>) -> Result<T> {
    p.require_positive_delta("exact classical ruin")?;
    let arg = |reserve: T| (T::lit(2.0) * p.delta).sqrt() * (reserve + p.c / p.delta) / p.sigma;
    let num = std_normal_sf(arg(p.u))?;
    let den = std_normal_sf(arg(T::zero()))?;
    Ok((num / den).min(T::one()))
}

/// Classical ruin without interest: `exp(-2 c u / sigma^2)`.
pub fn delta0_exact_classical<T: Scalar>(p: &ModelParams<T>) -> Result<T> {
    p.require_zero_delta("zero-interest classical ruin")?;
    Ok((-T::lit(2.0) * p.c * p.u / (p.sigma * p.sigma)).exp())
}

/// Argument of the normal tail in the large-reserve asymptotic:
/// `sqrt(2 delta u^2 + 4 c u) / sigma`.
pub fn asymptotic_tail_argument<T: Scalar>(p: &ModelParams<T>) -> T {
    (T::lit(2.0) * p.delta * p.u * p.u + T::lit(4.0) * p.c * p.u).sqrt() / p.sigma
}

/// Large-reserve Parisian ruin asymptotic
/// `P^f_a[0, inf) * Psi(sqrt(2 delta u^2 + 4 c u) / sigma)`.
///
/// `p_const` must estimate the constant for `p.drift_spec()`.
pub fn asymptotic_parisian_ruin<T: Scalar>(p: &ModelParams<T>, p_const: &EstimateCI<T>) -> Result<Asymptotic<T>> {
    p.require_positive_delta("Parisian ruin asymptotic")?;
    if !(p_const.value > T::zero()) {
        return Err(Error::Domain(format!(
            "constant estimate must be positive, got {}",
            p_const.value
        )));
    }
    let tail = std_normal_sf(asymptotic_tail_argument(p))?;
    Ok(Asymptotic::clip(p_const.value * tail, p_const.std_err * tail))
}

/// Zero-interest Parisian asymptotic `F(2 c^2 T / sigma^2) exp(-2 c u / sigma^2)`.
pub fn delta0_asymptotic_parisian<T: Scalar>(p: &ModelParams<T>, f_const: &EstimateCI<T>) -> Result<Asymptotic<T>> {
    p.require_zero_delta("zero-interest Parisian asymptotic")?;
    if !(f_const.value > T::zero()) {
        return Err(Error::Domain(format!(
            "constant estimate must be positive, got {}",
            f_const.value
        )));
    }
    let decay = (-T::lit(2.0) * p.c * p.u / (p.sigma * p.sigma)).exp();
    Ok(Asymptotic::clip(f_const.value * decay, f_const.std_err * decay))
}

/// Unique maximiser `t_u = (c / (delta u + c))^2` of [`mu_profile`], also in
/// original time `ln((delta u + c)/c) / delta`.
pub fn critical_point<T: Scalar>(p: &ModelParams<T>) -> Result<CriticalPoint<T>> {
    p.require_positive_delta("critical point")?;
    let r = p.c / (p.delta * p.u + p.c);
    Ok(CriticalPoint {
        t_star_s: r * r,
        t_star_time: (p.delta * p.u / p.c).ln_1p() / p.delta,
    })
}

/// Standardised deviation profile
/// `M_u(t) = (sigma/sqrt(2 delta)) sqrt(1-t) / (1 + c/(delta u) (1 - sqrt(t)))`
/// on the time-changed axis `t in [0, 1]`.
pub fn mu_profile<T: Scalar>(p: &ModelParams<T>, t: T) -> Result<T> {
    p.require_positive_delta("M_u profile")?;
    if !(p.u > T::zero()) {
        return Err(invalid("u", "M_u profile needs u > 0"));
    }
    if !(t >= T::zero() && t <= T::one()) {
        return Err(Error::Domain(format!("M_u profile needs t in [0,1], got {t}")));
    }
    let scale = p.sigma / (T::lit(2.0) * p.delta).sqrt();
    let denom = T::one() + p.c / (p.delta * p.u) * (T::one() - t.sqrt());
    Ok(scale * (T::one() - t).sqrt() / denom)
}

/// Horizon `c^2/(sigma^2 delta) + delta x / sigma^2` of the constant in the
/// limiting ruin-time law at abscissa `x`.
pub fn ruin_time_horizon<T: Scalar>(p: &ModelParams<T>, x: T) -> Result<T> {
    p.require_positive_delta("ruin-time law")?;
    let lower = -(p.c * p.c) / (p.delta * p.delta);
    if !(x > lower) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "ruin-time law is defined for x > -c^2/delta^2 = {lower}, got {x}"
        )));
    }
    let s2 = p.sigma * p.sigma;
    Ok((p.c * p.c / p.delta + p.delta * x) / s2)
}

/// Limiting conditional law of `u^2 (e^{-2 delta eta} - t_u)` given ruin:
/// `P^f_a[0, lambda(x)] / P^f_a[0, inf)`.
///
/// `p_curve` maps a horizon to an estimate of `P^f_a[0, lambda]`; `p_inf`
/// estimates the infinite-horizon constant. When both come from one
/// common-random-number run the ratio is nondecreasing in `x`.
pub fn ruin_time_cdf_asymptotic<T, F>(
    p: &ModelParams<T>,
    x: T,
    p_curve: F,
    p_inf: &EstimateCI<T>,
) -> Result<Asymptotic<T>>
where
    T: Scalar,
    F: Fn(T) -> Result<EstimateCI<T>>,
{
    let lambda = ruin_time_horizon(p, x)?;
    if !(p_inf.value > T::zero()) {
        return Err(Error::Domain(format!(
            "infinite-horizon constant must be positive, got {}",
            p_inf.value
        )));
    }
    let num = p_curve(lambda)?;
    let ratio = num.value / p_inf.value;
    let rel = |e: &EstimateCI<T>| e.std_err / e.value;
    let std_err = ratio * (rel(&num).powi(2) + rel(p_inf).powi(2)).sqrt();
    Ok(Asymptotic::clip(ratio, std_err))
}
