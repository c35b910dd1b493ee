//! Classical and Parisian ruin detection on grid paths.
//!
//! Ruin at grid index `i` means `L_i > u` (strict). Parisian ruin needs `w`
//! consecutive grid points above `u`, where `w - 1` steps span the window.
//! The Parisian ruin time is the right end of the first such run: this is the
//! first instant at which the current excursion above `u` has lasted the full
//! window, i.e. the first `t` with `t - kappa >= T_u` in grid terms.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{critical_point, ModelParams};
use crate::paths::{snap_up, PathSample};
use crate::scalar::Scalar;

/// Outcome of scanning one path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct RuinOutcome<T> {
    pub ruined: bool,
    pub eta: Option<T>,
    pub kappa: Option<T>,
    /// `u^2 (e^{-2 delta eta} - t_u)`, only with positive interest.
    pub transformed_stat: Option<T>,
}

impl<T: Scalar> RuinOutcome<T> {
    pub fn survived() -> Self {
        Self {
            ruined: false,
            eta: None,
            kappa: None,
            transformed_stat: None,
        }
    }
}

/// Number of grid points a window of length `t_window` spans on step `h`.
///
/// Ratios within `1e-9` of an integer snap to it; otherwise the window is
/// rounded up to the next grid multiple, which can only under-detect ruin.
pub fn window_points<T: Scalar>(h: T, t_window: T) -> Result<usize> {
    if t_window == T::zero() {
        return Ok(1);
    }
    if !(h > T::zero()) || h > t_window * (T::one() + T::lit(1e-9)) {
        return Err(Error::UnresolvableWindow {
            window: t_window.to_f64().unwrap_or(f64::NAN),
            step: h.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(snap_up(t_window / h) + 1)
}

/// Minimum over a sliding window of the last `width` pushed values, kept in a
/// monotone deque: amortised O(1) per push.
#[derive(Debug, Clone)]
pub struct SlidingMin<T> {
    width: usize,
    next: usize,
    deque: VecDeque<(usize, T)>,
}

impl<T: Scalar> SlidingMin<T> {
    pub fn new(width: usize) -> Self {
        assert!(width >= 1, "window width must be positive");
        Self {
            width,
            next: 0,
            deque: VecDeque::with_capacity(width.min(1 << 16)),
        }
    }

    /// Pushes the next value; returns the window minimum once `width` values
    /// have been seen.
    #[inline]
    pub fn push(&mut self, value: T) -> Option<T> {
        let i = self.next;
        self.next += 1;
        while let Some(&(_, back)) = self.deque.back() {
            if back >= value {
                self.deque.pop_back();
            } else {
                break;
            }
        }
        self.deque.push_back((i, value));
        while let Some(&(j, _)) = self.deque.front() {
            if j + self.width <= i {
                self.deque.pop_front();
            } else {
                break;
            }
        }
        if i + 1 >= self.width {
            self.deque.front().map(|&(_, v)| v)
        } else {
            None
        }
    }

    pub fn reset(&mut self) {
        self.next = 0;
        self.deque.clear();
    }
}

/// Streaming Parisian ruin detector: feed path values in grid order.
#[derive(Debug, Clone)]
pub struct ParisianScanner<T> {
    u: T,
    window: SlidingMin<T>,
    index: usize,
    last_at_or_below: Option<usize>,
}

/// Grid indices of a detected ruin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuinIndex {
    /// Right end of the first window entirely above `u`.
    pub eta: usize,
    /// Last index before `eta` with `L <= u`.
    pub kappa: usize,
}

impl<T: Scalar> ParisianScanner<T> {
    pub fn new(u: T, width: usize) -> Self {
        Self {
            u,
            window: SlidingMin::new(width),
            index: 0,
            last_at_or_below: None,
        }
    }

    /// Pushes `L_i`; returns the ruin indices the first time a full window
    /// sits above `u`.
    #[inline]
    pub fn push(&mut self, value: T) -> Option<RuinIndex> {
        let i = self.index;
        self.index += 1;
        if value <= self.u {
            self.last_at_or_below = Some(i);
        }
        match self.window.push(value) {
            Some(m) if m > self.u => Some(RuinIndex {
                eta: i,
                kappa: self.last_at_or_below.unwrap_or(0),
            }),
            _ => None,
        }
    }

    pub fn reset(&mut self) {
        self.window.reset();
        self.index = 0;
        self.last_at_or_below = None;
    }
}

fn scan<T: Scalar>(path: &PathSample<T>, p: &ModelParams<T>) -> Result<Option<RuinIndex>> {
    p.validate()?;
    let width = window_points(path.step(), p.t_window)?;
    let mut scanner = ParisianScanner::new(p.u, width);
    Ok(path.values.iter().find_map(|&v| scanner.push(v)))
}

/// True iff some window of `w` consecutive grid points lies strictly above `u`.
pub fn detect_parisian<T: Scalar>(path: &PathSample<T>, p: &ModelParams<T>) -> Result<bool> {
    Ok(scan(path, p)?.is_some())
}

/// Parisian ruin time, last nonnegative-surplus instant and, with positive
/// interest and `u > 0`, the transformed statistic.
pub fn parisian_ruin_time<T: Scalar>(path: &PathSample<T>, p: &ModelParams<T>) -> Result<RuinOutcome<T>> {
    let Some(idx) = scan(path, p)? else {
        return Ok(RuinOutcome::survived());
    };
    let eta = path.times[idx.eta];
    let transformed_stat = if p.delta > T::zero() && p.u > T::zero() {
        Some(transform_ruin_time(eta, p)?)
    } else {
        None
    };
    Ok(RuinOutcome {
        ruined: true,
        eta: Some(eta),
        kappa: Some(path.times[idx.kappa]),
        transformed_stat,
    })
}

/// `u^2 (e^{-2 delta eta} - (c/(delta u + c))^2)`, strictly decreasing in `eta`
/// and bounded below by `-u^2 t_u > -c^2/delta^2`.
pub fn transform_ruin_time<T: Scalar>(eta: T, p: &ModelParams<T>) -> Result<T> {
    p.require_positive_delta("transformed ruin time")?;
    if !(p.u > T::zero()) {
        return Err(crate::error::invalid("u", "transformed ruin time needs u > 0"));
    }
    if !(eta >= T::zero()) {
        return Err(Error::Domain(format!("ruin time must be >= 0, got {eta}")));
    }
    let t_u = critical_point(p)?.t_star_s;
    Ok(p.u * p.u * ((-T::lit(2.0) * p.delta * eta).exp() - t_u))
}
