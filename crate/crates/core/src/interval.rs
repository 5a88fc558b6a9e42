use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid interval [{lo}, {hi}]: bounds must satisfy 0 <= lo <= hi with lo finite")]
pub struct IntervalError {
    pub lo: f64,
    pub hi: f64,
}

/// A closed interval `[lo, hi]` over non-negative reals; `hi` may be `+inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self, IntervalError> {
        if lo.is_finite() && lo >= 0.0 && !hi.is_nan() && lo <= hi {
            Ok(Interval { lo: lo + 0.0, hi })
        } else {
            Err(IntervalError { lo, hi })
        }
    }

    /// `[0, +inf)`, the meaning of an omitted interval.
    pub const fn unbounded() -> Self {
        Interval {
            lo: 0.0,
            hi: f64::INFINITY,
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.hi.is_finite()
    }

    pub fn contains(&self, d: f64) -> bool {
        self.lo <= d && d <= self.hi
    }
}

impl Default for Interval {
    fn default() -> Self {
        Interval::unbounded()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.hi.is_infinite() {
            write!(f, "[{}, inf]", self.lo)
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}
