//! The confidence space `C = {(t, f) ∈ [0,1]² : t + f ≤ 1}`.
//!
//! A confidence `(t, f)` reads as "the formula holds with confidence `t` and
//! fails with confidence `f`". Equivalently it is the probability interval
//! `[t, 1 − f]`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used wherever two reals are compared for equality.
pub const TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawConfidence")]
pub struct Confidence {
    t: f64,
    f: f64,
}

#[derive(Deserialize)]
struct RawConfidence {
    t: f64,
    f: f64,
}

impl TryFrom<RawConfidence> for Confidence {
    type Error = Error;

    fn try_from(raw: RawConfidence) -> Result<Self> {
        Confidence::new(raw.t, raw.f)
    }
}

fn in_unit(x: f64) -> bool {
    (0.0..=1.0).contains(&x)
}

impl Confidence {
    /// No knowledge: `(0, 0)`.
    pub const UNKNOWN: Confidence = Confidence { t: 0.0, f: 0.0 };
    /// Certainly true: `(1, 0)`.
    pub const TRUE: Confidence = Confidence { t: 1.0, f: 0.0 };
    /// Certainly false: `(0, 1)`.
    pub const FALSE: Confidence = Confidence { t: 0.0, f: 1.0 };

    pub fn new(t: f64, f: f64) -> Result<Self> {
        if in_unit(t) && in_unit(f) && t + f <= 1.0 + TOLERANCE {
            Ok(Confidence { t, f })
        } else {
            Err(Error::InvalidConfidence { t, f })
        }
    }

    /// Pure true confidence `(t, 0)`, the form used throughout allocation.
    pub fn from_true(t: f64) -> Result<Self> {
        Self::new(t, 0.0)
    }

    /// Builds a confidence from values the caller knows lie in `C`.
    pub(crate) fn new_unchecked(t: f64, f: f64) -> Self {
        debug_assert!(in_unit(t) && in_unit(f) && t + f <= 1.0 + TOLERANCE, "({t}, {f})");
        Confidence { t, f }
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn f(&self) -> f64 {
        self.f
    }

    /// Lack of confidence `1 − t − f`.
    pub fn uncertainty(&self) -> f64 {
        1.0 - self.t - self.f
    }

    /// The probability interval `[t, 1 − f]`.
    pub fn interval(&self) -> (f64, f64) {
        (self.t, 1.0 - self.f)
    }

    /// Confidence order `⊑`: componentwise `≤`.
    pub fn le_confidence(&self, other: &Confidence) -> bool {
        self.t <= other.t && self.f <= other.f
    }

    /// Truth order `≤`: more true, less false.
    pub fn le_truth(&self, other: &Confidence) -> bool {
        self.t <= other.t && self.f >= other.f
    }

    pub fn approx_eq(&self, other: &Confidence, tol: f64) -> bool {
        (self.t - other.t).abs() <= tol && (self.f - other.f).abs() <= tol
    }
}

impl fmt::Display for Confidence {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "({}, {})", self.t, self.f)
    }
}

/// Clamps both raw components into `[0, 1]`.
///
/// Rule outputs always satisfy `t_raw + f_raw ≤ 1`; a clamped pair that
/// still leaves `C` is reported as [`Error::ClampedOutOfSpace`].
pub fn clamp(t_raw: f64, f_raw: f64) -> Result<Confidence> {
    let t = t_raw.clamp(0.0, 1.0);
    let f = f_raw.clamp(0.0, 1.0);
    if t + f > 1.0 + TOLERANCE || t.is_nan() || f.is_nan() {
        return Err(Error::ClampedOutOfSpace { t, f });
    }
    Ok(Confidence { t, f })
}
