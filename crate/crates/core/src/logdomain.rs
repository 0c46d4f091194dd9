//! Base-2 log-domain arithmetic.
//!
//! Attack costs and success probabilities routinely exceed the dynamic range
//! of `f64` (a sieve cost times a gate/decoherence ratio can pass 10^40), so
//! every cost and probability in this crate is carried as its base-2
//! logarithm and only converted to linear scale for display.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// What a [`Log2Quantity`] measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuantityKind {
    /// Operation counts, time, sizes. Any finite log2 value.
    Cost,
    /// Probabilities and probability multipliers. log2 value <= 0, with
    /// negative infinity standing for an exact zero.
    Probability,
}

/// A non-negative quantity stored as its base-2 logarithm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Log2Quantity {
    pub log2_value: f64,
    pub kind: QuantityKind,
}

impl Log2Quantity {
    /// A cost of `2^log2_value`. Rejects NaN and infinities.
    pub fn cost(log2_value: f64) -> Result<Self> {
        if !log2_value.is_finite() {
            return Err(Error::Domain(format!(
                "cost log2 value must be finite, got {log2_value}"
            )));
        }
        Ok(Self {
            log2_value,
            kind: QuantityKind::Cost,
        })
    }

    /// A probability of `2^log2_value`. Requires `log2_value <= 0`;
    /// negative infinity (probability zero) is allowed.
    pub fn probability(log2_value: f64) -> Result<Self> {
        if log2_value.is_nan() || log2_value > 0.0 {
            return Err(Error::Domain(format!(
                "probability log2 value must be <= 0, got {log2_value}"
            )));
        }
        Ok(Self {
            log2_value,
            kind: QuantityKind::Probability,
        })
    }

    /// Adds the underlying quantities via log-sum-exp. Kinds must match.
    /// A probability sum is clamped at certainty (log2 value 0).
    pub fn add_quantity(self, other: Self) -> Result<Self> {
        if self.kind != other.kind {
            return Err(Error::Domain(
                "cannot add a cost to a probability".to_string(),
            ));
        }
        let sum = log_sum_exp2(self.log2_value, other.log2_value);
        match self.kind {
            QuantityKind::Cost => Log2Quantity::cost(sum),
            QuantityKind::Probability => Log2Quantity::probability(sum.min(0.0)),
        }
    }

    /// Converts to linear scale. Underflows to 0 / overflows to infinity
    /// outside roughly `[-1074, 1024]`.
    pub fn linear(self) -> f64 {
        self.log2_value.exp2()
    }

    /// Multiplies the underlying quantity by `factor`. The cost formulas in
    /// this crate fix their asymptotic constants to 1; this is the hook for
    /// callers who want a different constant.
    pub fn scaled(self, factor: f64) -> Result<Self> {
        if !(factor > 0.0) || !factor.is_finite() {
            return Err(Error::Domain(format!(
                "scale factor must be finite > 0, got {factor}"
            )));
        }
        let log2_value = self.log2_value + factor.log2();
        match self.kind {
            QuantityKind::Cost => Log2Quantity::cost(log2_value),
            QuantityKind::Probability => Log2Quantity::probability(log2_value),
        }
    }
}

/// log2(2^a + 2^b), stable for any spread of magnitudes.
pub fn log_sum_exp2(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp2().ln_1p() * std::f64::consts::LOG2_E
}

/// log2 of the sum of `2^x` over a slice; NEG_INFINITY for an empty slice.
pub fn log_sum_exp2_slice(values: &[f64]) -> f64 {
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let mut acc = 0.0f64;
    for &v in values {
        acc += (v - hi).exp2();
    }
    hi + acc.log2()
}

/// Neumaier-compensated sum. Callers sort ascending first when the inputs
/// span many orders of magnitude.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}
