//! Rényi entropy measures and entropy-to-security bounds.
//!
//! All entropies are in bits (base-2 logarithms throughout). Shannon entropy
//! is an explicit order variant rather than a runtime limit at alpha = 1.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logdomain::compensated_sum;
use crate::quantum::QuantumEnvironment;

/// Absolute tolerance on the probability sum when validating a distribution.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// A finite probability distribution. Entries are non-negative and sum to 1
/// within [`SUM_TOLERANCE`]; inputs are never renormalized silently (use
/// [`Distribution::normalized`] when that is what you want).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    probs: Vec<f64>,
    labels: Option<Vec<String>>,
}

impl Distribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution(
                "empty probability vector".into(),
            ));
        }
        for (i, &p) in probs.iter().enumerate() {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::InvalidDistribution(format!(
                    "entry {i} is {p}, must be a finite non-negative real"
                )));
            }
        }
        let sum = compensated_sum(probs.iter().cloned());
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "entries sum to {sum}, expected 1 within {SUM_TOLERANCE:e}"
            )));
        }
        Ok(Self {
            probs,
            labels: None,
        })
    }

    /// Scales a non-negative weight vector to sum to 1.
    pub fn normalized(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidDistribution("empty weight vector".into()));
        }
        for (i, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidDistribution(format!(
                    "weight {i} is {w}, must be a finite non-negative real"
                )));
            }
        }
        let sum = compensated_sum(weights.iter().cloned());
        if sum <= 0.0 {
            return Err(Error::InvalidDistribution("weights sum to zero".into()));
        }
        Ok(Self {
            probs: weights.into_iter().map(|w| w / sum).collect(),
            labels: None,
        })
    }

    /// Uniform distribution over `m` outcomes.
    pub fn uniform(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidDistribution(
                "support size must be >= 1".into(),
            ));
        }
        let p = 1.0 / m as f64;
        Ok(Self {
            probs: vec![p; m],
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.probs.len() {
            return Err(Error::InvalidDistribution(format!(
                "{} labels for {} outcomes",
                labels.len(),
                self.probs.len()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn support_size(&self) -> usize {
        self.probs.len()
    }
}

/// Order parameter for the Rényi family. `Finite(2.0)` is collision entropy;
/// `Infinity` is min-entropy. Order 1 must be spelled `Shannon`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntropyOrder {
    Finite(f64),
    Shannon,
    Infinity,
}

impl EntropyOrder {
    /// Validated constructor for a finite order: alpha > 0 and alpha != 1.
    pub fn finite(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 {
            return Err(Error::Domain(format!(
                "order alpha must be > 0, got {alpha}"
            )));
        }
        if alpha == 1.0 {
            return Err(Error::Domain(
                "alpha = 1 is the Shannon variant; use EntropyOrder::Shannon".into(),
            ));
        }
        Ok(EntropyOrder::Finite(alpha))
    }

    fn validate(self) -> Result<Self> {
        match self {
            EntropyOrder::Finite(a) => EntropyOrder::finite(a),
            other => Ok(other),
        }
    }
}

/// Rényi entropy of `dist` at the given order, in bits.
///
/// Finite alpha: `(1/(1-alpha)) * log2(sum p_i^alpha)`, with the power sum
/// accumulated by compensated summation over entries sorted ascending.
/// Shannon: `-sum p_i log2 p_i` with `0 log 0 = 0`. Infinity: `-log2 max p_i`.
pub fn renyi_entropy(dist: &Distribution, order: EntropyOrder) -> Result<f64> {
    let order = order.validate()?;
    let probs = dist.probs();
    match order {
        EntropyOrder::Finite(alpha) => {
            let mut powers: Vec<f64> = probs
                .iter()
                .filter(|&&p| p > 0.0)
                .map(|&p| p.powf(alpha))
                .collect();
            powers.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let power_sum = compensated_sum(powers);
            Ok(power_sum.log2() / (1.0 - alpha))
        }
        EntropyOrder::Shannon => {
            let mut terms: Vec<f64> = probs
                .iter()
                .filter(|&&p| p > 0.0)
                .map(|&p| p * p.log2())
                .collect();
            terms.sort_by(|a, b| a.partial_cmp(b).unwrap());
            Ok(-compensated_sum(terms))
        }
        EntropyOrder::Infinity => {
            let max = probs.iter().cloned().fold(0.0f64, f64::max);
            Ok(-max.log2())
        }
    }
}

/// Quantum distinguishing-advantage bound `sqrt(2^-h2)` from collision
/// entropy `h2` bits, with the negligible additive term dropped.
///
/// Values of `h2` beyond about 2148 bits underflow to an exact 0.0.
pub fn entropy_security_advantage(h2_bits: f64) -> Result<f64> {
    if !(h2_bits >= 0.0) {
        return Err(Error::Domain(format!(
            "collision entropy must be >= 0 bits, got {h2_bits}"
        )));
    }
    Ok((-h2_bits / 2.0).exp2())
}

/// Refined advantage bound `sqrt(1 - 2^-h * 2^(-r/2))` where `h` is the
/// order-3/2 Rényi entropy in bits and `r` the log2 of the range size.
/// Tighter than [`entropy_security_advantage`] for skewed distributions.
pub fn entropy_security_advantage_refined(
    h_three_halves: f64,
    range_size_log2: f64,
) -> Result<f64> {
    if !(h_three_halves >= 0.0) {
        return Err(Error::Domain(format!(
            "entropy must be >= 0 bits, got {h_three_halves}"
        )));
    }
    if !(range_size_log2 >= 0.0) {
        return Err(Error::Domain(format!(
            "range size log2 must be >= 0, got {range_size_log2}"
        )));
    }
    let fidelity_sq = (-h_three_halves - range_size_log2 / 2.0).exp2();
    Ok((1.0 - fidelity_sq).max(0.0).sqrt())
}

/// Whether `H_2(P) >= ((alpha-1)/alpha) * H_alpha(P)` holds for this
/// distribution. The relation holds for every distribution at alpha > 1,
/// so a `false` return indicates a numerical defect, not a mathematical one.
pub fn renyi_order_relation_holds(dist: &Distribution, order: EntropyOrder) -> Result<bool> {
    let alpha = match order {
        EntropyOrder::Finite(a) if a > 1.0 => a,
        _ => {
            return Err(Error::Domain(
                "order relation requires a finite alpha > 1".into(),
            ))
        }
    };
    let h2 = renyi_entropy(dist, EntropyOrder::Finite(2.0))?;
    let ha = renyi_entropy(dist, EntropyOrder::Finite(alpha))?;
    Ok(h2 >= (alpha - 1.0) / alpha * ha)
}

/// Minimum Rényi entropy (bits) required for `lambda`-bit security against
/// `query_budget` quantum queries:
/// `lambda + log2((alpha/(alpha-1)) * q^2) - (tau_g/tau_d) * lambda * ln 2`.
///
/// The last term is the decoherence rebate; it vanishes as tau_d grows. The
/// result may be negative for degenerate environments; callers interpret.
pub fn min_required_entropy(
    order: EntropyOrder,
    lambda: u32,
    query_budget: f64,
    env: &QuantumEnvironment,
) -> Result<f64> {
    let alpha = match order {
        EntropyOrder::Finite(a) if a > 1.0 => a,
        _ => {
            return Err(Error::Domain(
                "entropy requirement is defined for finite alpha > 1".into(),
            ))
        }
    };
    if !(query_budget >= 1.0) {
        return Err(Error::Domain(format!(
            "query budget must be >= 1, got {query_budget}"
        )));
    }
    let lambda = lambda as f64;
    let query_term = (alpha / (alpha - 1.0)).log2() + 2.0 * query_budget.log2();
    let decoherence_rebate = env.gate_ratio() * lambda * std::f64::consts::LN_2;
    Ok(lambda + query_term - decoherence_rebate)
}
