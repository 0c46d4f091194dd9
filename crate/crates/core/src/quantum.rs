//! Physical quantum-adversary model: decoherence factors, parallelization
//! penalties, query floors, entropy loss, and advantage limits.
//!
//! Conventions fixed here and stated per operation: reported logarithms are
//! base 2 (bits); exponents of e arising from decoherence stay natural.
//! Every asymptotic constant is fixed to 1 so outputs are reproducible.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logdomain::{Log2Quantity, QuantityKind};

const LN_2: f64 = std::f64::consts::LN_2;

/// Physical constants of the adversary's hardware. `tau_d` may be
/// `f64::INFINITY` to model an ideal (decoherence-free) machine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantumEnvironment {
    tau_g: f64,
    tau_d: f64,
    k: u64,
    epsilon: f64,
}

impl QuantumEnvironment {
    /// `tau_g` gate time and `tau_d` decoherence time in seconds with
    /// `tau_d >= tau_g` (a gate must complete within coherence), `k >= 1`
    /// parallel processors, error bound `epsilon` in (0, 1).
    pub fn new(tau_g: f64, tau_d: f64, k: u64, epsilon: f64) -> Result<Self> {
        if !(tau_g > 0.0) || !tau_g.is_finite() {
            return Err(Error::Domain(format!(
                "gate time must be finite > 0, got {tau_g}"
            )));
        }
        if !(tau_d > 0.0) || tau_d.is_nan() {
            return Err(Error::Domain(format!(
                "decoherence time must be > 0, got {tau_d}"
            )));
        }
        if tau_d < tau_g {
            return Err(Error::Domain(format!(
                "decoherence time {tau_d} shorter than gate time {tau_g}"
            )));
        }
        if k < 1 {
            return Err(Error::Domain("processor count must be >= 1".into()));
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::Domain(format!(
                "error bound must be in (0,1), got {epsilon}"
            )));
        }
        Ok(Self {
            tau_g,
            tau_d,
            k,
            epsilon,
        })
    }

    /// Environment with the decoherence length `lambda_d = tau_d / tau_g`
    /// given directly (gate time normalized to 1 second).
    pub fn from_lambda_d(lambda_d: f64, k: u64, epsilon: f64) -> Result<Self> {
        Self::new(1.0, lambda_d, k, epsilon)
    }

    pub fn tau_g(&self) -> f64 {
        self.tau_g
    }

    pub fn tau_d(&self) -> f64 {
        self.tau_d
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Decoherence length `tau_d / tau_g`, recomputed on every call.
    pub fn lambda_d(&self) -> f64 {
        self.tau_d / self.tau_g
    }

    /// `tau_g / tau_d`; exactly 0 for an ideal machine.
    pub fn gate_ratio(&self) -> f64 {
        if self.tau_d.is_infinite() {
            0.0
        } else {
            self.tau_g / self.tau_d
        }
    }

    pub fn with_k(mut self, k: u64) -> Result<Self> {
        if k < 1 {
            return Err(Error::Domain("processor count must be >= 1".into()));
        }
        self.k = k;
        Ok(self)
    }
}

/// Inputs to the composite query lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QueryComplexityInput {
    /// Approximate degree of the target function, >= 1.
    pub deg_eps: f64,
    /// Fourier sparsity, >= 1.
    pub sparsity: f64,
    /// log2 of the input domain size, in bits.
    pub domain_size_log2: f64,
    /// Error tolerance, in (0, 0.5).
    pub epsilon: f64,
}

impl QueryComplexityInput {
    pub fn validate(&self) -> Result<()> {
        if !(self.deg_eps >= 1.0) {
            return Err(Error::Domain(format!(
                "approximate degree must be >= 1, got {}",
                self.deg_eps
            )));
        }
        if !(self.sparsity >= 1.0) {
            return Err(Error::Domain(format!(
                "sparsity must be >= 1, got {}",
                self.sparsity
            )));
        }
        if !self.domain_size_log2.is_finite() || self.domain_size_log2 < 0.0 {
            return Err(Error::Domain(format!(
                "domain size log2 must be finite >= 0, got {}",
                self.domain_size_log2
            )));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 0.5) {
            return Err(Error::Domain(format!(
                "epsilon must be in (0, 0.5), got {}",
                self.epsilon
            )));
        }
        if self.sparsity.log2() > self.domain_size_log2 {
            return Err(Error::Domain(format!(
                "sparsity {} exceeds domain size 2^{}",
                self.sparsity, self.domain_size_log2
            )));
        }
        Ok(())
    }
}

/// log2 of the coherence-survival factor `e^(-T * tau_g / tau_d)` after `T`
/// queries, i.e. `-T * (tau_g/tau_d) / ln 2`. Probability multiplier.
pub fn decoherence_log2_factor(queries: f64, env: &QuantumEnvironment) -> Result<Log2Quantity> {
    if queries.is_nan() || queries < 0.0 {
        return Err(Error::Domain(format!(
            "query count must be >= 0, got {queries}"
        )));
    }
    Log2Quantity::probability(-(queries * env.gate_ratio()) / LN_2)
}

/// [`decoherence_log2_factor`] with the query count itself given in base-2
/// log domain, for counts beyond `f64` range (e.g. log2_queries = 1024).
/// The magnitude is assembled as `2^(log2_queries + log2(tau_g/tau_d) - log2(ln 2))`;
/// a magnitude beyond f64 range yields log2 probability negative infinity.
pub fn decoherence_log2_factor_from_log2(
    log2_queries: f64,
    env: &QuantumEnvironment,
) -> Result<Log2Quantity> {
    if log2_queries.is_nan() {
        return Err(Error::Domain("log2 query count must not be NaN".into()));
    }
    let ratio = env.gate_ratio();
    if ratio == 0.0 {
        return Log2Quantity::probability(0.0);
    }
    let magnitude_log2 = log2_queries + ratio.log2() - LN_2.log2();
    Log2Quantity::probability(-magnitude_log2.exp2())
}

/// Decoherence floor on queries: `(tau_d/tau_g) * ln(1/epsilon)` operations
/// must complete before the residual error can reach `target_epsilon`.
/// Natural log by derivation; infinite for an ideal machine.
pub fn min_queries_for_error(target_epsilon: f64, env: &QuantumEnvironment) -> Result<f64> {
    if !(target_epsilon > 0.0 && target_epsilon < 1.0) {
        return Err(Error::Domain(format!(
            "target error must be in (0,1), got {target_epsilon}"
        )));
    }
    Ok(env.lambda_d() * (1.0 / target_epsilon).ln())
}

/// Composite query lower bound: the maximum of the algebraic term
/// `((1-2eps)^2 / deg) * (domain_bits - log2 sparsity)` and the decoherence
/// floor `(tau_d/tau_g) * ln(1/eps)`, as a cost whose log2 value is the
/// log2 of the query count. The implicit proportionality constant is 1.
///
/// An ideal machine (infinite tau_d) has no decoherence floor and returns
/// the algebraic term alone.
pub fn quantum_lower_bound(
    input: &QueryComplexityInput,
    env: &QuantumEnvironment,
) -> Result<Log2Quantity> {
    input.validate()?;
    let gap = 1.0 - 2.0 * input.epsilon;
    let algebraic = gap * gap / input.deg_eps * (input.domain_size_log2 - input.sparsity.log2());
    let queries = if env.tau_d().is_infinite() {
        algebraic
    } else {
        let floor = env.lambda_d() * (1.0 / input.epsilon).ln();
        algebraic.max(floor)
    };
    Log2Quantity::cost(queries.log2())
}

/// log2 of the `1/sqrt(k)` parallelization factor: `-0.5 * log2 k`.
pub fn parallelization_log2_penalty(k: u64) -> Result<Log2Quantity> {
    if k < 1 {
        return Err(Error::Domain("processor count must be >= 1".into()));
    }
    Log2Quantity::probability(-0.5 * (k as f64).log2())
}

/// Success probability after composing a base probability with the
/// decoherence factor for `queries` operations and the parallelization
/// penalty for `env.k()` processors, clamped at certainty.
pub fn compose_attack_success(
    base_log2_prob: Log2Quantity,
    queries: f64,
    env: &QuantumEnvironment,
) -> Result<Log2Quantity> {
    if base_log2_prob.kind != QuantityKind::Probability {
        return Err(Error::Domain("base must be a probability".into()));
    }
    let deco = decoherence_log2_factor(queries, env)?;
    let par = parallelization_log2_penalty(env.k())?;
    let sum = base_log2_prob.log2_value + deco.log2_value + par.log2_value;
    Log2Quantity::probability(sum.min(0.0))
}

/// Leading term of the entropy lost to decoherence across `k` parallel
/// queries over a `2^domain_size_log2` domain: `(k * tau_g/tau_d) * bits`.
/// The order-sqrt(k) residual has no stated constant and is dropped.
pub fn entropy_loss_bound(k: u64, env: &QuantumEnvironment, domain_size_log2: f64) -> Result<f64> {
    if k < 1 {
        return Err(Error::Domain("processor count must be >= 1".into()));
    }
    if !domain_size_log2.is_finite() || domain_size_log2 < 0.0 {
        return Err(Error::Domain(format!(
            "domain size log2 must be finite >= 0, got {domain_size_log2}"
        )));
    }
    Ok(k as f64 * env.gate_ratio() * domain_size_log2)
}

/// Square-root search speedup over an `n`-bit space: log2 cost `n/2`.
pub fn grover_log2_cost(n: u32) -> Result<Log2Quantity> {
    if n < 1 {
        return Err(Error::Domain("bit size must be >= 1".into()));
    }
    Log2Quantity::cost(n as f64 / 2.0)
}

/// Cube-root collision search over an `m`-bit range: log2 cost `m/3`,
/// with the proportionality constant fixed to 1.
pub fn collision_search_log2_cost(m: u32) -> Result<Log2Quantity> {
    if m < 1 {
        return Err(Error::Domain("bit size must be >= 1".into()));
    }
    Log2Quantity::cost(m as f64 / 3.0)
}

/// Walk-based search cost `S + (1/sqrt(eps)) * (U/sqrt(delta) + C)` from
/// setup, update, and checking costs with spectral gap `delta` and marked
/// fraction `eps`, both in (0, 1].
pub fn quantum_walk_cost(setup: f64, update: f64, check: f64, delta: f64, eps: f64) -> Result<f64> {
    for (name, v) in [("setup", setup), ("update", update), ("check", check)] {
        if v.is_nan() || v < 0.0 {
            return Err(Error::Domain(format!("{name} cost must be >= 0, got {v}")));
        }
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::Domain(format!(
            "spectral gap must be in (0,1], got {delta}"
        )));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::Domain(format!(
            "marked fraction must be in (0,1], got {eps}"
        )));
    }
    Ok(setup + (update / delta.sqrt() + check) / eps.sqrt())
}

/// log2 of the quantum-over-classical advantage ceiling for a dimension-`dim`
/// lattice computation running `t_quant` operations:
/// `(T * tau_g/tau_d) * (log2 dim / dim) / ln 2`.
pub fn quantum_advantage_bound(t_quant: f64, env: &QuantumEnvironment, dim: u32) -> Result<f64> {
    if t_quant.is_nan() || t_quant < 0.0 {
        return Err(Error::Domain(format!(
            "operation count must be >= 0, got {t_quant}"
        )));
    }
    if dim < 2 {
        return Err(Error::Domain(format!("dimension must be >= 2, got {dim}")));
    }
    let dim = dim as f64;
    Ok(t_quant * env.gate_ratio() * (dim.log2() / dim) / LN_2)
}

/// Success probability of lattice reduction after wall-clock time `t`:
/// `p0 * exp(-(t/tau_d) * (dim / log2 dim))`. Requires `dim >= 3` so the
/// dimension factor exceeds 1.
pub fn lattice_success_decay(
    p0: f64,
    time_seconds: f64,
    env: &QuantumEnvironment,
    dim: u32,
) -> Result<f64> {
    if !(p0 > 0.0 && p0 <= 1.0) {
        return Err(Error::Domain(format!(
            "ideal success must be in (0,1], got {p0}"
        )));
    }
    if time_seconds.is_nan() || time_seconds < 0.0 {
        return Err(Error::Domain(format!(
            "time must be >= 0, got {time_seconds}"
        )));
    }
    if dim < 3 {
        return Err(Error::Domain(format!("dimension must be >= 3, got {dim}")));
    }
    let dim = dim as f64;
    let rate = if env.tau_d().is_infinite() {
        0.0
    } else {
        time_seconds / env.tau_d() * (dim / dim.log2())
    };
    Ok(p0 * (-rate).exp())
}

/// Largest lattice dimension at which quantum advantage survives
/// decoherence: `floor((tau_d/tau_g) * (log2 lambda / lambda) * log2(1/p0))`.
/// Both logarithms base 2.
pub fn max_feasible_dimension(env: &QuantumEnvironment, lambda: u32, p0: f64) -> Result<u64> {
    if lambda < 2 {
        return Err(Error::Domain(format!(
            "security parameter must be >= 2, got {lambda}"
        )));
    }
    if !(p0 > 0.0 && p0 < 1.0) {
        return Err(Error::Domain(format!(
            "ideal success must be in (0,1), got {p0}"
        )));
    }
    let lambda = lambda as f64;
    let value = env.lambda_d() * (lambda.log2() / lambda) * (1.0 / p0).log2();
    if !value.is_finite() || value >= u64::MAX as f64 {
        return Err(Error::Range(format!("dimension bound {value} exceeds u64")));
    }
    Ok(value.floor() as u64)
}
