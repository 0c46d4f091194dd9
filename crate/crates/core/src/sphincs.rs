//! Hash-based signature security bounds and the hypertree parameter
//! optimizer.
//!
//! Entropy units are bits. The collision-entropy model for a height-`h`
//! hypertree treats the index/output space as an ideal random function into
//! `min(h, n)` bits and charges the concentration margin at confidence
//! `2^-lambda`, i.e. `H2 = b - sqrt(b * lambda * ln 2 / 3)` with
//! `b = min(h, n)`. The optimizer, which has no hash-size input, uses
//! `b = h` and reports the smallest hash size meeting the same threshold.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logdomain::{log_sum_exp2, Log2Quantity};
use crate::quantum::QuantumEnvironment;

const LN_2: f64 = std::f64::consts::LN_2;
const LOG2_3: f64 = 1.584962500721156;

/// Hypertree parameter tuple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphincsParams {
    /// Total hypertree height.
    pub h: u32,
    /// Number of layers; each layer then has height h/d.
    pub d: u32,
    /// Tweak parameter.
    pub t: u64,
    /// Hash output size in bits.
    pub n: u32,
    /// Adversary query budget (may be as large as 2^64).
    pub query_budget: f64,
}

impl SphincsParams {
    pub fn validate(&self) -> Result<()> {
        if self.h < 1 || self.n < 1 || self.d < 1 || self.t < 1 {
            return Err(Error::Domain(
                "height, depth, tweak, and hash size must all be >= 1".into(),
            ));
        }
        if self.d > self.h {
            return Err(Error::Domain(format!(
                "depth {} exceeds height {}",
                self.d, self.h
            )));
        }
        if self.query_budget.is_nan() || self.query_budget < 0.0 {
            return Err(Error::Domain(format!(
                "query budget must be >= 0, got {}",
                self.query_budget
            )));
        }
        Ok(())
    }
}

/// Which requirement fixed the optimizer's output height.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BindingConstraint {
    /// The collision-entropy threshold needed the largest height.
    Entropy,
    /// The cube-root collision-search cost needed the largest height.
    CollisionAlgo,
    /// The decoherence penalty raised the required height by at least one
    /// full unit over the ideal collision-search requirement.
    Decoherence,
    /// The closed-form height floor needed the largest height.
    HeightBound,
}

/// Optimizer output. Every field is recomputable from `params` plus the
/// inputs echoed here.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphincsReport {
    pub params: SphincsParams,
    /// Modeled collision entropy at the final height, bits.
    pub h2_effective: f64,
    /// log2 collision probability bound at the final parameters.
    pub collision_log2_prob: f64,
    /// log2 attack cost at the final height.
    pub cost_log2: f64,
    pub signature_size_bytes: f64,
    pub binding_constraint: BindingConstraint,
    /// max(0, -collision_log2_prob); infinite when fewer than two queries
    /// make the collision game degenerate (JSON serializes that as null).
    pub achieved_lambda: f64,
    /// Height the search started from: ceil(lambda * log2 3).
    pub initial_h: u32,
    pub iterations: u64,
    /// Accumulated log2 signing-time diagnostic; reported, never constrained.
    pub tau_diagnostic: f64,
    /// Height demanded by each requirement, for report transparency.
    pub height_required_entropy: f64,
    pub height_required_cost: f64,
    pub height_required_floor: f64,
    pub notes: Vec<String>,
}

/// Tail of the collision-entropy concentration bound with an explicit
/// constant: `exp(-c * t^2 / b)`.
pub fn concentration_tail_with_constant(b: u32, t: f64, c: f64) -> Result<f64> {
    if b < 1 {
        return Err(Error::Domain("deviation scale must be >= 1 bit".into()));
    }
    if t.is_nan() || t < 0.0 {
        return Err(Error::Domain(format!("deviation must be >= 0, got {t}")));
    }
    if !(c > 0.0) {
        return Err(Error::Domain(format!("constant must be > 0, got {c}")));
    }
    Ok((-c * t * t / b as f64).exp())
}

/// `Pr[H2 <= log2|range| - t] <= exp(-3 t^2 / b)` for an ideal `b`-bit hash.
/// `b` is the output size in bits under the default interpretation.
pub fn entropy_concentration_tail(b: u32, t: f64) -> Result<f64> {
    concentration_tail_with_constant(b, t, 3.0)
}

/// Deviation `t*` with an explicit constant: `sqrt(b * lambda * ln 2 / c)`,
/// so that the tail at `t*` equals `2^-lambda`.
pub fn entropy_margin_with_constant(b: u32, lambda: f64, c: f64) -> Result<f64> {
    if b < 1 {
        return Err(Error::Domain("deviation scale must be >= 1 bit".into()));
    }
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!(
            "confidence exponent must be > 0, got {lambda}"
        )));
    }
    if !(c > 0.0) {
        return Err(Error::Domain(format!("constant must be > 0, got {c}")));
    }
    Ok((b as f64 * lambda * LN_2 / c).sqrt())
}

/// Deviation at which the constant-3 tail reaches `2^-lambda`:
/// `sqrt(b * lambda * ln 2 / 3)`. `lambda` is a positive real exponent.
pub fn entropy_margin(b: u32, lambda: f64) -> Result<f64> {
    entropy_margin_with_constant(b, lambda, 3.0)
}

/// Collision entropy of an ideal `n`-bit hash holding except with
/// probability `2^-lambda`: `n - entropy_margin(n, lambda)`. Errors when
/// the margin consumes the whole output size.
pub fn effective_h2(n: u32, lambda: f64) -> Result<f64> {
    let value = n as f64 - entropy_margin(n, lambda)?;
    if value <= 0.0 {
        return Err(Error::Evaluation(format!(
            "hash size {n} bits is too small for confidence 2^-{lambda}"
        )));
    }
    Ok(value)
}

/// Non-erroring margin-adjusted bits used by the optimizer scans; may be
/// negative when `b` is too small, which simply fails the threshold.
fn effective_bits(b: f64, lambda: f64) -> f64 {
    b - (b * lambda * LN_2 / 3.0).sqrt()
}

/// Minimal height whose modeled collision entropy reaches
/// `lambda + log2(1.5 * q^2)`, scanning h = 1, 2, ... The model is
/// `effective_bits(min(h, n))`: the index space contributes at most `h`
/// bits and the `n`-bit hash caps it.
pub fn h_opt(lambda: u32, query_budget: f64, n: u32) -> Result<u32> {
    if lambda < 1 || n < 1 {
        return Err(Error::Domain("lambda and n must be >= 1".into()));
    }
    if !(query_budget >= 1.0) {
        return Err(Error::Domain(format!(
            "query budget must be >= 1, got {query_budget}"
        )));
    }
    let threshold = lambda as f64 + (1.5f64).log2() + 2.0 * query_budget.log2();
    let lambda = lambda as f64;
    for h in 1..=(1u32 << 20) {
        let b = h.min(n) as f64;
        if effective_bits(b, lambda) >= threshold {
            return Ok(h);
        }
        if h >= n {
            // The cap is active and already short; larger h cannot help.
            break;
        }
    }
    Err(Error::Evaluation(format!(
        "no height up to 2^20 meets the entropy threshold {threshold:.3} \
         bits with hash size {n}"
    )))
}

/// log2 attack cost at height `h`: `min(h/2, h/3)` minus the per-window
/// decoherence penalty `(tau_g/tau_d)/ln 2`. The minimum is kept as written
/// even though the cube-root branch always wins for positive h.
pub fn sphincs_quantum_cost(h: u32, env: &QuantumEnvironment) -> Result<Log2Quantity> {
    if h < 1 {
        return Err(Error::Domain("height must be >= 1".into()));
    }
    let h = h as f64;
    let ideal = (h / 2.0).min(h / 3.0);
    Log2Quantity::cost(ideal - env.gate_ratio() / LN_2)
}

/// log2 collision probability bound:
/// `log2[ C(q,2) * (2^-h2 + 3^(k/2)/2^(n/2)) ] - (t/tau_d)/ln 2`
/// with the pair count and the inner sum both evaluated in log domain.
/// Fewer than two queries yields negative infinity (no pair exists).
pub fn collision_log2_probability(
    params: &SphincsParams,
    h2: f64,
    attack_time_seconds: f64,
    env: &QuantumEnvironment,
) -> Result<f64> {
    params.validate()?;
    if h2.is_nan() || h2 < 0.0 {
        return Err(Error::Domain(format!(
            "collision entropy must be >= 0, got {h2}"
        )));
    }
    if attack_time_seconds.is_nan() || attack_time_seconds < 0.0 {
        return Err(Error::Domain(format!(
            "attack time must be >= 0, got {attack_time_seconds}"
        )));
    }
    let q = params.query_budget;
    if q < 2.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let log2_pairs = q.log2() + (q - 1.0).log2() - 1.0;
    let quantum_term = env.k() as f64 / 2.0 * LOG2_3 - params.n as f64 / 2.0;
    let inner = log_sum_exp2(-h2, quantum_term);
    let decoherence = if env.tau_d().is_infinite() {
        0.0
    } else {
        attack_time_seconds / env.tau_d() / LN_2
    };
    Ok(log2_pairs + inner - decoherence)
}

/// Byte-size proxy `cal * h * n/8 + cal * t * log2(max(t,2)) * n/8`,
/// linear in the hash size. The default calibration anchors the height-203,
/// depth-1 geometry at 256-bit hashes to an 8 KiB signature.
pub fn signature_size_estimate(params: &SphincsParams, calibration: f64) -> Result<f64> {
    params.validate()?;
    if !(calibration > 0.0) || !calibration.is_finite() {
        return Err(Error::Domain(format!(
            "calibration must be finite > 0, got {calibration}"
        )));
    }
    let n_bytes = params.n as f64 / 8.0;
    let tree_part = params.h as f64 / params.d as f64 * params.d as f64 * n_bytes;
    let tweak = params.t as f64;
    let tweak_part = tweak * tweak.max(2.0).log2() * n_bytes;
    Ok(calibration * (tree_part + tweak_part))
}

/// Calibration constant that maps the anchor geometry
/// (h = 203, d = 1, t = 1, n = 256) to 8192 bytes.
pub fn default_signature_calibration() -> f64 {
    let anchor_bytes = 8.0 * 1024.0;
    let raw = 203.0 * 32.0 + 1.0 * 1.0 * 32.0;
    anchor_bytes / raw
}

/// Closed-form height floor `(3/2) lambda + log2((tau_g/tau_d) * ln 2)`.
/// Negative infinity for an ideal machine (the floor vanishes).
pub fn height_floor_bound(lambda: u32, env: &QuantumEnvironment) -> Result<f64> {
    if lambda < 1 {
        return Err(Error::Domain("lambda must be >= 1".into()));
    }
    let ratio = env.gate_ratio();
    Ok(1.5 * lambda as f64 + (ratio * LN_2).log2())
}

/// Tunables for [`optimize_sphincs`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphincsOptimizerOptions {
    pub max_depth: u32,
    pub query_budget: f64,
    /// Height increment per entropy-driven step; smallest parameters win at 1.
    pub step_h: u32,
    pub signature_calibration: f64,
    /// Cap on tweak growth; past it the height grows so the loop always
    /// makes progress.
    pub tweak_cap: u64,
}

impl Default for SphincsOptimizerOptions {
    fn default() -> Self {
        Self {
            max_depth: 8,
            query_budget: (64.0f64).exp2(),
            step_h: 1,
            signature_calibration: default_signature_calibration(),
            tweak_cap: 64,
        }
    }
}

const ITERATION_CAP: u64 = 1_000_000;

/// Grows (h, d, t) from h = ceil(lambda * log2 3), d = 1, t = 1 until the
/// log2 attack cost reaches `lambda`: the height grows while the modeled
/// collision entropy misses `lambda + log2(q^2)`, then depth up to
/// `max_depth`, then the tweak up to its cap, then the height again so the
/// loop always terminates. Signing-time log2 accumulates as a diagnostic.
pub fn optimize_sphincs(
    lambda: u32,
    env: &QuantumEnvironment,
    opts: &SphincsOptimizerOptions,
) -> Result<SphincsReport> {
    if lambda < 1 {
        return Err(Error::Domain("lambda must be >= 1".into()));
    }
    if opts.max_depth < 1 || opts.step_h < 1 || opts.tweak_cap < 1 {
        return Err(Error::Domain(
            "max_depth, step_h, and tweak_cap must be >= 1".into(),
        ));
    }
    if !(opts.query_budget >= 1.0) {
        return Err(Error::Domain(format!(
            "query budget must be >= 1, got {}",
            opts.query_budget
        )));
    }

    let lambda_f = lambda as f64;
    let initial_h = (lambda_f * LOG2_3).ceil() as u32;
    let entropy_threshold = lambda_f + 2.0 * opts.query_budget.log2();

    let mut h = initial_h;
    let mut d = 1u32;
    let mut t = 1u64;
    let mut tau = 0.0f64;
    let mut iterations = 0u64;
    loop {
        let cost = sphincs_quantum_cost(h, env)?;
        if cost.log2_value >= lambda_f {
            break;
        }
        iterations += 1;
        if iterations > ITERATION_CAP {
            return Err(Error::NonTermination(format!(
                "optimizer state after {ITERATION_CAP} iterations: \
                 h={h} d={d} t={t} cost={:.3} target={lambda_f}",
                cost.log2_value
            )));
        }
        if effective_bits(h as f64, lambda_f) < entropy_threshold {
            h = h.saturating_add(opts.step_h);
        } else if d < opts.max_depth.min(h) {
            d += 1;
        } else if t < opts.tweak_cap {
            t += 1;
        } else {
            h = h.saturating_add(opts.step_h);
        }
        // SignTime = d * 2^(h/d), accumulated in log2.
        tau += (d as f64).log2() + h as f64 / d as f64;
    }

    let h2_effective = effective_bits(h as f64, lambda_f);
    let recommended_n = recommend_hash_size(lambda_f, entropy_threshold)?;
    let params = SphincsParams {
        h,
        d,
        t,
        n: recommended_n,
        query_budget: opts.query_budget,
    };
    params.validate()?;

    // Attack wall-clock defaults to one gate per query.
    let attack_time = opts.query_budget * env.tau_g();
    let collision_log2_prob =
        collision_log2_probability(&params, h2_effective.max(0.0), attack_time, env)?;
    let cost = sphincs_quantum_cost(h, env)?;
    let signature_size_bytes = signature_size_estimate(&params, opts.signature_calibration)?;

    let height_required_cost = 3.0 * (lambda_f + env.gate_ratio() / LN_2);
    let height_required_entropy = height_for_entropy(lambda_f, entropy_threshold);
    let height_required_floor = height_floor_bound(lambda, env)?;
    let binding_constraint = classify_binding(
        height_required_entropy,
        height_required_cost,
        3.0 * lambda_f,
        height_required_floor,
    );

    let mut notes =
        vec!["cost keeps min(h/2, h/3) as written; the cube-root branch always wins".to_string()];
    if height_required_entropy > h as f64 {
        notes.push(format!(
            "entropy threshold still unmet at exit (needs height {height_required_entropy:.1}); \
             the loop exits on cost alone"
        ));
    }

    Ok(SphincsReport {
        params,
        h2_effective,
        collision_log2_prob,
        cost_log2: cost.log2_value,
        signature_size_bytes,
        binding_constraint,
        achieved_lambda: (-collision_log2_prob).max(0.0),
        initial_h,
        iterations,
        tau_diagnostic: tau,
        height_required_entropy,
        height_required_cost,
        height_required_floor,
        notes,
    })
}

/// Smallest real height whose margin-adjusted bits reach the threshold.
fn height_for_entropy(lambda: f64, threshold: f64) -> f64 {
    // effective_bits(b) = b - sqrt(b * lambda * ln2 / 3) = threshold
    // solves as a quadratic in sqrt(b).
    let m = (lambda * LN_2 / 3.0).sqrt();
    let root = (m + (m * m + 4.0 * threshold).sqrt()) / 2.0;
    root * root
}

fn recommend_hash_size(lambda: f64, threshold: f64) -> Result<u32> {
    let approx = height_for_entropy(lambda, threshold);
    if !approx.is_finite() || approx > (1u32 << 20) as f64 {
        return Err(Error::Evaluation(format!(
            "no hash size up to 2^20 bits meets the entropy threshold {threshold:.3}"
        )));
    }
    let mut n = (approx.floor() as u32).max(1);
    while effective_bits(n as f64, lambda) < threshold {
        n += 1;
    }
    Ok(n)
}

/// Largest requirement names the constraint. Sub-unit decoherence
/// adjustments do not rename it: the decoherence label applies only when
/// the penalty moved the integer height requirement by a full unit.
fn classify_binding(
    entropy: f64,
    cost_with_penalty: f64,
    cost_ideal: f64,
    floor: f64,
) -> BindingConstraint {
    let decoherence_material = cost_with_penalty - cost_ideal >= 1.0;
    let max = entropy.max(cost_with_penalty).max(floor);
    if max == entropy {
        BindingConstraint::Entropy
    } else if max == cost_with_penalty {
        if decoherence_material {
            BindingConstraint::Decoherence
        } else {
            BindingConstraint::CollisionAlgo
        }
    } else {
        BindingConstraint::HeightBound
    }
}
