//! Convolution-lattice hardness bounds, quantum lattice entropy, and the
//! ring parameter optimizer.
//!
//! Two cost models coexist. `PaperLiteral` evaluates the published recipe
//! verbatim: blocksize `ceil(log2 2N)`, the root-Hermite expression
//! `(sigma sqrt(N) / q)^(2/N)` (below 1 for every realistic parameter set,
//! which leaves the exponential hardness term undefined), and the full
//! cost-times-decoherence product. It is kept for traceability and is
//! expected to flag itself unreachable. `BkzBlocksize` (the default)
//! derives the blocksize from the root-Hermite relation, inverts a
//! sub-unity delta (flagged), and charges a single-coherence-window
//! decoherence penalty, giving a usable cost model.
//!
//! All costs are base-2 logs; `ln` appears only where an e-folding argument
//! produces it and each operation's doc says so.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::IntegerLattice;
use crate::logdomain::Log2Quantity;
use crate::oracle::shortest_vector_enum;
use crate::quantum::QuantumEnvironment;

const LN_2: f64 = std::f64::consts::LN_2;
const PI: f64 = std::f64::consts::PI;
/// Smallest blocksize the sieve cost model is calibrated for.
pub const MIN_BLOCKSIZE: u32 = 50;
/// Blocksize search ceiling.
pub const MAX_BLOCKSIZE: u32 = 1 << 20;
/// Default exponent in the entropy-to-complexity map, back-derived from the
/// published worked pair (380 bits of lattice entropy, 2^190 operations).
pub const DEFAULT_COMPLEXITY_EXPONENT: f64 = 0.5;

/// Ring parameter tuple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NtruParams {
    /// Ring degree N.
    pub ring_degree: u32,
    /// Modulus q; the optimizer produces primes congruent to 3 mod 8.
    pub modulus: u64,
    /// Gaussian width.
    pub sigma: f64,
    /// Key weight for f.
    pub d_f: u32,
    /// Key weight for g.
    pub d_g: u32,
}

/// Largest ring degree the estimators accept; far beyond deployed sizes.
pub const MAX_RING_DEGREE: u32 = 1 << 24;

impl NtruParams {
    pub fn validate(&self) -> Result<()> {
        if self.ring_degree < 1 || self.ring_degree > MAX_RING_DEGREE {
            return Err(Error::Domain(format!(
                "ring degree must be in 1..={MAX_RING_DEGREE}, got {}",
                self.ring_degree
            )));
        }
        if self.modulus < 3 {
            return Err(Error::Domain(format!(
                "modulus must be >= 3, got {}",
                self.modulus
            )));
        }
        if !(self.sigma > 0.0) || !self.sigma.is_finite() {
            return Err(Error::Domain(format!(
                "sigma must be finite > 0, got {}",
                self.sigma
            )));
        }
        let dim2 = 2 * self.ring_degree as u64;
        if self.d_f as u64 + self.d_g as u64 > dim2 {
            return Err(Error::Domain(format!(
                "key weights {} + {} exceed 2N = {dim2}",
                self.d_f, self.d_g
            )));
        }
        Ok(())
    }
}

/// Geometric summary of the associated 2N-dimensional lattice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeShape {
    pub dim: u32,
    pub log2_det: f64,
    pub lambda1: f64,
    /// Root Hermite factor; values at or below 1 are representable and get
    /// flagged by consumers rather than rejected here.
    pub delta: f64,
}

impl LatticeShape {
    pub fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::Domain(format!(
                "dimension must be >= 2, got {}",
                self.dim
            )));
        }
        if !(self.lambda1 > 0.0) || !self.lambda1.is_finite() {
            return Err(Error::Domain(format!(
                "shortest length must be finite > 0, got {}",
                self.lambda1
            )));
        }
        if !(self.delta > 0.0) {
            return Err(Error::Domain(format!(
                "delta must be > 0, got {}",
                self.delta
            )));
        }
        if !self.log2_det.is_finite() {
            return Err(Error::Domain("log2 determinant must be finite".into()));
        }
        Ok(())
    }

    /// Shape of a concrete enumerated lattice: exact determinant, the given
    /// shortest length, and a placeholder unit root-Hermite factor.
    pub fn from_enumeration(lat: &IntegerLattice, lambda1: f64) -> Self {
        Self {
            dim: lat.dim() as u32,
            log2_det: (lat.det_abs() as f64).log2(),
            lambda1,
            delta: 1.0,
        }
    }
}

/// Which formula family produced a report's cost terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostModel {
    PaperLiteral,
    BkzBlocksize,
}

/// Ring-degree growth schedules for the optimizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NSchedule {
    /// Degrees are powers of two (the published initialization line).
    PowerOfTwo,
    /// Degrees are primes, doubling each step, matching the published
    /// parameter tables' prime-degree regime.
    Prime,
}

/// Anomalies worth surfacing; serialized into reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NtruFlag {
    /// The literal root-Hermite value was at or below 1; the blocksize model
    /// used its reciprocal.
    DeltaNotAboveOne,
    /// Delta was floored at 1 + 1e-9 after inversion.
    DeltaFloored,
    /// The literal hardness exponential is undefined (log2 delta <= 0).
    LatticeTermUndefined,
    /// No blocksize within range satisfies the root-Hermite relation.
    BlocksizeUnsatisfiable,
    /// The sigma update line was undefined (log2 delta < 0); sigma retained.
    SigmaUpdateUndefined,
    /// The cost target cannot be reached under this model.
    Unreachable,
    /// The decoherence wall-clock floor sits below the target and is
    /// reported separately from the achieved level.
    DecoherenceFloorBelowTarget,
}

/// Security evaluation of one parameter set.
///
/// `achieved_lambda` is the minimum of the defined cost-exponent terms
/// (lattice and keyspace). The decoherence term is a wall-clock floor on
/// operations, not a cost exponent; folding it into the minimum would cap
/// every report at ~27 bits under workstation-grade constants, so it is
/// reported alongside and flagged when it sits below the target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NtruReport {
    pub params: NtruParams,
    pub shape: LatticeShape,
    /// log2 cost of lattice reduction; `None` when undefined under the model.
    pub term_lattice_log2: Option<f64>,
    /// log2 cost of exhausting the key space: N log2(q) / 2.
    pub term_keyspace_log2: f64,
    /// log2 of the decoherence operation floor (tau_d/tau_g) ln(q/eps).
    pub term_decoherence_log2: f64,
    pub achieved_lambda: f64,
    /// Lower bound on the quantum lattice entropy of the shape, bits.
    pub hq_bits: f64,
    pub cost_model: CostModel,
    /// Blocksize behind the lattice term, when one was derived.
    pub blocksize: Option<u32>,
    pub flags: Vec<NtruFlag>,
}

/// Outcome of an optimizer run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OptimizeOutcome {
    /// The cost target was met.
    Achieved,
    /// The modulus budget ran out first; raise lambda or relax the budget.
    IncreaseLambda,
}

/// Optimizer result: the terminal report plus run metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NtruOptimizeResult {
    pub report: NtruReport,
    pub outcome: OptimizeOutcome,
    pub initial_d: u32,
    pub initial_n: u32,
    pub initial_sigma: f64,
    pub iterations: u64,
}

/// Root Hermite factor `(sigma sqrt(N) / q)^(2/N)`, evaluated as
/// `exp((2/N) ln(sigma sqrt(N) / q))`. Returns values below 1 unflagged;
/// consumers flag them.
pub fn root_hermite(sigma: f64, ring_degree: u32, modulus: u64) -> Result<f64> {
    if !(sigma > 0.0) || ring_degree < 1 || modulus < 1 {
        return Err(Error::Domain("sigma, N, q must all be positive".into()));
    }
    let n = ring_degree as f64;
    let base = sigma * n.sqrt() / modulus as f64;
    Ok((2.0 / n * base.ln()).exp())
}

/// Sieve cost `0.292 * beta` in log2, soft-O factors fixed to 1.
pub fn sieve_log2_cost(beta: u32) -> Result<Log2Quantity> {
    if beta < 1 {
        return Err(Error::Domain("blocksize must be >= 1".into()));
    }
    Log2Quantity::cost(0.292 * beta as f64)
}

fn gh_delta(beta: f64) -> f64 {
    // (beta/(2 pi e) * (pi beta)^(1/beta))^(1/(2(beta-1)))
    let two_pi_e = 2.0 * PI * std::f64::consts::E;
    (beta / two_pi_e * (PI * beta).powf(1.0 / beta)).powf(1.0 / (2.0 * (beta - 1.0)))
}

/// Minimal blocksize beta in [50, 2^20] achieving root Hermite factor at
/// most `delta`, i.e. the smallest beta with
/// `delta >= (beta/(2 pi e) (pi beta)^(1/beta))^(1/(2(beta-1)))`,
/// located by bisection on the monotone relation.
pub fn blocksize_for_delta(delta: f64) -> Result<u32> {
    if !(delta > 1.0) {
        return Err(Error::Domain(format!(
            "blocksize derivation needs delta > 1, got {delta}; sub-unity \
             deltas are a literal-model artifact and get flagged upstream"
        )));
    }
    if gh_delta(MIN_BLOCKSIZE as f64) <= delta {
        return Ok(MIN_BLOCKSIZE);
    }
    if gh_delta(MAX_BLOCKSIZE as f64) > delta {
        return Err(Error::Evaluation(format!(
            "no blocksize up to {MAX_BLOCKSIZE} reaches delta {delta}"
        )));
    }
    let mut lo = MIN_BLOCKSIZE; // gh(lo) > delta
    let mut hi = MAX_BLOCKSIZE; // gh(hi) <= delta
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if gh_delta(mid as f64) <= delta {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// dim = 2N, log2 det = N log2 q (determinant q^N), shortest length from
/// the Gaussian heuristic `sqrt(dim/(2 pi e)) * det^(1/dim)` (note
/// `det^(1/dim) = sqrt(q)` exactly), delta from [`root_hermite`].
pub fn estimate_ntru_shape(params: &NtruParams) -> Result<LatticeShape> {
    params.validate()?;
    let n = params.ring_degree as f64;
    let dim = 2.0 * n;
    let log2_det = n * (params.modulus as f64).log2();
    let det_root = (params.modulus as f64).sqrt();
    let lambda1 = (dim / (2.0 * PI * std::f64::consts::E)).sqrt() * det_root;
    Ok(LatticeShape {
        dim: 2 * params.ring_degree,
        log2_det,
        lambda1,
        delta: root_hermite(params.sigma, params.ring_degree, params.modulus)?,
    })
}

fn decoherence_floor_log2(modulus: u64, env: &QuantumEnvironment) -> f64 {
    // (tau_d/tau_g) * ln(q/eps); ln by the e-folding derivation, reported
    // as a log2 operation count.
    (env.lambda_d() * (modulus as f64 / env.epsilon()).ln()).log2()
}

struct LatticeTerm {
    log2: Option<f64>,
    blocksize: Option<u32>,
    flags: Vec<NtruFlag>,
}

fn lattice_term(
    shape: &LatticeShape,
    params: &NtruParams,
    env: &QuantumEnvironment,
    mode: CostModel,
) -> LatticeTerm {
    let mut flags = Vec::new();
    match mode {
        CostModel::PaperLiteral => {
            let log2_delta = shape.delta.log2();
            if log2_delta <= 0.0 {
                flags.push(NtruFlag::LatticeTermUndefined);
                return LatticeTerm {
                    log2: None,
                    blocksize: None,
                    flags,
                };
            }
            let n = params.ring_degree as f64;
            let inner = n * (params.modulus as f64).log2() / log2_delta;
            let log2 = PI * env.lambda_d() / 2.0f64.sqrt() * inner.sqrt() / LN_2;
            LatticeTerm {
                log2: Some(log2),
                blocksize: None,
                flags,
            }
        }
        CostModel::BkzBlocksize => {
            let mut delta = shape.delta;
            if delta <= 1.0 {
                flags.push(NtruFlag::DeltaNotAboveOne);
                delta = 1.0 / delta;
            }
            if delta <= 1.0 + 1e-9 {
                flags.push(NtruFlag::DeltaFloored);
                delta = 1.0 + 1e-9;
            }
            match blocksize_for_delta(delta) {
                Ok(beta) => {
                    // Single-coherence-window decoherence charge, matching
                    // the per-evaluation form the height optimizer uses.
                    let log2 = 0.292 * beta as f64 - env.gate_ratio() / LN_2;
                    LatticeTerm {
                        log2: Some(log2),
                        blocksize: Some(beta),
                        flags,
                    }
                }
                Err(_) => {
                    flags.push(NtruFlag::BlocksizeUnsatisfiable);
                    LatticeTerm {
                        log2: None,
                        blocksize: None,
                        flags,
                    }
                }
            }
        }
    }
}

/// Evaluates the three hardness terms for a parameter set and reports the
/// conservative achieved level (see [`NtruReport`]).
pub fn ntru_hardness(
    params: &NtruParams,
    env: &QuantumEnvironment,
    mode: CostModel,
) -> Result<NtruReport> {
    params.validate()?;
    let shape = estimate_ntru_shape(params)?;
    let term_keyspace_log2 = params.ring_degree as f64 * (params.modulus as f64).log2() / 2.0;
    let term_decoherence_log2 = decoherence_floor_log2(params.modulus, env);
    let lattice = lattice_term(&shape, params, env, mode);
    let mut flags = lattice.flags;

    let achieved_lambda = match lattice.log2 {
        Some(l) => l.min(term_keyspace_log2),
        None => term_keyspace_log2,
    }
    .max(0.0);
    if term_decoherence_log2 < achieved_lambda {
        flags.push(NtruFlag::DecoherenceFloorBelowTarget);
    }
    let hq_bits = quantum_lattice_entropy_bound(&shape, params.sigma, env)?;
    Ok(NtruReport {
        params: *params,
        shape,
        term_lattice_log2: lattice.log2,
        term_keyspace_log2,
        term_decoherence_log2,
        achieved_lambda,
        hq_bits,
        cost_model: mode,
        blocksize: lattice.blocksize,
        flags,
    })
}

/// Security-level map: the minimum of
/// `pi * lambda_d * sqrt(N log2 q) / sqrt(2 ln(1/eps))`,
/// `N log2 q / 2`, and the self-referential decoherence floor
/// `lambda_d * lambda * ln 2`, resolved by fixed-point iteration from
/// `lambda_0 = N log2 q / 2`. Logs base 2 except `ln(1/eps)`.
pub fn security_mapping(
    ring_degree: u32,
    modulus: u64,
    env: &QuantumEnvironment,
    eps: f64,
) -> Result<f64> {
    if ring_degree < 1 || modulus < 3 {
        return Err(Error::Domain("need N >= 1 and q >= 3".into()));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("eps must be in (0,1), got {eps}")));
    }
    let n = ring_degree as f64;
    let nlogq = n * (modulus as f64).log2();
    let t1 = PI * env.lambda_d() * nlogq.sqrt() / (2.0 * (1.0 / eps).ln()).sqrt();
    let t2 = nlogq / 2.0;
    let mut lambda = t2;
    for _ in 0..100 {
        let t3 = env.lambda_d() * lambda * LN_2;
        let next = t1.min(t2).min(t3);
        if (next - lambda).abs() <= 1e-9 * lambda.abs().max(1.0) {
            return Ok(next);
        }
        lambda = next;
    }
    Err(Error::NonTermination(format!(
        "security mapping fixed point did not converge; last iterate {lambda}"
    )))
}

/// Closed-form lower bound on the quantum lattice entropy in bits:
/// `(pi lambda1^2 / sigma^2)/ln 2 - log2 det - (dim * lambda1 / lambda_d)/ln 2`.
pub fn quantum_lattice_entropy_bound(
    shape: &LatticeShape,
    sigma: f64,
    env: &QuantumEnvironment,
) -> Result<f64> {
    shape.validate()?;
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::Domain(format!(
            "sigma must be finite > 0, got {sigma}"
        )));
    }
    let gaussian = PI * shape.lambda1 * shape.lambda1 / (sigma * sigma) / LN_2;
    let decoherence = if env.tau_d().is_infinite() {
        0.0
    } else {
        shape.dim as f64 * shape.lambda1 / env.lambda_d() / LN_2
    };
    Ok(gaussian - shape.log2_det - decoherence)
}

/// Attenuation model for the exact entropy oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Attenuation {
    /// `exp(-||v|| dim / (lambda_d lambda1))` — the defining form.
    ExpNormRatio,
    /// `1 - exp(-||v||^2 / (lambda_d^2 dim))` — the alternative refinement,
    /// kept behind this flag for comparison.
    OneMinusExpSq,
}

/// Exact quantum lattice entropy by exhaustive enumeration (dimension <= 6):
/// `-log2 max_v rho_sigma(v) * attenuation(v) / det` over nonzero vectors
/// within `radius`, with `lambda1` taken from the same enumeration.
/// Use `2 * max row norm` as the radius to guarantee coverage.
pub fn quantum_lattice_entropy_exact(
    lat: &IntegerLattice,
    sigma: f64,
    env: &QuantumEnvironment,
    radius: f64,
) -> Result<f64> {
    quantum_lattice_entropy_exact_with(lat, sigma, env, radius, Attenuation::ExpNormRatio)
}

/// [`quantum_lattice_entropy_exact`] with an explicit attenuation model.
pub fn quantum_lattice_entropy_exact_with(
    lat: &IntegerLattice,
    sigma: f64,
    env: &QuantumEnvironment,
    radius: f64,
    attenuation: Attenuation,
) -> Result<f64> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::Domain(format!(
            "sigma must be finite > 0, got {sigma}"
        )));
    }
    let shortest = shortest_vector_enum(lat, radius)?;
    let lambda1 = shortest.lambda1;
    let dim = lat.dim() as f64;
    let log2_det = (lat.det_abs() as f64).log2();
    let lambda_d = env.lambda_d();
    let mut max_log2_term = f64::NEG_INFINITY;
    lat.enumerate_nonzero(radius, |_, nsq| {
        let norm_sq = nsq as f64;
        let norm = norm_sq.sqrt();
        let log2_rho = -PI * norm_sq / (sigma * sigma) / LN_2;
        let log2_atten = match attenuation {
            Attenuation::ExpNormRatio => {
                if lambda_d.is_infinite() {
                    0.0
                } else {
                    -(norm * dim / (lambda_d * lambda1)) / LN_2
                }
            }
            Attenuation::OneMinusExpSq => {
                if lambda_d.is_infinite() {
                    0.0
                } else {
                    (-(-norm_sq / (lambda_d * lambda_d * dim)).exp()).ln_1p() / LN_2
                }
            }
        };
        let log2_term = log2_rho + log2_atten - log2_det;
        if log2_term > max_log2_term {
            max_log2_term = log2_term;
        }
    })?;
    Ok(-max_log2_term)
}

/// Distinguishing advantage transferred through the dimension-`d` reduction:
/// `eps^2 / (c * d^3)`, negligible term dropped.
pub fn lwe_reduction_advantage(eps: f64, d: u32, c: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::Domain(format!(
            "advantage must be in [0,1], got {eps}"
        )));
    }
    if d < 1 {
        return Err(Error::Domain("dimension must be >= 1".into()));
    }
    if !(c > 0.0) {
        return Err(Error::Domain(format!("constant must be > 0, got {c}")));
    }
    let d = d as f64;
    Ok(eps * eps / (c * d * d * d))
}

/// Entropy-to-cost map: log2 cost `c * hq_bits` under base-2 bookkeeping.
pub fn entropy_to_complexity(hq_bits: f64, c: f64) -> Result<Log2Quantity> {
    if !hq_bits.is_finite() {
        return Err(Error::Domain(format!(
            "entropy must be finite, got {hq_bits}"
        )));
    }
    if !(c > 0.0) {
        return Err(Error::Domain(format!("constant must be > 0, got {c}")));
    }
    Log2Quantity::cost(c * hq_bits)
}

/// Whether `N log2 q >= 2 lambda + log2(sigma sqrt(N) / q)` holds.
pub fn ntru_parameter_bound_holds(params: &NtruParams, lambda: u32) -> Result<bool> {
    params.validate()?;
    let n = params.ring_degree as f64;
    let q = params.modulus as f64;
    let lhs = n * q.log2();
    let rhs = 2.0 * lambda as f64 + (params.sigma * n.sqrt() / q).log2();
    Ok(lhs >= rhs)
}

/// Deterministic Miller-Rabin, exact for all u64 inputs.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Smallest prime `p >= x` with `p = 3 (mod 8)`.
pub fn next_prime_3mod8(x: u64) -> Result<u64> {
    if x < 2 {
        return Err(Error::Domain(format!("start must be >= 2, got {x}")));
    }
    // First candidate congruent to 3 mod 8 at or above x.
    let mut candidate = x + ((3 + 8 - (x % 8)) % 8);
    loop {
        if candidate >= 1u64 << 63 {
            return Err(Error::Range(format!(
                "prime search from {x} left the supported range at {candidate}"
            )));
        }
        if is_prime_u64(candidate) {
            return Ok(candidate);
        }
        candidate += 8;
    }
}

/// Largest prime <= x.
fn next_prime_below_or_at(x: u64) -> Result<u64> {
    let mut candidate = x;
    while candidate >= 2 {
        if is_prime_u64(candidate) {
            return Ok(candidate);
        }
        candidate -= 1;
    }
    Err(Error::Domain(format!("no prime at or below {x}")))
}

/// Smallest prime >= x (any residue), for the prime degree schedule.
fn next_prime(x: u64) -> Result<u64> {
    let mut candidate = x.max(2);
    loop {
        if candidate >= 1u64 << 63 {
            return Err(Error::Range(format!(
                "prime search from {x} left the supported range at {candidate}"
            )));
        }
        if is_prime_u64(candidate) {
            return Ok(candidate);
        }
        candidate += 1;
    }
}

/// Tunables for [`optimize_ntru`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NtruOptimizerOptions {
    /// Seed modulus: fixes the degree computation before q is chosen, and
    /// starts the modulus schedule.
    pub q0: u64,
    /// Modulus growth ratio per step.
    pub r_q: f64,
}

impl Default for NtruOptimizerOptions {
    fn default() -> Self {
        Self { q0: 2048, r_q: 2.0 }
    }
}

const NTRU_ITERATION_CAP: u64 = 1_000_000;

/// Runs the ring parameter search: degree from `d = ceil(2 lambda / log2 q0)`
/// and the schedule, `sigma = sqrt(lambda ln(1/eps) / (2 pi))`, key weights
/// `ceil(N/3)` / `floor(N/3)`, modulus a prime congruent to 3 mod 8
/// exceeding `4 sigma sqrt(N ln(1/eps) / pi)`. Each round evaluates delta,
/// blocksize, sieve cost, and the mode's quantum cost, then doubles the
/// degree per the schedule and grows the modulus by `r_q` until the cost
/// reaches `lambda` or the modulus budget runs out (an explicit
/// increase-lambda outcome, never silent). The literal model also applies
/// the sigma update `sqrt(N log2 q log2 delta)` where defined.
pub fn optimize_ntru(
    lambda: u32,
    eps: f64,
    max_modulus: u64,
    env: &QuantumEnvironment,
    mode: CostModel,
    schedule: NSchedule,
    opts: &NtruOptimizerOptions,
) -> Result<NtruOptimizeResult> {
    if lambda < 1 {
        return Err(Error::Domain("lambda must be >= 1".into()));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("eps must be in (0,1), got {eps}")));
    }
    if opts.q0 < 3 || max_modulus <= opts.q0 {
        return Err(Error::Domain(format!(
            "need 3 <= q0 < max_modulus, got q0={} max={max_modulus}",
            opts.q0
        )));
    }
    if !(opts.r_q > 1.0) || !opts.r_q.is_finite() {
        return Err(Error::Domain(format!(
            "modulus ratio must be > 1, got {}",
            opts.r_q
        )));
    }

    let lambda_f = lambda as f64;
    let ln_inv_eps = (1.0 / eps).ln();
    let initial_d = (2.0 * lambda_f / (opts.q0 as f64).log2()).ceil() as u32;
    let initial_n = match schedule {
        NSchedule::PowerOfTwo => 1u32 << (initial_d as f64).log2().floor() as u32,
        NSchedule::Prime => next_prime(initial_d as u64)? as u32,
    };
    let initial_sigma = (lambda_f * ln_inv_eps / (2.0 * PI)).sqrt();

    let mut n = initial_n;
    let mut sigma = initial_sigma;
    let modulus_floor = |n: u32, sigma: f64| -> u64 {
        let bound = 4.0 * sigma * (n as f64 * ln_inv_eps / PI).sqrt();
        bound.floor() as u64 + 1
    };
    let mut q = next_prime_3mod8(opts.q0.max(modulus_floor(n, sigma)))?;

    let mut iterations = 0u64;
    let mut accumulated_flags = Vec::new();
    let outcome;
    loop {
        iterations += 1;
        if iterations > NTRU_ITERATION_CAP {
            return Err(Error::NonTermination(format!(
                "optimizer state after {NTRU_ITERATION_CAP} iterations: N={n} q={q} sigma={sigma}"
            )));
        }
        let delta = root_hermite(sigma, n, q)?;
        let c_quant = loop_cost_log2(delta, n, env, mode);
        if c_quant >= lambda_f {
            outcome = OptimizeOutcome::Achieved;
            break;
        }
        if q >= max_modulus {
            accumulated_flags.push(NtruFlag::Unreachable);
            outcome = OptimizeOutcome::IncreaseLambda;
            break;
        }
        n = match schedule {
            NSchedule::PowerOfTwo => n.saturating_mul(2).min(MAX_RING_DEGREE),
            NSchedule::Prime => {
                let grown = next_prime(2 * n as u64)? as u32;
                if grown > MAX_RING_DEGREE {
                    // Stay prime while pinned at the cap.
                    next_prime_below_or_at(MAX_RING_DEGREE as u64)? as u32
                } else {
                    grown
                }
            }
        };
        let target = ((q as f64 * opts.r_q).ceil() as u64).max(modulus_floor(n, sigma));
        q = next_prime_3mod8(target)?;
        if mode == CostModel::PaperLiteral {
            // sigma <- sqrt(N log2 q log2 delta), undefined when delta < 1.
            let log2_delta = delta.log2();
            if log2_delta > 0.0 {
                sigma = (n as f64 * (q as f64).log2() * log2_delta).sqrt();
            } else if !accumulated_flags.contains(&NtruFlag::SigmaUpdateUndefined) {
                accumulated_flags.push(NtruFlag::SigmaUpdateUndefined);
            }
        }
    }

    let params = NtruParams {
        ring_degree: n,
        modulus: q,
        sigma,
        d_f: n.div_ceil(3),
        d_g: n / 3,
    };
    let mut report = ntru_hardness(&params, env, mode)?;
    for f in accumulated_flags {
        if !report.flags.contains(&f) {
            report.flags.push(f);
        }
    }
    Ok(NtruOptimizeResult {
        report,
        outcome,
        initial_d,
        initial_n,
        initial_sigma,
        iterations,
    })
}

/// The cost the optimizer loop compares against lambda, in log2.
fn loop_cost_log2(delta: f64, n: u32, env: &QuantumEnvironment, mode: CostModel) -> f64 {
    match mode {
        CostModel::PaperLiteral => {
            // T_sieve with beta = ceil(log2 2N), then the full
            // cost-times-decoherence product in log domain.
            let beta = (2.0 * n as f64).log2().ceil();
            let sieve_log2 = 0.292 * beta;
            let penalty = sieve_log2.exp2() * env.gate_ratio() / LN_2;
            sieve_log2 - penalty
        }
        CostModel::BkzBlocksize => {
            let mut d = delta;
            if d <= 1.0 {
                d = 1.0 / d;
            }
            if d <= 1.0 + 1e-9 {
                d = 1.0 + 1e-9;
            }
            match blocksize_for_delta(d) {
                Ok(beta) => 0.292 * beta as f64 - env.gate_ratio() / LN_2,
                Err(_) => f64::NEG_INFINITY,
            }
        }
    }
}
