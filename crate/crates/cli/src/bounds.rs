//! Named-bound registry behind `pqforge bound <name>`: one entry per
//! closed-form estimate, each printing value, units, and its formula.

use serde_json::json;

use pqforge_core::entropy::{
    entropy_security_advantage, entropy_security_advantage_refined, min_required_entropy,
    EntropyOrder,
};
use pqforge_core::ntru::{
    blocksize_for_delta, entropy_to_complexity, lwe_reduction_advantage, ntru_hardness,
    ntru_parameter_bound_holds, quantum_lattice_entropy_bound, security_mapping, sieve_log2_cost,
    CostModel, LatticeShape, NtruParams,
};
use pqforge_core::quantum::{
    collision_search_log2_cost, entropy_loss_bound, grover_log2_cost, lattice_success_decay,
    max_feasible_dimension, min_queries_for_error, quantum_advantage_bound, quantum_lower_bound,
    quantum_walk_cost, QuantumEnvironment, QueryComplexityInput,
};
use pqforge_core::sphincs::{
    collision_log2_probability, concentration_tail_with_constant, effective_h2,
    entropy_margin_with_constant, h_opt, height_floor_bound, sphincs_quantum_cost, SphincsParams,
};

use crate::args::{CliError, CliResult, ParsedArgs};

pub struct BoundOutput {
    pub value: f64,
    pub units: &'static str,
    pub anchor: &'static str,
    pub extra: serde_json::Value,
}

pub const BOUND_NAMES: &[&str] = &[
    "decoherence-floor",
    "quantum-lower-bound",
    "entropy-advantage",
    "entropy-advantage-refined",
    "min-entropy-requirement",
    "entropy-loss",
    "grover-cost",
    "collision-cost",
    "quantum-walk",
    "collision-bound",
    "concentration-tail",
    "entropy-margin",
    "effective-h2",
    "h-opt",
    "sphincs-cost",
    "height-bound",
    "sig-proxy",
    "root-hermite",
    "sieve-cost",
    "blocksize",
    "ntru-hardness",
    "security-mapping",
    "lattice-entropy-bound",
    "lwe-advantage",
    "entropy-complexity",
    "ntru-bound",
    "quantum-advantage",
    "lattice-decay",
    "max-dimension",
];

fn env_from_args(args: &ParsedArgs, default_eps: f64) -> CliResult<QuantumEnvironment> {
    let tau_g = args.get_f64("tau-g")?.unwrap_or(1.0);
    let lambda_d = args.get_f64("lambda-d")?.unwrap_or(1e6);
    let tau_d = args.get_f64("tau-d")?.unwrap_or(tau_g * lambda_d);
    let k = args.get_u64("k")?.unwrap_or(1);
    let epsilon = args.get_f64("eps-env")?.unwrap_or(default_eps);
    QuantumEnvironment::new(tau_g, tau_d, k, epsilon)
        .map_err(|e| CliError::usage(format!("environment: {e}")))
}

fn core_err(e: pqforge_core::Error) -> CliError {
    CliError::usage(e.to_string())
}

pub fn evaluate(name: &str, args: &ParsedArgs) -> CliResult<BoundOutput> {
    match name {
        "decoherence-floor" => {
            // eps defaults to 2^-lambda when --lambda is given.
            let eps = match args.get_f64("eps")? {
                Some(e) => e,
                None => {
                    let lambda = args.require_u32("lambda")?;
                    (-(lambda as f64)).exp2()
                }
            };
            let env = env_from_args(args, eps)?;
            let v = min_queries_for_error(eps, &env).map_err(core_err)?;
            Ok(BoundOutput {
                value: v,
                units: "operations",
                anchor: "(tau_d/tau_g) * ln(1/eps)",
                extra: json!({}),
            })
        }
        "quantum-lower-bound" => {
            let input = QueryComplexityInput {
                deg_eps: args.get_f64("deg")?.unwrap_or(1.0),
                sparsity: args.get_f64("sparsity")?.unwrap_or(1.0),
                domain_size_log2: args.require_f64("domain-bits")?,
                epsilon: args.get_f64("eps")?.unwrap_or(0.01),
            };
            let env = env_from_args(args, 0.01)?;
            let v = quantum_lower_bound(&input, &env).map_err(core_err)?;
            Ok(BoundOutput {
                value: v.linear(),
                units: "queries",
                anchor:
                    "max(((1-2eps)^2/deg) * (domain_bits - log2 spar), (tau_d/tau_g) ln(1/eps))",
                extra: json!({"log2": v.log2_value}),
            })
        }
        "entropy-advantage" => {
            let h2 = args.require_f64("h2")?;
            let v = entropy_security_advantage(h2).map_err(core_err)?;
            Ok(BoundOutput {
                value: v,
                units: "probability",
                anchor: "sqrt(2^-h2)",
                extra: json!({"log2": -h2 / 2.0}),
            })
        }
        "entropy-advantage-refined" => {
            let h = args.require_f64("h32")?;
            let r = args.require_f64("range-bits")?;
            let v = entropy_security_advantage_refined(h, r).map_err(core_err)?;
            Ok(BoundOutput {
                value: v,
                units: "probability",
                anchor: "sqrt(1 - 2^-h32 * 2^(-range_bits/2))",
                extra: json!({}),
            })
        }
        "min-entropy-requirement" => {
            let alpha = args.get_f64("alpha")?.unwrap_or(2.0);
            let lambda = args.require_u32("lambda")?;
            let q = args.get_f64("q")?.unwrap_or((64.0f64).exp2());
            let env = env_from_args(args, 0.01)?;
            let v = min_required_entropy(EntropyOrder::Finite(alpha), lambda, q, &env)
                .map_err(core_err)?;
            Ok(BoundOutput {
                value: v,
                units: "bits",
                anchor: "lambda + log2((alpha/(alpha-1)) q^2) - (tau_g/tau_d) lambda ln2",
                extra: json!({}),
            })
        }
        "entropy-loss" => {
            let k = args.get_u64("k-parallel")?.unwrap_or(1);
            let bits = args.require_f64("domain-bits")?;
            let env = env_from_args(args, 0.01)?;
            let v = entropy_loss_bound(k, &env, bits).map_err(core_err)?;
            Ok(BoundOutput {
                value: v,
                units: "bits",
                anchor: "(k tau_g / tau_d) * domain_bits",
                extra: json!({}),
            })
        }
        "grover-cost" => {
            let n = args.require_u32("n")?;
            let v = grover_log2_cost(n).map_err(core_err)?;
            Ok(BoundOutput {
                value: v.log2_value,
                units: "log2 queries",
                anchor: "n/2",
                extra: json!({}),
            })
        }
        "collision-cost" => {
            let m = args.require_u32("m")?;
            let v = collision_search_log2_cost(m).map_err(core_err)?;
            Ok(BoundOutput {
                value: v.log2_value,
                units: "log2 queries",
                anchor: "m/3",
                extra: json!({}),
            })
        }
        "quantum-walk" => {
            let v = quantum_walk_cost(
                args.require_f64("setup")?,
                args.get_f64("update")?.unwrap_or(1.0),
                args.get_f64("check")?.unwrap_or(1.0),
                args.get_f64("delta")?.unwrap_or(1.0),
                args.get_f64("eps")?.unwrap_or(1.0),
            )
            .map_err(core_err)?;
            Ok(BoundOutput {
                value: v,
                units: "queries",
                anchor: "S + (1/sqrt(eps)) (U/sqrt(delta) + C)",
                extra: json!({}),
            })
        }
        "collision-bound" => {
            let params = SphincsParams {
                h: args.get_u32("h")?.unwrap_or(64),
                d: args.get_u32("d")?.unwrap_or(1),
                t: args.get_u64("t")?.unwrap_or(1),
                n: args.require_u32("n")?,
                query_budget: args.require_f64("q")?,
            };
            let h2 = args.require_f64("h2")?;
            let time = args.get_f64("attack-time")?.unwrap_or(0.0);
            let env = env_from_args(args, 0.01)?;
            let v = collision_log2_probability(&params, h2, time, &env).map_err(core_err)?;
            Ok(BoundOutput {
                value: v,
                units: "log2 probability",
                anchor: "log2[C(q,2) (2^-h2 + 3^(k/2) 2^(-n/2))] - (t/tau_d)/ln2",
                extra: json!({"linear": v.exp2()}),
            })
        }
        "concentration-tail" => {
            let b = args.require_u32("b")?;
            let t = args.require_f64("t")?;
            let c = args.get_f64("constant")?.unwrap_or(3.0);
            let v = concentration_tail_with_constant(b, t, c).map_err(core_err)?;
            Ok(BoundOutput {
                value: v,
                units: "probability",
                anchor: "exp(-c t^2 / b)",
                extra: json!({}),
            })
        }
        "entropy-margin" => {
            let b = args.require_u32("b")?;
            let lambda = args.require_f64("lambda")?;
            let c = args.get_f64("constant")?.unwrap_or(3.0);
            let v = entropy_margin_with_constant(b, lambda, c).map_err(core_err)?;
            Ok(BoundOutput {
                value: v,
                units: "bits",
                anchor: "sqrt(b lambda ln2 / c)",
                extra: json!({}),
            })
        }
        "effective-h2" => {
            let n = args.require_u32("n")?;
            let lambda = args.require_f64("lambda")?;
            let v = effective_h2(n, lambda).map_err(core_err)?;
            Ok(BoundOutput {
                value: v,
                units: "bits",
                anchor: "n - sqrt(n lambda ln2 / 3)",
                extra: json!({}),
            })
        }
        "h-opt" => {
            let lambda = args.require_u32("lambda")?;
            let q = args.require_f64("q")?;
            let n = args.require_u32("n")?;
            let v = h_opt(lambda, q, n).map_err(core_err)?;
            Ok(BoundOutput {
                value: v as f64,
                units: "height",
                anchor: "min h with H2(h,n) >= lambda + log2(1.5 q^2)",
                extra: json!({}),
            })
        }
        "sphincs-cost" => {
            let h = args.require_u32("h")?;
            let env = env_from_args(args, 0.01)?;
            let v = sphincs_quantum_cost(h, &env).map_err(core_err)?;
            Ok(BoundOutput {
                value: v.log2_value,
                units: "log2 operations",
                anchor: "min(h/2, h/3) - (tau_g/tau_d)/ln2",
                extra: json!({}),
            })
        }
        "height-bound" => {
            let lambda = args.require_u32("lambda")?;
            let env = env_from_args(args, 0.01)?;
            let v = height_floor_bound(lambda, &env).map_err(core_err)?;
            Ok(BoundOutput {
                value: v,
                units: "height",
                anchor: "(3/2) lambda + log2((tau_g/tau_d) ln2)",
                extra: json!({}),
            })
        }
        "sig-proxy" => {
            let params = SphincsParams {
                h: args.require_u32("h")?,
                d: args.get_u32("d")?.unwrap_or(1),
                t: args.get_u64("t")?.unwrap_or(1),
                n: args.require_u32("n")?,
                query_budget: 0.0,
            };
            let cal = args
                .get_f64("calibration")?
                .unwrap_or_else(pqforge_core::sphincs::default_signature_calibration);
            let v =
                pqforge_core::sphincs::signature_size_estimate(&params, cal).map_err(core_err)?;
            Ok(BoundOutput {
                value: v,
                units: "bytes",
                anchor: "cal * (h n/8 + t log2(max(t,2)) n/8)",
                extra: json!({"kib": v / 1024.0}),
            })
        }
        "root-hermite" => {
            let v = pqforge_core::ntru::root_hermite(
                args.require_f64("sigma")?,
                args.require_u32("ring-degree")?,
                args.require_u64("q")?,
            )
            .map_err(core_err)?;
            Ok(BoundOutput {
                value: v,
                units: "factor",
                anchor: "(sigma sqrt(N) / q)^(2/N)",
                extra: json!({}),
            })
        }
        "sieve-cost" => {
            let beta = args.require_u32("beta")?;
            let v = sieve_log2_cost(beta).map_err(core_err)?;
            Ok(BoundOutput {
                value: v.log2_value,
                units: "log2 operations",
                anchor: "0.292 beta",
                extra: json!({}),
            })
        }
        "blocksize" => {
            let delta = args.require_f64("delta")?;
            let v = blocksize_for_delta(delta).map_err(core_err)?;
            Ok(BoundOutput {
                value: v as f64,
                units: "blocksize",
                anchor: "min beta >= 50 with delta >= (beta/(2 pi e) (pi beta)^(1/beta))^(1/(2(beta-1)))",
                extra: json!({}),
            })
        }
        "ntru-hardness" => {
            let params = NtruParams {
                ring_degree: args.require_u32("ring-degree")?,
                modulus: args.require_u64("q")?,
                sigma: args.require_f64("sigma")?,
                d_f: 0,
                d_g: 0,
            };
            let mode = parse_mode(args)?;
            let env = env_from_args(args, (-128.0f64).exp2())?;
            let report = ntru_hardness(&params, &env, mode).map_err(core_err)?;
            Ok(BoundOutput {
                value: report.achieved_lambda,
                units: "bits",
                anchor: "min(defined cost exponents); decoherence floor reported separately",
                extra: serde_json::to_value(&report)
                    .map_err(|e| CliError::internal(e.to_string()))?,
            })
        }
        "security-mapping" => {
            let env = env_from_args(args, (-128.0f64).exp2())?;
            let v = security_mapping(
                args.require_u32("ring-degree")?,
                args.require_u64("q")?,
                &env,
                args.get_f64("eps")?.unwrap_or((-128.0f64).exp2()),
            )
            .map_err(core_err)?;
            Ok(BoundOutput {
                value: v,
                units: "bits",
                anchor: "min(pi lambda_d sqrt(N log2 q)/sqrt(2 ln(1/eps)), N log2 q / 2, lambda_d lambda ln2)",
                extra: json!({}),
            })
        }
        "lattice-entropy-bound" => {
            let shape = LatticeShape {
                dim: args.require_u32("dim")?,
                log2_det: args.require_f64("log2-det")?,
                lambda1: args.require_f64("lambda1")?,
                delta: args.get_f64("delta")?.unwrap_or(1.0),
            };
            let sigma = args.require_f64("sigma")?;
            let env = env_from_args(args, 0.01)?;
            let v = quantum_lattice_entropy_bound(&shape, sigma, &env).map_err(core_err)?;
            Ok(BoundOutput {
                value: v,
                units: "bits",
                anchor: "(pi lambda1^2/sigma^2)/ln2 - log2_det - (dim lambda1/lambda_d)/ln2",
                extra: json!({}),
            })
        }
        "lwe-advantage" => {
            let v = lwe_reduction_advantage(
                args.require_f64("eps")?,
                args.require_u32("d")?,
                args.get_f64("c")?.unwrap_or(1.0),
            )
            .map_err(core_err)?;
            Ok(BoundOutput {
                value: v,
                units: "advantage",
                anchor: "eps^2 / (c d^3)",
                extra: json!({}),
            })
        }
        "entropy-complexity" => {
            let hq = args.require_f64("hq")?;
            let c = args
                .get_f64("c")?
                .unwrap_or(pqforge_core::ntru::DEFAULT_COMPLEXITY_EXPONENT);
            let v = entropy_to_complexity(hq, c).map_err(core_err)?;
            Ok(BoundOutput {
                value: v.log2_value,
                units: "log2 operations",
                anchor: "c * hq",
                extra: json!({}),
            })
        }
        "ntru-bound" => {
            let params = NtruParams {
                ring_degree: args.require_u32("ring-degree")?,
                modulus: args.require_u64("q")?,
                sigma: args.require_f64("sigma")?,
                d_f: 0,
                d_g: 0,
            };
            let lambda = args.require_u32("lambda")?;
            let holds = ntru_parameter_bound_holds(&params, lambda).map_err(core_err)?;
            Ok(BoundOutput {
                value: if holds { 1.0 } else { 0.0 },
                units: "boolean",
                anchor: "N log2 q >= 2 lambda + log2(sigma sqrt(N) / q)",
                extra: json!({"holds": holds}),
            })
        }
        "quantum-advantage" => {
            let env = env_from_args(args, 0.01)?;
            let v = quantum_advantage_bound(args.require_f64("t")?, &env, args.require_u32("dim")?)
                .map_err(core_err)?;
            Ok(BoundOutput {
                value: v,
                units: "log2 ratio",
                anchor: "(T tau_g/tau_d) (log2 dim / dim) / ln2",
                extra: json!({}),
            })
        }
        "lattice-decay" => {
            let env = env_from_args(args, 0.01)?;
            let v = lattice_success_decay(
                args.get_f64("p0")?.unwrap_or(1.0),
                args.require_f64("time")?,
                &env,
                args.require_u32("dim")?,
            )
            .map_err(core_err)?;
            Ok(BoundOutput {
                value: v,
                units: "probability",
                anchor: "p0 exp(-(t/tau_d) dim/log2 dim)",
                extra: json!({}),
            })
        }
        "max-dimension" => {
            let env = env_from_args(args, 0.01)?;
            let v =
                max_feasible_dimension(&env, args.require_u32("lambda")?, args.require_f64("p0")?)
                    .map_err(core_err)?;
            Ok(BoundOutput {
                value: v as f64,
                units: "dimension",
                anchor: "floor((tau_d/tau_g) (log2 lambda / lambda) log2(1/p0))",
                extra: json!({}),
            })
        }
        other => Err(CliError::usage(format!(
            "unknown bound `{other}`; available: {}",
            BOUND_NAMES.join(", ")
        ))),
    }
}

fn parse_mode(args: &ParsedArgs) -> CliResult<CostModel> {
    match args.get("mode") {
        None => Ok(CostModel::BkzBlocksize),
        Some("bkz-blocksize") => Ok(CostModel::BkzBlocksize),
        Some("paper-literal") => Ok(CostModel::PaperLiteral),
        Some(other) => Err(CliError::usage(format!(
            "unknown mode {other}; expected bkz-blocksize or paper-literal"
        ))),
    }
}
