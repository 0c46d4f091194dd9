//! `optimize sphincs|ntru`: runs the selected parameter search and writes
//! the full report. Exit 0 on success, 3 when the search exhausts its
//! modulus budget (raise lambda), 4 on an iteration-cap abort.

use serde_json::json;

use pqforge_core::ntru::{
    optimize_ntru, CostModel, NSchedule, NtruOptimizerOptions, OptimizeOutcome,
};
use pqforge_core::sphincs::{optimize_sphincs, SphincsOptimizerOptions};
use pqforge_core::Error as CoreError;

use crate::args::{CliError, CliResult, ParsedArgs};
use crate::config::RunConfig;
use crate::report::{emit_with_table, sig4, text_table, Report};

pub fn run(args: &ParsedArgs, config: &mut RunConfig) -> CliResult<i32> {
    let scheme = args
        .positionals
        .get(1)
        .ok_or_else(|| CliError::usage("optimize needs a scheme: sphincs or ntru"))?
        .clone();
    match scheme.as_str() {
        "sphincs" => run_sphincs(args, config),
        "ntru" => run_ntru(args, config),
        other => Err(CliError::usage(format!(
            "unknown scheme {other}; expected sphincs or ntru"
        ))),
    }
}

fn run_sphincs(args: &ParsedArgs, config: &mut RunConfig) -> CliResult<i32> {
    if let Some(v) = args.get_u32("lambda")? {
        config.sphincs.lambda = v;
    }
    if let Some(v) = args.get_u32("max-depth")? {
        config.sphincs.max_depth = v;
    }
    if let Some(v) = args.get_f64("query-budget")? {
        config.sphincs.query_budget = v;
    }
    if let Some(v) = args.get_u32("step-h")? {
        config.sphincs.step_h = v;
    }
    if let Some(v) = args.get_f64("signature-calibration")? {
        config.sphincs.signature_calibration = v;
    }
    args.reject_unknown()?;

    let env = config.environment.build()?;
    let opts = SphincsOptimizerOptions {
        max_depth: config.sphincs.max_depth,
        query_budget: config.sphincs.query_budget,
        step_h: config.sphincs.step_h,
        signature_calibration: config.sphincs.signature_calibration,
        tweak_cap: config.sphincs.tweak_cap,
    };
    let outcome = optimize_sphincs(config.sphincs.lambda, &env, &opts);
    let r = match outcome {
        Ok(r) => r,
        Err(CoreError::NonTermination(msg)) => {
            eprintln!("optimizer did not terminate: {msg}");
            return Ok(4);
        }
        Err(e) => return Err(CliError::usage(e.to_string())),
    };

    let results = serde_json::to_value(&r).map_err(|e| CliError::internal(e.to_string()))?;
    let report = Report::new(
        config,
        json!({"scheme": "sphincs", "report": results}),
        r.notes.clone(),
        &[
            ("cost_log2", "min(h/2, h/3) - (tau_g/tau_d)/ln2"),
            (
                "collision_log2_prob",
                "log2[C(q,2) (2^-h2 + 3^(k/2) 2^(-n/2))] - (t/tau_d)/ln2",
            ),
            ("h2_effective", "h - sqrt(h lambda ln2 / 3)"),
            (
                "signature_size_bytes",
                "cal * (h n/8 + t log2(max(t,2)) n/8)",
            ),
            ("initial_h", "ceil(lambda log2 3)"),
        ],
    )?;
    let rows = vec![
        ("lambda".to_string(), config.sphincs.lambda.to_string()),
        ("initial h".to_string(), r.initial_h.to_string()),
        ("height h".to_string(), r.params.h.to_string()),
        ("depth d".to_string(), r.params.d.to_string()),
        ("tweak t".to_string(), r.params.t.to_string()),
        ("hash bits n".to_string(), r.params.n.to_string()),
        (
            "H2 effective".to_string(),
            format!("{} bits", sig4(r.h2_effective)),
        ),
        ("cost log2".to_string(), sig4(r.cost_log2)),
        ("achieved lambda".to_string(), sig4(r.achieved_lambda)),
        (
            "signature size".to_string(),
            format!(
                "{} B ({} KiB)",
                sig4(r.signature_size_bytes),
                sig4(r.signature_size_bytes / 1024.0)
            ),
        ),
        ("binding".to_string(), format!("{:?}", r.binding_constraint)),
        ("iterations".to_string(), r.iterations.to_string()),
    ];
    emit_with_table(&report, config, text_table("optimize sphincs", &rows))?;
    Ok(0)
}

fn run_ntru(args: &ParsedArgs, config: &mut RunConfig) -> CliResult<i32> {
    if let Some(v) = args.get_u32("lambda")? {
        config.ntru.lambda = v;
    }
    if let Some(v) = args.get_f64("eps")? {
        config.ntru.eps = v;
    }
    if let Some(v) = args.get_u64("max-modulus")? {
        config.ntru.max_modulus = v;
    }
    if let Some(v) = args.get_u64("q0")? {
        config.ntru.q0 = v;
    }
    if let Some(v) = args.get_f64("r-q")? {
        config.ntru.r_q = v;
    }
    if let Some(mode) = args.get("mode") {
        config.ntru.cost_mode = match mode {
            "bkz-blocksize" => CostModel::BkzBlocksize,
            "paper-literal" => CostModel::PaperLiteral,
            other => {
                return Err(CliError::usage(format!(
                    "unknown mode {other}; expected bkz-blocksize or paper-literal"
                )))
            }
        };
    }
    if let Some(schedule) = args.get("schedule") {
        config.ntru.n_schedule = Some(match schedule {
            "power-of-two" => NSchedule::PowerOfTwo,
            "prime" => NSchedule::Prime,
            other => {
                return Err(CliError::usage(format!(
                    "unknown schedule {other}; expected power-of-two or prime"
                )))
            }
        });
    }
    args.reject_unknown()?;

    let env = config.environment.build()?;
    let opts = NtruOptimizerOptions {
        q0: config.ntru.q0,
        r_q: config.ntru.r_q,
    };
    let outcome = optimize_ntru(
        config.ntru.lambda,
        config.ntru.eps,
        config.ntru.max_modulus,
        &env,
        config.ntru.cost_mode,
        config.ntru.schedule(),
        &opts,
    );
    let r = match outcome {
        Ok(r) => r,
        Err(CoreError::NonTermination(msg)) => {
            eprintln!("optimizer did not terminate: {msg}");
            return Ok(4);
        }
        Err(e) => return Err(CliError::usage(e.to_string())),
    };

    let flags: Vec<String> = r
        .report
        .flags
        .iter()
        .map(|f| {
            serde_json::to_value(f)
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_else(|| format!("{f:?}"))
        })
        .chain(match r.outcome {
            OptimizeOutcome::IncreaseLambda => Some("increase-lambda".to_string()),
            OptimizeOutcome::Achieved => None,
        })
        .collect();

    let results = serde_json::to_value(&r).map_err(|e| CliError::internal(e.to_string()))?;
    let report = Report::new(
        config,
        json!({"scheme": "ntru", "report": results}),
        flags,
        &[
            ("term_lattice_log2", "sieve 0.292 beta (blocksize model) or (pi lambda_d/sqrt2) sqrt(N log2 q / log2 delta)/ln2 (literal)"),
            ("term_keyspace_log2", "N log2 q / 2"),
            ("term_decoherence_log2", "log2((tau_d/tau_g) ln(q/eps))"),
            ("hq_bits", "(pi lambda1^2/sigma^2)/ln2 - log2_det - (dim lambda1/lambda_d)/ln2"),
            ("achieved_lambda", "min of defined cost exponents; decoherence floor reported separately"),
        ],
    )?;

    let rep = &r.report;
    let rows = vec![
        ("lambda".to_string(), config.ntru.lambda.to_string()),
        ("mode".to_string(), format!("{:?}", rep.cost_model)),
        ("outcome".to_string(), format!("{:?}", r.outcome)),
        (
            "ring degree N".to_string(),
            rep.params.ring_degree.to_string(),
        ),
        ("modulus q".to_string(), rep.params.modulus.to_string()),
        ("sigma".to_string(), sig4(rep.params.sigma)),
        ("delta".to_string(), format!("{:.6}", rep.shape.delta)),
        (
            "lattice term".to_string(),
            rep.term_lattice_log2
                .map(sig4)
                .unwrap_or_else(|| "undefined".into()),
        ),
        ("keyspace term".to_string(), sig4(rep.term_keyspace_log2)),
        (
            "decoherence floor".to_string(),
            sig4(rep.term_decoherence_log2),
        ),
        ("achieved lambda".to_string(), sig4(rep.achieved_lambda)),
        (
            "HQ bound".to_string(),
            format!("{} bits", sig4(rep.hq_bits)),
        ),
        ("flags".to_string(), format!("{:?}", rep.flags)),
        ("iterations".to_string(), r.iterations.to_string()),
    ];
    emit_with_table(&report, config, text_table("optimize ntru", &rows))?;
    Ok(match r.outcome {
        OptimizeOutcome::Achieved => 0,
        OptimizeOutcome::IncreaseLambda => 3,
    })
}
