//! `table2`: the stored reference comparison rows, their recomputed
//! reduction percentages, and a fresh estimator evaluation of each
//! optimized parameter set. Stored reference values are never replaced by
//! computed ones; the point is the side-by-side.

use serde::{Deserialize, Serialize};
use serde_json::json;

use pqforge_core::ntru::{entropy_to_complexity, ntru_hardness, CostModel, NtruParams};
use pqforge_core::sphincs::{
    collision_log2_probability, effective_h2, signature_size_estimate, SphincsParams,
};

use crate::args::{CliError, CliResult, ParsedArgs};
use crate::config::{OutputFormat, RunConfig};
use crate::report::{emit, sig4, Report};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReferenceRow {
    pub scheme: &'static str,
    pub parameter: &'static str,
    pub original: f64,
    pub optimized: f64,
    /// Reduction percentage as published in the reference comparison.
    pub reduction_percent: f64,
}

/// Reference comparison rows for the 128-bit security level, stored
/// verbatim. The optimized values are reference data: the optimizers in
/// this crate do not regenerate them (reports flag the gaps), so they are
/// compared, never overwritten.
pub fn reference_rows() -> Vec<ReferenceRow> {
    vec![
        ReferenceRow {
            scheme: "SPHINCS+",
            parameter: "hash size (bits)",
            original: 256.0,
            optimized: 214.0,
            reduction_percent: 16.4,
        },
        ReferenceRow {
            scheme: "SPHINCS+",
            parameter: "signature size (KB)",
            original: 8.0,
            optimized: 6.7,
            reduction_percent: 16.3,
        },
        ReferenceRow {
            scheme: "NTRU",
            parameter: "dimension N",
            original: 701.0,
            optimized: 634.0,
            reduction_percent: 9.6,
        },
        ReferenceRow {
            scheme: "NTRU",
            parameter: "modulus q",
            original: 8192.0,
            optimized: 6144.0,
            reduction_percent: 25.0,
        },
    ]
}

/// Reference NTRU key size (KB) with no computed counterpart; key encoding
/// is outside this tool's model.
pub const REFERENCE_NTRU_KEY_SIZE_KB: f64 = 1.1;
/// Reference lattice-entropy worked pair: entropy bits and the log2
/// operation count it maps to at the default exponent.
pub const REFERENCE_HQ_BITS: f64 = 380.0;

/// Stored-vs-recomputed reduction check, 0.1 percentage point tolerance.
pub fn validate_reference_rows() -> CliResult<Vec<f64>> {
    let mut recomputed = Vec::new();
    for row in reference_rows() {
        let pct = 100.0 * (row.original - row.optimized) / row.original;
        if (pct - row.reduction_percent).abs() > 0.1 {
            return Err(CliError::internal(format!(
                "reference row {} / {}: stored {}% vs recomputed {pct}%",
                row.scheme, row.parameter, row.reduction_percent
            )));
        }
        recomputed.push(pct);
    }
    Ok(recomputed)
}

pub fn run(args: &ParsedArgs, config: &RunConfig) -> CliResult<i32> {
    args.reject_unknown()?;
    let env = config.environment.build()?;
    let recomputed = validate_reference_rows()?;
    let rows = reference_rows();

    // Evaluate the optimized hash size under the entropy model at the
    // 128-bit level.
    let lambda = 128u32;
    let q = config.sphincs.query_budget;
    let n_opt = 214u32;
    let h2_opt =
        effective_h2(n_opt, lambda as f64).map_err(|e| CliError::internal(e.to_string()))?;
    let entropy_threshold = lambda as f64 + 2.0 * q.log2();
    let sphincs_params = SphincsParams {
        h: 203,
        d: 1,
        t: 1,
        n: n_opt,
        query_budget: q,
    };
    let collision = collision_log2_probability(&sphincs_params, h2_opt, q * env.tau_g(), &env)
        .map_err(|e| CliError::internal(e.to_string()))?;
    let sig_bytes = signature_size_estimate(&sphincs_params, config.sphincs.signature_calibration)
        .map_err(|e| CliError::internal(e.to_string()))?;

    let mut flags = Vec::new();
    if h2_opt < entropy_threshold {
        flags.push(format!(
            "optimized hash size {n_opt} gives H2 {} below the entropy threshold {}; \
             reference values are not regenerable from the optimizers and stay reference-only",
            sig4(h2_opt),
            sig4(entropy_threshold)
        ));
    }

    // Evaluate the optimized ring parameters under both cost models.
    let ntru_params = NtruParams {
        ring_degree: 634,
        modulus: 6144,
        sigma: 1.5,
        d_f: 212,
        d_g: 211,
    };
    let bkz = ntru_hardness(&ntru_params, &env, CostModel::BkzBlocksize)
        .map_err(|e| CliError::internal(e.to_string()))?;
    let literal = ntru_hardness(&ntru_params, &env, CostModel::PaperLiteral)
        .map_err(|e| CliError::internal(e.to_string()))?;
    let hq_gap = bkz.hq_bits - REFERENCE_HQ_BITS;
    flags.push(format!(
        "computed lattice-entropy bound {} bits vs reference {} bits (gap {}): \
         the reference derivation conventions are not stated, so the gap is surfaced, not hidden",
        sig4(bkz.hq_bits),
        REFERENCE_HQ_BITS,
        sig4(hq_gap)
    ));
    for f in &bkz.flags {
        flags.push(format!("ntru bkz-blocksize: {f:?}"));
    }
    let reference_complexity = entropy_to_complexity(REFERENCE_HQ_BITS, config.ntru.c_complexity)
        .map_err(|e| CliError::internal(e.to_string()))?;

    let results = json!({
        "rows": rows,
        "recomputed_reduction_percent": recomputed,
        "reference_ntru_key_size_kb": REFERENCE_NTRU_KEY_SIZE_KB,
        "computed": {
            "sphincs": {
                "effective_h2_bits": h2_opt,
                "entropy_threshold_bits": entropy_threshold,
                "collision_log2_prob": collision,
                "achieved_lambda": (-collision).max(0.0),
                "signature_size_bytes_at_reference_geometry": sig_bytes,
            },
            "ntru_bkz": bkz,
            "ntru_literal": literal,
            "reference_hq_bits": REFERENCE_HQ_BITS,
            "reference_hq_log2_complexity": reference_complexity.log2_value,
        },
    });

    let report = Report::new(
        config,
        results,
        flags.clone(),
        &[
            (
                "recomputed_reduction_percent",
                "100 (original - optimized) / original",
            ),
            ("effective_h2_bits", "n - sqrt(n lambda ln2 / 3)"),
            ("reference_hq_log2_complexity", "c * hq"),
        ],
    )?;

    let mut text = String::from(
        "reference comparison (128-bit level)\n  \
         scheme      parameter             original   optimized  stored%  recomputed%\n",
    );
    for (row, pct) in rows.iter().zip(recomputed.iter()) {
        text.push_str(&format!(
            "  {:<12}{:<22}{:<11}{:<11}{:<9}{}\n",
            row.scheme,
            row.parameter,
            sig4(row.original),
            sig4(row.optimized),
            sig4(row.reduction_percent),
            sig4(*pct),
        ));
    }
    text.push_str(&format!(
        "  reference NTRU key size: {REFERENCE_NTRU_KEY_SIZE_KB} KB (no computed counterpart)\n"
    ));
    text.push_str(&format!(
        "  computed: H2(214) = {} bits, ntru achieved (blocksize model) = {} bits, \
         HQ bound = {} bits vs reference {}\n",
        sig4(h2_opt),
        sig4(bkz.achieved_lambda),
        sig4(bkz.hq_bits),
        REFERENCE_HQ_BITS,
    ));
    for f in &flags {
        text.push_str(&format!("  note: {f}\n"));
    }

    let csv = {
        let mut out =
            String::from("scheme,parameter,original,optimized,stored_percent,recomputed_percent\n");
        for (row, pct) in rows.iter().zip(recomputed.iter()) {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                row.scheme, row.parameter, row.original, row.optimized, row.reduction_percent, pct
            ));
        }
        out
    };
    let rendered = match config.output.format {
        OutputFormat::Csv => csv,
        _ => text,
    };
    emit(&report, config, rendered)?;
    Ok(0)
}
