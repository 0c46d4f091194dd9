//! `entropy` subcommand: Rényi entropies of a supplied distribution plus
//! the advantage bounds they imply.

use serde_json::json;

use pqforge_core::entropy::{
    entropy_security_advantage, entropy_security_advantage_refined, renyi_entropy, Distribution,
    EntropyOrder,
};

use crate::args::{parse_f64, CliError, CliResult, ParsedArgs};
use crate::config::{OutputFormat, RunConfig};
use crate::report::{emit, sig4, text_table, Report};

/// Distribution spec: `0.5,0.25,0.25`, `uniform:16`, or `@file` with one
/// probability per line (or comma lists). Parse errors carry line numbers.
fn parse_dist(spec: &str, normalize: bool) -> CliResult<Distribution> {
    if let Some(m) = spec.strip_prefix("uniform:") {
        let m: usize = m
            .parse()
            .map_err(|_| CliError::usage(format!("uniform:{m} is not a support size")))?;
        return Distribution::uniform(m).map_err(|e| CliError::usage(e.to_string()));
    }
    let values: Vec<f64> = if let Some(path) = spec.strip_prefix('@') {
        let raw = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read {path}: {e}")))?;
        let mut values = Vec::new();
        for (lineno, line) in raw.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            for field in line.split(',') {
                let field = field.trim();
                if field.is_empty() {
                    continue;
                }
                let v = parse_f64(field)
                    .map_err(|e| CliError::usage(format!("{path}:{}: {e}", lineno + 1)))?;
                values.push(v);
            }
        }
        values
    } else {
        let mut values = Vec::new();
        for field in spec.split(',') {
            let v = parse_f64(field.trim()).map_err(|e| CliError::usage(format!("--dist: {e}")))?;
            values.push(v);
        }
        values
    };
    let built = if normalize {
        Distribution::normalized(values)
    } else {
        Distribution::new(values)
    };
    built.map_err(|e| CliError::usage(e.to_string()))
}

fn parse_orders(spec: Option<&str>) -> CliResult<Vec<(String, EntropyOrder)>> {
    let spec = spec.unwrap_or("shannon,2,inf");
    let mut orders = Vec::new();
    for field in spec.split(',') {
        let field = field.trim();
        let order = match field {
            "shannon" | "1" => EntropyOrder::Shannon,
            "inf" | "infinity" => EntropyOrder::Infinity,
            other => {
                let alpha =
                    parse_f64(other).map_err(|e| CliError::usage(format!("--alpha: {e}")))?;
                EntropyOrder::finite(alpha).map_err(|e| CliError::usage(e.to_string()))?
            }
        };
        orders.push((field.to_string(), order));
    }
    Ok(orders)
}

pub fn run(args: &ParsedArgs, config: &RunConfig) -> CliResult<i32> {
    let dist_spec = args
        .get("dist")
        .ok_or_else(|| CliError::usage("missing required --dist"))?
        .to_string();
    let normalize = args.get("normalize").map(|v| v == "true").unwrap_or(false);
    let orders = parse_orders(args.get("alpha"))?;
    args.reject_unknown()?;

    let dist = parse_dist(&dist_spec, normalize)?;
    let mut rows = Vec::new();
    let mut json_orders = Vec::new();
    for (label, order) in &orders {
        let bits = renyi_entropy(&dist, *order).map_err(|e| CliError::usage(e.to_string()))?;
        rows.push((format!("H[{label}]"), format!("{} bits", sig4(bits))));
        json_orders.push(json!({"order": label, "bits": bits}));
    }

    let h2 = renyi_entropy(&dist, EntropyOrder::Finite(2.0)).unwrap();
    let h32 = renyi_entropy(&dist, EntropyOrder::Finite(1.5)).unwrap();
    let range_bits = (dist.support_size() as f64).log2();
    let advantage = entropy_security_advantage(h2).map_err(|e| CliError::usage(e.to_string()))?;
    let refined = entropy_security_advantage_refined(h32, range_bits)
        .map_err(|e| CliError::usage(e.to_string()))?;
    rows.push(("advantage".into(), sig4(advantage)));
    rows.push(("advantage_refined".into(), sig4(refined)));

    let results = json!({
        "orders": json_orders,
        "support": dist.support_size(),
        "advantage": advantage,
        "advantage_refined": refined,
    });
    let report = Report::new(
        config,
        results,
        vec![],
        &[
            ("orders", "H_alpha = (1/(1-alpha)) log2 sum p_i^alpha"),
            ("advantage", "sqrt(2^-H2)"),
            ("advantage_refined", "sqrt(1 - 2^-H_1.5 * |range|^-1/2)"),
        ],
    )?;

    let text = match config.output.format {
        OutputFormat::Csv => {
            let mut out = String::from("order,bits\n");
            for (label, order) in &orders {
                let bits = renyi_entropy(&dist, *order).unwrap();
                out.push_str(&format!("{label},{bits}\n"));
            }
            out
        }
        _ => text_table("entropy", &rows),
    };
    emit(&report, config, text)?;
    Ok(0)
}
