//! Command-line front end.
//!
//! Exit codes are a stable contract: 0 success, 2 usage error, 3 the
//! optimizer asked for a larger lambda, 4 iteration-cap abort, 5
//! verification failure.

mod args;
mod bounds;
mod cmd_entropy;
mod cmd_optimize;
mod cmd_table2;
mod cmd_verify;
mod config;
mod report;

use args::{CliError, CliResult, ParsedArgs};
use config::{load_config, OutputFormat};
use report::{sig4, text_table, Report};

const USAGE: &str = "\
pqforge - quantum-adversary security estimation and parameter optimization

USAGE:
  pqforge <command> [options]

COMMANDS:
  entropy      Renyi entropies and advantage bounds for a distribution
               --dist <p1,p2,...|uniform:N|@file> [--alpha <list>] [--normalize true]
  optimize     Run a parameter search
               optimize sphincs [--lambda N] [--max-depth N] [--query-budget Q] [--step-h N]
               optimize ntru [--lambda N] [--eps E] [--max-modulus Q] [--mode bkz-blocksize|paper-literal]
                             [--schedule power-of-two|prime] [--q0 N] [--r-q F]
  table2       Stored reference comparison rows plus fresh estimator evaluation
  verify       Oracle suite: concentration sweep (CSV artifact), collision
               frequencies, lattice entropy ordering  [--trials N] [--csv PATH]
  bound        Evaluate one named bound, e.g.:
               bound decoherence-floor --lambda 128 --lambda-d 1e6
               bound collision-cost --m 256
               bound lwe-advantage --eps 1 --d 2 --c 1

GLOBAL OPTIONS:
  --config PATH    JSON config (or PQFORGE_CONFIG); unknown keys rejected
  --output PATH    Write the report to PATH instead of stdout
  --format FMT     json | text | csv
  --seed N         Oracle seed override

EXIT CODES:
  0 success, 2 usage, 3 increase-lambda, 4 non-termination, 5 verification failure
";

fn dispatch() -> CliResult<i32> {
    let raw: Vec<String> = std::env::args().skip(1).collect();
    if raw.is_empty() {
        eprint!("{USAGE}");
        return Ok(2);
    }
    if raw[0] == "--help" || raw[0] == "help" || raw[0] == "-h" {
        print!("{USAGE}");
        return Ok(0);
    }
    let parsed = ParsedArgs::parse(&raw)?;
    let mut config = load_config(&parsed)?;
    let command = parsed
        .positionals
        .first()
        .ok_or_else(|| CliError::usage("no command given"))?
        .clone();
    match command.as_str() {
        "entropy" => cmd_entropy::run(&parsed, &config),
        "optimize" => cmd_optimize::run(&parsed, &mut config),
        "table2" => cmd_table2::run(&parsed, &config),
        "verify" => cmd_verify::run(&parsed, &mut config),
        "bound" => run_bound(&parsed, &config),
        other => Err(CliError::usage(format!(
            "unknown command {other}; see pqforge --help"
        ))),
    }
}

fn run_bound(parsed: &ParsedArgs, config: &config::RunConfig) -> CliResult<i32> {
    let name = parsed
        .positionals
        .get(1)
        .ok_or_else(|| {
            CliError::usage(format!(
                "bound needs a name; available: {}",
                bounds::BOUND_NAMES.join(", ")
            ))
        })?
        .clone();
    let out = bounds::evaluate(&name, parsed)?;
    parsed.reject_unknown()?;
    let results = serde_json::json!({
        "name": name,
        "value": out.value,
        "units": out.units,
        "detail": out.extra,
    });
    let report = Report::new(config, results, vec![], &[("value", out.anchor)])?;
    let text = text_table(
        &format!("bound {name}"),
        &[
            (
                "value".to_string(),
                format!("{} {}", sig4(out.value), out.units),
            ),
            ("formula".to_string(), out.anchor.to_string()),
        ],
    );
    match config.output.format {
        OutputFormat::Json => report::emit(&report, config, String::new())?,
        _ => report::emit(&report, config, text)?,
    }
    Ok(0)
}

fn main() {
    let code = match dispatch() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    };
    std::process::exit(code);
}
