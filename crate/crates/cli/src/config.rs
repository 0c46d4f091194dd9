//! Run configuration: JSON file with strict unknown-key rejection,
//! overridden field-by-field by CLI flags. Precedence: defaults, then the
//! config file (`--config` or the `PQFORGE_CONFIG` environment variable),
//! then flags.

use serde::{Deserialize, Serialize};

use pqforge_core::ntru::{CostModel, NSchedule};
use pqforge_core::quantum::QuantumEnvironment;
use pqforge_core::sphincs::default_signature_calibration;

use crate::args::{CliError, CliResult, ParsedArgs};

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub environment: EnvironmentConfig,
    pub sphincs: SphincsConfig,
    pub ntru: NtruConfig,
    pub oracle: OracleConfig,
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnvironmentConfig {
    pub tau_g: f64,
    pub tau_d: f64,
    pub k: u64,
    pub epsilon: f64,
}

impl Default for EnvironmentConfig {
    fn default() -> Self {
        // Nanosecond gates, millisecond coherence: decoherence length 1e6.
        Self {
            tau_g: 1e-9,
            tau_d: 1e-3,
            k: 1,
            epsilon: (-128.0f64).exp2(),
        }
    }
}

impl EnvironmentConfig {
    pub fn build(&self) -> CliResult<QuantumEnvironment> {
        QuantumEnvironment::new(self.tau_g, self.tau_d, self.k, self.epsilon)
            .map_err(|e| CliError::usage(format!("environment: {e}")))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SphincsConfig {
    pub lambda: u32,
    pub max_depth: u32,
    pub query_budget: f64,
    pub step_h: u32,
    pub signature_calibration: f64,
    pub tweak_cap: u64,
}

impl Default for SphincsConfig {
    fn default() -> Self {
        Self {
            lambda: 128,
            max_depth: 8,
            query_budget: (64.0f64).exp2(),
            step_h: 1,
            signature_calibration: default_signature_calibration(),
            tweak_cap: 64,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NtruConfig {
    pub lambda: u32,
    pub eps: f64,
    pub max_modulus: u64,
    pub cost_mode: CostModel,
    /// When absent, the mode picks: prime degrees for the blocksize model,
    /// powers of two for the literal model.
    pub n_schedule: Option<NSchedule>,
    pub q0: u64,
    pub r_q: f64,
    /// Constant in the reduction-advantage map.
    pub c_reduction: f64,
    /// Exponent in the entropy-to-complexity map.
    pub c_complexity: f64,
}

impl Default for NtruConfig {
    fn default() -> Self {
        Self {
            lambda: 128,
            eps: (-40.0f64).exp2(),
            max_modulus: 1u64 << 40,
            cost_mode: CostModel::BkzBlocksize,
            n_schedule: None,
            q0: 2048,
            r_q: 2.0,
            c_reduction: 1.0,
            c_complexity: pqforge_core::ntru::DEFAULT_COMPLEXITY_EXPONENT,
        }
    }
}

impl NtruConfig {
    pub fn schedule(&self) -> NSchedule {
        self.n_schedule.unwrap_or(match self.cost_mode {
            CostModel::PaperLiteral => NSchedule::PowerOfTwo,
            CostModel::BkzBlocksize => NSchedule::Prime,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OracleConfig {
    pub seed: u64,
    pub trials: u64,
    pub sweep_domain: usize,
    pub sweep_range: usize,
    pub t_grid: Vec<f64>,
    pub collision_qs: Vec<usize>,
    pub collision_domain: usize,
    pub collision_range: usize,
    pub lattice_count: u32,
    /// Test hook: overrides the concentration constant in the emitted
    /// bound column. The verifier cross-checks the column against the
    /// canonical constant and fails when they diverge.
    pub concentration_constant: Option<f64>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            seed: 0x5EED_C0DE,
            trials: 10_000,
            sweep_domain: 4096,
            sweep_range: 256,
            t_grid: vec![0.25, 0.5, 1.0, 2.0],
            collision_qs: vec![2, 4, 8, 16],
            collision_domain: 4096,
            collision_range: 256,
            lattice_count: 50,
            concentration_constant: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Text,
    Csv,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub format: OutputFormat,
    pub path: Option<String>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            format: OutputFormat::Text,
            path: None,
        }
    }
}

/// Loads defaults, then the config file if any, then the global flags.
pub fn load_config(args: &ParsedArgs) -> CliResult<RunConfig> {
    let path = args
        .get("config")
        .map(str::to_string)
        .or_else(|| std::env::var("PQFORGE_CONFIG").ok());
    let mut config = match path {
        Some(p) => {
            let raw = std::fs::read_to_string(&p)
                .map_err(|e| CliError::usage(format!("cannot read config {p}: {e}")))?;
            serde_json::from_str::<RunConfig>(&raw)
                .map_err(|e| CliError::usage(format!("config {p}: {e}")))?
        }
        None => RunConfig::default(),
    };
    if let Some(seed) = args.get_u64("seed")? {
        config.oracle.seed = seed;
    }
    if let Some(fmt) = args.get("format") {
        config.output.format = match fmt {
            "json" => OutputFormat::Json,
            "text" => OutputFormat::Text,
            "csv" => OutputFormat::Csv,
            other => return Err(CliError::usage(format!("unknown format {other}"))),
        };
    }
    if let Some(path) = args.get("output") {
        config.output.path = Some(path.to_string());
    }
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_rejects_unknown_keys() {
        let bad = r#"{"environment": {"tau_g": 1.0, "warp": 9}}"#;
        assert!(serde_json::from_str::<RunConfig>(bad).is_err());
        let good = r#"{"environment": {"tau_g": 2.0}}"#;
        let c: RunConfig = serde_json::from_str(good).unwrap();
        assert_eq!(c.environment.tau_g, 2.0);
        assert_eq!(c.environment.k, 1);
    }

    #[test]
    fn schedule_follows_mode() {
        let mut c = NtruConfig::default();
        assert_eq!(c.schedule(), NSchedule::Prime);
        c.cost_mode = CostModel::PaperLiteral;
        assert_eq!(c.schedule(), NSchedule::PowerOfTwo);
        c.n_schedule = Some(NSchedule::Prime);
        assert_eq!(c.schedule(), NSchedule::Prime);
    }
}
