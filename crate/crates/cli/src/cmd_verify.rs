//! `verify`: drives the Monte Carlo and enumeration oracles against the
//! closed-form bounds and exits 5 on the first broken comparison.
//!
//! Four check groups:
//!  1. concentration sweep — the emitted bound column must match the
//!     canonical tail form (catches a tampered constant) and dominate the
//!     empirical tail at every grid point; the CSV artifact is written out.
//!  2. margin ratio — the constant-3 margin over the constant-2 margin is
//!     sqrt(2/3), an 18.35% reduction, inside the expected 15-20% band.
//!  3. collision frequency — Monte Carlo tracks the exact birthday product
//!     within 3 binomial standard errors and stays under the closed-form
//!     collision bound.
//!  4. lattice entropy — exhaustive-enumeration entropy dominates the
//!     closed-form lower bound on seeded random lattices.

use serde_json::json;

use pqforge_core::lattice::IntegerLattice;
use pqforge_core::ntru::{
    quantum_lattice_entropy_bound, quantum_lattice_entropy_exact, LatticeShape,
};
use pqforge_core::oracle::{
    concentration_sweep_with, empirical_collision_frequency, exact_birthday_collision_probability,
    shortest_vector_enum, SeedStream,
};
use pqforge_core::quantum::QuantumEnvironment;
use pqforge_core::sphincs::{
    collision_log2_probability, entropy_margin_with_constant, SphincsParams,
};

use crate::args::{CliError, CliResult, ParsedArgs};
use crate::config::RunConfig;
use crate::report::{emit, Report};

#[derive(Debug, serde::Serialize)]
struct Check {
    name: String,
    pass: bool,
    detail: serde_json::Value,
}

pub fn run(args: &ParsedArgs, config: &mut RunConfig) -> CliResult<i32> {
    if let Some(v) = args.get_u64("trials")? {
        config.oracle.trials = v;
    }
    if let Some(v) = args.get_f64("hook-concentration-constant")? {
        config.oracle.concentration_constant = Some(v);
    }
    let csv_path = args
        .get("csv")
        .map(str::to_string)
        .unwrap_or_else(|| "concentration_sweep.csv".to_string());
    args.reject_unknown()?;

    let mut checks: Vec<Check> = Vec::new();
    let oracle = &config.oracle;

    // Group 1: concentration sweep.
    let b_bits = (oracle.sweep_range as f64).log2();
    let constant = oracle.concentration_constant.unwrap_or(3.0);
    let sweep = concentration_sweep_with(
        oracle.sweep_domain,
        oracle.sweep_range,
        oracle.trials,
        &oracle.t_grid,
        oracle.seed,
        b_bits,
        constant,
    )
    .map_err(|e| CliError::usage(e.to_string()))?;
    std::fs::write(&csv_path, sweep.to_csv())
        .map_err(|e| CliError::internal(format!("cannot write {csv_path}: {e}")))?;

    let empirical = sweep.empirical_tail();
    for (i, &t) in sweep.t_grid.iter().enumerate() {
        let canonical = (-3.0 * t * t / b_bits).exp();
        let column_ok = (sweep.bound_tail[i] - canonical).abs() <= 1e-12 * canonical.max(1e-300);
        checks.push(Check {
            name: format!("concentration-bound-column t={t}"),
            pass: column_ok,
            detail: json!({
                "emitted_bound": sweep.bound_tail[i],
                "canonical_bound": canonical,
            }),
        });
        let dominated = empirical[i] <= canonical;
        checks.push(Check {
            name: format!("concentration-domination t={t}"),
            pass: dominated,
            detail: json!({
                "empirical_tail": empirical[i],
                "bound_tail": canonical,
                "trials": sweep.trials,
            }),
        });
    }

    // Group 2: improved-constant margin ratio.
    let improved = entropy_margin_with_constant(256, 128.0, 3.0)
        .map_err(|e| CliError::internal(e.to_string()))?;
    let classical = entropy_margin_with_constant(256, 128.0, 2.0)
        .map_err(|e| CliError::internal(e.to_string()))?;
    let ratio = improved / classical;
    let expected = (2.0f64 / 3.0).sqrt();
    let reduction_pct = 100.0 * (1.0 - ratio);
    checks.push(Check {
        name: "margin-ratio".into(),
        pass: (ratio - expected).abs() < 1e-9 && (15.0..=20.0).contains(&reduction_pct),
        detail: json!({
            "ratio": ratio,
            "expected": expected,
            "reduction_percent": reduction_pct,
        }),
    });

    // Group 3: collision frequencies vs birthday product and closed bound.
    let ideal = QuantumEnvironment::new(1.0, f64::INFINITY, 1, 0.01)
        .map_err(|e| CliError::internal(e.to_string()))?;
    let range_bits = (oracle.collision_range as f64).log2();
    let mut master = SeedStream::new(oracle.seed ^ 0xB1A5);
    for &q in &oracle.collision_qs {
        let seed = master.next_u64();
        let emp = empirical_collision_frequency(
            oracle.collision_domain,
            oracle.collision_range,
            q,
            oracle.trials,
            seed,
        )
        .map_err(|e| CliError::usage(e.to_string()))?;
        let exact = exact_birthday_collision_probability(q as u64, oracle.collision_range as u64)
            .map_err(|e| CliError::internal(e.to_string()))?;
        let sigma = (exact * (1.0 - exact) / oracle.trials as f64).sqrt();
        checks.push(Check {
            name: format!("collision-frequency q={q}"),
            pass: (emp - exact).abs() <= 3.0 * sigma,
            detail: json!({
                "empirical": emp,
                "exact_birthday": exact,
                "three_sigma": 3.0 * sigma,
            }),
        });
        let params = SphincsParams {
            h: 64,
            d: 1,
            t: 1,
            n: range_bits as u32,
            query_budget: q as f64,
        };
        let bound = collision_log2_probability(&params, range_bits, 0.0, &ideal)
            .map_err(|e| CliError::internal(e.to_string()))?
            .exp2();
        let emp_sigma = (emp * (1.0 - emp) / oracle.trials as f64).sqrt();
        checks.push(Check {
            name: format!("collision-bound-domination q={q}"),
            pass: bound >= emp - 3.0 * emp_sigma,
            detail: json!({
                "bound": bound,
                "empirical": emp,
            }),
        });
    }

    // Group 4: lattice entropy ordering on seeded random lattices.
    let mut stream = SeedStream::new(oracle.seed ^ 0x1A77);
    let mut built = 0u32;
    let mut ordering_ok = true;
    let mut ordering_detail = json!({});
    while built < oracle.lattice_count {
        let dim = 2 + (stream.next_below(3) as usize);
        let basis: Vec<Vec<i64>> = (0..dim)
            .map(|_| (0..dim).map(|_| stream.next_below(11) as i64 - 5).collect())
            .collect();
        let Ok(lat) = IntegerLattice::new(basis.clone()) else {
            continue;
        };
        built += 1;
        let radius = 2.0 * lat.max_row_norm();
        let sv =
            shortest_vector_enum(&lat, radius).map_err(|e| CliError::internal(e.to_string()))?;
        for (sigma, lambda_d) in [(0.5, 10.0), (1.0, 1e6), (2.0, 10.0)] {
            let env = QuantumEnvironment::from_lambda_d(lambda_d, 1, 0.01)
                .map_err(|e| CliError::internal(e.to_string()))?;
            let exact = quantum_lattice_entropy_exact(&lat, sigma, &env, radius)
                .map_err(|e| CliError::internal(e.to_string()))?;
            let shape = LatticeShape::from_enumeration(&lat, sv.lambda1);
            let bound = quantum_lattice_entropy_bound(&shape, sigma, &env)
                .map_err(|e| CliError::internal(e.to_string()))?;
            if exact < bound - 1e-9 {
                ordering_ok = false;
                ordering_detail = json!({
                    "basis": basis,
                    "sigma": sigma,
                    "lambda_d": lambda_d,
                    "exact": exact,
                    "bound": bound,
                });
            }
        }
    }
    checks.push(Check {
        name: format!("lattice-entropy-ordering x{}", oracle.lattice_count),
        pass: ordering_ok,
        detail: ordering_detail,
    });

    // Hand-value pin: dimension-2 identity, sigma 1, ideal machine.
    let id2 = IntegerLattice::new(vec![vec![1, 0], vec![0, 1]])
        .map_err(|e| CliError::internal(e.to_string()))?;
    let hand = quantum_lattice_entropy_exact(&id2, 1.0, &ideal, 4.0)
        .map_err(|e| CliError::internal(e.to_string()))?;
    let expected_hand = std::f64::consts::PI / std::f64::consts::LN_2;
    checks.push(Check {
        name: "lattice-entropy-hand-value".into(),
        pass: (hand - expected_hand).abs() < 1e-9,
        detail: json!({"computed": hand, "expected": expected_hand}),
    });

    let all_pass = checks.iter().all(|c| c.pass);
    let failing: Vec<&Check> = checks.iter().filter(|c| !c.pass).collect();
    let results = json!({
        "checks": checks.iter().map(|c| json!({
            "name": c.name, "pass": c.pass, "detail": c.detail,
        })).collect::<Vec<_>>(),
        "csv_artifact": csv_path,
        "all_pass": all_pass,
    });
    let mut flags = Vec::new();
    if config.oracle.concentration_constant.is_some() {
        flags.push(format!(
            "concentration constant overridden to {constant} via test hook"
        ));
    }
    let report = Report::new(
        config,
        results,
        flags,
        &[
            (
                "concentration",
                "exp(-3 t^2 / b) vs empirical Pr[H2 <= log2|Y| - t]",
            ),
            (
                "margin-ratio",
                "sqrt(b lambda ln2/3) / sqrt(b lambda ln2/2) = sqrt(2/3)",
            ),
            (
                "collision",
                "1 - prod(1 - i/R) vs Monte Carlo vs C(q,2)(2^-h2 + 3^(k/2) 2^(-n/2))",
            ),
            (
                "lattice-entropy",
                "-log2 max rho_sigma(v) atten(v)/det >= closed-form lower bound",
            ),
        ],
    )?;

    let mut text = String::from("verify\n");
    for c in &checks {
        text.push_str(&format!(
            "  {}  {}\n",
            if c.pass { "PASS" } else { "FAIL" },
            c.name
        ));
    }
    text.push_str(&format!("  csv artifact: {csv_path}\n"));
    if !all_pass {
        for c in &failing {
            text.push_str(&format!(
                "  failing comparison: {}\n",
                serde_json::to_string(&json!({"name": c.name, "detail": c.detail}))
                    .unwrap_or_default()
            ));
        }
    }
    emit(&report, config, text)?;
    Ok(if all_pass { 0 } else { 5 })
}
