use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use scqc::crosstalk::{crosstalk_sweep, square_pulse_pair, tangent_overlap_matrix};
use scqc::sim::{kron, pauli, propagate, Unitary, DEFAULT_STEPS};
use scqc::{crosstalk::two_qubit_crosstalk_hamiltonian, sim::gate_infidelity};

use crate::run::{parse_config, GridSpec, Outcome, RunContext};

/// Square-pulse pair over unit time; ξ in units of `1/T`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Config {
    #[serde(default = "pi")]
    kappa1: f64,
    #[serde(default = "three_pi")]
    kappa2: f64,
    #[serde(default = "default_xi")]
    xi: GridSpec,
    #[serde(default = "default_steps")]
    n_steps: usize,
    /// Fails the run (exit 1) when the fitted slope falls outside.
    #[serde(default)]
    expect_slope: Option<[f64; 2]>,
}

fn pi() -> f64 {
    PI
}

fn three_pi() -> f64 {
    3.0 * PI
}

fn default_xi() -> GridSpec {
    GridSpec::log(1e-3, 1e-1, 10)
}

fn default_steps() -> usize {
    DEFAULT_STEPS
}

pub fn run(mut ctx: RunContext, raw: &Value) -> anyhow::Result<Outcome> {
    let config: Config = parse_config(raw)?;
    ctx.set_config(&config)?;

    let pair = square_pulse_pair(config.kappa1, config.kappa2, config.n_steps)?;
    let target = propagate(&two_qubit_crosstalk_hamiltonian(&pair, 0.0), pair.grid())?;
    let xx = Unitary::new(kron(&pauli::x(), &pauli::x()))?;
    let table = crosstalk_sweep(&pair, &target, &config.xi.values())?;
    let overlap = tangent_overlap_matrix(&pair);

    let rows: Vec<Vec<f64>> = table.x.iter().zip(&table.y).map(|(x, y)| vec![*x, *y]).collect();
    ctx.write_table("crosstalk_sweep.csv", &[table.axis.clone(), table.quantity.clone()], &rows)?;

    let passed = config.expect_slope.map_or(true, |[lo, hi]| (lo..=hi).contains(&table.fit.slope));
    let summary = ctx.write_json(
        "crosstalk_sweep.json",
        json!({
            "fit": table.fit,
            "tangent_overlap_norm": overlap.norm(),
            "target_infidelity_vs_xx": gate_infidelity(target.matrix(), xx.matrix())?,
            "expect_slope": config.expect_slope,
            "passed": passed,
        }),
    )?;
    Ok(Outcome { summary, passed })
}
