use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use scqc::design::{
    default_zz_duration, synthesize_swap_ancilla_pulse, synthesize_zz_half_pulse, zz_half_curves, CostWeights,
    DesignConfig, OptimizerConfig, PulseAnsatz, DEFAULT_DESIGN_STEPS,
};
use scqc::io::{write_curve_csv, write_pulse_csv};

use super::protocol::SwapDriveConfig;
use crate::run::{parse_config, Outcome, RunContext};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Target {
    #[default]
    ZzHalf,
    SwapAncilla,
}

/// Durations in units of `1/χ`. The seed comes from `--seed`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Config {
    #[serde(default)]
    target: Target,
    #[serde(default = "one")]
    chi: f64,
    /// ZZ-half duration; the swap ancilla uses `swap.duration`.
    #[serde(default)]
    duration: Option<f64>,
    #[serde(default = "default_budget")]
    budget: usize,
    #[serde(default = "default_restarts")]
    restarts: usize,
    #[serde(default = "default_step")]
    step: f64,
    #[serde(default = "default_order")]
    order: usize,
    #[serde(default = "default_steps")]
    n_steps: usize,
    #[serde(default)]
    weights: CostWeights,
    #[serde(default)]
    initial: Option<Vec<f64>>,
    #[serde(default)]
    swap: SwapDriveConfig,
}

fn one() -> f64 {
    1.0
}

fn default_budget() -> usize {
    OptimizerConfig::new(0).budget
}

fn default_restarts() -> usize {
    OptimizerConfig::new(0).restarts
}

fn default_step() -> f64 {
    OptimizerConfig::new(0).step
}

fn default_order() -> usize {
    PulseAnsatz::DEFAULT_ORDER
}

fn default_steps() -> usize {
    DEFAULT_DESIGN_STEPS
}

pub fn run(mut ctx: RunContext, raw: &Value) -> anyhow::Result<Outcome> {
    let config: Config = parse_config(raw)?;
    ctx.set_config(&config)?;
    let chi = config.chi;
    let design = DesignConfig {
        optimizer: OptimizerConfig { seed: ctx.seed(), budget: config.budget, restarts: config.restarts, step: config.step },
        weights: config.weights,
        order: config.order,
        n_steps: config.n_steps,
        initial: config.initial.clone(),
    };

    let (pulse, report, verified, converged) = match config.target {
        Target::ZzHalf => {
            let duration = config.duration.map_or(default_zz_duration(chi), |d| d / chi);
            let d = synthesize_zz_half_pulse(chi, duration, &design)?;
            if let Some(p) = &d.pulse {
                let [plus, minus] = zz_half_curves(p, chi)?;
                write_curve_csv(&mut ctx.create("curve_plus.csv")?, &plus, &ctx.header())?;
                write_curve_csv(&mut ctx.create("curve_minus.csv")?, &minus, &ctx.header())?;
            }
            let (v, c) = (d.report.verified, d.report.converged);
            (d.pulse, serde_json::to_value(d.report)?, v, c)
        }
        Target::SwapAncilla => {
            if config.duration.is_some() {
                return Err(scqc::Error::InvalidParameter("swap_ancilla takes its duration from swap.duration".into()).into());
            }
            let d = synthesize_swap_ancilla_pulse(&config.swap.drive(chi)?, chi, &design)?;
            let (v, c) = (d.report.verified, d.report.converged);
            (d.pulse, serde_json::to_value(d.report)?, v, c)
        }
    };
    if let Some(p) = &pulse {
        write_pulse_csv(&mut ctx.create("pulse.csv")?, p, &ctx.header())?;
    }
    let passed = converged && verified;
    let summary = ctx.write_json("design_report.json", json!({ "target": config.target, "report": report, "passed": passed }))?;
    Ok(Outcome { summary, passed })
}
