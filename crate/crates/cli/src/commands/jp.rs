use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use scqc::dualrail::{DualRailParams, NoiseSample, Q4_STATES};
use scqc::protocols::{
    erasure_check_stats, joint_parity_native, single_shot_joint_parity, truncation_diagnostic, ErasureCheckStats,
    MeasurementRule, StateSpace, ThreeStepProtocol,
};
use scqc::sweep::{fit_loglog_slope, validate_grid};

use super::protocol::{StepKind, StepsConfig};
use crate::run::{parse_config, GridSpec, Outcome, RunContext};

const ZERO_NOISE_TOLERANCE: f64 = 1e-8;
const FULL_INPUTS: [(usize, usize); 6] = [(0, 1), (1, 0), (0, 0), (1, 1), (2, 0), (0, 2)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Arm {
    SingleShot,
    ThreeStep,
    NaiveThreeStep,
}

impl Arm {
    fn name(self) -> &'static str {
        match self {
            Arm::SingleShot => "single_shot",
            Arm::ThreeStep => "three_step",
            Arm::NaiveThreeStep => "naive_three_step",
        }
    }
}

/// Noise strengths in units of `χ`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Config {
    protocol: Arm,
    #[serde(default = "one")]
    chi: f64,
    #[serde(default = "default_n_max")]
    n_max: usize,
    #[serde(default = "default_gamma")]
    gamma: GridSpec,
    #[serde(default)]
    xi: Option<GridSpec>,
    #[serde(default = "default_compare")]
    compare_at: f64,
    #[serde(default)]
    measurement: MeasurementRule,
    #[serde(default)]
    steps: StepsConfig,
    #[serde(default)]
    baselines: Vec<Arm>,
}

fn one() -> f64 {
    1.0
}

fn default_n_max() -> usize {
    DualRailParams::DEFAULT_N_MAX
}

fn default_gamma() -> GridSpec {
    GridSpec::log(1e-3, 1e-1, 10)
}

fn default_compare() -> f64 {
    0.05
}

enum Simulator {
    SingleShot(DualRailParams),
    ThreeStep(ThreeStepProtocol),
}

impl Simulator {
    fn stats(&self, chi: f64, noise: &NoiseSample, rule: MeasurementRule) -> scqc::Result<ErasureCheckStats> {
        match self {
            Simulator::SingleShot(p) => {
                let u = if p.n_max >= 4 { single_shot_joint_parity(p, noise.gamma)? } else { joint_parity_native(p, noise.gamma)? };
                erasure_check_stats(u.matrix(), &StateSpace::Full(*p), &FULL_INPUTS, rule)
            }
            Simulator::ThreeStep(protocol) => {
                let jp = protocol.simulate(chi, noise)?;
                erasure_check_stats(jp.unitary.matrix(), &StateSpace::Q4, &Q4_STATES, rule)
            }
        }
    }

    fn feels_xi(&self) -> bool {
        matches!(self, Simulator::ThreeStep(_))
    }
}

fn stats_json(s: &ErasureCheckStats) -> Value {
    json!({ "false_erase": s.false_erase_prob, "missed_leak": s.missed_leak_prob, "worst_case": s.worst_case })
}

struct Sweep {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
    slopes: Map<String, Value>,
}

fn sweep(
    axis: &'static str,
    grid: &[f64],
    arms: &[(Arm, Simulator)],
    chi: f64,
    rule: MeasurementRule,
    warnings: &mut Vec<String>,
) -> anyhow::Result<Sweep> {
    validate_grid(grid)?;
    let mut columns = vec![axis.to_string()];
    let mut rows: Vec<Vec<f64>> = grid.iter().map(|x| vec![*x]).collect();
    let mut slopes = Map::new();
    for (arm, sim) in arms {
        let noise = |x: f64| match axis {
            "xi" => NoiseSample { gamma: 0.0, xi: x * chi },
            _ => NoiseSample { gamma: x * chi, xi: 0.0 },
        };
        let stats = grid.par_iter().map(|&x| sim.stats(chi, &noise(x), rule)).collect::<scqc::Result<Vec<_>>>()?;
        for field in ["false_erase", "missed_leak", "worst_case"] {
            columns.push(format!("{}_{field}", arm.name()));
        }
        for (row, s) in rows.iter_mut().zip(&stats) {
            row.extend([s.false_erase_prob, s.missed_leak_prob, s.worst_case]);
        }
        let worst: Vec<f64> = stats.iter().map(|s| s.worst_case).collect();
        let fit = match fit_loglog_slope(grid, &worst) {
            Ok(fit) => serde_json::to_value(fit)?,
            Err(e) => {
                warnings.push(format!("{} {axis} slope: {e}", arm.name()));
                Value::Null
            }
        };
        slopes.insert(arm.name().into(), fit);
    }
    Ok(Sweep { columns, rows, slopes })
}

pub fn run(mut ctx: RunContext, raw: &Value) -> anyhow::Result<Outcome> {
    let config: Config = parse_config(raw)?;
    ctx.set_config(&config)?;
    let chi = config.chi;
    let params = DualRailParams::new(chi, config.n_max)?;
    if !(config.compare_at.is_finite() && config.compare_at > 0.0) {
        return Err(scqc::Error::InvalidParameter(format!("compare_at must be positive, got {}", config.compare_at)).into());
    }

    let mut warnings = Vec::new();
    let mut order = vec![config.protocol];
    for b in &config.baselines {
        if !order.contains(b) {
            order.push(*b);
        }
    }
    let mut arms = Vec::new();
    for arm in order {
        let sim = match arm {
            Arm::SingleShot => {
                if config.n_max < 2 {
                    return Err(scqc::Error::InvalidParameter("single_shot needs n_max >= 2".into()).into());
                }
                if config.n_max < 4 {
                    let u = joint_parity_native(&params, 0.0)?;
                    let diagnostic = truncation_diagnostic(&params, u.matrix(), 0.0)?;
                    warnings.push(format!(
                        "single_shot: n_max = {} below 4; change against n_max = 6 is {diagnostic:.3e}",
                        config.n_max
                    ));
                }
                Simulator::SingleShot(params)
            }
            Arm::ThreeStep => Simulator::ThreeStep(config.steps.protocol(&ctx, chi, config.steps.kind)?),
            Arm::NaiveThreeStep => Simulator::ThreeStep(config.steps.protocol(&ctx, chi, StepKind::Naive)?),
        };
        arms.push((arm, sim));
    }

    let rule = config.measurement;
    let mut zero_noise = Map::new();
    let mut compare = Map::new();
    let mut passed = true;
    for (arm, sim) in &arms {
        let s = sim.stats(chi, &NoiseSample::default(), rule)?;
        passed &= s.worst_case < ZERO_NOISE_TOLERANCE;
        zero_noise.insert(arm.name().into(), stats_json(&s));
        let s = sim.stats(chi, &NoiseSample { gamma: config.compare_at * chi, xi: 0.0 }, rule)?;
        compare.insert(arm.name().into(), stats_json(&s));
    }
    let primary = compare[config.protocol.name()]["worst_case"].as_f64().unwrap_or(f64::NAN);
    let ratios: Map<String, Value> = arms[1..]
        .iter()
        .map(|(arm, _)| {
            let w = compare[arm.name()]["worst_case"].as_f64().unwrap_or(f64::NAN);
            (arm.name().to_string(), json!(w / primary))
        })
        .collect();

    let gamma = sweep("gamma", &config.gamma.values(), &arms, chi, rule, &mut warnings)?;
    ctx.write_table("jp_gamma.csv", &gamma.columns, &gamma.rows)?;
    let mut xi_slopes = Value::Null;
    if let Some(xi) = &config.xi {
        let xi_arms: Vec<(Arm, Simulator)> = arms.into_iter().filter(|(_, s)| s.feels_xi()).collect();
        if xi_arms.is_empty() {
            warnings.push("xi: no three-step arm to sweep".into());
        } else {
            let s = sweep("xi", &xi.values(), &xi_arms, chi, rule, &mut warnings)?;
            ctx.write_table("jp_xi.csv", &s.columns, &s.rows)?;
            xi_slopes = Value::Object(s.slopes);
        }
    }

    let summary = ctx.write_json(
        "jp_summary.json",
        json!({
            "protocol": config.protocol,
            "measurement": rule,
            "zero_noise": zero_noise,
            "zero_noise_tolerance": ZERO_NOISE_TOLERANCE,
            "compare_at": { "gamma": config.compare_at, "stats": compare, "worst_case_ratio_vs_protocol": ratios },
            "slopes": { "gamma": gamma.slopes, "xi": xi_slopes },
            "warnings": warnings,
            "passed": passed,
        }),
    )?;
    Ok(Outcome { summary, passed })
}
