use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use scqc::geometry::{
    dynamic_gate, error_curve, first_order_error, frenet_frame, implemented_gate, is_closed, signed_area, AdjointRep,
};
use scqc::io::{read_pulse_csv, write_curve_csv};

use crate::run::{parse_config, Outcome, RunContext};

#[derive(clap::Args, Debug)]
pub struct Args {
    /// Pulse CSV with columns t, omega, phi, delta.
    pub pulse: PathBuf,
    /// Closure tolerance on the error-curve gap.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Constant added to Δ(t) before analysis, e.g. ±χ/2 for a ZZ-half sector.
    #[arg(long, allow_hyphen_values = true)]
    pub detuning_offset: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Config {
    #[serde(default = "default_tol")]
    tol: f64,
    #[serde(default)]
    detuning_offset: f64,
}

fn default_tol() -> f64 {
    1e-6
}

fn rows(m: &AdjointRep) -> Value {
    let m = m.matrix();
    json!((0..3).map(|i| (0..3).map(|j| m[(i, j)]).collect::<Vec<_>>()).collect::<Vec<_>>())
}

pub fn run(mut ctx: RunContext, raw: &Value, args: Args) -> anyhow::Result<Outcome> {
    let mut config: Config = parse_config(raw)?;
    if let Some(tol) = args.tol {
        config.tol = tol;
    }
    if let Some(offset) = args.detuning_offset {
        config.detuning_offset = offset;
    }
    if !(config.tol.is_finite() && config.tol > 0.0) {
        return Err(scqc::Error::InvalidParameter(format!("tol must be positive, got {}", config.tol)).into());
    }
    ctx.set_config(&json!({ "pulse": args.pulse, "check": config }))?;

    let pulse = read_pulse_csv(&args.pulse)?.with_detuning_offset(config.detuning_offset);
    let curve = error_curve(&pulse)?;
    let gap = curve.closure_gap();
    let closed = is_closed(&curve, config.tol);
    let area = if closed { signed_area(&curve).ok().map(|a| [a.x, a.y, a.z]) } else { None };

    let dynamic = dynamic_gate(&pulse);
    let phi_final = *pulse.phi().last().expect("pulses are non-empty");
    let (gate, source, mismatch) = match frenet_frame(&curve) {
        Ok(frame) => {
            let g = implemented_gate(&frame, phi_final);
            let d = g.max_abs_diff(&dynamic);
            (g, "frenet", Some(d))
        }
        Err(scqc::Error::DegenerateFrame { .. }) => (dynamic, "dynamic", None),
        Err(e) => return Err(e.into()),
    };

    let mut w = ctx.create("error_curve.csv")?;
    write_curve_csv(&mut w, &curve, &ctx.header())?;

    let summary = ctx.write_json(
        "check_curve.json",
        json!({
            "closed": closed,
            "tolerance": config.tol,
            "closure_gap": gap,
            "first_order_error": first_order_error(&pulse)?,
            "signed_area": area,
            "curve_length": curve.length(),
            "implemented_gate": rows(&gate),
            "gate_source": source,
            "frenet_vs_dynamic": mismatch,
        }),
    )?;
    Ok(Outcome { summary, passed: closed })
}
