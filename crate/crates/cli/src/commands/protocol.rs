use std::f64::consts::PI;
use std::path::PathBuf;

use anyhow::Context;
use serde::{Deserialize, Serialize};

use scqc::design::DEFAULT_SIGMA_RATIO;
use scqc::dualrail::BeamSplitterDrive;
use scqc::io::read_pulse_csv;
use scqc::protocols::{gaussian_swap_drive, ThreeStepProtocol};

use crate::run::RunContext;

/// Gaussian beam-splitter drive of the swap step; duration in units of `1/χ`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SwapDriveConfig {
    #[serde(default = "two_pi")]
    pub duration: f64,
    #[serde(default = "default_sigma")]
    pub sigma_ratio: f64,
    #[serde(default = "default_steps")]
    pub n_steps: usize,
}

fn two_pi() -> f64 {
    2.0 * PI
}

fn default_sigma() -> f64 {
    DEFAULT_SIGMA_RATIO
}

fn default_steps() -> usize {
    scqc::design::DEFAULT_DESIGN_STEPS
}

impl Default for SwapDriveConfig {
    fn default() -> Self {
        SwapDriveConfig { duration: two_pi(), sigma_ratio: default_sigma(), n_steps: default_steps() }
    }
}

impl SwapDriveConfig {
    pub fn drive(&self, chi: f64) -> scqc::Result<BeamSplitterDrive> {
        gaussian_swap_drive(self.duration / chi, self.sigma_ratio, self.n_steps)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    #[default]
    Naive,
    Designed,
}

/// Pulses of the three-step check. Designed steps read the ZZ-half and swap
/// ancilla pulses written by `scqc design`.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepsConfig {
    #[serde(default)]
    pub kind: StepKind,
    #[serde(default)]
    pub zz_pulse: Option<PathBuf>,
    #[serde(default)]
    pub swap_ancilla_pulse: Option<PathBuf>,
    #[serde(default)]
    pub swap: SwapDriveConfig,
}

impl StepsConfig {
    pub fn protocol(&self, ctx: &RunContext, chi: f64, kind: StepKind) -> anyhow::Result<ThreeStepProtocol> {
        let drive = self.swap.drive(chi)?;
        match kind {
            StepKind::Naive => Ok(ThreeStepProtocol::naive(chi, drive, self.swap.n_steps)?),
            StepKind::Designed => {
                let load = |p: &Option<PathBuf>, what: &str| -> anyhow::Result<_> {
                    let p = p.as_ref().ok_or_else(|| {
                        scqc::Error::InvalidParameter(format!("designed steps need steps.{what}"))
                    })?;
                    let path = ctx.resolve(p);
                    read_pulse_csv(&path).with_context(|| format!("reading {}", path.display()))
                };
                let zz = load(&self.zz_pulse, "zz_pulse")?;
                let anc = load(&self.swap_ancilla_pulse, "swap_ancilla_pulse")?;
                Ok(ThreeStepProtocol::new(zz, drive, anc)?)
            }
        }
    }
}
