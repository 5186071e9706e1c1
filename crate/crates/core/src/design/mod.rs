//! Numerical synthesis of ancilla pulses meeting the robustness conditions:
//! a closed error curve with the right frame angle for the ZZ(π/2) halves,
//! and tangents orthogonal to the swap curve for the swap step.

mod nelder_mead;

pub use nelder_mead::{optimize, OptimizeResult, OptimizerConfig, CONVERGENCE_THRESHOLD};

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::crosstalk::TangentSamples;
use crate::dualrail::BeamSplitterDrive;
use crate::error::{Error, Result};
use crate::geometry::su2::{rotor_path, Rotor};
use crate::geometry::{area_vector, cumulative_integral, error_curve, first_order_error, ControlPulse, Vec3};
use crate::protocols::{ideal_zz_half, rz, zz_half_step, Sign};
use crate::sim::{gate_infidelity, pauli, TimeGrid};
use crate::sweep::{log_grid, run_sweep};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostWeights {
    #[serde(default = "one")]
    pub gate: f64,
    #[serde(default = "ten")]
    pub closure: f64,
    #[serde(default)]
    pub area: f64,
    #[serde(default = "ten")]
    pub ortho: f64,
}

fn one() -> f64 {
    1.0
}

fn ten() -> f64 {
    10.0
}

impl Default for CostWeights {
    fn default() -> Self {
        CostWeights { gate: 1.0, closure: 10.0, area: 0.0, ortho: 10.0 }
    }
}

impl CostWeights {
    pub fn validate(&self) -> Result<()> {
        let w = [self.gate, self.closure, self.area, self.ortho];
        if w.iter().any(|v| !(v.is_finite() && *v >= 0.0)) || w.iter().all(|v| *v == 0.0) {
            return Err(Error::InvalidParameter(format!("cost weights must be non-negative with one positive: {w:?}")));
        }
        Ok(())
    }
}

/// `Ω(t) = Σ_k c_k sin(m_k π t / T)`, vanishing at both ends.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseAnsatz {
    pub coefficients: Vec<f64>,
    /// Harmonic numbers `m_k`, `1..=K` for the full series.
    pub harmonics: Vec<u32>,
    pub duration: f64,
    /// Constant ancilla detuning.
    pub detuning: f64,
}

impl PulseAnsatz {
    pub const DEFAULT_ORDER: usize = 6;

    /// All harmonics `1..=K`, no detuning.
    pub fn sine_series(coefficients: Vec<f64>, duration: f64) -> Self {
        let harmonics = (1..=coefficients.len() as u32).collect();
        PulseAnsatz { coefficients, harmonics, duration, detuning: 0.0 }
    }

    /// Odd harmonics `1, 3, …, 2K-1` plus a constant detuning.
    pub fn odd_series(coefficients: Vec<f64>, detuning: f64, duration: f64) -> Self {
        let harmonics = (0..coefficients.len() as u32).map(|k| 2 * k + 1).collect();
        PulseAnsatz { coefficients, harmonics, duration, detuning }
    }

    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    pub fn omega(&self, t: f64) -> f64 {
        self.coefficients.iter().zip(&self.harmonics).map(|(c, m)| c * (*m as f64 * PI * t / self.duration).sin()).sum()
    }

    pub fn pulse(&self, n_steps: usize) -> Result<ControlPulse> {
        let grid = TimeGrid::new(self.duration, n_steps)?;
        ControlPulse::from_fn(grid, |t| (self.omega(t), 0.0, self.detuning))
    }
}

/// Noiseless final rotor and error-curve end point, without building the
/// whole curve.
fn rotor_and_gap(pulse: &ControlPulse) -> (Rotor, Vec3) {
    let grid = pulse.grid();
    let path = rotor_path(pulse, 0.0);
    let h = grid.dt();
    let n = path.len() - 1;
    let tangent = |k: usize| path[k].tangent();
    let mut r = (tangent(0) + tangent(n)) * (0.5 * h);
    for k in 1..n {
        r += tangent(k) * h;
    }
    let d0 = path[0].tangent_rate(&pulse.field(0.0, 0.0));
    let dn = path[n].tangent_rate(&pulse.field(grid.t_end(), 0.0));
    r -= (dn - d0) * (h * h / 12.0);
    (path[n], r)
}

fn area_of(pulse: &ControlPulse) -> Vec3 {
    let grid = pulse.grid();
    let path = rotor_path(pulse, 0.0);
    let f: Vec<Vec3> = path.iter().map(|u| u.tangent()).collect();
    let df: Vec<Vec3> = path.iter().zip(grid.times()).map(|(u, t)| u.tangent_rate(&pulse.field(t, 0.0))).collect();
    area_vector(&cumulative_integral(&f, &df, grid.dt()))
}

/// `1 - F` between SU(2) rotors: `(2/3)(1 - ⟨q₁, q₂⟩²)`.
fn rotor_infidelity(u: &Rotor, v: &Rotor) -> f64 {
    let q = u.w * v.w + u.v.dot(&v.v);
    (2.0 / 3.0 * (1.0 - q * q)).max(0.0)
}

/// `R_z(θ) = exp(iθZ/2)` as a rotor.
fn rz_rotor(theta: f64) -> Rotor {
    Rotor { w: (theta / 2.0).cos(), v: Vec3::new(0.0, 0.0, -(theta / 2.0).sin()) }
}

/// Gate, closure and area terms for the `H₊` (`|00⟩, |01⟩`, target
/// `R_z(π/2)`) and `H₋` (`|10⟩, |11⟩`, target `R_z(-π/2)`) sectors.
pub fn cost_zz_half(pulse: &ControlPulse, chi: f64, weights: &CostWeights) -> f64 {
    let mut total = 0.0;
    for (sign, theta) in [(1.0, PI / 2.0), (-1.0, -PI / 2.0)] {
        let eff = pulse.with_detuning_offset(sign * chi / 2.0);
        let (u, gap) = rotor_and_gap(&eff);
        total += weights.gate * rotor_infidelity(&u, &rz_rotor(theta)) + weights.closure * gap.norm_squared();
        if weights.area > 0.0 {
            total += weights.area * area_of(&eff).norm_squared();
        }
    }
    total
}

/// Gate (`Z`), closure, area and orthogonality terms of a swap-step ancilla
/// pulse against precomputed swap tangents.
fn cost_swap_ancilla(pulse: &ControlPulse, swap: &TangentSamples, weights: &CostWeights) -> f64 {
    let (u, gap) = rotor_and_gap(pulse);
    let z = Rotor { w: 0.0, v: Vec3::z() };
    let mut total = weights.gate * rotor_infidelity(&u, &z) + weights.closure * gap.norm_squared();
    if weights.ortho > 0.0 {
        total += weights.ortho * swap.overlap(&TangentSamples::new(pulse)).norm_squared();
    }
    if weights.area > 0.0 {
        total += weights.area * area_of(pulse).norm_squared();
    }
    total
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignConfig {
    #[serde(flatten)]
    pub optimizer: OptimizerConfig,
    #[serde(default)]
    pub weights: CostWeights,
    #[serde(default = "default_order")]
    pub order: usize,
    #[serde(default = "default_steps")]
    pub n_steps: usize,
    /// Starting coefficients in units of `χ`. Defaults to zeros, with the
    /// swap ancilla detuning at the bare-`Z₂` value `π/T`.
    #[serde(default)]
    pub initial: Option<Vec<f64>>,
}

fn default_order() -> usize {
    PulseAnsatz::DEFAULT_ORDER
}

fn default_steps() -> usize {
    DEFAULT_DESIGN_STEPS
}

/// Grid size of synthesized ZZ-half pulses.
pub const DEFAULT_DESIGN_STEPS: usize = 400;

/// `5π/χ`
pub fn default_zz_duration(chi: f64) -> f64 {
    5.0 * PI / chi
}

/// `2π/χ`
pub fn default_swap_duration(chi: f64) -> f64 {
    2.0 * PI / chi
}

pub const DEFAULT_SIGMA_RATIO: f64 = 0.2;

impl DesignConfig {
    pub fn new(seed: u64) -> Self {
        DesignConfig {
            optimizer: OptimizerConfig::new(seed),
            weights: CostWeights::default(),
            order: default_order(),
            n_steps: default_steps(),
            initial: None,
        }
    }

    fn initial_point(&self, default: Vec<f64>) -> Result<Vec<f64>> {
        match &self.initial {
            Some(v) if v.len() != default.len() => Err(Error::Dimension { expected: default.len(), got: v.len() }),
            Some(v) => Ok(v.clone()),
            None => Ok(default),
        }
    }
}

/// Verifier thresholds for synthesized pulses.
pub const GATE_TOLERANCE: f64 = 1e-6;
pub const CLOSURE_TOLERANCE: f64 = 1e-6;
pub const ORTHO_TOLERANCE: f64 = 1e-6;
pub const ROBUST_SLOPE: f64 = 3.7;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZzHalfReport {
    pub seed: u64,
    pub budget: usize,
    pub final_cost: f64,
    pub converged: bool,
    /// Ansatz coefficients in rad/time.
    pub coefficients: Vec<f64>,
    pub duration: f64,
    pub chi: f64,
    /// Per-sector `1 - F` at `γ = 0`, `[H₊, H₋]`.
    pub gate_infidelity: [f64; 2],
    /// `first_order_error` of the `[H₊, H₋]` effective pulses.
    pub first_order_error: [f64; 2],
    /// Slope of the step infidelity over `γ ∈ [1e-3, 1e-1]·χ`.
    pub gamma_slope: f64,
    pub verified: bool,
}

#[derive(Clone, Debug)]
pub struct Design<R> {
    /// Present only when the search converged.
    pub pulse: Option<ControlPulse>,
    pub report: R,
}

/// Infidelity of the q4 ZZ-half step against its ideal form, as a function
/// of `γ`.
pub fn zz_half_infidelity(pulse: &ControlPulse, chi: f64, gamma: f64) -> Result<f64> {
    gate_infidelity(zz_half_step(pulse, chi, gamma, Sign::Plus)?.matrix(), &ideal_zz_half())
}

/// Searches the sine ansatz for a robust ZZ(π/2)-step ancilla pulse of
/// duration `duration` and re-verifies the winner by propagation and
/// geometry.
pub fn synthesize_zz_half_pulse(chi: f64, duration: f64, config: &DesignConfig) -> Result<Design<ZzHalfReport>> {
    if !(chi.is_finite() && chi > 0.0 && duration.is_finite() && duration > 0.0) {
        return Err(Error::InvalidParameter(format!("need chi > 0 and duration > 0, got {chi}, {duration}")));
    }
    config.weights.validate()?;
    let initial = config.initial_point(vec![0.0; config.order])?;
    let ansatz = |x: &[f64]| PulseAnsatz::sine_series(x.iter().map(|v| v * chi).collect(), duration);
    let cost = |x: &[f64]| match ansatz(x).pulse(config.n_steps) {
        Ok(p) => cost_zz_half(&p, chi, &config.weights),
        Err(_) => f64::NAN,
    };
    let best = optimize(cost, &initial, &config.optimizer)?;
    let best_ansatz = ansatz(&best.coefficients);
    let pulse = best_ansatz.pulse(config.n_steps)?;
    let mut gate = [0.0; 2];
    let mut foe = [0.0; 2];
    for (k, (sign, theta)) in [(1.0, PI / 2.0), (-1.0, -PI / 2.0)].into_iter().enumerate() {
        let eff = pulse.with_detuning_offset(sign * chi / 2.0);
        let u = crate::sim::propagate(&crate::geometry::pulse_hamiltonian(&eff, 0.0), eff.grid())?;
        gate[k] = gate_infidelity(u.matrix(), &rz(theta))?;
        foe[k] = first_order_error(&eff)?;
    }
    let gammas = log_grid(1e-3 * chi, 1e-1 * chi, 10);
    let slope = run_sweep("gamma", "infidelity", &gammas, |g| zz_half_infidelity(&pulse, chi, g)).map(|t| t.fit.slope);
    let gamma_slope = slope.unwrap_or(f64::NAN);
    let verified = gate.iter().all(|g| *g < GATE_TOLERANCE)
        && foe.iter().all(|f| *f < CLOSURE_TOLERANCE)
        && gamma_slope >= ROBUST_SLOPE;
    let report = ZzHalfReport {
        seed: config.optimizer.seed,
        budget: config.optimizer.budget,
        final_cost: best.final_cost,
        converged: best.converged,
        coefficients: best_ansatz.coefficients,
        duration,
        chi,
        gate_infidelity: gate,
        first_order_error: foe,
        gamma_slope,
        verified,
    };
    Ok(Design { pulse: best.converged.then_some(pulse), report })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SwapAncillaReport {
    pub seed: u64,
    pub budget: usize,
    pub final_cost: f64,
    pub converged: bool,
    /// Odd-harmonic coefficients in rad/time.
    pub coefficients: Vec<f64>,
    /// Constant detuning `Δ̃₂` in rad/time.
    pub detuning: f64,
    pub duration: f64,
    /// `1 - F` against `Z₂` at `γ = 0`.
    pub gate_infidelity: f64,
    pub first_order_error: f64,
    /// Frobenius norm of the swap/ancilla tangent overlap matrix.
    pub ortho_norm: f64,
    pub verified: bool,
}

/// Searches odd harmonics plus a constant detuning for an ancilla pulse on
/// the swap grid that implements `Z₂`, closes its error curve and keeps its
/// tangent orthogonal to the swap curve.
pub fn synthesize_swap_ancilla_pulse(
    swap_drive: &BeamSplitterDrive,
    chi: f64,
    config: &DesignConfig,
) -> Result<Design<SwapAncillaReport>> {
    if !(chi.is_finite() && chi > 0.0) {
        return Err(Error::InvalidParameter(format!("chi must be positive, got {chi}")));
    }
    config.weights.validate()?;
    let grid = *swap_drive.grid();
    let duration = grid.t_end();
    let swap_tangents = TangentSamples::new(&swap_drive.as_control_pulse());
    let mut start = vec![0.0; config.order + 1];
    start[config.order] = PI / (duration * chi);
    let initial = config.initial_point(start)?;
    let ansatz = |x: &[f64]| {
        let (c, d) = x.split_at(x.len() - 1);
        PulseAnsatz::odd_series(c.iter().map(|v| v * chi).collect(), d[0] * chi, duration)
    };
    let cost = |x: &[f64]| match ansatz(x).pulse(grid.n_steps()) {
        Ok(p) => cost_swap_ancilla(&p, &swap_tangents, &config.weights),
        Err(_) => f64::NAN,
    };
    let best = optimize(cost, &initial, &config.optimizer)?;
    let best_ansatz = ansatz(&best.coefficients);
    let pulse = best_ansatz.pulse(grid.n_steps())?;
    let u = crate::sim::propagate(&crate::geometry::pulse_hamiltonian(&pulse, 0.0), &grid)?;
    let gate = gate_infidelity(u.matrix(), &pauli::z())?;
    let foe = first_order_error(&pulse)?;
    let pair = crate::crosstalk::PulsePair::new(&swap_drive.as_control_pulse(), &pulse)?;
    let ortho_norm = crate::crosstalk::tangent_overlap_matrix(&pair).norm();
    let verified = gate < GATE_TOLERANCE && foe < CLOSURE_TOLERANCE && ortho_norm < ORTHO_TOLERANCE;
    let report = SwapAncillaReport {
        seed: config.optimizer.seed,
        budget: config.optimizer.budget,
        final_cost: best.final_cost,
        converged: best.converged,
        coefficients: best_ansatz.coefficients,
        detuning: best_ansatz.detuning,
        duration,
        gate_infidelity: gate,
        first_order_error: foe,
        ortho_norm,
        verified,
    };
    Ok(Design { pulse: best.converged.then_some(pulse), report })
}

/// The error curve of each effective ZZ-half problem, `[H₊, H₋]`.
pub fn zz_half_curves(pulse: &ControlPulse, chi: f64) -> Result<[crate::geometry::SpaceCurve; 2]> {
    Ok([error_curve(&pulse.with_detuning_offset(chi / 2.0))?, error_curve(&pulse.with_detuning_offset(-chi / 2.0))?])
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::naive_zz_half_pulse;

    #[test]
    fn naive_pulse_is_exact_but_open() {
        let pulse = naive_zz_half_pulse(1.0, 400).unwrap();
        let gate_only = CostWeights { gate: 1.0, closure: 0.0, area: 0.0, ortho: 0.0 };
        assert!(cost_zz_half(&pulse, 1.0, &gate_only) < 1e-14);
        let closure_only = CostWeights { gate: 0.0, closure: 1.0, area: 0.0, ortho: 0.0 };
        let t = pulse.duration();
        assert!((cost_zz_half(&pulse, 1.0, &closure_only) - 2.0 * t * t).abs() < 1e-9);
    }

    #[test]
    fn idle_pulse_of_wrong_length_misses_the_gate() {
        let pulse = PulseAnsatz::sine_series(vec![0.0; 6], PI).pulse(400).unwrap();
        let gate_only = CostWeights { gate: 1.0, closure: 0.0, area: 0.0, ortho: 0.0 };
        assert!((cost_zz_half(&pulse, 1.0, &gate_only) - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn ansatz_vanishes_at_the_ends() {
        let a = PulseAnsatz::sine_series(vec![0.3, -1.0, 2.0], 3.0);
        assert!(a.omega(0.0).abs() < 1e-15 && a.omega(3.0).abs() < 1e-14);
        let b = PulseAnsatz::odd_series(vec![1.0, 0.5], 0.2, 2.0);
        assert_eq!(b.harmonics, vec![1, 3]);
        assert!((b.omega(1.0) - 0.5).abs() < 1e-15);
        assert!(b.pulse(10).unwrap().delta().iter().all(|d| *d == 0.2));
    }

    #[test]
    fn rotor_infidelity_matches_matrix_formula() {
        let u = Rotor::exp(Vec3::new(0.3, -0.2, 0.9));
        let v = rz_rotor(1.1);
        let direct = gate_infidelity(&u.matrix(), &v.matrix()).unwrap();
        assert!((rotor_infidelity(&u, &v) - direct).abs() < 1e-15);
        assert!(crate::sim::max_abs_diff(&rz_rotor(0.7).matrix(), &rz(0.7)) < 1e-15);
    }

    #[test]
    fn one_evaluation_budget_gives_no_pulse() {
        let mut cfg = DesignConfig::new(3);
        cfg.optimizer.budget = 1;
        let d = synthesize_zz_half_pulse(1.0, default_zz_duration(1.0), &cfg).unwrap();
        assert!(!d.report.converged && d.pulse.is_none());
    }

    #[test]
    fn weights_are_validated() {
        let cfg = DesignConfig { weights: CostWeights { gate: 0.0, closure: 0.0, area: 0.0, ortho: 0.0 }, ..DesignConfig::new(0) };
        assert!(synthesize_zz_half_pulse(1.0, 1.0, &cfg).is_err());
        let cfg = DesignConfig { initial: Some(vec![0.0; 2]), ..DesignConfig::new(0) };
        assert!(matches!(synthesize_zz_half_pulse(1.0, 1.0, &cfg), Err(Error::Dimension { .. })));
    }

    #[test]
    fn config_defaults_and_strictness() {
        let cfg: DesignConfig = serde_json::from_str(r#"{"seed": 4}"#).unwrap();
        assert_eq!(cfg, DesignConfig::new(4));
        assert!(serde_json::from_str::<DesignConfig>(r#"{"seed": 4, "budjet": 3}"#).is_err());
    }
}
