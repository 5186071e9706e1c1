use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::ideal::on_q4;
use crate::dualrail::{q4, BeamSplitterDrive, NoiseSample};
use crate::error::{Error, Result};
use crate::geometry::su2::rotor_final;
use crate::geometry::{error_curve, ControlPulse};
use crate::sim::{c, pauli, propagate, CMatrix, HamiltonianSampler, TimeGrid, Unitary};

pub const SWAP_AREA_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepLabel {
    ZzHalf1,
    Swap,
    ZzHalf3,
}

/// Which cavity blocks see `H₊`: `Plus` puts `|00⟩, |01⟩` under `H₊` and
/// `|10⟩, |11⟩` under `H₋`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    #[default]
    Plus,
    Minus,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolStep {
    pub label: StepLabel,
    pub ancilla_pulse: ControlPulse,
    pub drive: BeamSplitterDrive,
}

impl ProtocolStep {
    /// A dispersive step: no beam splitter.
    pub fn zz_half(label: StepLabel, pulse: ControlPulse) -> Self {
        let drive = BeamSplitterDrive::off(*pulse.grid());
        ProtocolStep { label, ancilla_pulse: pulse, drive }
    }

    pub fn swap(drive: BeamSplitterDrive, ancilla_pulse: ControlPulse) -> Result<Self> {
        check_swap(&drive, &ancilla_pulse)?;
        Ok(ProtocolStep { label: StepLabel::Swap, ancilla_pulse, drive })
    }

    pub fn duration(&self) -> f64 {
        self.ancilla_pulse.duration()
    }

    pub fn simulate(&self, chi: f64, noise: &NoiseSample) -> Result<Unitary> {
        match self.label {
            StepLabel::Swap => swap_step(&self.drive, &self.ancilla_pulse, noise),
            _ => zz_half_step(&self.ancilla_pulse, chi, noise.gamma, Sign::Plus),
        }
    }
}

/// Ancilla evolution under `H± = (Ω₂/2)(cos Φ₂ X + sin Φ₂ Y) ± (χ/4) Z
/// + ((Δ₂ + γ)/2) Z` in each cavity block.
pub fn zz_half_step(pulse: &ControlPulse, chi: f64, gamma: f64, sign: Sign) -> Result<Unitary> {
    if !(chi.is_finite() && chi > 0.0) {
        return Err(Error::InvalidParameter(format!("chi must be positive, got {chi}")));
    }
    let up = rotor_final(&pulse.with_detuning_offset(chi / 2.0), gamma).matrix();
    let um = rotor_final(&pulse.with_detuning_offset(-chi / 2.0), gamma).matrix();
    let low = q4::p00() + q4::projector(1);
    let high = q4::projector(2) + q4::p11();
    let (a, b) = match sign {
        Sign::Plus => (up, um),
        Sign::Minus => (um, up),
    };
    Unitary::new(on_q4(&low, &a) + on_q4(&high, &b))
}

/// Closure gaps `[gap₊, gap₋]` of the error curves of the two effective
/// ancilla problems.
pub fn closure_diagnostic(pulse: &ControlPulse, chi: f64) -> Result<[f64; 2]> {
    let plus = error_curve(&pulse.with_detuning_offset(chi / 2.0))?.closure_gap();
    let minus = error_curve(&pulse.with_detuning_offset(-chi / 2.0))?.closure_gap();
    Ok([plus, minus])
}

/// Truncated Gaussian coupling centred at `T/2` with `σ = sigma_ratio · T`,
/// scaled to a full one-photon swap `∫g dt = π`.
pub fn gaussian_swap_drive(duration: f64, sigma_ratio: f64, n_steps: usize) -> Result<BeamSplitterDrive> {
    if !(sigma_ratio > 0.0 && sigma_ratio <= 0.5) {
        return Err(Error::InvalidParameter(format!("sigma_ratio must lie in (0, 0.5], got {sigma_ratio}")));
    }
    let grid = TimeGrid::new(duration, n_steps)?;
    let sigma = sigma_ratio * duration;
    let shape = |t: f64| (-0.5 * ((t - duration / 2.0) / sigma).powi(2)).exp();
    let unit = BeamSplitterDrive::from_fn(grid, |t| (shape(t), 0.0, 0.0))?;
    let scale = PI / unit.area();
    BeamSplitterDrive::from_fn(grid, |t| (scale * shape(t), 0.0, 0.0))
}

/// No drive for `3π/χ`: `H± = ±(χ/4)Z` accumulates `R_z(±π/2)` up to a sign.
pub fn naive_zz_half_pulse(chi: f64, n_steps: usize) -> Result<ControlPulse> {
    ControlPulse::constant(TimeGrid::new(3.0 * PI / chi, n_steps)?, 0.0, 0.0, 0.0)
}

/// Constant detuning `π/T` on the swap grid: a bare `Z₂` up to phase.
pub fn naive_swap_ancilla_pulse(grid: TimeGrid) -> Result<ControlPulse> {
    ControlPulse::constant(grid, 0.0, 0.0, PI / grid.t_end())
}

fn check_swap(drive: &BeamSplitterDrive, ancilla: &ControlPulse) -> Result<()> {
    if drive.grid() != ancilla.grid() {
        return Err(Error::Grid("swap drive and ancilla pulse use different grids".into()));
    }
    let area = drive.area();
    if (area - PI).abs() > SWAP_AREA_TOLERANCE {
        return Err(Error::InvalidParameter(format!("swap drive area {area} is not pi")));
    }
    Ok(())
}

/// `(g/2)(cos φ X₁ - sin φ Y₁) + δ a†a + H̃₂ + (γ/2) Z₂ - (ξ/4) Z₁⊗Z₂` on
/// the q4 space, where the ancilla pulse carries the shifted detuning
/// `Δ̃₂ = Δ₂ - χ/2`.
pub struct SwapHamiltonian {
    drive: BeamSplitterDrive,
    ancilla: ControlPulse,
    gamma: f64,
    ops: [CMatrix; 7],
}

pub fn swap_hamiltonian(drive: &BeamSplitterDrive, ancilla: &ControlPulse, noise: &NoiseSample) -> Result<SwapHamiltonian> {
    if drive.grid() != ancilla.grid() {
        return Err(Error::Grid("swap drive and ancilla pulse use different grids".into()));
    }
    let id4 = CMatrix::identity(4, 4);
    let ops = [
        on_q4(&q4::x1(), &pauli::id()),
        on_q4(&q4::y1(), &pauli::id()),
        on_q4(&q4::n_a(), &pauli::id()),
        on_q4(&id4, &pauli::x()),
        on_q4(&id4, &pauli::y()),
        on_q4(&id4, &pauli::z()),
        on_q4(&q4::z1(), &pauli::z()) * c(-noise.xi / 4.0, 0.),
    ];
    Ok(SwapHamiltonian { drive: drive.clone(), ancilla: ancilla.clone(), gamma: noise.gamma, ops })
}

impl HamiltonianSampler for SwapHamiltonian {
    fn dim(&self) -> usize {
        8
    }

    fn sample(&self, t: f64) -> CMatrix {
        let (g, phi, delta) = self.drive.at(t);
        let (om, ph, de) = self.ancilla.at(t);
        let [x1, y1, na, x2, y2, z2, zz] = &self.ops;
        let mut h = zz.clone();
        h += x1 * c(0.5 * g * phi.cos(), 0.);
        h -= y1 * c(0.5 * g * phi.sin(), 0.);
        h += na * c(delta, 0.);
        h += x2 * c(0.5 * om * ph.cos(), 0.);
        h += y2 * c(0.5 * om * ph.sin(), 0.);
        h += z2 * c(0.5 * (de + self.gamma), 0.);
        h
    }
}

/// Propagates the swap step; the drive must carry a full one-photon swap.
pub fn swap_step(drive: &BeamSplitterDrive, ancilla_pulse: &ControlPulse, noise: &NoiseSample) -> Result<Unitary> {
    check_swap(drive, ancilla_pulse)?;
    propagate(&swap_hamiltonian(drive, ancilla_pulse, noise)?, drive.grid())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::ideal::{ideal_swap, ideal_zz_half, rz};
    use crate::sim::{equal_up_to_global_phase, max_abs_diff, DEFAULT_STEPS};

    #[test]
    fn naive_zz_half_is_exact_without_noise() {
        let chi = 1.7;
        let u = zz_half_step(&naive_zz_half_pulse(chi, 200).unwrap(), chi, 0.0, Sign::Plus).unwrap();
        assert!(equal_up_to_global_phase(&u, &ideal_zz_half(), 1e-12).unwrap());
        let phase = 3.0 * PI / 4.0;
        let mut direct = CMatrix::zeros(2, 2);
        direct[(0, 0)] = c(phase.cos(), -phase.sin());
        direct[(1, 1)] = c(phase.cos(), phase.sin());
        assert!(equal_up_to_global_phase(&direct, &rz(PI / 2.0), 1e-12).unwrap());
    }

    #[test]
    fn sign_swaps_the_blocks() {
        let grid = TimeGrid::new(4.0, 400).unwrap();
        let pulse = ControlPulse::from_fn(grid, |t| (0.8 * (t * 0.7).sin(), 0.2, 0.1)).unwrap();
        let plus = zz_half_step(&pulse, 1.0, 0.01, Sign::Plus).unwrap();
        let minus = zz_half_step(&pulse, 1.0, 0.01, Sign::Minus).unwrap();
        let reverse = CMatrix::from_fn(4, 4, |i, j| if i + j == 3 { c(1., 0.) } else { c(0., 0.) });
        let perm = on_q4(&reverse, &pauli::id());
        assert!(max_abs_diff(&(&perm * plus.matrix() * &perm), minus.matrix()) < 1e-14);
    }

    #[test]
    fn gaussian_area_is_pi() {
        for (t, r) in [(3.0, 0.1), (10.0, 0.25), (1.0, 0.5)] {
            let d = gaussian_swap_drive(t, r, 500).unwrap();
            assert!((d.area() - PI).abs() < 1e-12);
            assert!(d.varphi().iter().chain(d.delta()).all(|v| *v == 0.0));
        }
        assert!(gaussian_swap_drive(1.0, 0.0, 10).is_err());
        assert!(gaussian_swap_drive(1.0, 0.6, 10).is_err());
    }

    #[test]
    fn bare_swap_acts_on_the_codespace_only() {
        let drive = gaussian_swap_drive(2.0 * PI, 0.2, DEFAULT_STEPS).unwrap();
        let idle = ControlPulse::constant(*drive.grid(), 0.0, 0.0, 0.0).unwrap();
        let u = swap_step(&drive, &idle, &NoiseSample::default()).unwrap();
        let odd = [2, 3, 4, 5];
        let block = CMatrix::from_fn(4, 4, |i, j| u[(odd[i], odd[j])]);
        assert!(equal_up_to_global_phase(&block, &crate::sim::kron(&pauli::x(), &pauli::id()), 1e-9).unwrap());
        for k in [0, 1, 6, 7] {
            assert!((u[(k, k)] - c(1., 0.)).norm() < 1e-12);
        }
    }

    #[test]
    fn naive_swap_gives_the_ideal_step_per_sector() {
        let drive = gaussian_swap_drive(2.0 * PI, 0.2, DEFAULT_STEPS).unwrap();
        let anc = naive_swap_ancilla_pulse(*drive.grid()).unwrap();
        let u = swap_step(&drive, &anc, &NoiseSample::default()).unwrap();
        let cmp = crate::protocols::compare_sectors_q4(u.matrix(), &ideal_swap()).unwrap();
        assert!(cmp.max_deviation() < 1e-9, "{cmp:?}");
        let odd = cmp.sectors[1].phase - cmp.sectors[0].phase;
        assert!((odd.rem_euclid(2.0 * PI) - 1.5 * PI).abs() < 1e-9);
    }

    #[test]
    fn swap_rejects_wrong_area() {
        let grid = TimeGrid::new(1.0, 100).unwrap();
        let drive = BeamSplitterDrive::constant(grid, 3.0, 0.0, 0.0).unwrap();
        let anc = naive_swap_ancilla_pulse(grid).unwrap();
        assert!(swap_step(&drive, &anc, &NoiseSample::default()).is_err());
    }
}
