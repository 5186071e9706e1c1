use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ideal::on_q4;
use super::steps::{naive_swap_ancilla_pulse, naive_zz_half_pulse, ProtocolStep, StepLabel};
use crate::dualrail::{native_hamiltonian, project_q4, q4, BeamSplitterDrive, DualRailParams, NoiseSample};
use crate::error::{Error, Result};
use crate::geometry::ControlPulse;
use crate::sim::{max_abs_diff, pauli, propagate, CMatrix, TimeGrid, Unitary, DEFAULT_STEPS};

/// Native evolution with `δ = φ = 0`, `g = (√3/2)χ` for `T = 2π/χ`, no
/// ancilla drive.
pub fn joint_parity_native(params: &DualRailParams, gamma: f64) -> Result<Unitary> {
    params.validate()?;
    let grid = TimeGrid::new(2.0 * PI / params.chi, DEFAULT_STEPS)?;
    let drive = BeamSplitterDrive::constant(grid, 3f64.sqrt() / 2.0 * params.chi, 0.0, 0.0)?;
    let noise = NoiseSample { gamma, xi: 0.0 };
    propagate(&native_hamiltonian(params, &drive, None, &noise)?, &grid)
}

/// Largest entry change of the photon-number ≤ 2 block against a
/// simulation at `n_max = 6`.
pub fn truncation_diagnostic(params: &DualRailParams, u: &CMatrix, gamma: f64) -> Result<f64> {
    let reference_params = DualRailParams::new(params.chi, 6)?;
    let reference = joint_parity_native(&reference_params, gamma)?;
    let states = low_photon_states(params.n_max.min(2));
    let mut worst: f64 = 0.0;
    for &(na, nb) in &states {
        for &(ma, mb) in &states {
            for a in 0..2 {
                for b in 0..2 {
                    let x = u[(params.index(na, nb, a), params.index(ma, mb, b))];
                    let y = reference[(reference_params.index(na, nb, a), reference_params.index(ma, mb, b))];
                    worst = worst.max((x - y).norm());
                }
            }
        }
    }
    Ok(worst)
}

/// The single-shot check on the full truncated space; refuses `n_max < 4`
/// with the truncation diagnostic.
pub fn single_shot_joint_parity(params: &DualRailParams, gamma: f64) -> Result<Unitary> {
    const REQUIRED: usize = 4;
    let u = joint_parity_native(params, gamma)?;
    if params.n_max < REQUIRED {
        let diagnostic = truncation_diagnostic(params, u.matrix(), gamma)?;
        return Err(Error::Truncation { n_max: params.n_max, required: REQUIRED, diagnostic });
    }
    Ok(u)
}

/// The single-shot check restricted to the q4 space.
pub fn single_shot_q4(params: &DualRailParams, gamma: f64) -> Result<CMatrix> {
    Ok(project_q4(single_shot_joint_parity(params, gamma)?.matrix(), params))
}

fn low_photon_states(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for total in 0..=n {
        for na in (0..=total).rev() {
            out.push((na, total - na));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorReport {
    /// Total photon number of the sector.
    pub photons: usize,
    /// `arg Tr(T† U)` on the sector.
    pub phase: f64,
    /// `max |U - e^{iφ} T|` on the sector.
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorComparison {
    pub sectors: Vec<SectorReport>,
    /// Largest entry coupling different photon-number sectors.
    pub cross_sector: f64,
}

impl SectorComparison {
    pub fn max_deviation(&self) -> f64 {
        self.sectors.iter().map(|s| s.deviation).fold(self.cross_sector, f64::max)
    }
}

fn compare_by_sector(
    u: &CMatrix,
    target: &CMatrix,
    states: &[(usize, usize)],
    index: impl Fn(usize, usize, usize) -> usize,
) -> Result<SectorComparison> {
    crate::sim::ensure_same_dim(u, target)?;
    let mut totals: Vec<usize> = states.iter().map(|(a, b)| a + b).collect();
    totals.sort_unstable();
    totals.dedup();
    let sector_of = |n: usize| -> Vec<usize> {
        states
            .iter()
            .filter(|(a, b)| a + b == n)
            .flat_map(|&(a, b)| (0..2).map(move |anc| (a, b, anc)))
            .map(|(a, b, anc)| index(a, b, anc))
            .collect()
    };
    let mut sectors = Vec::new();
    let mut cross_sector: f64 = 0.0;
    for &n in &totals {
        let idx = sector_of(n);
        let ub = CMatrix::from_fn(idx.len(), idx.len(), |i, j| u[(idx[i], idx[j])]);
        let tb = CMatrix::from_fn(idx.len(), idx.len(), |i, j| target[(idx[i], idx[j])]);
        let phase = (tb.adjoint() * &ub).trace().arg();
        let deviation = max_abs_diff(&ub, &(tb * Complex64::from_polar(1.0, phase)));
        sectors.push(SectorReport { photons: n, phase, deviation });
        for &m in totals.iter().filter(|m| **m != n) {
            for &i in &sector_of(m) {
                for &j in &idx {
                    cross_sector = cross_sector.max(u[(i, j)].norm());
                }
            }
        }
    }
    Ok(SectorComparison { sectors, cross_sector })
}

/// Per photon-number sector comparison on the full space, over all states
/// with at most two photons.
pub fn compare_sectors(u: &CMatrix, target: &CMatrix, params: &DualRailParams) -> Result<SectorComparison> {
    compare_by_sector(u, target, &low_photon_states(2), |a, b, anc| params.index(a, b, anc))
}

/// Per photon-number sector comparison on the q4 space.
pub fn compare_sectors_q4(u: &CMatrix, target: &CMatrix) -> Result<SectorComparison> {
    compare_by_sector(u, target, &crate::dualrail::Q4_STATES, |a, b, anc| (2 * a + b) * 2 + anc)
}

/// A joint-parity unitary on the q4 space with the logical `X₁` it leaves
/// behind, tracked instead of undone.
#[derive(Clone, Debug, PartialEq)]
pub struct JointParity {
    pub unitary: Unitary,
    pub frame_x1: bool,
}

impl JointParity {
    /// `U` with the tracked `X₁` removed from the codespace.
    pub fn frame_corrected(&self) -> CMatrix {
        if !self.frame_x1 {
            return self.unitary.matrix().clone();
        }
        let flip = on_q4(&(q4::x1() + q4::p00() + q4::p11()), &pauli::id());
        flip * self.unitary.matrix()
    }
}

/// `V³ V² V¹`
pub fn three_step_joint_parity(steps: [&Unitary; 3]) -> Result<JointParity> {
    for s in steps {
        if s.dim() != 8 {
            return Err(Error::Dimension { expected: 8, got: s.dim() });
        }
    }
    let [v1, v2, v3] = steps;
    Ok(JointParity { unitary: v3.then_after(v2)?.then_after(v1)?, frame_x1: true })
}

/// Pulses of the three-step check: one ancilla pulse used for both ZZ
/// halves, the swap coupling and the swap-step ancilla pulse.
#[derive(Clone, Debug, PartialEq)]
pub struct ThreeStepProtocol {
    pub zz_pulse: ControlPulse,
    pub swap: ProtocolStep,
}

impl ThreeStepProtocol {
    pub fn new(zz_pulse: ControlPulse, swap_drive: BeamSplitterDrive, swap_ancilla: ControlPulse) -> Result<Self> {
        Ok(ThreeStepProtocol { zz_pulse, swap: ProtocolStep::swap(swap_drive, swap_ancilla)? })
    }

    /// Undriven ZZ halves of length `3π/χ` and a bare detuning on the swap.
    pub fn naive(chi: f64, swap_drive: BeamSplitterDrive, n_steps: usize) -> Result<Self> {
        let anc = naive_swap_ancilla_pulse(*swap_drive.grid())?;
        ThreeStepProtocol::new(naive_zz_half_pulse(chi, n_steps)?, swap_drive, anc)
    }

    pub fn steps(&self) -> [ProtocolStep; 3] {
        [
            ProtocolStep::zz_half(StepLabel::ZzHalf1, self.zz_pulse.clone()),
            self.swap.clone(),
            ProtocolStep::zz_half(StepLabel::ZzHalf3, self.zz_pulse.clone()),
        ]
    }

    pub fn duration(&self) -> f64 {
        2.0 * self.zz_pulse.duration() + self.swap.duration()
    }

    pub fn simulate(&self, chi: f64, noise: &NoiseSample) -> Result<JointParity> {
        let [a, b, c] = self.steps();
        let (v1, v2, v3) = (a.simulate(chi, noise)?, b.simulate(chi, noise)?, c.simulate(chi, noise)?);
        three_step_joint_parity([&v1, &v2, &v3])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::ideal::{ideal_joint_parity, ideal_single_shot, ideal_single_shot_q4};
    use crate::protocols::steps::gaussian_swap_drive;

    #[test]
    fn single_shot_matches_per_sector() {
        let p = DualRailParams::new(1.0, 4).unwrap();
        let u = single_shot_joint_parity(&p, 0.0).unwrap();
        let cmp = compare_sectors(u.matrix(), &ideal_single_shot(&p), &p).unwrap();
        assert!(cmp.max_deviation() < 1e-9, "{cmp:?}");
    }

    #[test]
    fn small_cutoff_reports_truncation() {
        let p = DualRailParams::new(1.0, 2).unwrap();
        match single_shot_joint_parity(&p, 0.0) {
            Err(Error::Truncation { n_max: 2, required: 4, diagnostic }) => assert!(diagnostic < 1e-9),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn naive_three_step_matches_per_sector() {
        let drive = gaussian_swap_drive(2.0 * PI, 0.2, DEFAULT_STEPS).unwrap();
        let proto = ThreeStepProtocol::naive(1.0, drive, 400).unwrap();
        let jp = proto.simulate(1.0, &NoiseSample::default()).unwrap();
        let cmp = compare_sectors_q4(jp.unitary.matrix(), &ideal_joint_parity()).unwrap();
        assert!(cmp.max_deviation() < 1e-9, "{cmp:?}");
    }

    #[test]
    fn three_step_and_single_shot_share_parity_phases() {
        let ideal = JointParity { unitary: Unitary::new(ideal_joint_parity()).unwrap(), frame_x1: true };
        let cmp = compare_sectors_q4(&ideal.frame_corrected(), &ideal_single_shot_q4()).unwrap();
        assert!(cmp.max_deviation() < 1e-14);
        let p = DualRailParams::new(1.0, 4).unwrap();
        let cmp = compare_sectors_q4(&single_shot_q4(&p, 0.0).unwrap(), &ideal_single_shot_q4()).unwrap();
        assert!(cmp.max_deviation() < 1e-9);
    }

    #[test]
    fn dimension_mismatch() {
        let a = Unitary::identity(8);
        let b = Unitary::identity(4);
        assert!(three_step_joint_parity([&a, &b, &a]).is_err());
    }
}
