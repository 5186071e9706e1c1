//! Joint-parity erasure checks on a dual-rail qubit, their composition from
//! robust steps, and the logical ZZ(θ) gate built from two checks.
//!
//! Step and protocol unitaries act on `span{|00⟩,|01⟩,|10⟩,|11⟩} ⊗ (g, f)`
//! (the q4 space, 8 states, ancilla fastest) unless stated otherwise.

mod erasure;
mod ideal;
mod logical;
mod parity;
mod steps;

pub use erasure::{erasure_check_stats, ErasureCheckStats, MeasurementRule, StateSpace};
pub use ideal::{
    ideal_joint_parity, ideal_single_shot, ideal_single_shot_q4, ideal_swap, ideal_zz_half, on_q4, rz, zz,
};
pub use logical::{concurrence, logical_zz, logical_zz_sequence, logical_zz_target, ANCILLA_TOLERANCE};
pub use parity::{
    compare_sectors, compare_sectors_q4, joint_parity_native, single_shot_joint_parity, single_shot_q4,
    three_step_joint_parity, truncation_diagnostic, JointParity, SectorComparison, SectorReport, ThreeStepProtocol,
};
pub use steps::{
    closure_diagnostic, gaussian_swap_drive, naive_swap_ancilla_pulse, naive_zz_half_pulse, swap_hamiltonian,
    swap_step, zz_half_step, ProtocolStep, Sign, StepLabel, SWAP_AREA_TOLERANCE,
};

use crate::error::Result;
use crate::sweep::{run_sweep, SweepTable};

/// Sweeps one noise strength through `eval` (an infidelity or
/// misclassification probability) and fits the log-log slope.
pub fn noise_sweep_protocol<F>(axis: &str, quantity: &str, grid: &[f64], eval: F) -> Result<SweepTable>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    run_sweep(axis, quantity, grid, eval)
}
