//! Pulses as space curves: error curves, Frenet-Serret analysis, robustness
//! conditions and gate readout in the adjoint representation.

mod curve;
mod diff;
mod frame;
mod interp;
mod pulse;
pub(crate) mod su2;

pub use curve::{
    arc_length_reparametrize, error_curve, first_order_error, is_closed, point_reflection, pulse_tangents,
    signed_area, Parameterization, SpaceCurve, ARC_LENGTH_TOLERANCE,
};
pub use frame::{curvature_torsion, frenet_frame, implemented_gate, pulse_from_curve, AdjointRep, FrenetFrame};
pub use pulse::{bloch_to_matrix, pulse_hamiltonian, ControlPulse, PulseHamiltonian};

pub(crate) use curve::area_vector;
pub(crate) use diff::cumulative_integral;

pub type Vec3 = nalgebra::Vector3<f64>;

/// Adjoint representation of the gate a pulse implements, from direct
/// propagation.
pub fn dynamic_gate(pulse: &ControlPulse) -> AdjointRep {
    AdjointRep::from_unitary(&su2::rotor_final(pulse, 0.0).matrix()).expect("rotors are unitary")
}
