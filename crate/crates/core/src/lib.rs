//! Noise-robust control pulses from space curves, verified on a simulated
//! dual-rail cavity qubit with a transmon ancilla.
//!
//! The crate is organised bottom-up:
//!
//! * [`sim`]: dense propagation and gate metrics,
//! * [`geometry`]: pulse <-> error-curve mapping and Frenet-Serret analysis,
//! * [`crosstalk`]: tangent-overlap condition for ZZ crosstalk,
//! * [`dualrail`]: two-cavity + transmon Hamiltonians and projections,
//! * [`protocols`]: joint-parity erasure checks and the logical ZZ gate,
//! * [`design`]: numerical synthesis of robust ancilla pulses,
//! * [`sweep`]: noise sweeps with log-log slope fits,
//! * [`io`]: CSV formats for pulses, curves and sweep tables.

pub mod crosstalk;
pub mod design;
pub mod dualrail;
pub mod error;
pub mod geometry;
pub mod io;
pub mod protocols;
pub mod sim;
pub mod sweep;

pub use error::{Error, Result};
