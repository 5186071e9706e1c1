//! First-order ZZ-crosstalk cancellation through orthogonal error-curve
//! tangents.

use nalgebra::Matrix3;

use crate::error::{Error, Result};
use crate::geometry::su2::rotor_path;
use crate::geometry::{ControlPulse, SpaceCurve, Vec3};
use crate::sim::{c, kron, pauli, CMatrix, HamiltonianSampler, TimeGrid, Unitary};
use crate::sim::{gate_infidelity, propagate};
use crate::sweep::{run_sweep, SweepTable};

/// `M_ij = ∫₀¹ T₁ⁱ(t) T₂ʲ(t) dt` on time-normalized curves.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrosstalkMatrix(pub Matrix3<f64>);

impl CrosstalkMatrix {
    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.amax()
    }

    pub fn transpose(&self) -> CrosstalkMatrix {
        CrosstalkMatrix(self.0.transpose())
    }
}

/// Two pulses rescaled to unit gate time on a shared grid.
#[derive(Clone, Debug, PartialEq)]
pub struct PulsePair {
    pulse1: ControlPulse,
    pulse2: ControlPulse,
}

impl PulsePair {
    pub fn new(pulse1: &ControlPulse, pulse2: &ControlPulse) -> Result<Self> {
        let (n1, n2) = (pulse1.grid().n_steps(), pulse2.grid().n_steps());
        if n1 != n2 {
            return Err(Error::Dimension { expected: n1 + 1, got: n2 + 1 });
        }
        Ok(PulsePair { pulse1: pulse1.normalized_time(), pulse2: pulse2.normalized_time() })
    }

    pub fn pulse1(&self) -> &ControlPulse {
        &self.pulse1
    }

    pub fn pulse2(&self) -> &ControlPulse {
        &self.pulse2
    }

    pub fn grid(&self) -> &TimeGrid {
        self.pulse1.grid()
    }

    pub fn swapped(&self) -> PulsePair {
        PulsePair { pulse1: self.pulse2.clone(), pulse2: self.pulse1.clone() }
    }
}

/// Constant Rabi rates `κ₁`, `κ₂` over unit time, `Φ = Δ = 0`.
pub fn square_pulse_pair(kappa1: f64, kappa2: f64, n_steps: usize) -> Result<PulsePair> {
    if kappa1 == 0.0 || kappa2 == 0.0 {
        return Err(Error::InvalidParameter("square pulses need non-zero curvature".into()));
    }
    let grid = TimeGrid::new(1.0, n_steps)?;
    PulsePair::new(&ControlPulse::constant(grid, kappa1, 0.0, 0.0)?, &ControlPulse::constant(grid, kappa2, 0.0, 0.0)?)
}

/// Dynamical tangents `Bloch(U† Z U)` of a pulse and their exact time
/// derivatives on its grid.
pub(crate) struct TangentSamples {
    tangents: Vec<Vec3>,
    rates: Vec<Vec3>,
    dt: f64,
    t_end: f64,
}

impl TangentSamples {
    pub(crate) fn new(pulse: &ControlPulse) -> Self {
        let path = rotor_path(pulse, 0.0);
        let tangents = path.iter().map(|u| u.tangent()).collect();
        let rates = path.iter().zip(pulse.grid().times()).map(|(u, t)| u.tangent_rate(&pulse.field(t, 0.0))).collect();
        TangentSamples { tangents, rates, dt: pulse.grid().dt(), t_end: pulse.grid().t_end() }
    }

    /// `(1/T) ∫ T₁ T₂ᵀ dt` by the end-corrected trapezoid; both samples must
    /// share a grid.
    pub(crate) fn overlap(&self, other: &TangentSamples) -> Matrix3<f64> {
        let (t1, d1, t2, d2) = (&self.tangents, &self.rates, &other.tangents, &other.rates);
        let h = self.dt;
        let n = t1.len();
        let mut m = Matrix3::zeros();
        for k in 0..n - 1 {
            m += (t1[k] * t2[k].transpose() + t1[k + 1] * t2[k + 1].transpose()) * (0.5 * h);
        }
        let rate = |k: usize| d1[k] * t2[k].transpose() + t1[k] * d2[k].transpose();
        m -= (rate(n - 1) - rate(0)) * (h * h / 12.0);
        m / self.t_end
    }
}

/// Overlap of the dynamical tangents `Bloch(U_i† Z U_i)` of both pulses,
/// integrated by the end-corrected trapezoid.
pub fn tangent_overlap_matrix(pair: &PulsePair) -> CrosstalkMatrix {
    CrosstalkMatrix(TangentSamples::new(&pair.pulse1).overlap(&TangentSamples::new(&pair.pulse2)))
}

/// Overlap of two curves after normalizing each to unit length and duration.
pub fn tangent_overlap_from_curves(curve1: &SpaceCurve, curve2: &SpaceCurve) -> Result<CrosstalkMatrix> {
    let (c1, c2) = (curve1.normalized()?, curve2.normalized()?);
    if c1.len() != c2.len() {
        return Err(Error::Dimension { expected: c1.len(), got: c2.len() });
    }
    if c1.len() < 2 {
        return Ok(CrosstalkMatrix(Matrix3::zeros()));
    }
    let t1: Vec<Vec3> = c1.velocity().iter().map(|v| v.normalize()).collect();
    let t2: Vec<Vec3> = c2.velocity().iter().map(|v| v.normalize()).collect();
    let h = c1.dt();
    let f: Vec<Matrix3<f64>> = t1.iter().zip(&t2).map(|(a, b)| a * b.transpose()).collect();
    let mut m = Matrix3::zeros();
    for k in 0..f.len() - 1 {
        m += (f[k] + f[k + 1]) * (0.5 * h);
    }
    Ok(CrosstalkMatrix(m))
}

/// `H₁ ⊗ I + I ⊗ H₂ + ξ Z ⊗ Z` on the normalized pair.
pub struct CrosstalkHamiltonian<'a> {
    pair: &'a PulsePair,
    zz: CMatrix,
}

pub fn two_qubit_crosstalk_hamiltonian(pair: &PulsePair, xi: f64) -> CrosstalkHamiltonian<'_> {
    CrosstalkHamiltonian { pair, zz: kron(&pauli::z(), &pauli::z()) * c(xi, 0.) }
}

impl HamiltonianSampler for CrosstalkHamiltonian<'_> {
    fn dim(&self) -> usize {
        4
    }

    fn sample(&self, t: f64) -> CMatrix {
        let h1 = crate::geometry::bloch_to_matrix(&self.pair.pulse1.field(t, 0.0));
        let h2 = crate::geometry::bloch_to_matrix(&self.pair.pulse2.field(t, 0.0));
        kron(&h1, &pauli::id()) + kron(&pauli::id(), &h2) + &self.zz
    }
}

/// Infidelity of the crosstalk-perturbed pair against `target` for every ξ.
pub fn crosstalk_sweep(pair: &PulsePair, target: &Unitary, xi_grid: &[f64]) -> Result<SweepTable> {
    if target.dim() != 4 {
        return Err(Error::Dimension { expected: 4, got: target.dim() });
    }
    run_sweep("xi", "infidelity", xi_grid, |xi| {
        let u = propagate(&two_qubit_crosstalk_hamiltonian(pair, xi), pair.grid())?;
        gate_infidelity(&u, target)
    })
}
