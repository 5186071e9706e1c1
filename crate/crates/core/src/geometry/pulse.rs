use super::Vec3;
use crate::error::{Error, Result};
use crate::sim::{c, pauli, CMatrix, HamiltonianSampler, TimeGrid};

/// Rabi rate `Ω`, phase `Φ` and detuning `Δ` sampled on a uniform grid.
///
/// `Ω` may change sign: a negative rate is the same drive as `|Ω|` with the
/// phase advanced by `π`, and keeps sampled waveforms smooth through zero.
#[derive(Clone, Debug, PartialEq)]
pub struct ControlPulse {
    grid: TimeGrid,
    omega: Vec<f64>,
    phi: Vec<f64>,
    delta: Vec<f64>,
}

impl ControlPulse {
    pub fn new(grid: TimeGrid, omega: Vec<f64>, phi: Vec<f64>, delta: Vec<f64>) -> Result<Self> {
        for (name, v) in [("omega", &omega), ("phi", &phi), ("delta", &delta)] {
            if v.len() != grid.len() {
                return Err(Error::InvalidParameter(format!(
                    "{name} has {} samples, grid has {}",
                    v.len(),
                    grid.len()
                )));
            }
            if let Some(k) = v.iter().position(|x| !x.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name}[{k}] is not finite")));
            }
        }
        Ok(ControlPulse { grid, omega, phi, delta })
    }

    /// Samples `f(t) = (Ω, Φ, Δ)` at every grid point.
    pub fn from_fn(grid: TimeGrid, f: impl Fn(f64) -> (f64, f64, f64)) -> Result<Self> {
        let (mut omega, mut phi, mut delta) = (Vec::new(), Vec::new(), Vec::new());
        for t in grid.times() {
            let (o, p, d) = f(t);
            omega.push(o);
            phi.push(p);
            delta.push(d);
        }
        ControlPulse::new(grid, omega, phi, delta)
    }

    pub fn constant(grid: TimeGrid, omega: f64, phi: f64, delta: f64) -> Result<Self> {
        ControlPulse::from_fn(grid, |_| (omega, phi, delta))
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn duration(&self) -> f64 {
        self.grid.t_end()
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn delta(&self) -> &[f64] {
        &self.delta
    }

    /// Linearly interpolated `(Ω, Φ, Δ)` at `t`, clamped to `[0, T_g]`.
    pub fn at(&self, t: f64) -> (f64, f64, f64) {
        let n = self.grid.n_steps();
        let x = (t / self.grid.dt()).clamp(0.0, n as f64);
        let k = (x.floor() as usize).min(n - 1);
        let s = x - k as f64;
        let lerp = |v: &[f64]| v[k] + s * (v[k + 1] - v[k]);
        (lerp(&self.omega), lerp(&self.phi), lerp(&self.delta))
    }

    /// Bloch vector `h` of `H(t) = h·σ` with an extra quasi-static detuning
    /// `gamma`.
    pub fn field(&self, t: f64, gamma: f64) -> Vec3 {
        let (omega, phi, delta) = self.at(t);
        Vec3::new(0.5 * omega * phi.cos(), 0.5 * omega * phi.sin(), 0.5 * (delta + gamma))
    }

    /// Adds a constant to every detuning sample.
    pub fn with_detuning_offset(&self, offset: f64) -> ControlPulse {
        let mut p = self.clone();
        p.delta.iter_mut().for_each(|d| *d += offset);
        p
    }

    /// The pulse driving `X U X`: `Φ → -Φ`, `Δ → -Δ`.
    pub fn conjugated_by_x(&self) -> ControlPulse {
        let mut p = self.clone();
        p.phi.iter_mut().for_each(|x| *x = -*x);
        p.delta.iter_mut().for_each(|x| *x = -*x);
        p
    }

    /// Same evolution on a unit-duration grid: fields scale by `T_g`.
    pub fn normalized_time(&self) -> ControlPulse {
        let t = self.duration();
        ControlPulse {
            grid: TimeGrid::new(1.0, self.grid.n_steps()).expect("positive step count"),
            omega: self.omega.iter().map(|x| x * t).collect(),
            phi: self.phi.clone(),
            delta: self.delta.iter().map(|x| x * t).collect(),
        }
    }
}

/// `H(t) = (Ω/2)(cos Φ X + sin Φ Y) + ((Δ + γ)/2) Z`.
#[derive(Clone, Copy, Debug)]
pub struct PulseHamiltonian<'a> {
    pulse: &'a ControlPulse,
    gamma: f64,
}

pub fn pulse_hamiltonian(pulse: &ControlPulse, gamma: f64) -> PulseHamiltonian<'_> {
    PulseHamiltonian { pulse, gamma }
}

/// `h·σ`
pub fn bloch_to_matrix(h: &Vec3) -> CMatrix {
    pauli::x() * c(h.x, 0.) + pauli::y() * c(h.y, 0.) + pauli::z() * c(h.z, 0.)
}

impl HamiltonianSampler for PulseHamiltonian<'_> {
    fn dim(&self) -> usize {
        2
    }

    fn sample(&self, t: f64) -> CMatrix {
        bloch_to_matrix(&self.pulse.field(t, self.gamma))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::max_abs_diff;

    fn grid() -> TimeGrid {
        TimeGrid::new(2.0, 20).unwrap()
    }

    #[test]
    fn rejects_mismatched_lengths() {
        let err = ControlPulse::new(grid(), vec![0.0; 20], vec![0.0; 21], vec![0.0; 21]);
        assert!(matches!(err, Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn hamiltonian_samples() {
        let zero = ControlPulse::constant(grid(), 0.0, 0.0, 0.0).unwrap();
        assert!(max_abs_diff(&pulse_hamiltonian(&zero, 0.0).sample(0.7), &CMatrix::zeros(2, 2)) < 1e-15);
        let rabi = ControlPulse::constant(grid(), 1.5, 0.0, 0.0).unwrap();
        assert!(max_abs_diff(&pulse_hamiltonian(&rabi, 0.0).sample(1.3), &(pauli::x() * c(0.75, 0.))) < 1e-15);
        assert!(max_abs_diff(&pulse_hamiltonian(&zero, 0.1).sample(0.2), &(pauli::z() * c(0.05, 0.))) < 1e-15);
    }

    #[test]
    fn interpolates_linearly() {
        let p = ControlPulse::from_fn(grid(), |t| (t, 2.0 * t, -t)).unwrap();
        let (o, ph, d) = p.at(0.55);
        assert!((o - 0.55).abs() < 1e-14 && (ph - 1.1).abs() < 1e-14 && (d + 0.55).abs() < 1e-14);
        assert_eq!(p.at(5.0), (2.0, 4.0, -2.0));
    }
}
