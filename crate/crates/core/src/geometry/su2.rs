//! Allocation-free SU(2) propagation used by the geometric analyses.

use nalgebra::Matrix3;

use super::pulse::ControlPulse;
use super::Vec3;
use crate::sim::{c, CMatrix};

const GAUSS_OFFSET: f64 = 0.288_675_134_594_812_9;

/// `U = w I - i v·σ` with `w² + |v|² = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Rotor {
    pub w: f64,
    pub v: Vec3,
}

impl Rotor {
    pub fn identity() -> Self {
        Rotor { w: 1.0, v: Vec3::zeros() }
    }

    /// `exp(-i k·σ)`
    pub fn exp(k: Vec3) -> Self {
        let a = k.norm();
        if a == 0.0 {
            return Rotor::identity();
        }
        Rotor { w: a.cos(), v: k * (a.sin() / a) }
    }

    /// `self · other`
    pub fn then_after(&self, other: &Rotor) -> Rotor {
        Rotor { w: self.w * other.w - self.v.dot(&other.v), v: other.v * self.w + self.v * other.w + self.v.cross(&other.v) }
    }

    pub fn matrix(&self) -> CMatrix {
        let (w, v) = (self.w, self.v);
        CMatrix::from_row_slice(2, 2, &[c(w, -v.z), c(-v.y, -v.x), c(v.y, -v.x), c(w, v.z)])
    }

    /// Adjoint rotation `R_ij = ½ Tr(U† σ_i U σ_j)`.
    pub fn rotation(&self) -> Matrix3<f64> {
        let (w, x, y, z) = (self.w, self.v.x, self.v.y, self.v.z);
        Matrix3::new(
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - z * w),
            2.0 * (x * z + y * w),
            2.0 * (x * y + z * w),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - x * w),
            2.0 * (x * z - y * w),
            2.0 * (y * z + x * w),
            1.0 - 2.0 * (x * x + y * y),
        )
    }

    /// Bloch vector of `U† Z U`.
    pub fn tangent(&self) -> Vec3 {
        let (w, x, y, z) = (self.w, self.v.x, self.v.y, self.v.z);
        Vec3::new(2.0 * (x * z - y * w), 2.0 * (y * z + x * w), 1.0 - 2.0 * (x * x + y * y))
    }

    /// Bloch vector of `i U† [h·σ, Z] U`, the time derivative of
    /// [`Rotor::tangent`] under `H = h·σ`.
    pub fn tangent_rate(&self, h: &Vec3) -> Vec3 {
        // i[h·σ, Z] = 2 (z × h)·σ, conjugated by U
        let m = Vec3::z().cross(h) * 2.0;
        self.rotation().transpose() * m
    }
}

/// Rotor `U(t_k)` at every grid point of the pulse under `(Ω, Φ, Δ + γ)`,
/// stepped with the same fourth-order Magnus rule as [`crate::sim::propagate`].
pub(crate) fn rotor_path(pulse: &ControlPulse, gamma: f64) -> Vec<Rotor> {
    let grid = pulse.grid();
    let dt = grid.dt();
    let mut u = Rotor::identity();
    let mut out = Vec::with_capacity(grid.len());
    out.push(u);
    for k in 0..grid.n_steps() {
        u = magnus_step(pulse, gamma, grid.time(k), dt).then_after(&u);
        out.push(u);
    }
    out
}

pub(crate) fn rotor_final(pulse: &ControlPulse, gamma: f64) -> Rotor {
    let grid = pulse.grid();
    let dt = grid.dt();
    (0..grid.n_steps()).fold(Rotor::identity(), |u, k| magnus_step(pulse, gamma, grid.time(k), dt).then_after(&u))
}

fn magnus_step(pulse: &ControlPulse, gamma: f64, t: f64, dt: f64) -> Rotor {
    let h1 = pulse.field(t + (0.5 - GAUSS_OFFSET) * dt, gamma);
    let h2 = pulse.field(t + (0.5 + GAUSS_OFFSET) * dt, gamma);
    let k = (h1 + h2) * (0.5 * dt) + h2.cross(&h1) * (3f64.sqrt() * dt * dt / 6.0);
    Rotor::exp(k)
}
