use nalgebra::{Matrix3, Quaternion, UnitQuaternion};

use super::curve::SpaceCurve;
use super::diff::derivative;
use super::pulse::ControlPulse;
use super::su2::Rotor;
use super::Vec3;
use crate::error::{Error, Result};
use crate::sim::{pauli, CMatrix, TimeGrid};

/// Tangent, normal and binormal samples along an arc-length curve.
#[derive(Clone, Debug, PartialEq)]
pub struct FrenetFrame {
    t_end: f64,
    tangent: Vec<Vec3>,
    normal: Vec<Vec3>,
    binormal: Vec<Vec3>,
}

impl FrenetFrame {
    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn len(&self) -> usize {
        self.tangent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tangent.is_empty()
    }

    pub fn dt(&self) -> f64 {
        self.t_end / (self.len() - 1) as f64
    }

    pub fn tangent(&self) -> &[Vec3] {
        &self.tangent
    }

    pub fn normal(&self) -> &[Vec3] {
        &self.normal
    }

    pub fn binormal(&self) -> &[Vec3] {
        &self.binormal
    }

    /// `ℛ_F(t_k)` with rows `[-B, N, T]`.
    pub fn rotation_at(&self, k: usize) -> Matrix3<f64> {
        Matrix3::from_rows(&[
            (-self.binormal[k]).transpose(),
            self.normal[k].transpose(),
            self.tangent[k].transpose(),
        ])
    }

    /// Largest deviation from orthonormality and from `B = T × N`.
    pub fn orthonormality_error(&self) -> f64 {
        let mut err: f64 = 0.0;
        for k in 0..self.len() {
            let (t, n, b) = (self.tangent[k], self.normal[k], self.binormal[k]);
            err = err
                .max(t.dot(&n).abs())
                .max(t.dot(&b).abs())
                .max(n.dot(&b).abs())
                .max((t.norm() - 1.0).abs())
                .max((n.norm() - 1.0).abs())
                .max((b.norm() - 1.0).abs())
                .max((t.cross(&n) - b).norm());
        }
        err
    }

    /// Max-norm residual of `T' = κN`, `N' = -κT + τB`, `B' = -τN`.
    pub fn serret_residual(&self) -> f64 {
        let h = self.dt();
        let (kappa, tau) = curvature_torsion(self);
        let dt = derivative(&self.tangent, h);
        let dn = derivative(&self.normal, h);
        let db = derivative(&self.binormal, h);
        let mut err: f64 = 0.0;
        for k in 0..self.len() {
            let (t, n, b) = (self.tangent[k], self.normal[k], self.binormal[k]);
            err = err
                .max((dt[k] - n * kappa[k]).amax())
                .max((dn[k] + t * kappa[k] - b * tau[k]).amax())
                .max((db[k] + n * tau[k]).amax());
        }
        err
    }
}

/// Frenet-Serret frame of an arc-length curve. Fails on segments where the
/// curvature drops below `1e-6 / L` or the normal flips between samples.
pub fn frenet_frame(curve: &SpaceCurve) -> Result<FrenetFrame> {
    if !curve.is_arc_length() {
        return Err(Error::NotArcLength);
    }
    let n = curve.len();
    let threshold = 1e-6 / curve.t_end().max(f64::MIN_POSITIVE);
    if n < 3 {
        return Err(Error::DegenerateFrame { start: 0.0, end: curve.t_end(), threshold });
    }
    let h = curve.dt();
    let tangent: Vec<Vec3> = curve.velocity().iter().map(|v| v.normalize()).collect();
    let bent: Vec<Vec3> = derivative(&tangent, h)
        .iter()
        .zip(&tangent)
        .map(|(d, t)| d - t * d.dot(t))
        .collect();

    let flat: Vec<bool> = bent.iter().map(|b| b.norm() < threshold).collect();
    if let Some(first) = flat.iter().position(|&f| f) {
        let last = flat[first..].iter().position(|&f| !f).map_or(n - 1, |p| first + p - 1);
        return Err(Error::DegenerateFrame { start: first as f64 * h, end: last as f64 * h, threshold });
    }
    let normal: Vec<Vec3> = bent.iter().map(|b| b.normalize()).collect();
    if let Some(k) = normal.windows(2).position(|w| w[0].dot(&w[1]) < 0.0) {
        return Err(Error::DegenerateFrame { start: k as f64 * h, end: (k + 1) as f64 * h, threshold });
    }
    let binormal = tangent.iter().zip(&normal).map(|(t, n)| t.cross(n)).collect();
    Ok(FrenetFrame { t_end: curve.t_end(), tangent, normal, binormal })
}

/// `κ = T'·N` and `τ = N'·B` at every sample.
pub fn curvature_torsion(frame: &FrenetFrame) -> (Vec<f64>, Vec<f64>) {
    let h = frame.dt();
    let dt = derivative(&frame.tangent, h);
    let dn = derivative(&frame.normal, h);
    let kappa = dt.iter().zip(&frame.normal).map(|(d, n)| d.dot(n)).collect();
    let tau = dn.iter().zip(&frame.binormal).map(|(d, b)| d.dot(b)).collect();
    (kappa, tau)
}

/// Control fields realising an arc-length curve: `Ω = κ`, `Δ = Φ' - τ`, with
/// `Φ ≡ 0` when no phase profile is given.
pub fn pulse_from_curve(curve: &SpaceCurve, phi: Option<&[f64]>) -> Result<ControlPulse> {
    let frame = frenet_frame(curve)?;
    let (kappa, tau) = curvature_torsion(&frame);
    let grid = TimeGrid::new(curve.t_end(), curve.len() - 1)?;
    let phi = match phi {
        Some(p) => p.to_vec(),
        None => vec![0.0; curve.len()],
    };
    if phi.len() != curve.len() {
        return Err(Error::Dimension { expected: curve.len(), got: phi.len() });
    }
    let dphi = derivative(&phi, grid.dt());
    let delta = dphi.iter().zip(&tau).map(|(d, t)| d - t).collect();
    ControlPulse::new(grid, kappa, phi, delta)
}

/// Rotation matrix `ℛ_ij = ½ Tr(U† σ_i U σ_j)` of a single-qubit gate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdjointRep(Matrix3<f64>);

impl AdjointRep {
    pub const TOLERANCE: f64 = 1e-8;

    pub fn new(m: Matrix3<f64>) -> Result<Self> {
        let orth = (m.transpose() * m - Matrix3::identity()).amax();
        let det = m.determinant();
        if orth > Self::TOLERANCE || (det - 1.0).abs() > Self::TOLERANCE {
            return Err(Error::InvalidParameter(format!(
                "not a proper rotation: |RᵀR - I| = {orth:.3e}, det = {det}"
            )));
        }
        Ok(AdjointRep(m))
    }

    pub fn identity() -> Self {
        AdjointRep(Matrix3::identity())
    }

    pub fn from_unitary(u: &CMatrix) -> Result<Self> {
        if u.shape() != (2, 2) {
            return Err(Error::Dimension { expected: 2, got: u.nrows() });
        }
        let s = pauli::all();
        let ud = u.adjoint();
        AdjointRep::new(Matrix3::from_fn(|i, j| 0.5 * (&ud * &s[i] * u * &s[j]).trace().re))
    }

    /// `ℛ` of `exp(-i θ Z / 2)`.
    pub fn rotation_z(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        AdjointRep(Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0))
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn compose(&self, other: &AdjointRep) -> AdjointRep {
        AdjointRep(self.0 * other.0)
    }

    pub fn max_abs_diff(&self, other: &AdjointRep) -> f64 {
        (self.0 - other.0).amax()
    }

    /// The SU(2) preimage with `Re U₀₀ ≥ 0`.
    pub fn to_su2(&self) -> CMatrix {
        let q = UnitQuaternion::from_matrix(&self.0);
        let mut q: Quaternion<f64> = *q.quaternion();
        if q.w.abs() < 1e-12 {
            q.w = 0.0;
        }
        let sign_key = [q.w, q.i, q.j, q.k].into_iter().find(|x| x.abs() > 1e-12).unwrap_or(1.0);
        if sign_key < 0.0 {
            q = -q;
        }
        Rotor { w: q.w, v: Vec3::new(q.i, q.j, q.k) }.matrix()
    }
}

/// Gate read off the frame: `ℛ_Z(Φ(T_g)) ℛ_F(T_g) ℛ_F(0)ᵀ`.
pub fn implemented_gate(frame: &FrenetFrame, phi_final: f64) -> AdjointRep {
    let m = frame.rotation_at(frame.len() - 1) * frame.rotation_at(0).transpose();
    AdjointRep::rotation_z(phi_final).compose(&AdjointRep(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{error_curve, point_reflection, pulse_hamiltonian, Parameterization};
    use crate::sim::{c, equal_up_to_global_phase, matrix_exp, propagate};
    use std::f64::consts::PI;

    fn helix(a: f64, b: f64, n: usize, length: f64) -> SpaceCurve {
        let w = (a * a + b * b).sqrt();
        let grid = TimeGrid::new(length, n).unwrap();
        SpaceCurve::from_fn(&grid, |s| Vec3::new(a * (s / w).cos(), a * (s / w).sin(), b * s / w), Parameterization::ArcLength)
            .unwrap()
    }

    fn interior(v: &[f64]) -> &[f64] {
        &v[2..v.len() - 2]
    }

    #[test]
    fn circle_frame() {
        let omega = 1.4;
        let pulse = ControlPulse::constant(TimeGrid::new(2.0 * PI / omega, 2000).unwrap(), omega, 0.0, 0.0).unwrap();
        let frame = frenet_frame(&error_curve(&pulse).unwrap()).unwrap();
        for k in 0..frame.len() {
            let t = k as f64 * frame.dt();
            let (s, c) = (omega * t).sin_cos();
            assert!((frame.tangent()[k] - Vec3::new(0.0, s, c)).norm() < 1e-4);
            assert!((frame.normal()[k] - Vec3::new(0.0, c, -s)).norm() < 1e-4);
            assert!((frame.binormal()[k] - Vec3::new(-1.0, 0.0, 0.0)).norm() < 1e-4);
        }
        assert!(frame.orthonormality_error() < 1e-12);
        assert!(frame.serret_residual() < 1e-4);
        let (kappa, tau) = curvature_torsion(&frame);
        assert!(kappa.iter().all(|k| (k - omega).abs() < 1e-3));
        assert!(tau.iter().all(|t| t.abs() < 1e-3));
        assert!(implemented_gate(&frame, 0.0).max_abs_diff(&AdjointRep::identity()) < 1e-6);
        assert!(AdjointRep::new(frame.rotation_at(0)).unwrap().max_abs_diff(&AdjointRep::identity()) < 1e-12);
    }

    #[test]
    fn straight_line_is_degenerate() {
        let grid = TimeGrid::new(2.0, 100).unwrap();
        let line = SpaceCurve::from_fn(&grid, |t| Vec3::new(0.0, 0.0, t), Parameterization::ArcLength).unwrap();
        match frenet_frame(&line) {
            Err(Error::DegenerateFrame { start, end, .. }) => assert!(start == 0.0 && (end - 2.0).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn general_curve_needs_reparameterization() {
        let grid = TimeGrid::new(1.0, 100).unwrap();
        let curve = SpaceCurve::from_fn(&grid, |t| Vec3::new(t.cos(), t.sin(), 0.0) * 2.0, Parameterization::General).unwrap();
        assert!(matches!(frenet_frame(&curve), Err(Error::NotArcLength)));
    }

    #[test]
    fn helix_curvature_and_torsion() {
        let (a, b) = (1.5, 0.8);
        let w2 = a * a + b * b;
        let frame = frenet_frame(&helix(a, b, 2000, 20.0)).unwrap();
        let (kappa, tau) = curvature_torsion(&frame);
        assert!(kappa.iter().all(|k| (k - a / w2).abs() < 1e-3));
        assert!(tau.iter().all(|t| (t - b / w2).abs() < 1e-3));
        assert!(frame.serret_residual() < 1e-4);
    }

    #[test]
    fn reflected_helix_flips_torsion() {
        let (a, b) = (1.0, 0.6);
        let curve = helix(a, b, 2000, 15.0);
        let frame = frenet_frame(&curve).unwrap();
        let mirror = frenet_frame(&point_reflection(&curve)).unwrap();
        let (k1, t1) = curvature_torsion(&frame);
        let (k2, t2) = curvature_torsion(&mirror);
        for i in 0..k1.len() {
            assert!((k1[i] - k2[i]).abs() < 1e-3 && (t1[i] + t2[i]).abs() < 1e-3);
            assert!((frame.tangent()[i] + mirror.tangent()[i]).norm() < 1e-10);
            assert!((frame.normal()[i] + mirror.normal()[i]).norm() < 1e-10);
            assert!((frame.binormal()[i] - mirror.binormal()[i]).norm() < 1e-10);
        }
    }

    #[test]
    fn circle_and_helix_pulses() {
        let omega = 2.0;
        let pulse = ControlPulse::constant(TimeGrid::new(3.0, 2000).unwrap(), omega, 0.0, 0.0).unwrap();
        let back = pulse_from_curve(&error_curve(&pulse).unwrap(), None).unwrap();
        assert!(back.omega().iter().all(|o| (o - omega).abs() < 1e-3));
        assert!(back.delta().iter().all(|d| d.abs() < 1e-3));

        let (a, b) = (1.5, 0.8);
        let w2 = a * a + b * b;
        let back = pulse_from_curve(&helix(a, b, 2000, 20.0), None).unwrap();
        assert!(interior(back.omega()).iter().all(|o| (o - a / w2).abs() < 1e-3));
        assert!(interior(back.delta()).iter().all(|d| (d + b / w2).abs() < 1e-3));
    }

    #[test]
    fn phase_gauge_shifts_the_detuning() {
        let pulse = ControlPulse::constant(TimeGrid::new(4.0, 2000).unwrap(), 1.0, 0.0, -0.5).unwrap();
        let curve = error_curve(&pulse).unwrap();
        let phi: Vec<f64> = (0..=2000).map(|k| 0.3 * (k as f64 * 0.002)).collect();
        let back = pulse_from_curve(&curve, Some(&phi)).unwrap();
        assert!(interior(back.delta()).iter().all(|d| (d - (0.3 - 0.5)).abs() < 1e-3));
        // the gauged pulse drives the same curve, so the gates differ by ℛ_Z(Φ(T))
        let u0 = propagate(&pulse_hamiltonian(&pulse, 0.0), pulse.grid()).unwrap();
        let u1 = propagate(&pulse_hamiltonian(&back, 0.0), back.grid()).unwrap();
        let r0 = AdjointRep::from_unitary(&u0).unwrap();
        let r1 = AdjointRep::from_unitary(&u1).unwrap();
        assert!(AdjointRep::rotation_z(phi[2000]).compose(&r0).max_abs_diff(&r1) < 1e-3);
    }

    #[test]
    fn adjoint_of_z_rotation() {
        let theta = 0.9;
        let u = matrix_exp(&(pauli::z() * c(0., -theta / 2.))).unwrap();
        let r = AdjointRep::from_unitary(&u).unwrap();
        assert!(r.max_abs_diff(&AdjointRep::rotation_z(theta)) < 1e-14);
        assert!(equal_up_to_global_phase(&r.to_su2(), &u, 1e-12).unwrap());
    }

    #[test]
    fn su2_readout_fixes_the_sign() {
        for k in [Vec3::new(0.3, -0.2, 0.9), Vec3::new(PI / 2.0, 0.0, 0.0), Vec3::new(0.0, 1.2, -1.0)] {
            let u = matrix_exp(&(crate::geometry::bloch_to_matrix(&k) * c(0., -1.))).unwrap();
            let back = AdjointRep::from_unitary(&u).unwrap().to_su2();
            assert!(back[(0, 0)].re >= 0.0);
            assert!(equal_up_to_global_phase(&back, &u, 1e-10).unwrap());
        }
    }

    #[test]
    fn rejects_improper_rotation() {
        assert!(AdjointRep::new(-Matrix3::identity()).is_err());
    }
}
