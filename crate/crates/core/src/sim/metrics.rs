use num_complex::Complex64;

use super::{ensure_same_dim, max_abs_diff, CMatrix};
use crate::error::Result;

/// Average gate fidelity `(d + |Tr(V†U)|²) / (d(d+1))`.
pub fn average_gate_fidelity(u: &CMatrix, v: &CMatrix) -> Result<f64> {
    Ok(1.0 - gate_infidelity(u, v)?)
}

/// `1 - F`, evaluated as `‖W - (Tr W / d) I‖²_F / (d + 1)` with `W = V†U`,
/// which keeps full relative precision when the gates nearly agree.
pub fn gate_infidelity(u: &CMatrix, v: &CMatrix) -> Result<f64> {
    let d = ensure_same_dim(u, v)?;
    let mut w = v.adjoint() * u;
    let mean = w.trace() / d as f64;
    for k in 0..d {
        w[(k, k)] -= mean;
    }
    Ok((w.norm_squared() / (d as f64 + 1.0)).clamp(0.0, 1.0))
}

/// `1 - (Tr(B†B) + |Tr(T†B)|²) / (d(d+1))` for a block `B` of a larger
/// unitary that may leak out of the subspace; equals [`gate_infidelity`]
/// when `B` is unitary.
pub fn subspace_infidelity(block: &CMatrix, target: &CMatrix) -> Result<f64> {
    let d = ensure_same_dim(block, target)? as f64;
    let overlap = (target.adjoint() * block).trace().norm_sqr();
    Ok((1.0 - (block.norm_squared() + overlap) / (d * (d + 1.0))).clamp(0.0, 1.0))
}

/// Phase `α` of the largest-magnitude entry of `V†U`.
pub fn global_phase(u: &CMatrix, v: &CMatrix) -> Result<f64> {
    ensure_same_dim(u, v)?;
    let w = v.adjoint() * u;
    let best = w.iter().fold(Complex64::new(0.0, 0.0), |best, z| if z.norm() > best.norm() { *z } else { best });
    Ok(best.arg())
}

/// `max |U - e^{iα} V| <= tol` with `α` from [`global_phase`].
pub fn equal_up_to_global_phase(u: &CMatrix, v: &CMatrix, tol: f64) -> Result<bool> {
    let alpha = global_phase(u, v)?;
    let rotated = v * Complex64::from_polar(1.0, alpha);
    Ok(max_abs_diff(u, &rotated) <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{c, pauli};
    use std::f64::consts::PI;

    #[test]
    fn identical_gates_have_unit_fidelity() {
        let u = pauli::y();
        assert!((average_gate_fidelity(&u, &u).unwrap() - 1.0).abs() < 1e-15);
        let shifted = &u * Complex64::from_polar(1.0, 1.234);
        assert!((average_gate_fidelity(&shifted, &u).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn subspace_infidelity_reduces_to_the_unitary_case() {
        let u = pauli::x();
        let v = crate::sim::matrix_exp(&(pauli::y() * c(0., -0.3))).unwrap();
        let a = subspace_infidelity(&u, &v).unwrap();
        assert!((a - gate_infidelity(&u, &v).unwrap()).abs() < 1e-15);
        let half = pauli::id() * c(0.5f64.sqrt(), 0.);
        assert!((subspace_infidelity(&half, &pauli::id()).unwrap() - (1.0 - 3.0 / 6.0)).abs() < 1e-15);
    }

    #[test]
    fn identity_versus_x() {
        let f = average_gate_fidelity(&pauli::id(), &pauli::x()).unwrap();
        assert!((f - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn tiny_infidelities_keep_their_precision() {
        let eps = 1e-9;
        let u = crate::sim::matrix_exp(&(pauli::z() * c(0., -eps / 2.))).unwrap();
        // 1 - F = (d² - |Tr|²)/(d(d+1)) = (4 - 4cos²(ε/2))/6
        let expected = 4.0 * (eps / 2.0).sin().powi(2) / 6.0;
        let got = gate_infidelity(&u, &pauli::id()).unwrap();
        assert!((got - expected).abs() < 1e-6 * expected, "{got} vs {expected}");
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        assert!(average_gate_fidelity(&pauli::id(), &CMatrix::identity(4, 4)).is_err());
        assert!(equal_up_to_global_phase(&pauli::id(), &CMatrix::identity(4, 4), 1e-3).is_err());
    }

    #[test]
    fn global_phase_equality() {
        let u = pauli::x() * c(0.6, 0.) + pauli::z() * c(0., 0.8);
        let v = &u * Complex64::from_polar(1.0, PI / 7.0);
        assert!(equal_up_to_global_phase(&u, &v, 1e-10).unwrap());
        assert!(!equal_up_to_global_phase(&pauli::id(), &pauli::x(), 1e-10).unwrap());
        assert!(equal_up_to_global_phase(&(pauli::x() * c(0., -1.)), &pauli::x(), 1e-10).unwrap());
    }
}
