//! Dense complex linear algebra, time-ordered propagation and gate metrics.

mod expm;
mod metrics;
mod propagate;

pub use expm::matrix_exp;
pub use metrics::{
    average_gate_fidelity, equal_up_to_global_phase, gate_infidelity, global_phase,
    subspace_infidelity,
};
pub use propagate::{
    propagate, propagate_checkpointed, ConstantHamiltonian, FnHamiltonian, HamiltonianSampler,
    TimeGrid, DEFAULT_STEPS,
};

use std::ops::{Deref, Mul};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Single-qubit Pauli matrices.
pub mod pauli {
    use super::{c, CMatrix};

    pub fn id() -> CMatrix {
        CMatrix::identity(2, 2)
    }

    pub fn x() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
    }

    pub fn y() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)])
    }

    pub fn z() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
    }

    /// `[X, Y, Z]`
    pub fn all() -> [CMatrix; 3] {
        [x(), y(), z()]
    }
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn dagger(a: &CMatrix) -> CMatrix {
    a.adjoint()
}

/// Largest entrywise modulus.
pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().fold(0.0, |m, z| m.max(z.norm()))
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).fold(0.0, |m, (x, y)| m.max((x - y).norm()))
}

pub fn hermiticity_error(a: &CMatrix) -> f64 {
    max_abs_diff(a, &a.adjoint())
}

pub fn unitarity_error(a: &CMatrix) -> f64 {
    let n = a.nrows();
    max_abs_diff(&(a.adjoint() * a), &CMatrix::identity(n, n))
}

pub fn ensure_square(a: &CMatrix) -> Result<usize> {
    if a.nrows() != a.ncols() {
        return Err(Error::NotSquare { rows: a.nrows(), cols: a.ncols() });
    }
    Ok(a.nrows())
}

pub fn ensure_same_dim(a: &CMatrix, b: &CMatrix) -> Result<usize> {
    let d = ensure_square(a)?;
    let e = ensure_square(b)?;
    if d != e {
        return Err(Error::Dimension { expected: d, got: e });
    }
    Ok(d)
}

/// A square matrix known to be unitary to within [`Unitary::TOLERANCE`].
#[derive(Clone, Debug, PartialEq)]
pub struct Unitary(CMatrix);

impl Unitary {
    pub const TOLERANCE: f64 = 1e-10;

    pub fn new(m: CMatrix) -> Result<Self> {
        ensure_square(&m)?;
        let deviation = unitarity_error(&m);
        if !(deviation < Self::TOLERANCE) {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Unitary(m))
    }

    pub fn identity(dim: usize) -> Self {
        Unitary(CMatrix::identity(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn adjoint(&self) -> Unitary {
        Unitary(self.0.adjoint())
    }

    pub fn unitarity_error(&self) -> f64 {
        unitarity_error(&self.0)
    }

    /// `self · other`, i.e. `other` acts first.
    pub fn then_after(&self, other: &Unitary) -> Result<Unitary> {
        ensure_same_dim(&self.0, &other.0)?;
        Ok(Unitary(&self.0 * &other.0))
    }

    pub fn kron(&self, other: &Unitary) -> Unitary {
        Unitary(self.0.kronecker(&other.0))
    }

    pub(crate) fn from_matrix_unchecked(m: CMatrix) -> Self {
        Unitary(m)
    }
}

impl Deref for Unitary {
    type Target = CMatrix;

    fn deref(&self) -> &CMatrix {
        &self.0
    }
}

impl Mul for &Unitary {
    type Output = Unitary;

    fn mul(self, rhs: &Unitary) -> Unitary {
        Unitary(&self.0 * &rhs.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_algebra() {
        let [x, y, z] = pauli::all();
        let comm = &x * &y - &y * &x;
        assert!(max_abs_diff(&comm, &(z.clone() * c(0., 2.))) < 1e-15);
        assert!(max_abs_diff(&(&x * &x), &pauli::id()) < 1e-15);
    }

    #[test]
    fn unitary_rejects_non_unitary() {
        let m = pauli::x() * c(1.1, 0.);
        assert!(matches!(Unitary::new(m), Err(Error::NotUnitary { .. })));
        let rect = CMatrix::zeros(2, 3);
        assert!(matches!(Unitary::new(rect), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn composing_with_adjoint_gives_identity() {
        let u = Unitary::new(matrix_exp(&(pauli::y() * c(0., -0.7))).unwrap()).unwrap();
        let id = u.then_after(&u.adjoint()).unwrap();
        assert!(max_abs_diff(&id, &pauli::id()) < 1e-10);
    }
}
