use num_complex::Complex64;

use crate::dualrail::{q4, DualRailParams};
use crate::sim::{c, kron, pauli, CMatrix};

/// `R_z(θ) = exp(iθZ/2)`
pub fn rz(theta: f64) -> CMatrix {
    let mut m = CMatrix::zeros(2, 2);
    m[(0, 0)] = Complex64::from_polar(1.0, theta / 2.0);
    m[(1, 1)] = Complex64::from_polar(1.0, -theta / 2.0);
    m
}

/// `cavity ⊗ ancilla` on the q4 space.
pub fn on_q4(cavity: &CMatrix, ancilla: &CMatrix) -> CMatrix {
    kron(cavity, ancilla)
}

/// `ZZ(θ) = exp(-iθ/2 Z₁⊗Z₂)`; identity on `|00⟩` and `|11⟩`.
pub fn zz(theta: f64) -> CMatrix {
    let z = on_q4(&q4::z1(), &pauli::z());
    CMatrix::from_fn(8, 8, |i, j| {
        if i == j {
            Complex64::from_polar(1.0, -theta / 2.0 * z[(i, i)].re)
        } else {
            c(0., 0.)
        }
    })
}

/// `ZZ(π/2) + |00⟩⟨00| ⊗ R_z(π/2) + |11⟩⟨11| ⊗ R_z(-π/2)`
pub fn ideal_zz_half() -> CMatrix {
    let half = std::f64::consts::FRAC_PI_2;
    let mut m = on_q4(&q4::p00(), &rz(half)) + on_q4(&q4::p11(), &rz(-half));
    m += on_q4(&q4::i1(), &pauli::id()).component_mul(&zz(half));
    m
}

/// `(|00⟩⟨00| + |11⟩⟨11| + X₁) ⊗ Z₂`
pub fn ideal_swap() -> CMatrix {
    on_q4(&(q4::p00() + q4::p11() + q4::x1()), &pauli::z())
}

/// `X₁ ⊗ Z₂ + i(|00⟩⟨00| - |11⟩⟨11|) ⊗ I₂`
pub fn ideal_joint_parity() -> CMatrix {
    on_q4(&q4::x1(), &pauli::z()) + on_q4(&(q4::p00() - q4::p11()), &pauli::id()) * c(0., 1.)
}

fn ancilla_projectors() -> (CMatrix, CMatrix) {
    let mut g = CMatrix::zeros(2, 2);
    g[(0, 0)] = c(1., 0.);
    let mut f = CMatrix::zeros(2, 2);
    f[(1, 1)] = c(1., 0.);
    (g, f)
}

/// `1 ⊗ |g⟩⟨g| + e^{iπ(a†a + b†b)} ⊗ |f⟩⟨f|` on the q4 space.
pub fn ideal_single_shot_q4() -> CMatrix {
    let (g, f) = ancilla_projectors();
    let parity = q4::p00() + q4::p11() - q4::i1();
    on_q4(&CMatrix::identity(4, 4), &g) + on_q4(&parity, &f)
}

/// The same operator on the full truncated space.
pub fn ideal_single_shot(params: &DualRailParams) -> CMatrix {
    let m = params.levels();
    let (g, f) = ancilla_projectors();
    let parity = CMatrix::from_fn(m * m, m * m, |i, j| {
        if i == j {
            let n = i / m + i % m;
            c(if n % 2 == 0 { 1.0 } else { -1.0 }, 0.)
        } else {
            c(0., 0.)
        }
    });
    kron(&CMatrix::identity(m * m, m * m), &g) + kron(&parity, &f)
}
