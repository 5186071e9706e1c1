use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sim::{c, CMatrix};

/// Default bound on `‖⟨f|M|g⟩‖` for the logical ZZ readout.
pub const ANCILLA_TOLERANCE: f64 = 1e-6;

fn ancilla_rotation(angle: f64, axis_y: bool) -> CMatrix {
    let (co, si) = (angle.cos(), angle.sin());
    let r = if axis_y {
        CMatrix::from_row_slice(2, 2, &[c(co, 0.), c(-si, 0.), c(si, 0.), c(co, 0.)])
    } else {
        CMatrix::from_row_slice(2, 2, &[c(co, 0.), c(0., -si), c(0., -si), c(co, 0.)])
    };
    crate::sim::kron(&CMatrix::identity(4, 4), &r)
}

/// `e^{iπ/4 Y₂} U e^{-iθ/2 X₂} U e^{-iπ/4 Y₂}` on the q4 space.
pub fn logical_zz_sequence(theta: f64, u_jp: &CMatrix) -> Result<CMatrix> {
    if u_jp.nrows() != 8 || u_jp.ncols() != 8 {
        return Err(Error::Dimension { expected: 8, got: u_jp.nrows() });
    }
    let quarter = std::f64::consts::FRAC_PI_4;
    Ok(ancilla_rotation(-quarter, true) * u_jp * ancilla_rotation(theta / 2.0, false) * u_jp * ancilla_rotation(quarter, true))
}

/// The `⟨g|·|g⟩` cavity block of [`logical_zz_sequence`]; fails when the
/// ancilla does not return to `|g⟩`.
pub fn logical_zz(theta: f64, u_jp: &CMatrix, tolerance: f64) -> Result<CMatrix> {
    let m = logical_zz_sequence(theta, u_jp)?;
    let off = CMatrix::from_fn(4, 4, |i, j| m[(2 * i + 1, 2 * j)]).norm();
    if off > tolerance {
        return Err(Error::AncillaEntangled { off_block: off, tolerance });
    }
    Ok(CMatrix::from_fn(4, 4, |i, j| m[(2 * i, 2 * j)]))
}

/// `e^{-iθ/2} diag(-1, e^{iθ}, e^{iθ}, -1)`
pub fn logical_zz_target(theta: f64) -> CMatrix {
    let e = Complex64::from_polar(1.0, theta);
    let d = [c(-1., 0.), e, e, c(-1., 0.)];
    CMatrix::from_fn(4, 4, |i, j| if i == j { d[i] * Complex64::from_polar(1.0, -theta / 2.0) } else { c(0., 0.) })
}

/// `2|ψ₀₀ψ₁₁ - ψ₀₁ψ₁₀| / ‖ψ‖²` of a two-qubit pure state.
pub fn concurrence(psi: &[Complex64; 4]) -> f64 {
    let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    2.0 * (psi[0] * psi[3] - psi[1] * psi[2]).norm() / norm
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::ideal::ideal_joint_parity;
    use crate::sim::max_abs_diff;
    use std::f64::consts::PI;

    #[test]
    fn ideal_sequence_gives_the_diagonal_gate() {
        for theta in [0.0, PI / 3.0, PI / 2.0, 2.5] {
            let g = logical_zz(theta, &ideal_joint_parity(), ANCILLA_TOLERANCE).unwrap();
            assert!(max_abs_diff(&g, &logical_zz_target(theta)) < 1e-14, "theta {theta}");
        }
    }

    #[test]
    fn entangled_ancilla_is_an_error() {
        let u = ancilla_rotation(0.3, true);
        assert!(matches!(logical_zz(1.0, &u, ANCILLA_TOLERANCE), Err(Error::AncillaEntangled { .. })));
    }

    #[test]
    fn concurrence_bounds() {
        let h = 0.5;
        assert!(concurrence(&[c(h, 0.), c(h, 0.), c(h, 0.), c(h, 0.)]) < 1e-15);
        assert!((concurrence(&[c(h, 0.), c(0., h), c(0., h), c(h, 0.)]) - 1.0).abs() < 1e-15);
    }
}
