use super::{ensure_square, CMatrix};
use crate::error::Result;

/// Matrix exponential by scaling and squaring with a truncated Taylor series.
///
/// The argument is scaled by `2^-s` until its 1-norm is at most 1/2, the
/// series is summed until the next term falls below machine precision, and
/// the result is squared `s` times.
pub fn matrix_exp(a: &CMatrix) -> Result<CMatrix> {
    let n = ensure_square(a)?;
    if n == 0 {
        return Ok(CMatrix::zeros(0, 0));
    }
    let norm = one_norm(a);
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let scale = 0.5f64.powi(squarings);
    let b = a * num_complex::Complex64::new(scale, 0.0);

    let mut result = CMatrix::identity(n, n);
    let mut term = CMatrix::identity(n, n);
    for k in 1..=40 {
        term = &term * &b / num_complex::Complex64::new(k as f64, 0.0);
        result += &term;
        if one_norm(&term) <= f64::EPSILON * 1e-2 * one_norm(&result) {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    Ok(result)
}

fn one_norm(a: &CMatrix) -> f64 {
    a.column_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}
