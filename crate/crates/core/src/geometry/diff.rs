//! Fourth-order finite differences and an end-corrected cumulative trapezoid
//! on uniform grids.

use std::ops::{Add, Mul, Sub};

pub(crate) trait Sample: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
}

impl Sample for f64 {
    fn zero() -> Self {
        0.0
    }
}

impl Sample for super::Vec3 {
    fn zero() -> Self {
        super::Vec3::zeros()
    }
}

fn combo<T: Sample>(f: &[T], start: usize, weights: &[f64]) -> T {
    weights.iter().enumerate().fold(T::zero(), |acc, (j, &w)| acc + f[start + j] * w)
}

/// Derivative samples with spacing `h`. Fourth order when at least five
/// samples are available, lower order otherwise.
pub(crate) fn derivative<T: Sample>(f: &[T], h: f64) -> Vec<T> {
    let n = f.len();
    match n {
        0 | 1 => vec![T::zero(); n],
        2 => {
            let d = (f[1] - f[0]) * (1.0 / h);
            vec![d, d]
        }
        3 | 4 => (0..n)
            .map(|k| {
                if k == 0 {
                    combo(f, 0, &[-1.5, 2.0, -0.5]) * (1.0 / h)
                } else if k == n - 1 {
                    combo(f, n - 3, &[0.5, -2.0, 1.5]) * (1.0 / h)
                } else {
                    (f[k + 1] - f[k - 1]) * (0.5 / h)
                }
            })
            .collect(),
        _ => {
            let s = 1.0 / (12.0 * h);
            (0..n)
                .map(|k| {
                    let d = match k {
                        0 => combo(f, 0, &[-25.0, 48.0, -36.0, 16.0, -3.0]),
                        1 => combo(f, 0, &[-3.0, -10.0, 18.0, -6.0, 1.0]),
                        _ if k == n - 2 => combo(f, n - 5, &[-1.0, 6.0, -18.0, 10.0, 3.0]),
                        _ if k == n - 1 => combo(f, n - 5, &[3.0, -16.0, 36.0, -48.0, 25.0]),
                        _ => combo(f, k - 2, &[1.0, -8.0, 0.0, 8.0, -1.0]),
                    };
                    d * s
                })
                .collect()
        }
    }
}

/// `∫₀^{t_k} f` for every `k`: cumulative trapezoid minus the leading
/// Euler-Maclaurin term `h²/12 (f'(t_k) - f'(0))`.
pub(crate) fn cumulative_integral<T: Sample>(f: &[T], df: &[T], h: f64) -> Vec<T> {
    assert_eq!(f.len(), df.len());
    let mut out = Vec::with_capacity(f.len());
    let mut acc = T::zero();
    for k in 0..f.len() {
        if k > 0 {
            acc = acc + (f[k - 1] + f[k]) * (0.5 * h);
        }
        out.push(acc - (df[k] - df[0]) * (h * h / 12.0));
    }
    out
}
