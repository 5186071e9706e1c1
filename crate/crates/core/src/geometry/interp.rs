//! Monotone and Hermite cubic interpolation on sorted abscissae.

use super::diff::Sample;

/// Monotone piecewise-cubic Hermite interpolant of increasing data.
#[derive(Clone, Debug)]
pub(crate) struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
}

impl MonotoneCubic {
    /// `slopes` are used where finite and then limited (Fritsch-Carlson) to
    /// keep every cell monotone; missing slopes fall back to the
    /// Fritsch-Butland harmonic mean.
    pub(crate) fn new(x: Vec<f64>, y: Vec<f64>, slopes: Option<&[f64]>) -> Self {
        let n = x.len();
        assert!(n >= 2 && y.len() == n);
        let secant: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / (x[k + 1] - x[k])).collect();
        let mut m: Vec<f64> = (0..n)
            .map(|k| {
                if let Some(s) = slopes.map(|s| s[k]).filter(|s| s.is_finite()) {
                    return s;
                }
                if k == 0 {
                    secant[0]
                } else if k == n - 1 {
                    secant[n - 2]
                } else {
                    let (a, b) = (secant[k - 1], secant[k]);
                    if a * b <= 0.0 {
                        0.0
                    } else {
                        2.0 * a * b / (a + b)
                    }
                }
            })
            .collect();
        for k in 0..n - 1 {
            let d = secant[k];
            if d == 0.0 {
                m[k] = 0.0;
                m[k + 1] = 0.0;
                continue;
            }
            let a = m[k] / d;
            let b = m[k + 1] / d;
            if a < 0.0 {
                m[k] = 0.0;
            }
            if b < 0.0 {
                m[k + 1] = 0.0;
            }
            let r = a * a + b * b;
            if r > 9.0 {
                let s = 3.0 / r.sqrt();
                m[k] = s * a * d;
                m[k + 1] = s * b * d;
            }
        }
        MonotoneCubic { x, y, m }
    }

    pub(crate) fn eval(&self, x: f64) -> f64 {
        let n = self.x.len();
        let k = match self.x.partition_point(|&v| v <= x) {
            0 => 0,
            p => (p - 1).min(n - 2),
        };
        let h = self.x[k + 1] - self.x[k];
        let s = ((x - self.x[k]) / h).clamp(0.0, 1.0);
        hermite(self.y[k], self.y[k + 1], self.m[k], self.m[k + 1], h, s)
    }
}

/// Cubic Hermite segment on a cell of width `h` at fraction `s ∈ [0,1]`.
pub(crate) fn hermite<T: Sample>(p0: T, p1: T, m0: T, m1: T, h: f64, s: f64) -> T {
    let s2 = s * s;
    let s3 = s2 * s;
    p0 * (2.0 * s3 - 3.0 * s2 + 1.0) + m0 * ((s3 - 2.0 * s2 + s) * h) + p1 * (3.0 * s2 - 2.0 * s3) + m1 * ((s3 - s2) * h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reproduces_nodes_and_cubics_with_exact_slopes() {
        let x: Vec<f64> = (0..8).map(|k| k as f64 * 0.3).collect();
        let y: Vec<f64> = x.iter().map(|x| x * x * x + x).collect();
        let m: Vec<f64> = x.iter().map(|x| 3.0 * x * x + 1.0).collect();
        let p = MonotoneCubic::new(x.clone(), y.clone(), Some(&m));
        for (xi, yi) in x.iter().zip(&y) {
            assert_eq!(p.eval(*xi), *yi);
        }
        assert!((p.eval(1.0) - 2.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn stays_monotone(steps in prop::collection::vec(0.0f64..5.0, 2..30), probe in 0.0f64..1.0) {
            let mut y = vec![0.0];
            for s in &steps {
                y.push(y.last().unwrap() + s);
            }
            let x: Vec<f64> = (0..y.len()).map(|k| k as f64).collect();
            let p = MonotoneCubic::new(x.clone(), y.clone(), None);
            let span = (y.len() - 1) as f64;
            let a = probe * span;
            let b = (a + 0.01).min(span);
            prop_assert!(p.eval(b) >= p.eval(a) - 1e-12);
            prop_assert!(p.eval(a) >= -1e-12 && p.eval(a) <= y[y.len() - 1] + 1e-12);
        }
    }
}
