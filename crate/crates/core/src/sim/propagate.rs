use num_complex::Complex64;

use super::{hermiticity_error, matrix_exp, max_abs, CMatrix, Unitary};
use crate::error::{Error, Result};

/// Default number of propagation steps per gate segment.
pub const DEFAULT_STEPS: usize = 2000;

/// Uniform grid `t_k = k * t_end / n_steps` for `k = 0..=n_steps`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid {
    t_end: f64,
    n_steps: usize,
}

impl TimeGrid {
    pub fn new(t_end: f64, n_steps: usize) -> Result<Self> {
        if n_steps == 0 {
            return Err(Error::Grid("n_steps must be positive".into()));
        }
        if !(t_end.is_finite() && t_end > 0.0) {
            return Err(Error::Grid(format!("gate time must be positive and finite, got {t_end}")));
        }
        Ok(TimeGrid { t_end, n_steps })
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    /// Number of samples, `n_steps + 1`.
    pub fn len(&self) -> usize {
        self.n_steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dt(&self) -> f64 {
        self.t_end / self.n_steps as f64
    }

    pub fn time(&self, k: usize) -> f64 {
        if k == self.n_steps {
            self.t_end
        } else {
            k as f64 * self.dt()
        }
    }

    pub fn midpoint(&self, k: usize) -> f64 {
        (k as f64 + 0.5) * self.dt()
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n_steps).map(move |k| self.time(k))
    }

    /// Same number of steps over a different duration.
    pub fn with_duration(&self, t_end: f64) -> Result<Self> {
        TimeGrid::new(t_end, self.n_steps)
    }
}

/// Time-dependent Hermitian generator `H(t)` of fixed dimension.
pub trait HamiltonianSampler: Send + Sync {
    fn dim(&self) -> usize;

    fn sample(&self, t: f64) -> CMatrix;
}

impl<H: HamiltonianSampler + ?Sized> HamiltonianSampler for &H {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn sample(&self, t: f64) -> CMatrix {
        (**self).sample(t)
    }
}

/// Wraps a closure `t -> H(t)`.
pub struct FnHamiltonian<F> {
    dim: usize,
    f: F,
}

impl<F> FnHamiltonian<F>
where
    F: Fn(f64) -> CMatrix + Send + Sync,
{
    pub fn new(dim: usize, f: F) -> Self {
        FnHamiltonian { dim, f }
    }
}

impl<F> HamiltonianSampler for FnHamiltonian<F>
where
    F: Fn(f64) -> CMatrix + Send + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn sample(&self, t: f64) -> CMatrix {
        (self.f)(t)
    }
}

#[derive(Clone, Debug)]
pub struct ConstantHamiltonian(pub CMatrix);

impl HamiltonianSampler for ConstantHamiltonian {
    fn dim(&self) -> usize {
        self.0.nrows()
    }

    fn sample(&self, _t: f64) -> CMatrix {
        self.0.clone()
    }
}

/// Gauss-Legendre nodes of the fourth-order Magnus step, as fractions of `dt`.
const GAUSS: [f64; 2] = [0.5 - 0.288_675_134_594_812_9, 0.5 + 0.288_675_134_594_812_9];

/// Produces one fourth-order Magnus step
/// `exp(-i [dt/2 (H1 + H2) - i sqrt(3) dt²/12 [H2, H1]])` from samples at the
/// two Gauss nodes of the cell, reusing the last exponential when both
/// samples repeat exactly.
struct Stepper {
    dim: usize,
    last: Option<(CMatrix, CMatrix, CMatrix)>,
}

impl Stepper {
    fn new(dim: usize) -> Self {
        Stepper { dim, last: None }
    }

    fn sample<H: HamiltonianSampler + ?Sized>(&self, h: &H, t: f64) -> Result<CMatrix> {
        let m = h.sample(t);
        if m.nrows() != self.dim || m.ncols() != self.dim {
            return Err(Error::Dimension { expected: self.dim, got: m.nrows() });
        }
        let deviation = hermiticity_error(&m);
        if !(deviation <= 1e-12 * max_abs(&m).max(1.0)) {
            return Err(Error::NonHermitian { t, deviation });
        }
        Ok(m)
    }

    fn step<H: HamiltonianSampler + ?Sized>(&mut self, h: &H, t: f64, dt: f64) -> Result<CMatrix> {
        let h1 = self.sample(h, t + GAUSS[0] * dt)?;
        let h2 = self.sample(h, t + GAUSS[1] * dt)?;
        if let Some((p1, p2, step)) = &self.last {
            if *p1 == h1 && *p2 == h2 {
                return Ok(step.clone());
            }
        }
        let mut k = (&h1 + &h2) * Complex64::new(0.5 * dt, 0.0);
        if h1 != h2 {
            let comm = &h2 * &h1 - &h1 * &h2;
            k -= comm * Complex64::new(0.0, 3f64.sqrt() * dt * dt / 12.0);
        }
        let step = if self.dim == 2 { su2_step(&k, 1.0) } else { matrix_exp(&(k * Complex64::new(0.0, -1.0)))? };
        self.last = Some((h1, h2, step.clone()));
        Ok(step)
    }
}

/// Closed form of `exp(-i H dt)` for a Hermitian 2x2 `H = h0 + h.sigma`.
fn su2_step(h: &CMatrix, dt: f64) -> CMatrix {
    let h0 = 0.5 * (h[(0, 0)].re + h[(1, 1)].re);
    let hz = 0.5 * (h[(0, 0)].re - h[(1, 1)].re);
    let hx = 0.5 * (h[(1, 0)].re + h[(0, 1)].re);
    let hy = 0.5 * (h[(1, 0)].im - h[(0, 1)].im);
    let norm = (hx * hx + hy * hy + hz * hz).sqrt();
    let theta = norm * dt;
    let cos = theta.cos();
    // sin(theta)/norm, continuous at norm = 0
    let sinc = if theta.abs() < 1e-8 { dt * (1.0 - theta * theta / 6.0) } else { theta.sin() / norm };
    let phase = Complex64::new(0.0, -h0 * dt).exp();
    let m = [
        Complex64::new(cos, -sinc * hz),
        Complex64::new(-sinc * hy, -sinc * hx),
        Complex64::new(sinc * hy, -sinc * hx),
        Complex64::new(cos, sinc * hz),
    ];
    CMatrix::from_row_slice(2, 2, &m) * phase
}

fn check_dim<H: HamiltonianSampler + ?Sized>(h: &H) -> Result<usize> {
    let d = h.dim();
    if d == 0 {
        return Err(Error::InvalidParameter("Hamiltonian dimension must be positive".into()));
    }
    Ok(d)
}

/// Time-ordered propagator `U(T) = T exp(-i ∫ H dt)` by fourth-order Magnus
/// steps, one exponential per grid cell.
pub fn propagate<H: HamiltonianSampler + ?Sized>(h: &H, grid: &TimeGrid) -> Result<Unitary> {
    let d = check_dim(h)?;
    let dt = grid.dt();
    let mut stepper = Stepper::new(d);
    let mut u = CMatrix::identity(d, d);
    for k in 0..grid.n_steps() {
        let step = stepper.step(h, grid.time(k), dt)?;
        u = step * u;
    }
    Ok(Unitary::from_matrix_unchecked(u))
}

/// `U(t_k)` at every grid point, `U(t_0) = I`.
pub fn propagate_checkpointed<H: HamiltonianSampler + ?Sized>(h: &H, grid: &TimeGrid) -> Result<Vec<Unitary>> {
    let d = check_dim(h)?;
    let dt = grid.dt();
    let mut stepper = Stepper::new(d);
    let mut out = Vec::with_capacity(grid.len());
    let mut u = CMatrix::identity(d, d);
    out.push(Unitary::from_matrix_unchecked(u.clone()));
    for k in 0..grid.n_steps() {
        let step = stepper.step(h, grid.time(k), dt)?;
        u = step * u;
        out.push(Unitary::from_matrix_unchecked(u.clone()));
    }
    Ok(out)
}
