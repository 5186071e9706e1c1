use num_complex::Complex64;

use super::diff::{cumulative_integral, derivative};
use super::interp::{hermite, MonotoneCubic};
use super::pulse::{bloch_to_matrix, ControlPulse};
use super::su2::rotor_path;
use super::Vec3;
use crate::error::{Error, Result};
use crate::sim::{pauli, CMatrix, TimeGrid};

/// Interior speed tolerance for curves tagged as arc-length parameterized.
pub const ARC_LENGTH_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parameterization {
    ArcLength,
    General,
}

/// Uniformly sampled space curve `r(t)`, `t ∈ [0, t_end]`, translated so that
/// `r(0) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceCurve {
    t_end: f64,
    points: Vec<Vec3>,
    parameterization: Parameterization,
}

impl SpaceCurve {
    pub fn new(t_end: f64, points: Vec<Vec3>, parameterization: Parameterization) -> Result<Self> {
        let curve = SpaceCurve::unchecked(t_end, points, parameterization)?;
        if parameterization == Parameterization::ArcLength && !curve.has_unit_speed() {
            return Err(Error::NotArcLength);
        }
        Ok(curve)
    }

    /// Samples `f` on `grid` (`n_steps + 1` points).
    pub fn from_fn(grid: &TimeGrid, f: impl Fn(f64) -> Vec3, parameterization: Parameterization) -> Result<Self> {
        SpaceCurve::new(grid.t_end(), grid.times().map(f).collect(), parameterization)
    }

    /// A single point, zero duration.
    pub fn point() -> Self {
        SpaceCurve { t_end: 0.0, points: vec![Vec3::zeros()], parameterization: Parameterization::ArcLength }
    }

    fn unchecked(t_end: f64, mut points: Vec<Vec3>, parameterization: Parameterization) -> Result<Self> {
        match points.len() {
            0 => return Err(Error::Grid("a curve needs at least one sample".into())),
            1 if t_end != 0.0 => return Err(Error::Grid("a single sample must have zero duration".into())),
            1 => {}
            _ if !(t_end.is_finite() && t_end > 0.0) => {
                return Err(Error::Grid(format!("curve duration must be positive, got {t_end}")))
            }
            _ => {}
        }
        if points.iter().any(|p| !p.iter().all(|x| x.is_finite())) {
            return Err(Error::InvalidParameter("curve has non-finite samples".into()));
        }
        let origin = points[0];
        points.iter_mut().for_each(|p| *p -= origin);
        Ok(SpaceCurve { t_end, points, parameterization })
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Sample spacing; zero for a single point.
    pub fn dt(&self) -> f64 {
        if self.points.len() < 2 {
            0.0
        } else {
            self.t_end / (self.points.len() - 1) as f64
        }
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|k| k as f64 * self.dt()).collect()
    }

    pub fn parameterization(&self) -> Parameterization {
        self.parameterization
    }

    pub fn is_arc_length(&self) -> bool {
        self.parameterization == Parameterization::ArcLength
    }

    pub fn end(&self) -> Vec3 {
        *self.points.last().expect("non-empty curve")
    }

    /// `‖r(t_end) - r(0)‖`
    pub fn closure_gap(&self) -> f64 {
        self.end().norm()
    }

    /// `dr/dt` at every sample.
    pub fn velocity(&self) -> Vec<Vec3> {
        derivative(&self.points, self.dt())
    }

    pub fn speeds(&self) -> Vec<f64> {
        self.velocity().iter().map(|v| v.norm()).collect()
    }

    /// Total arc length.
    pub fn length(&self) -> f64 {
        if self.len() < 2 {
            return 0.0;
        }
        let speed = self.speeds();
        let ds = derivative(&speed, self.dt());
        *cumulative_integral(&speed, &ds, self.dt()).last().unwrap()
    }

    fn has_unit_speed(&self) -> bool {
        let n = self.len();
        n < 3 || self.speeds()[1..n - 1].iter().all(|s| (s - 1.0).abs() <= ARC_LENGTH_TOLERANCE)
    }

    /// Rescales an arc-length curve to unit length and unit duration; speed
    /// stays one.
    pub fn normalized(&self) -> Result<SpaceCurve> {
        if !self.is_arc_length() {
            return Err(Error::NotArcLength);
        }
        if self.len() < 2 {
            return Ok(self.clone());
        }
        let l = self.t_end;
        Ok(SpaceCurve {
            t_end: 1.0,
            points: self.points.iter().map(|p| p / l).collect(),
            parameterization: Parameterization::ArcLength,
        })
    }
}

/// `r(t) = ∫₀ᵗ Bloch(U₀† Z U₀) dt'` of the noiseless pulse. The tangent has
/// unit length, so the curve is arc-length parameterized by time.
pub fn error_curve(pulse: &ControlPulse) -> Result<SpaceCurve> {
    let grid = pulse.grid();
    let path = rotor_path(pulse, 0.0);
    let tangent: Vec<Vec3> = path.iter().map(|u| u.tangent()).collect();
    let rate: Vec<Vec3> = path.iter().zip(grid.times()).map(|(u, t)| u.tangent_rate(&pulse.field(t, 0.0))).collect();
    let points = cumulative_integral(&tangent, &rate, grid.dt());
    SpaceCurve::new(grid.t_end(), points, Parameterization::ArcLength)
}

/// Tangent samples `Bloch(U₀† Z U₀)` taken directly from the dynamics.
pub fn pulse_tangents(pulse: &ControlPulse) -> Vec<Vec3> {
    rotor_path(pulse, 0.0).iter().map(|u| u.tangent()).collect()
}

pub fn is_closed(curve: &SpaceCurve, tol: f64) -> bool {
    curve.closure_gap() <= tol
}

/// Spectral norm of `∫₀^{T_g} U₀† Z U₀ dt`, integrated as a 2x2 operator.
pub fn first_order_error(pulse: &ControlPulse) -> Result<f64> {
    let grid = pulse.grid();
    let z = pauli::z();
    let mut f = Vec::with_capacity(grid.len());
    let mut df = Vec::with_capacity(grid.len());
    for (u, t) in rotor_path(pulse, 0.0).iter().zip(grid.times()) {
        let u = u.matrix();
        let ud = u.adjoint();
        let h = bloch_to_matrix(&pulse.field(t, 0.0));
        f.push(&ud * &z * &u);
        df.push(&ud * (&h * &z - &z * &h) * &u * Complex64::i());
    }
    let h = grid.dt();
    let mut total = CMatrix::zeros(2, 2);
    for k in 1..f.len() {
        total += (&f[k - 1] + &f[k]) * Complex64::new(0.5 * h, 0.0);
    }
    total -= (&df[df.len() - 1] - &df[0]) * Complex64::new(h * h / 12.0, 0.0);
    Ok(hermitian_2x2_norm(&total))
}

fn hermitian_2x2_norm(m: &CMatrix) -> f64 {
    let (a, d, b) = (m[(0, 0)].re, m[(1, 1)].re, m[(0, 1)]);
    let mean = 0.5 * (a + d);
    let radius = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    mean.abs() + radius
}

/// `½ Σ r_k × r_{k+1}`, without the closure precondition.
pub(crate) fn area_vector(points: &[Vec3]) -> Vec3 {
    points.windows(2).fold(Vec3::zeros(), |a, w| a + w[0].cross(&w[1])) * 0.5
}

/// Vector area `½ ∮ r × dr` of a closed curve.
pub fn signed_area(curve: &SpaceCurve) -> Result<Vec3> {
    const TOLERANCE: f64 = 1e-6;
    let gap = curve.closure_gap();
    if gap > TOLERANCE {
        return Err(Error::OpenCurve { gap, tolerance: TOLERANCE });
    }
    Ok(area_vector(&curve.points))
}

/// `r(t) → -r(t)`
pub fn point_reflection(curve: &SpaceCurve) -> SpaceCurve {
    SpaceCurve {
        t_end: curve.t_end,
        points: curve.points.iter().map(|p| -p).collect(),
        parameterization: curve.parameterization,
    }
}

/// Resamples the curve uniformly in arc length over `[0, L]`, keeping the
/// number of samples. See [`SpaceCurve::normalized`] for the unit interval.
pub fn arc_length_reparametrize(curve: &SpaceCurve) -> Result<SpaceCurve> {
    let n = curve.len();
    if n < 2 {
        return Ok(SpaceCurve { parameterization: Parameterization::ArcLength, ..curve.clone() });
    }
    let h = curve.dt();
    let velocity = curve.velocity();
    let speed: Vec<f64> = velocity.iter().map(|v| v.norm()).collect();
    let max_speed = speed.iter().cloned().fold(0.0, f64::max);
    if max_speed == 0.0 {
        return Err(Error::Reparameterization("curve has zero length".into()));
    }
    let eps = 1e-9 * max_speed;
    let mut run = 0;
    for k in 0..n - 1 {
        if speed[k] < eps && speed[k + 1] < eps {
            run += 1;
            if run > 1 {
                return Err(Error::Reparameterization(format!(
                    "zero-speed plateau ending at t = {}",
                    (k + 1) as f64 * h
                )));
            }
        } else {
            run = 0;
        }
    }

    let ds = derivative(&speed, h);
    let s = cumulative_integral(&speed, &ds, h);
    let length = s[n - 1];

    // Strictly increasing knots for the inverse map t(s).
    let mut knots_s = vec![s[0]];
    let mut knots_t = vec![0.0];
    let mut slopes = vec![1.0 / speed[0]];
    for k in 1..n {
        if s[k] > *knots_s.last().unwrap() {
            knots_s.push(s[k]);
            knots_t.push(k as f64 * h);
            slopes.push(1.0 / speed[k]);
        }
    }
    if knots_s.len() < 2 {
        return Err(Error::Reparameterization("arc length does not increase".into()));
    }
    let inverse = MonotoneCubic::new(knots_s, knots_t, Some(&slopes));

    let points: Vec<Vec3> = (0..n)
        .map(|j| {
            let t = if j == n - 1 { curve.t_end } else { inverse.eval(j as f64 * length / (n - 1) as f64) };
            let x = (t / h).clamp(0.0, (n - 1) as f64);
            let k = (x.floor() as usize).min(n - 2);
            hermite(curve.points[k], curve.points[k + 1], velocity[k], velocity[k + 1], h, x - k as f64)
        })
        .collect();
    SpaceCurve::new(length, points, Parameterization::ArcLength)
        .map_err(|_| Error::Reparameterization("resampled curve does not have unit speed; refine the grid".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn circle_pulse(omega: f64, t: f64) -> ControlPulse {
        ControlPulse::constant(TimeGrid::new(t, 2000).unwrap(), omega, 0.0, 0.0).unwrap()
    }

    fn analytic_circle(omega: f64, t: f64) -> Vec3 {
        Vec3::new(0.0, (1.0 - (omega * t).cos()) / omega, (omega * t).sin() / omega)
    }

    #[test]
    fn idle_pulse_gives_straight_line() {
        let curve = error_curve(&ControlPulse::constant(TimeGrid::new(2.5, 100).unwrap(), 0.0, 0.0, 0.0).unwrap()).unwrap();
        for (p, t) in curve.points().iter().zip(curve.times()) {
            assert!((p - Vec3::new(0.0, 0.0, t)).norm() < 1e-13);
        }
    }

    #[test]
    fn rabi_drive_traces_a_circle() {
        let omega = 1.7;
        let curve = error_curve(&circle_pulse(omega, 2.0 * PI / omega)).unwrap();
        for (p, t) in curve.points().iter().zip(curve.times()) {
            assert!((p - analytic_circle(omega, t)).norm() < 1e-6);
        }
        assert!(is_closed(&curve, 1e-6));
        assert!(curve.closure_gap() < 1e-6);
    }

    #[test]
    fn semicircle_is_open_by_its_diameter() {
        let omega = 2.0;
        let pulse = circle_pulse(omega, PI / omega);
        let curve = error_curve(&pulse).unwrap();
        assert!(!is_closed(&curve, 1e-6));
        assert!((curve.closure_gap() - 2.0 / omega).abs() < 1e-6);
        assert!((first_order_error(&pulse).unwrap() - 2.0 / omega).abs() < 1e-6);
    }

    #[test]
    fn zero_duration_curve_is_closed() {
        assert!(is_closed(&SpaceCurve::point(), 1e-6));
        assert_eq!(signed_area(&SpaceCurve::point()).unwrap(), Vec3::zeros());
    }

    #[test]
    fn first_order_error_of_idle_pulse_is_duration() {
        let pulse = ControlPulse::constant(TimeGrid::new(3.0, 50).unwrap(), 0.0, 0.0, 0.0).unwrap();
        assert!((first_order_error(&pulse).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn circle_area_points_along_minus_x() {
        let omega = 1.3;
        let curve = error_curve(&circle_pulse(omega, 2.0 * PI / omega)).unwrap();
        let area = signed_area(&curve).unwrap();
        assert!((area - Vec3::new(-PI / (omega * omega), 0.0, 0.0)).norm() < 1e-4);
    }

    #[test]
    fn figure_eight_has_no_area() {
        let grid = TimeGrid::new(4.0 * PI, 4000).unwrap();
        let loops = |t: f64| {
            let side = if t < 2.0 * PI { 1.0 } else { -1.0 };
            Vec3::new(0.0, side * (1.0 - t.cos()), t.sin())
        };
        let curve = SpaceCurve::from_fn(&grid, loops, Parameterization::General).unwrap();
        assert!(curve.closure_gap() < 1e-12);
        assert!(signed_area(&curve).unwrap().norm() < 1e-6);
    }

    #[test]
    fn open_curve_has_no_signed_area() {
        let curve = error_curve(&circle_pulse(1.0, PI)).unwrap();
        assert!(matches!(signed_area(&curve), Err(Error::OpenCurve { .. })));
    }

    #[test]
    fn reflection_is_an_involution() {
        let curve = error_curve(&circle_pulse(1.0, 2.0)).unwrap();
        let twice = point_reflection(&point_reflection(&curve));
        assert_eq!(twice, curve);
    }

    #[test]
    fn general_curve_must_be_tagged_honestly() {
        let grid = TimeGrid::new(1.0, 100).unwrap();
        let fast = SpaceCurve::from_fn(&grid, |t| Vec3::new(2.0 * t, 0.0, 0.0), Parameterization::ArcLength);
        assert!(matches!(fast, Err(Error::NotArcLength)));
    }

    #[test]
    fn arc_length_curve_is_unchanged() {
        let omega = 1.0;
        let curve = error_curve(&circle_pulse(omega, 5.0)).unwrap();
        let re = arc_length_reparametrize(&curve).unwrap();
        assert!((re.t_end() - curve.t_end()).abs() < 1e-10);
        for (a, b) in re.points().iter().zip(curve.points()) {
            assert!((a - b).norm() < 1e-8);
        }
    }

    #[test]
    fn warped_circle_becomes_uniform() {
        let omega = 1.0;
        let grid = TimeGrid::new(1.0, 2000).unwrap();
        let total = 2.0 * PI / omega;
        // arc length u(t) = total (t + t²)/2 has speed total (1 + 2t)/2
        let warp = |t: f64| total * (t + t * t) / 2.0;
        let curve = SpaceCurve::from_fn(&grid, |t| analytic_circle(omega, warp(t)), Parameterization::General).unwrap();
        let re = arc_length_reparametrize(&curve).unwrap();
        assert!((re.length() - total).abs() < 1e-6 * total);
        assert!((re.t_end() - total).abs() < 1e-6 * total);
        let n = re.len();
        for s in &re.speeds()[1..n - 1] {
            assert!((s - 1.0).abs() < 1e-5);
        }
        for (p, s) in re.points().iter().zip(re.times()) {
            assert!((p - analytic_circle(omega, s)).norm() < 1e-5);
        }
    }

    #[test]
    fn long_plateau_is_rejected() {
        let grid = TimeGrid::new(1.0, 100).unwrap();
        let curve = SpaceCurve::from_fn(&grid, |t| Vec3::new(t.min(0.3) + (t - 0.6).max(0.0), 0.0, 0.0), Parameterization::General).unwrap();
        assert!(matches!(arc_length_reparametrize(&curve), Err(Error::Reparameterization(_))));
    }

    #[test]
    fn normalized_curve_has_unit_length() {
        let curve = error_curve(&circle_pulse(1.0, 4.0)).unwrap();
        let unit = curve.normalized().unwrap();
        assert_eq!(unit.t_end(), 1.0);
        assert!((unit.length() - 1.0).abs() < 1e-9);
    }
}
