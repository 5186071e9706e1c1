#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scqc::geometry::ControlPulse;
use scqc::sim::TimeGrid;

/// Smooth pulse with `Ω ≥ 0.5`, `Φ ≡ 0` and a slowly varying detuning.
pub fn random_smooth_pulse(seed: u64, n_steps: usize) -> ControlPulse {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t_end = rng.random_range(2.0..6.0);
    let base = rng.random_range(1.5..3.0);
    let amp: Vec<f64> = (0..3).map(|_| rng.random_range(-0.3..0.3)).collect();
    let shift: Vec<f64> = (0..3).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
    let det: Vec<f64> = (0..3).map(|_| rng.random_range(-0.8..0.8)).collect();
    let grid = TimeGrid::new(t_end, n_steps).unwrap();
    ControlPulse::from_fn(grid, |t| {
        let x = std::f64::consts::PI * t / t_end;
        let omega = base + (0..3).map(|k| amp[k] * ((k + 1) as f64 * x + shift[k]).sin()).sum::<f64>();
        let delta = (0..3).map(|k| det[k] * ((k + 1) as f64 * x).cos()).sum::<f64>();
        (omega, 0.0, delta)
    })
    .unwrap()
}
