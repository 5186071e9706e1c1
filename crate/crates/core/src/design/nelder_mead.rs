use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Costs below this count as converged.
pub const CONVERGENCE_THRESHOLD: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerConfig {
    pub seed: u64,
    /// Cost evaluations per restart.
    #[serde(default = "default_budget")]
    pub budget: usize,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    /// Initial simplex edge, also the spread of the restart points.
    #[serde(default = "default_step")]
    pub step: f64,
}

fn default_budget() -> usize {
    5000
}

fn default_restarts() -> usize {
    8
}

fn default_step() -> f64 {
    1.0
}

impl OptimizerConfig {
    pub fn new(seed: u64) -> Self {
        OptimizerConfig { seed, budget: default_budget(), restarts: default_restarts(), step: default_step() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizeResult {
    pub coefficients: Vec<f64>,
    pub final_cost: f64,
    pub converged: bool,
    /// Evaluations spent by the winning restart.
    pub evaluations: usize,
    /// Index of the winning restart; restart 0 starts from the initial point.
    pub restart: usize,
}

struct Counter<'a, F> {
    cost: &'a F,
    used: usize,
    budget: usize,
}

impl<F: Fn(&[f64]) -> f64> Counter<'_, F> {
    fn eval(&mut self, x: &[f64]) -> Result<f64> {
        self.used += 1;
        let v = (self.cost)(x);
        if !v.is_finite() {
            return Err(Error::NonFiniteCost { value: v, evaluation: self.used });
        }
        Ok(v)
    }

    fn exhausted(&self) -> bool {
        self.used >= self.budget
    }
}

fn lerp(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
}

/// One simplex descent from `x0`; stops on collapse or budget.
fn simplex<F: Fn(&[f64]) -> f64>(c: &mut Counter<F>, x0: &[f64], f0: f64, step: f64) -> Result<(Vec<f64>, f64)> {
    let n = x0.len();
    let mut pts: Vec<(Vec<f64>, f64)> = vec![(x0.to_vec(), f0)];
    for i in 0..n {
        if c.exhausted() {
            break;
        }
        let mut x = x0.to_vec();
        x[i] += step;
        let f = c.eval(&x)?;
        pts.push((x, f));
    }
    if pts.len() < n + 1 {
        return Ok(best(pts));
    }
    loop {
        pts.sort_by(|a, b| a.1.total_cmp(&b.1));
        let scale = 1.0 + pts[0].0.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let diameter = pts[1..].iter().map(|(x, _)| x.iter().zip(&pts[0].0).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))).fold(0.0, f64::max);
        if c.exhausted() || diameter <= 1e-13 * scale || pts[n].1 == pts[0].1 {
            return Ok(best(pts));
        }
        let mut centroid = vec![0.0; n];
        for (x, _) in &pts[..n] {
            for (ci, xi) in centroid.iter_mut().zip(x) {
                *ci += xi / n as f64;
            }
        }
        let worst = pts[n].clone();
        let xr = lerp(&centroid, &worst.0, -1.0);
        let fr = c.eval(&xr)?;
        if fr < pts[0].1 {
            let xe = lerp(&centroid, &worst.0, -2.0);
            let fe = if c.exhausted() { f64::INFINITY } else { c.eval(&xe)? };
            pts[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < pts[n - 1].1 {
            pts[n] = (xr, fr);
            continue;
        }
        let (xc, fc) = if c.exhausted() {
            (xr.clone(), f64::INFINITY)
        } else if fr < worst.1 {
            let x = lerp(&centroid, &xr, 0.5);
            let f = c.eval(&x)?;
            (x, f)
        } else {
            let x = lerp(&centroid, &worst.0, 0.5);
            let f = c.eval(&x)?;
            (x, f)
        };
        if fc < worst.1.min(fr) {
            pts[n] = (xc, fc);
            continue;
        }
        let x0 = pts[0].0.clone();
        for p in pts.iter_mut().skip(1) {
            if c.exhausted() {
                break;
            }
            p.0 = lerp(&x0, &p.0, 0.5);
            p.1 = c.eval(&p.0)?;
        }
    }
}

fn best(mut pts: Vec<(Vec<f64>, f64)>) -> (Vec<f64>, f64) {
    pts.sort_by(|a, b| a.1.total_cmp(&b.1));
    pts.swap_remove(0)
}

/// Repeated simplex descents from the best point with shrinking simplices.
fn descend<F: Fn(&[f64]) -> f64>(cost: &F, x0: Vec<f64>, step: f64, budget: usize) -> Result<(Vec<f64>, f64, usize)> {
    let mut c = Counter { cost, used: 0, budget };
    let mut x = x0;
    let mut fx = c.eval(&x)?;
    let mut step = step;
    while !c.exhausted() && fx > 0.0 && step > 1e-12 {
        let (xn, fnew) = simplex(&mut c, &x, fx, step)?;
        let gained = fnew < fx * (1.0 - 1e-6);
        if fnew < fx {
            x = xn;
            fx = fnew;
        }
        if !gained {
            step *= 0.1;
        }
    }
    Ok((x, fx, c.used))
}

/// Derivative-free simplex search with `config.restarts` seeded restarts run
/// in parallel; the result with the lowest `(cost, restart)` wins.
pub fn optimize<F>(cost: F, initial: &[f64], config: &OptimizerConfig) -> Result<OptimizeResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if config.budget == 0 {
        return Err(Error::InvalidParameter("optimizer budget must be at least 1".into()));
    }
    if initial.is_empty() {
        return Err(Error::InvalidParameter("nothing to optimize".into()));
    }
    let starts: Vec<Vec<f64>> = (0..config.restarts.max(1))
        .map(|r| {
            if r == 0 {
                return initial.to_vec();
            }
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(r as u64);
            initial.iter().map(|v| v + config.step * rng.random_range(-2.0..2.0)).collect()
        })
        .collect();
    let runs = starts
        .into_par_iter()
        .map(|x0| descend(&cost, x0, config.step, config.budget))
        .collect::<Result<Vec<_>>>()?;
    let (restart, (x, f, used)) = runs
        .into_iter()
        .enumerate()
        .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1).then(a.0.cmp(&b.0)))
        .expect("at least one restart");
    Ok(OptimizeResult { coefficients: x, final_cost: f, converged: f < CONVERGENCE_THRESHOLD, evaluations: used, restart })
}
