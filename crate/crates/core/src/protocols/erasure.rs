use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};

use crate::dualrail::{classify_state, DualRailParams, StateClass};
use crate::error::{Error, Result};
use crate::sim::{c, CMatrix};

/// Which ancilla outcome, after the `R_y` sandwich, certifies an odd
/// (codespace) input.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasurementRule {
    /// `f` means "no erasure", `g` flags an erasure.
    #[default]
    OddOnF,
    /// `g` means "no erasure", `f` flags an erasure.
    OddOnG,
}

/// Space a protocol unitary acts on.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StateSpace {
    /// `span{|00⟩,|01⟩,|10⟩,|11⟩} ⊗` ancilla.
    Q4,
    /// The full truncated two-cavity space.
    Full(DualRailParams),
}

impl StateSpace {
    pub fn dim(&self) -> usize {
        match self {
            StateSpace::Q4 => 8,
            StateSpace::Full(p) => p.dim(),
        }
    }

    pub fn index(&self, na: usize, nb: usize, anc: usize) -> Result<usize> {
        match self {
            StateSpace::Q4 if na <= 1 && nb <= 1 => Ok((2 * na + nb) * 2 + anc),
            StateSpace::Full(p) if na <= p.n_max && nb <= p.n_max => Ok(p.index(na, nb, anc)),
            _ => Err(Error::PhotonNumber { na, nb }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErasureCheckStats {
    /// Mean probability that a codespace input is flagged.
    pub false_erase_prob: f64,
    /// Mean probability that an even-parity input passes unflagged.
    pub missed_leak_prob: f64,
    pub worst_case: f64,
}

/// Runs the check circuit `R_y(+π/4) U R_y(-π/4)` on `|n_a n_b⟩|g⟩` for
/// every input and measures the ancilla.
pub fn erasure_check_stats(
    u: &CMatrix,
    space: &StateSpace,
    inputs: &[(usize, usize)],
    rule: MeasurementRule,
) -> Result<ErasureCheckStats> {
    let dim = space.dim();
    if u.nrows() != dim || u.ncols() != dim {
        return Err(Error::Dimension { expected: dim, got: u.nrows() });
    }
    let (cs, sn) = (FRAC_PI_4.cos(), FRAC_PI_4.sin());
    // exp(-iαY) = [[cos α, -sin α], [sin α, cos α]] on each ancilla pair
    let rotate = |v: &mut CMatrix, sign: f64| {
        for k in (0..dim).step_by(2) {
            let (g, f) = (v[k], v[k + 1]);
            v[k] = g * cs - f * (sign * sn);
            v[k + 1] = g * (sign * sn) + f * cs;
        }
    };
    let (mut odd, mut even) = (Vec::new(), Vec::new());
    for &(na, nb) in inputs {
        let class = classify_state(na, nb)?;
        let mut psi = CMatrix::zeros(dim, 1);
        psi[space.index(na, nb, 0)?] = c(1., 0.);
        rotate(&mut psi, 1.0);
        let mut out = u * psi;
        rotate(&mut out, -1.0);
        let p_f: f64 = (0..dim).skip(1).step_by(2).map(|k| out[k].norm_sqr()).sum();
        let p_g: f64 = (0..dim).step_by(2).map(|k| out[k].norm_sqr()).sum();
        let (pass, flag) = match rule {
            MeasurementRule::OddOnF => (p_f, p_g),
            MeasurementRule::OddOnG => (p_g, p_f),
        };
        match class {
            StateClass::Codespace => odd.push(flag),
            StateClass::LeakageEven => even.push(pass),
        }
    }
    let mean = |v: &[f64]| if v.is_empty() { 0.0 } else { (v.iter().sum::<f64>() / v.len() as f64).clamp(0.0, 1.0) };
    let (false_erase_prob, missed_leak_prob) = (mean(&odd), mean(&even));
    Ok(ErasureCheckStats { false_erase_prob, missed_leak_prob, worst_case: false_erase_prob.max(missed_leak_prob) })
}
