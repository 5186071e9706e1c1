//! Two cavities coupled by a beam splitter, dispersively coupled to a
//! two-level (g, f) transmon ancilla, and the projections onto the
//! single-photon and four-state joint-cavity subspaces.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ControlPulse;
use crate::sim::{c, kron, pauli, CMatrix, HamiltonianSampler, TimeGrid};

/// Tensor ordering and codewords, written into every output header.
pub const BASIS_CONVENTION: &str =
    "cavity_a (x) cavity_b (x) ancilla; ancilla (g, f) with Z2 = |g><g| - |f><f|; |0>_L = |10>, |1>_L = |01>; q4 order |00>,|01>,|10>,|11>";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DualRailParams {
    /// Dispersive strength `χ` (rad/time).
    pub chi: f64,
    /// Per-cavity Fock cutoff.
    #[serde(default = "default_n_max")]
    pub n_max: usize,
}

fn default_n_max() -> usize {
    DualRailParams::DEFAULT_N_MAX
}

impl DualRailParams {
    pub const DEFAULT_N_MAX: usize = 4;
    pub const ANCILLA_DIM: usize = 2;

    pub fn new(chi: f64, n_max: usize) -> Result<Self> {
        let p = DualRailParams { chi, n_max };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.chi.is_finite() && self.chi > 0.0) {
            return Err(Error::InvalidParameter(format!("chi must be positive, got {}", self.chi)));
        }
        if self.n_max < 2 {
            return Err(Error::InvalidParameter(format!("n_max must be at least 2, got {}", self.n_max)));
        }
        Ok(())
    }

    /// Levels per cavity.
    pub fn levels(&self) -> usize {
        self.n_max + 1
    }

    pub fn dim(&self) -> usize {
        self.levels() * self.levels() * Self::ANCILLA_DIM
    }

    /// Full-space index of `|n_a, n_b⟩ ⊗ |anc⟩`, `anc = 0` for g and 1 for f.
    pub fn index(&self, na: usize, nb: usize, anc: usize) -> usize {
        (na * self.levels() + nb) * Self::ANCILLA_DIM + anc
    }
}

/// Quasi-static noise for one protocol execution.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSample {
    /// Ancilla dephasing `γ` (rad/time).
    #[serde(default)]
    pub gamma: f64,
    /// Residual `Z₁⊗Z₂` strength `ξ` during the swap step (rad/time).
    #[serde(default)]
    pub xi: f64,
}

/// Beam-splitter coupling `g(t)`, phase `φ(t)` and mode detuning `δ(t)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BeamSplitterDrive {
    grid: TimeGrid,
    g: Vec<f64>,
    varphi: Vec<f64>,
    delta: Vec<f64>,
}

impl BeamSplitterDrive {
    pub fn new(grid: TimeGrid, g: Vec<f64>, varphi: Vec<f64>, delta: Vec<f64>) -> Result<Self> {
        for (name, v) in [("g", &g), ("varphi", &varphi), ("delta", &delta)] {
            if v.len() != grid.len() {
                return Err(Error::InvalidParameter(format!("{name} has {} samples, grid has {}", v.len(), grid.len())));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} has non-finite samples")));
            }
        }
        Ok(BeamSplitterDrive { grid, g, varphi, delta })
    }

    pub fn from_fn(grid: TimeGrid, f: impl Fn(f64) -> (f64, f64, f64)) -> Result<Self> {
        let (mut g, mut p, mut d) = (Vec::new(), Vec::new(), Vec::new());
        for t in grid.times() {
            let (a, b, e) = f(t);
            g.push(a);
            p.push(b);
            d.push(e);
        }
        BeamSplitterDrive::new(grid, g, p, d)
    }

    pub fn constant(grid: TimeGrid, g: f64, varphi: f64, delta: f64) -> Result<Self> {
        BeamSplitterDrive::from_fn(grid, |_| (g, varphi, delta))
    }

    /// No coupling on the given grid.
    pub fn off(grid: TimeGrid) -> Self {
        let n = grid.len();
        BeamSplitterDrive { grid, g: vec![0.0; n], varphi: vec![0.0; n], delta: vec![0.0; n] }
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn g(&self) -> &[f64] {
        &self.g
    }

    pub fn varphi(&self) -> &[f64] {
        &self.varphi
    }

    pub fn delta(&self) -> &[f64] {
        &self.delta
    }

    /// Linearly interpolated `(g, φ, δ)`.
    pub fn at(&self, t: f64) -> (f64, f64, f64) {
        let n = self.grid.n_steps();
        let x = (t / self.grid.dt()).clamp(0.0, n as f64);
        let k = (x.floor() as usize).min(n - 1);
        let s = x - k as f64;
        let lerp = |v: &[f64]| v[k] + s * (v[k + 1] - v[k]);
        (lerp(&self.g), lerp(&self.varphi), lerp(&self.delta))
    }

    /// The same coupling as a single-qubit pulse on `(|10⟩, |01⟩)`:
    /// `Ω = g`, `Φ = -φ`, `Δ = δ`.
    pub fn as_control_pulse(&self) -> ControlPulse {
        let phi = self.varphi.iter().map(|p| -p).collect();
        ControlPulse::new(self.grid, self.g.clone(), phi, self.delta.clone()).expect("drive samples are finite")
    }

    /// `∫ g dt` of the interpolated coupling.
    pub fn area(&self) -> f64 {
        let h = self.grid.dt();
        self.g.windows(2).map(|w| 0.5 * h * (w[0] + w[1])).sum()
    }
}

/// Ladder and number operators embedded in the full space.
#[derive(Clone, Debug)]
pub struct ModeOperators {
    pub a: CMatrix,
    pub b: CMatrix,
    pub na: CMatrix,
    pub nb: CMatrix,
    pub z2: CMatrix,
}

fn annihilation(levels: usize) -> CMatrix {
    let mut a = CMatrix::zeros(levels, levels);
    for n in 1..levels {
        a[(n - 1, n)] = c((n as f64).sqrt(), 0.);
    }
    a
}

pub fn mode_operators(params: &DualRailParams) -> ModeOperators {
    let m = params.levels();
    let id_m = CMatrix::identity(m, m);
    let id_a = pauli::id();
    let a = kron(&kron(&annihilation(m), &id_m), &id_a);
    let b = kron(&kron(&id_m, &annihilation(m)), &id_a);
    let na = a.adjoint() * &a;
    let nb = b.adjoint() * &b;
    let z2 = kron(&CMatrix::identity(m * m, m * m), &pauli::z());
    ModeOperators { a, b, na, nb, z2 }
}

/// Embeds a single-ancilla operator into the full space.
pub fn ancilla_operator(params: &DualRailParams, op: &CMatrix) -> CMatrix {
    let m = params.levels();
    kron(&CMatrix::identity(m * m, m * m), op)
}

/// `H = (g/2)(e^{iφ} a†b + e^{-iφ} ab†) + δ a†a - (χ/2) a†a Z₂ + H₂ + (γ/2) Z₂`
/// with `H₂ = (Ω₂/2)(cos Φ₂ X₂ + sin Φ₂ Y₂) + (Δ₂/2) Z₂` from the ancilla
/// pulse.
pub struct NativeHamiltonian {
    chi: f64,
    gamma: f64,
    drive: BeamSplitterDrive,
    ancilla: Option<ControlPulse>,
    hop: CMatrix,
    na: CMatrix,
    na_z2: CMatrix,
    x2: CMatrix,
    y2: CMatrix,
    z2: CMatrix,
}

/// The ancilla pulse, when given, must share the drive's grid.
pub fn native_hamiltonian(
    params: &DualRailParams,
    drive: &BeamSplitterDrive,
    ancilla_pulse: Option<&ControlPulse>,
    noise: &NoiseSample,
) -> Result<NativeHamiltonian> {
    params.validate()?;
    if let Some(p) = ancilla_pulse {
        if p.grid() != drive.grid() {
            return Err(Error::Grid("ancilla pulse and beam-splitter drive use different grids".into()));
        }
    }
    let ops = mode_operators(params);
    Ok(NativeHamiltonian {
        chi: params.chi,
        gamma: noise.gamma,
        drive: drive.clone(),
        ancilla: ancilla_pulse.cloned(),
        hop: ops.a.adjoint() * &ops.b,
        na_z2: &ops.na * &ops.z2,
        na: ops.na,
        x2: ancilla_operator(params, &pauli::x()),
        y2: ancilla_operator(params, &pauli::y()),
        z2: ops.z2,
    })
}

impl HamiltonianSampler for NativeHamiltonian {
    fn dim(&self) -> usize {
        self.hop.nrows()
    }

    fn sample(&self, t: f64) -> CMatrix {
        let (g, phi, delta) = self.drive.at(t);
        let (omega2, phi2, delta2) = self.ancilla.as_ref().map_or((0.0, 0.0, 0.0), |p| p.at(t));
        let e = c(phi.cos(), phi.sin());
        let mut h = &self.hop * (e * (0.5 * g));
        h += self.hop.adjoint() * (e.conj() * (0.5 * g));
        h += &self.na * c(delta, 0.);
        h -= &self.na_z2 * c(0.5 * self.chi, 0.);
        h += &self.x2 * c(0.5 * omega2 * phi2.cos(), 0.);
        h += &self.y2 * c(0.5 * omega2 * phi2.sin(), 0.);
        h += &self.z2 * c(0.5 * (delta2 + self.gamma), 0.);
        h
    }
}

/// `(I₁, X₁, Y₁, Z₁)` on the cavity single-photon subspace, basis
/// `(|10⟩, |01⟩)`.
pub fn schwinger_operators(params: &DualRailParams) -> [CMatrix; 4] {
    let m = params.levels();
    let a = kron(&annihilation(m), &CMatrix::identity(m, m));
    let b = kron(&CMatrix::identity(m, m), &annihilation(m));
    let (ad, bd) = (a.adjoint(), b.adjoint());
    let full = [
        &ad * &a + &bd * &b,
        &ad * &b + &a * &bd,
        (&ad * &b - &a * &bd) * c(0., -1.),
        &ad * &a - &bd * &b,
    ];
    let idx = [m, 1];
    full.map(|op| CMatrix::from_fn(2, 2, |i, j| op[(idx[i], idx[j])]))
}

fn restrict(h: &CMatrix, idx: &[usize]) -> CMatrix {
    CMatrix::from_fn(idx.len(), idx.len(), |i, j| h[(idx[i], idx[j])])
}

/// Full-space indices of `(|10⟩, |01⟩) ⊗ (g, f)`.
pub fn single_photon_indices(params: &DualRailParams) -> Vec<usize> {
    let mut idx = Vec::new();
    for (na, nb) in [(1, 0), (0, 1)] {
        for anc in 0..2 {
            idx.push(params.index(na, nb, anc));
        }
    }
    idx
}

/// Full-space indices of `(|00⟩, |01⟩, |10⟩, |11⟩) ⊗ (g, f)`.
pub fn q4_indices(params: &DualRailParams) -> Vec<usize> {
    let mut idx = Vec::new();
    for (na, nb) in Q4_STATES {
        for anc in 0..2 {
            idx.push(params.index(na, nb, anc));
        }
    }
    idx
}

/// Photon numbers `(n_a, n_b)` of the four joint-cavity states, in q4 order.
pub const Q4_STATES: [(usize, usize); 4] = [(0, 0), (0, 1), (1, 0), (1, 1)];

/// 4x4 block of a full-space operator on the DR qubit ⊗ ancilla.
pub fn project_single_photon(h: &CMatrix, params: &DualRailParams) -> CMatrix {
    restrict(h, &single_photon_indices(params))
}

/// 8x8 block of a full-space operator on `span{|00⟩,|01⟩,|10⟩,|11⟩} ⊗` ancilla.
pub fn project_q4(h: &CMatrix, params: &DualRailParams) -> CMatrix {
    restrict(h, &q4_indices(params))
}

/// Cavity operators on the four joint-cavity states (q4 order).
pub mod q4 {
    use crate::sim::{c, CMatrix};

    fn diag(d: [f64; 4]) -> CMatrix {
        CMatrix::from_fn(4, 4, |i, j| if i == j { c(d[i], 0.) } else { c(0., 0.) })
    }

    pub fn projector(k: usize) -> CMatrix {
        let mut d = [0.0; 4];
        d[k] = 1.0;
        diag(d)
    }

    pub fn p00() -> CMatrix {
        projector(0)
    }

    pub fn p11() -> CMatrix {
        projector(3)
    }

    /// `a†a + b†b` restricted to one photon: `|01⟩⟨01| + |10⟩⟨10|`.
    pub fn i1() -> CMatrix {
        diag([0.0, 1.0, 1.0, 0.0])
    }

    /// `|01⟩⟨10| + |10⟩⟨01|`
    pub fn x1() -> CMatrix {
        let mut m = CMatrix::zeros(4, 4);
        m[(1, 2)] = c(1., 0.);
        m[(2, 1)] = c(1., 0.);
        m
    }

    /// `-i(a†b - ab†)`: `a†b|01⟩ = |10⟩`.
    pub fn y1() -> CMatrix {
        let mut m = CMatrix::zeros(4, 4);
        m[(2, 1)] = c(0., -1.);
        m[(1, 2)] = c(0., 1.);
        m
    }

    /// `a†a - b†b`: `+1` on `|10⟩`.
    pub fn z1() -> CMatrix {
        diag([0.0, -1.0, 1.0, 0.0])
    }

    /// `a†a`
    pub fn n_a() -> CMatrix {
        diag([0.0, 0.0, 1.0, 1.0])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateClass {
    /// One photon in total: odd joint parity.
    Codespace,
    /// Zero or two photons: even joint parity.
    LeakageEven,
}

pub fn classify_state(na: usize, nb: usize) -> Result<StateClass> {
    match na + nb {
        1 => Ok(StateClass::Codespace),
        0 | 2 => Ok(StateClass::LeakageEven),
        _ => Err(Error::PhotonNumber { na, nb }),
    }
}

/// Cavity photon numbers and ancilla level of a full-space index.
pub fn decompose_index(params: &DualRailParams, index: usize) -> Result<(usize, usize, usize)> {
    if index >= params.dim() {
        return Err(Error::Dimension { expected: params.dim(), got: index });
    }
    let anc = index % 2;
    let cav = index / 2;
    Ok((cav / params.levels(), cav % params.levels(), anc))
}
