use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("invalid time grid: {0}")]
    Grid(String),

    #[error("Hamiltonian is not Hermitian at t = {t}: max deviation {deviation:.3e}")]
    NonHermitian { t: f64, deviation: f64 },

    #[error("matrix is not unitary: max |U†U - I| = {deviation:.3e}")]
    NotUnitary { deviation: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate Frenet frame: curvature below {threshold:.3e} on t in [{start}, {end}]")]
    DegenerateFrame { start: f64, end: f64, threshold: f64 },

    #[error("curve is not parameterized by arc length")]
    NotArcLength,

    #[error("curve is not closed: gap {gap:.3e} exceeds {tolerance:.3e}")]
    OpenCurve { gap: f64, tolerance: f64 },

    #[error("arc-length reparameterization failed: {0}")]
    Reparameterization(String),

    #[error("slope fit failed: {0}")]
    Fit(String),

    #[error("Fock truncation n_max = {n_max} too small (need >= {required}); diagnostic norm {diagnostic:.3e}")]
    Truncation { n_max: usize, required: usize, diagnostic: f64 },

    #[error("photon number ({na}, {nb}) outside the classified range")]
    PhotonNumber { na: usize, nb: usize },

    #[error("ancilla not disentangled from the cavities: off-block norm {off_block:.3e} > {tolerance:.3e}")]
    AncillaEntangled { off_block: f64, tolerance: f64 },

    #[error("cost function returned a non-finite value {value} at evaluation {evaluation}")]
    NonFiniteCost { value: f64, evaluation: usize },

    #[error("pulse synthesis did not converge: {0}")]
    NotConverged(String),

    #[error("{path}: line {line}: {message}")]
    Parse { path: String, line: u64, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
