use thiserror::Error;

/// Errors raised by the library and the experiment runner.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("no root: {0}")]
    NoRoot(String),

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("eigensolver did not converge for n = {n}")]
    Eigensolver { n: usize },

    #[error("rejection efficiency {rate:.3e} fell below {floor:.0e}")]
    RejectionEfficiency { rate: f64, floor: f64 },

    #[error("Markov chain diverged: {0}")]
    Divergence(String),

    #[error("walker {walker} did not hit the droplet within {cap} steps")]
    NonTermination { walker: usize, cap: u64 },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("degenerate estimate: effective sample size {ess:.2} < {min}")]
    DegenerateEstimate { ess: f64, min: f64 },

    #[error("coincident points at indices {0} and {1}")]
    CoincidentPoints(usize, usize),

    #[error("gamma = {0} is outside the L1 phase (gamma < 2*sqrt(2))")]
    Phase(f64),

    #[error("covariance factorization failed: {0}")]
    NotPositiveDefinite(String),

    #[error("kernel evaluation out of range ({0})")]
    Overflow(f64),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the experiment runner.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Json(_) => 2,
            Error::Hypothesis(_) => 4,
            _ => 3,
        }
    }
}
