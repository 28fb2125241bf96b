use thiserror::Error;

pub type Result<T> = std::result::Result<T, FrackError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrackError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} did not converge (attempted: {})", attempted.join(", "))]
    NonConvergence {
        what: String,
        attempted: Vec<String>,
    },

    #[error("series diverges: {0}")]
    DivergentParameters(String),

    #[error("residue series has coincident poles: {0}")]
    DegeneratePoles(String),

    #[error("Mellin-Barnes contour quadrature failed: {0}")]
    ContourFailure(String),

    #[error("no upper/lower parameter pair can be cancelled")]
    NoCancellablePair,

    #[error("grid too coarse: {points} points, need at least {required}")]
    GridTooCoarse { points: usize, required: usize },

    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),

    #[error("numerical Laplace inversion unstable: {0}")]
    InversionUnstable(String),

    #[error("argument outside the asymptotic regime: {0}")]
    OutOfAsymptoticRegime(String),

    #[error("ingestion error: {0}")]
    Ingestion(String),
}

impl FrackError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        FrackError::InvalidParameter(msg.into())
    }

    pub(crate) fn non_convergence(what: impl Into<String>, attempted: &[&str]) -> Self {
        FrackError::NonConvergence {
            what: what.into(),
            attempted: attempted.iter().map(|s| s.to_string()).collect(),
        }
    }
}
