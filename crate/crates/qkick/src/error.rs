use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("expected a square matrix, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("eigensolver did not converge: {0}")]
    NoConvergence(String),

    #[error("peripheral cluster at {value} is ill-conditioned (condition {condition:.3e}); the tolerance is probably too loose")]
    IllConditioned { value: String, condition: f64 },

    #[error("matrix is not Hermitian (residual {0:.3e})")]
    NonHermitian(f64),

    #[error("channel is not CPTP: trace residual {trace_residual:.3e}, min Choi eigenvalue {min_choi_eigenvalue:.3e}")]
    NotCptp {
        trace_residual: f64,
        min_choi_eigenvalue: f64,
    },

    #[error("fixed-point space has dimension {0}; no unique fixed-point state")]
    DegenerateFixedSpace(usize),

    #[error("peripheral spectrum cannot be matched to roots of unity: {0}")]
    UnmatchedSpectrum(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown name `{0}`")]
    UnknownName(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of the numerical routines themselves, as opposed
    /// to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence(_)
                | Error::IllConditioned { .. }
                | Error::UnmatchedSpectrum(_)
                | Error::DegenerateFixedSpace(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
