use thiserror::Error;

/// Reasons a seed line is rejected by [`crate::cfrac::validate_seed`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeedDefect {
    /// `P0` is not `A` plus a polynomial of degree at most g-1.
    WrongPDegree { degree: Option<usize> },
    /// `Q0` must have degree exactly g.
    WrongQDegree { degree: Option<usize> },
    /// `Q0` does not divide `F - P0^2`.
    NotDivisible,
}

impl std::fmt::Display for SeedDefect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let show = |d: &Option<usize>| d.map_or("-inf".to_string(), |d| d.to_string());
        match self {
            SeedDefect::WrongPDegree { degree } => {
                write!(
                    f,
                    "P0 - A has degree {} (must be at most g-1)",
                    show(degree)
                )
            }
            SeedDefect::WrongQDegree { degree } => {
                write!(
                    f,
                    "Q0 has degree {} (must be exactly g, leading coefficient nonzero)",
                    show(degree)
                )
            }
            SeedDefect::NotDivisible => write!(f, "Q0 does not divide F - P0^2"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("invalid seed: {0}")]
    InvalidSeed(SeedDefect),

    /// The expansion has a vanishing `d` at line `index`; the continued
    /// fraction cannot be continued past it in the requested direction.
    #[error("expansion is singular at line {index}: d vanishes")]
    Singular { index: i64 },

    #[error("orbit is singular at step {step}: {reason}")]
    SingularOrbit { step: usize, reason: String },

    #[error("pole encountered at {at}")]
    Pole { at: String },

    #[error("insufficient data: need {needed}, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// True for errors caused by malformed user input rather than by a
    /// failed check.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse(_)
                | Error::InvalidCurve(_)
                | Error::InvalidSeed(_)
                | Error::InvalidArgument(_)
                | Error::Io(_)
                | Error::Json(_)
                | Error::InsufficientData { .. }
        )
    }
}
