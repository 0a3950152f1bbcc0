use serde::Serialize;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// The hypothesis of the construction that a validation failure refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Hypothesis {
    /// Only one-dimensional tori are supported.
    TorusRank,
    /// At least two variables are required.
    VariableCount,
    /// Invariant factors of the finite group must be at least 2.
    InvariantFactor,
    /// Finite weights must carry one residue per invariant factor for every variable.
    FiniteWeights,
    /// Effectiveness condition (1), (2) or (3).
    Effectiveness(u8),
    /// The representation has non-trivial determinant.
    Unimodularity,
    /// The torus weights do not sum to zero.
    QuasiSymmetry,
    /// The pairwise coprimality / generation criterion for genericity fails.
    Genericity,
}

impl std::fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Hypothesis::TorusRank => write!(f, "torus rank"),
            Hypothesis::VariableCount => write!(f, "variable count"),
            Hypothesis::InvariantFactor => write!(f, "invariant factor"),
            Hypothesis::FiniteWeights => write!(f, "finite weights"),
            Hypothesis::Effectiveness(i) => write!(f, "effectiveness condition ({i})"),
            Hypothesis::Unimodularity => write!(f, "unimodularity"),
            Hypothesis::QuasiSymmetry => write!(f, "quasi-symmetry"),
            Hypothesis::Genericity => write!(f, "genericity"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("validation failed on {hypothesis}: {detail}")]
    Validation { hypothesis: Hypothesis, detail: String },

    #[error("degree {degree} lies beyond the truncation {truncation}")]
    BeyondTruncation { degree: u32, truncation: u32 },

    #[error("window exhausted: {0}; rerun with a larger truncation")]
    WindowExhausted(String),

    #[error("resolution did not terminate within {max_length} steps")]
    NonTermination { max_length: usize },

    #[error("incompatible characters: {0}")]
    IncompatibleCharacters(String),

    #[error("result changed under truncation {from} -> {to}: {what}")]
    Unstable { from: u32, to: u32, what: String },

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
}

impl Error {
    pub(crate) fn validation(hypothesis: Hypothesis, detail: impl Into<String>) -> Self {
        Error::Validation { hypothesis, detail: detail.into() }
    }
}
