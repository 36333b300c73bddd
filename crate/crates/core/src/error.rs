use thiserror::Error;

use crate::pl::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid rational literal `{0}`")]
    Rational(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("invalid map: {0}")]
    InvalidMap(ValidationReport),
    #[error("invalid slope sequence {slopes:?}: {reason}")]
    InvalidSequence { slopes: Vec<i64>, reason: String },
    #[error("tropical polynomial needs a finite top coefficient")]
    BottomPolynomial,
    #[error("map is not admissible of degree {degree}: {reason}")]
    Inadmissible { degree: u32, reason: String },
    #[error("invalid gap vector: {0}")]
    InvalidGaps(String),
    #[error("unknown combinatorial type label `{0}`")]
    UnknownLabel(String),
    #[error("merge index {index} out of range 1..={max}")]
    MergeIndex { index: usize, max: usize },
    #[error(
        "merging break points {index} and {} cancels jumps {left:+} and {right:+}; \
         the limit leaves the moduli space",
        index + 1
    )]
    InvalidDegeneration { index: usize, left: i64, right: i64 },
    #[error("branch configuration needs four break points, found {0}")]
    NotFourBreaks(usize),
    #[error("non-generic branch configuration: {0}")]
    NonGeneric(String),
}

impl Error {
    /// Stable machine-readable reason code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Rational(_) | Error::ZeroDenominator(_) => "malformed-rational",
            Error::InvalidMap(_) => "invalid-map",
            Error::InvalidSequence { .. } => "invalid-sequence",
            Error::BottomPolynomial => "bottom-polynomial",
            Error::Inadmissible { .. } => "inadmissible",
            Error::InvalidGaps(_) => "invalid-gaps",
            Error::UnknownLabel(_) => "unknown-label",
            Error::MergeIndex { .. } => "merge-index",
            Error::InvalidDegeneration { .. } => "invalid-degeneration",
            Error::NotFourBreaks(_) => "not-four-breaks",
            Error::NonGeneric(_) => "non-generic",
        }
    }

    /// Whether the error stems from malformed input rather than from the
    /// mathematics of a well-formed request.
    pub fn is_malformed_input(&self) -> bool {
        matches!(
            self,
            Error::Rational(_)
                | Error::ZeroDenominator(_)
                | Error::InvalidMap(_)
                | Error::InvalidSequence { .. }
                | Error::BottomPolynomial
                | Error::InvalidGaps(_)
                | Error::UnknownLabel(_)
                | Error::MergeIndex { .. }
        )
    }
}
