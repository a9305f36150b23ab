use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across the engine.
///
/// Variants fall into four families, each mapped to a process exit code by
/// [`Error::exit_code`]: malformed input (2), violated invariants (3),
/// impossible post-selection or empty samples (4) and internal tolerance
/// breaches (5).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("missing field `{field}`{}", context_suffix(.context))]
    MissingField { field: String, context: String },

    #[error("invariant violation in `{field}`: {message}")]
    Invariant { field: String, message: String },

    #[error("matrix is not Hermitian (max asymmetry {max_asymmetry:.3e})")]
    NotHermitian { max_asymmetry: f64 },

    #[error("matrix is not unitary (max deviation {max_deviation:.3e})")]
    NotUnitary { max_deviation: f64 },

    #[error("matrix is not a projector (idempotence defect {defect:.3e})")]
    NotProjector { defect: f64 },

    #[error("vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("unknown outcome label `{0}`")]
    UnknownLabel(String),

    #[error("ambiguous preparation: outcome `{label}` has rank {rank}")]
    AmbiguousPreparation { label: String, rank: usize },

    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("invalid basis: {0}")]
    InvalidBasis(String),

    #[error("invalid context: {0}")]
    InvalidContext(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("zero-probability outcome `{label}` (probability {probability:.3e})")]
    ZeroProbability { label: String, probability: f64 },

    #[error("post-selection impossible in every branch (ABL denominator {denominator:.3e})")]
    VanishingDenominator { denominator: f64 },

    #[error("no data: 0 of {requested} runs survived post-selection (seed {seed})")]
    NoData { requested: u64, seed: u64 },

    #[error("internal tolerance breach: {0}")]
    ToleranceBreach(String),
}

fn context_suffix(context: &str) -> String {
    if context.is_empty() {
        String::new()
    } else {
        format!(" ({context})")
    }
}

impl Error {
    /// Process exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::MissingField { .. } => 2,
            Error::ZeroProbability { .. } | Error::VanishingDenominator { .. } | Error::NoData { .. } => 4,
            Error::ToleranceBreach(_) => 5,
            _ => 3,
        }
    }

    /// Short machine-readable class name.
    pub fn class(&self) -> &'static str {
        match self.exit_code() {
            2 => "parse",
            3 => "invariant",
            4 => "no-data",
            _ => "tolerance",
        }
    }

    /// Wrap an invariant failure with the scenario field that caused it.
    pub fn in_field(self, field: impl Into<String>) -> Error {
        match self {
            Error::Invariant { .. } | Error::Parse(_) | Error::MissingField { .. } => self,
            other if other.exit_code() == 3 => Error::Invariant {
                field: field.into(),
                message: other.to_string(),
            },
            other => other,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_by_class() {
        assert_eq!(Error::Parse("x".into()).exit_code(), 2);
        assert_eq!(Error::NotNormalized { norm: 2.0 }.exit_code(), 3);
        assert_eq!(Error::NoData { requested: 1, seed: 0 }.exit_code(), 4);
        assert_eq!(Error::VanishingDenominator { denominator: 0.0 }.exit_code(), 4);
        assert_eq!(Error::ToleranceBreach("x".into()).exit_code(), 5);
    }

    #[test]
    fn in_field_names_the_field() {
        let err = Error::NotNormalized { norm: 2.0 }.in_field("preparation.state");
        assert_eq!(err.exit_code(), 3);
        assert!(err.to_string().contains("preparation.state"));
        let passthrough = Error::NoData { requested: 3, seed: 1 }.in_field("x");
        assert_eq!(passthrough.exit_code(), 4);
    }
}
