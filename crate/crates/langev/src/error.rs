use thiserror::Error;

/// Errors produced by simulation setup, analysis, and the I/O layer.
///
/// Contract violations (dimension mismatches, invalid cluster counts, and the
/// like) panic instead; these variants cover recoverable, user-facing failures.
#[derive(Debug, Error)]
pub enum Error {
    /// An association matrix has a meaning row with zero total count, so no
    /// encoding distribution can be derived for it.
    #[error("meaning row {row} of the association matrix has zero total count")]
    ZeroRow { row: usize },

    /// A configuration key failed to parse or violated a constraint.
    #[error("config key `{key}`: {reason}")]
    Config { key: String, reason: String },

    /// An input file could not be parsed.
    #[error("{path}:{line}: {reason}")]
    Malformed {
        path: String,
        line: usize,
        reason: String,
    },

    /// A power-law fit was requested with fewer than two usable points.
    #[error("power-law fit needs at least 2 points above the cutoff, found {0}")]
    TooFewPoints(usize),

    /// A power-law fit was requested on points that share a single r value.
    #[error("power-law fit needs at least two distinct r values")]
    DegenerateFit,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn config(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
