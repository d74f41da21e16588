use std::fmt;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Pgm(#[from] PgmError),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("image dimensions differ: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),

    #[error("invalid image: {0}")]
    InvalidImage(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("insufficient samples: need at least {needed}, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("insufficient data: empirical variogram has no bins")]
    InsufficientData,

    #[error("duplicate sample coordinates at ({0}, {1})")]
    DuplicateSamples(f64, f64),

    #[error("degenerate geometry: kriging system is singular")]
    DegenerateGeometry,
}

/// PGM decode failure, tagged with the byte offset where parsing stopped.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("PGM error at byte {offset}: {kind}")]
pub struct PgmError {
    pub kind: PgmErrorKind,
    pub offset: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PgmErrorKind {
    BadMagic,
    BadNumber,
    UnexpectedEof,
    MissingWhitespace,
    ZeroDimension,
    UnsupportedMaxval(u64),
    TruncatedPayload { expected: usize, found: usize },
}

impl fmt::Display for PgmErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PgmErrorKind::BadMagic => f.write_str("expected binary graymap magic \"P5\""),
            PgmErrorKind::BadNumber => f.write_str("malformed header number"),
            PgmErrorKind::UnexpectedEof => f.write_str("unexpected end of header"),
            PgmErrorKind::MissingWhitespace => f.write_str("missing whitespace after maxval"),
            PgmErrorKind::ZeroDimension => f.write_str("width and height must be positive"),
            PgmErrorKind::UnsupportedMaxval(m) => write!(f, "maxval {m} unsupported (only 255)"),
            PgmErrorKind::TruncatedPayload { expected, found } => {
                write!(f, "truncated payload: expected {expected} bytes, found {found}")
            }
        }
    }
}
