use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Binary PGM parse failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PgmError {
    #[error("not a binary PGM (expected magic \"P5\")")]
    BadMagic,
    #[error("malformed PGM header: {0}")]
    MalformedHeader(&'static str),
    #[error("unsupported PGM depth: maxval {0} (only 255 is supported)")]
    UnsupportedDepth(u32),
    #[error("truncated PGM payload: expected {expected} bytes, found {actual}")]
    Truncated { expected: usize, actual: usize },
}

/// Standard database text-format failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DbFormatError {
    #[error("missing or malformed AGPVDB header")]
    BadHeader,
    #[error("unsupported database version {0}")]
    UnsupportedVersion(u32),
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("image dimensions must be at least 1x1 (got {width}x{height})")]
    EmptyImage { width: usize, height: usize },
    #[error("pixel buffer holds {actual} values, {width}x{height} needs {expected}")]
    BufferSize {
        width: usize,
        height: usize,
        expected: usize,
        actual: usize,
    },
    #[error(transparent)]
    Pgm(#[from] PgmError),
    #[error("noise rate {0} outside [0, 1]")]
    InvalidRate(f64),
    #[error("affine matrix is singular (det = {0:e})")]
    SingularMatrix(f64),
    #[error("illumination factor must be positive (got {0})")]
    InvalidFactor(f64),
    #[error("smoothing factor must be positive (got {0})")]
    InvalidSigma(f64),
    #[error("image {width}x{height} is too small: {reason}")]
    TooSmall {
        width: usize,
        height: usize,
        reason: &'static str,
    },
    #[error("a {width}x{height} image resolves only {available} octaves, {requested} requested")]
    TooFewOctaves {
        width: usize,
        height: usize,
        requested: usize,
        available: usize,
    },
    #[error("center of gravity of an empty pixel set")]
    EmptyPixelSet,
    #[error("axis at {phi:.4} rad has no effective range")]
    Featureless { phi: f64 },
    #[error("candidate has no usable gradient samples")]
    NoGradient,
    #[error(transparent)]
    DbFormat(#[from] DbFormatError),
    #[error("standard database is empty")]
    EmptyDb,
    #[error("label {0:?} is not one of 0-9, A-Z")]
    UnknownLabel(char),
    #[error("duplicate label {0:?}")]
    DuplicateLabel(char),
    #[error("no sample for label {0:?}")]
    MissingLabel(char),
    #[error("no character candidate found for label {0:?}")]
    NoCandidate(char),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
