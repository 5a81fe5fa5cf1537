use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("PGM parse error at byte {offset}: {reason}")]
    Parse { offset: usize, reason: String },

    #[error("unsupported PGM maxval {0}: only 8-bit grayscale is supported")]
    UnsupportedDepth(u32),

    #[error("invalid image: {0}")]
    InvalidImage(String),

    #[error("unsupported image size {height}x{width}: at least 16 pixels required")]
    UnsupportedSize { height: usize, width: usize },

    #[error("invalid secret key: {0}")]
    InvalidKey(String),

    #[error("message needs {requested} bits but capacity is {capacity} bits")]
    Capacity { capacity: u64, requested: u64 },

    /// Decrypted payload framing is inconsistent: wrong key or tampering.
    #[error("integrity check failed: {0}")]
    Integrity(String),

    /// Embedded header or bi-level stream could not be parsed.
    #[error("malformed embedded data: {0}")]
    Format(String),
}
