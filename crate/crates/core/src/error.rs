use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a BMP file (missing 'BM' signature)")]
    BadMagic,

    #[error("truncated BMP: expected at least {expected} bytes, got {actual}")]
    Truncated { expected: usize, actual: usize },

    #[error("unsupported BMP: {0}")]
    UnsupportedFormat(String),

    #[error("invalid image: {0}")]
    InvalidImage(String),

    #[error("invalid brightness mode {0}: expected 1..=7")]
    InvalidMode(u8),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("image too small: {width}x{height} has fewer than 2 pixels in its last row")]
    ImageTooSmall { width: u32, height: u32 },

    #[error("capacity exceeded: required {required} bits, available {available}")]
    CapacityExceeded { required: usize, available: usize },

    #[error("not a stego image: parameter marker not found")]
    NotAStegoImage,

    #[error("message of {0} bytes does not fit a 32-bit length header")]
    MessageTooLarge(usize),

    #[error("corrupt frame: header declares {declared} payload bits, only {available} present")]
    CorruptFrame { declared: usize, available: usize },

    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(u32, u32, u32, u32),
}
