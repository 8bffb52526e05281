//! Error type shared by all core operations.

use core::fmt;

/// Errors raised by the core algorithms.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An image with zero width or height was supplied.
    EmptyImage,
    /// The saliency radii list was empty.
    EmptyRadii,
    /// A rectangle falls outside the image it refers to.
    RectOutsideImage,
    /// A resize target dimension was zero.
    ZeroTargetDim,
    /// Crop dimensions do not match the paste rectangle.
    PasteSizeMismatch,
    /// A zero vector cannot be normalized.
    ZeroVector,
    /// Histogram bin count below the minimum of 2.
    BadBinCount(usize),
    /// A group contained no feature vectors.
    EmptyGroup,
    /// Fewer vectors than the operation needs.
    TooFewVectors { need: usize, got: usize },
    /// Vectors of inconsistent dimension were mixed.
    DimensionMismatch { expected: usize, got: usize },
    /// A combined-metric weight outside [0, 0.5].
    WeightOutOfRange(f64),
    /// Weight buffer length does not match the pixel count.
    WeightLenMismatch { expected: usize, got: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyImage => write!(f, "image has zero width or height"),
            Error::EmptyRadii => write!(f, "saliency radii list is empty"),
            Error::RectOutsideImage => write!(f, "rectangle lies outside the image"),
            Error::ZeroTargetDim => write!(f, "resize target dimension is zero"),
            Error::PasteSizeMismatch => {
                write!(f, "crop dimensions do not match the paste rectangle")
            }
            Error::ZeroVector => write!(f, "cannot normalize a zero vector"),
            Error::BadBinCount(b) => write!(f, "histogram needs at least 2 bins, got {b}"),
            Error::EmptyGroup => write!(f, "group contains no feature vectors"),
            Error::TooFewVectors { need, got } => {
                write!(f, "operation needs at least {need} vectors, got {got}")
            }
            Error::DimensionMismatch { expected, got } => {
                write!(f, "feature dimension mismatch: expected {expected}, got {got}")
            }
            Error::WeightOutOfRange(w) => {
                write!(f, "weight {w} outside the permitted range [0, 0.5]")
            }
            Error::WeightLenMismatch { expected, got } => {
                write!(f, "weight buffer length {got} does not match pixel count {expected}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
