//! Error type shared by all modules.

use core::fmt;

/// Errors reported by the transform and filter-bank operations.
#[derive(Debug, Clone, PartialEq)]
pub enum CoreError {
    /// Length is not a power of two, or is below the minimum grid size.
    SizeNotPowerOfTwo { len: usize },
    /// The deepest level of the requested decomposition would fall below
    /// the minimum grid size.
    GridTooCoarse { n: usize, levels: usize },
    /// A spectrum expected to be conjugate-symmetric was not, which signals
    /// an operator bug upstream.
    AsymmetricSpectrum { max_dev: f64 },
    /// A parameter violated a documented precondition.
    Parameter(&'static str),
    /// Shapes or metadata of the supplied values are inconsistent.
    Shape(&'static str),
    /// The envelope of a wavelet was identically zero, so no Gabor atom
    /// can be fitted.
    DegenerateEnvelope,
    /// Samples contained a NaN or infinity.
    NonFiniteSample,
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::SizeNotPowerOfTwo { len } => {
                write!(f, "length {len} is not a power of two >= 8")
            }
            CoreError::GridTooCoarse { n, levels } => {
                write!(f, "grid of {n} samples is too coarse for {levels} levels (deepest level must keep >= 8 samples)")
            }
            CoreError::AsymmetricSpectrum { max_dev } => {
                write!(f, "spectrum is not conjugate-symmetric (max deviation {max_dev:e})")
            }
            CoreError::Parameter(msg) => write!(f, "invalid parameter: {msg}"),
            CoreError::Shape(msg) => write!(f, "shape mismatch: {msg}"),
            CoreError::DegenerateEnvelope => write!(f, "wavelet envelope is identically zero"),
            CoreError::NonFiniteSample => write!(f, "samples must be finite"),
        }
    }
}

impl core::error::Error for CoreError {}

pub type Result<T> = core::result::Result<T, CoreError>;
