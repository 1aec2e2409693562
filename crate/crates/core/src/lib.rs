//! Dual-tree complex wavelet transforms built on FFT-domain filter banks.
//!
//! The crate provides:
//!
//! - frequency-domain plumbing for periodized signals and images
//!   ([`spectral`]),
//! - the Hilbert transform and its fractional / directional extensions as
//!   exact frequency multipliers ([`fht`]),
//! - Gabor-like fractional-spline wavelet systems whose two trees form a
//!   Hilbert pair ([`filterbank`]),
//! - the 1D dual-tree transform with its amplitude-phase representation
//!   ([`transform1d`]),
//! - the six-orientation 2D dual-tree transform ([`transform2d`]).
//!
//! Everything works on power-of-two grids with a periodic boundary model,
//! which keeps the operators exact and perfect reconstruction testable to
//! machine precision. All functions are pure: no global state, values are
//! `Send + Sync` and safe to share across threads.
//!
//! The crate is `no_std`-compatible (with `alloc`); disable the default
//! `std` feature and enable `libm` for embedded use.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("dtcwt-core requires either the `std` or the `libm` feature");

pub mod error;
pub mod fht;
pub mod filterbank;
pub mod spectral;
pub mod transform1d;
pub mod transform2d;

mod fft;
mod math;

pub use error::CoreError;
pub use fht::{Direction, FhtShift};
pub use filterbank::{SplineParams, WaveletSystem};
pub use spectral::{RealImage2D, RealSignal1D, Spectrum1D};
pub use transform1d::{AmpPhaseMap, DtCoeffs1D};
pub use transform2d::{AmpPhaseMap2D, DtCoeffs2D, OrientationIndex};

/// Complex sample type used throughout the crate.
pub type Complex64 = num_complex::Complex<f64>;
