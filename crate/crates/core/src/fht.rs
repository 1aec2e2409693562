//! Hilbert transform, fractional Hilbert transforms, and their directional
//! 2D extensions, all realized as exact frequency-domain multipliers.
//!
//! Conventions shared by every operator here:
//!
//! - sign(0) = 0, so DC is annihilated;
//! - the Nyquist bin is self-conjugate, so any Hilbert-type multiplier is
//!   forced to 0 there (a value of +-j would turn real input complex);
//! - the fractional shift tau is reduced mod 2 before use, which makes the
//!   period-2 group structure exact in floating point.
//!
//! As a consequence the operators are unitary only on the subspace where
//! the multiplier is unimodular (no DC, no Nyquist, and for directional
//! transforms no energy on the line u_theta . w = 0).

use crate::error::Result;
use crate::math;
use crate::spectral::{self, RealImage2D, RealSignal1D};
use crate::Complex64;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

/// Fractional shift of the Hilbert transform group, period 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FhtShift {
    tau: f64,
}

impl FhtShift {
    pub fn new(tau: f64) -> Result<Self> {
        if !tau.is_finite() {
            return Err(crate::CoreError::Parameter("shift tau must be finite"));
        }
        Ok(Self { tau })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Shift reduced into [0, 2); the group has period 2.
    pub fn reduced(&self) -> f64 {
        math::rem_euclid(self.tau, 2.0)
    }

    /// (cos(pi tau), sin(pi tau)) of the reduced shift.
    pub(crate) fn phase(&self) -> (f64, f64) {
        let t = PI * self.reduced();
        (math::cos(t), math::sin(t))
    }
}

/// Direction of a 2D directional Hilbert transform, reduced mod pi.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    theta: f64,
}

impl Direction {
    pub fn new(theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(crate::CoreError::Parameter("direction must be finite"));
        }
        Ok(Self {
            theta: math::rem_euclid(theta, PI),
        })
    }

    /// Angle in [0, pi).
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Unit vector (cos theta, sin theta), snapped to exact component pairs
    /// for the primal orientations {0, pi/4, pi/2, 3pi/4} so that the zero
    /// set of u . w is hit exactly on square grids.
    pub fn unit_vector(&self) -> (f64, f64) {
        const SNAP: f64 = 1e-12;
        let t = self.theta;
        if math::abs(t) < SNAP || math::abs(t - PI) < SNAP {
            (1.0, 0.0)
        } else if math::abs(t - FRAC_PI_4) < SNAP {
            (FRAC_1_SQRT_2, FRAC_1_SQRT_2)
        } else if math::abs(t - FRAC_PI_2) < SNAP {
            (0.0, 1.0)
        } else if math::abs(t - 3.0 * FRAC_PI_4) < SNAP {
            (-FRAC_1_SQRT_2, FRAC_1_SQRT_2)
        } else {
            (math::cos(t), math::sin(t))
        }
    }
}

/// Applies a bin-indexed multiplier in the frequency domain and returns the
/// real part of the inverse transform.
fn apply_real_multiplier<F>(signal: &RealSignal1D, mult: F) -> RealSignal1D
where
    F: Fn(usize, usize) -> Complex64,
{
    let n = signal.len();
    let mut bins = crate::fft::fft_real(signal.samples());
    for (m, b) in bins.iter_mut().enumerate() {
        *b *= mult(m, n);
    }
    let samples = crate::fft::ifft_real(&bins);
    RealSignal1D {
        samples,
        spacing: signal.spacing(),
    }
}

fn hilbert_multiplier(m: usize, n: usize) -> Complex64 {
    if m == 0 || m == n / 2 {
        Complex64::new(0.0, 0.0)
    } else if m < n / 2 {
        Complex64::new(0.0, -1.0)
    } else {
        Complex64::new(0.0, 1.0)
    }
}

/// Hilbert transform: multiplier -j sign(w) with DC and Nyquist zeroed.
pub fn hilbert(signal: &RealSignal1D) -> RealSignal1D {
    apply_real_multiplier(signal, hilbert_multiplier)
}

/// Fractional Hilbert transform cos(pi tau) I - sin(pi tau) H.
pub fn fractional_hilbert(signal: &RealSignal1D, shift: FhtShift) -> RealSignal1D {
    let (c, s) = shift.phase();
    let h = hilbert(signal);
    let samples = signal
        .samples()
        .iter()
        .zip(h.samples())
        .map(|(&f, &hf)| c * f - s * hf)
        .collect();
    RealSignal1D {
        samples,
        spacing: signal.spacing(),
    }
}

fn sign3(t: f64) -> f64 {
    if t > 0.0 {
        1.0
    } else if t < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Directional Hilbert multiplier on the signed 2D grid.
///
/// A Nyquist component is frequency-ambiguous (+-pi are the same bin), so
/// sign(u . w) is averaged over the aliases there. This single rule zeroes
/// DC, the zero set u . w = 0, and every self-conjugate bin, and it keeps
/// the multiplier conjugate-antisymmetric so that real input stays real.
/// At theta = 0 the Nyquist-row average collapses back to sign(w_x), which
/// is exactly the row-wise 1D transform.
pub(crate) fn directional_multiplier(
    side: usize,
    spacing: f64,
    dir: Direction,
) -> Vec<Complex64> {
    let (c, s) = dir.unit_vector();
    let nyq = PI / spacing;
    let aliases = |m: usize| -> (f64, f64, usize) {
        if m == side / 2 {
            (-nyq, nyq, 2)
        } else {
            let w = 2.0 * PI * crate::fft::signed_bin(m, side) as f64 / (side as f64 * spacing);
            (w, 0.0, 1)
        }
    };
    let mut mult = Vec::with_capacity(side * side);
    for my in 0..side {
        let (wy0, wy1, ny) = aliases(my);
        for mx in 0..side {
            let (wx0, wx1, nx) = aliases(mx);
            let mut acc = 0.0;
            for ix in 0..nx {
                let wx = if ix == 0 { wx0 } else { wx1 };
                for iy in 0..ny {
                    let wy = if iy == 0 { wy0 } else { wy1 };
                    acc += sign3(c * wx + s * wy);
                }
            }
            let mean = acc / (nx * ny) as f64;
            mult.push(Complex64::new(0.0, -mean));
        }
    }
    mult
}

/// Directional Hilbert transform: multiplier -j sign(u_theta . w).
pub fn directional_hilbert(image: &RealImage2D, dir: Direction) -> RealImage2D {
    let side = image.side();
    let mut grid = spectral::fft2(image.samples(), side);
    let mult = directional_multiplier(side, image.spacing(), dir);
    for (g, m) in grid.iter_mut().zip(&mult) {
        *g *= m;
    }
    let samples = spectral::ifft2_real(&grid, side);
    RealImage2D {
        samples,
        side,
        spacing: image.spacing(),
    }
}

/// Fractional directional Hilbert transform
/// cos(pi tau) I - sin(pi tau) H_theta.
pub fn fractional_directional_hilbert(
    image: &RealImage2D,
    dir: Direction,
    shift: FhtShift,
) -> RealImage2D {
    let (c, s) = shift.phase();
    let h = directional_hilbert(image, dir);
    let samples = image
        .samples()
        .iter()
        .zip(h.samples())
        .map(|(&f, &hf)| c * f - s * hf)
        .collect();
    RealImage2D {
        samples,
        side: image.side(),
        spacing: image.spacing(),
    }
}
