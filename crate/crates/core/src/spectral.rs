//! Frequency-domain plumbing shared by every other module.
//!
//! Signals are uniformly sampled, periodized, and restricted to power-of-two
//! lengths so that the dyadic recursion can halve the grid at every level.
//! The DFT convention is the unnormalized forward transform with the
//! e^{-j w x} kernel; the inverse carries the 1/N factor. Bin m of a
//! length-N spectrum sits at the signed angular frequency
//! w_m = 2 pi m~ / (N h), where m~ is the alias of m into [-N/2, N/2) and
//! h is the sample spacing.

use crate::error::{CoreError, Result};
use crate::fft;
use crate::math;
use crate::Complex64;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

/// Uniformly sampled real signal on a periodic power-of-two grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSignal1D {
    pub(crate) samples: Vec<f64>,
    pub(crate) spacing: f64,
}

impl RealSignal1D {
    /// Wraps samples after checking the grid invariants: power-of-two
    /// length of at least 8, finite samples, positive spacing.
    pub fn new(samples: Vec<f64>, spacing: f64) -> Result<Self> {
        if !fft::is_power_of_two(samples.len()) || samples.len() < 8 {
            return Err(CoreError::SizeNotPowerOfTwo {
                len: samples.len(),
            });
        }
        if !samples.iter().all(|s| s.is_finite()) {
            return Err(CoreError::NonFiniteSample);
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(CoreError::Parameter("spacing must be positive and finite"));
        }
        Ok(Self { samples, spacing })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    /// L2 norm with the sample spacing as measure.
    pub fn norm(&self) -> f64 {
        math::sqrt(self.samples.iter().map(|s| s * s).sum::<f64>() * self.spacing)
    }
}

/// Complex spectrum of a length-N signal on the signed frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum1D {
    pub(crate) bins: Vec<Complex64>,
    pub(crate) spacing: f64,
}

impl Spectrum1D {
    pub fn bins(&self) -> &[Complex64] {
        &self.bins
    }

    pub fn len(&self) -> usize {
        self.bins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Signed angular frequency of bin m.
    pub fn omega(&self, m: usize) -> f64 {
        2.0 * PI * fft::signed_bin(m, self.bins.len()) as f64
            / (self.bins.len() as f64 * self.spacing)
    }

    /// Largest deviation from conjugate symmetry, relative to the peak bin.
    pub fn asymmetry(&self) -> f64 {
        let n = self.bins.len();
        let peak = self
            .bins
            .iter()
            .map(|c| c.norm())
            .fold(0.0f64, f64::max)
            .max(1e-300);
        let mut dev = math::abs(self.bins[0].im);
        dev = dev.max(math::abs(self.bins[n / 2].im));
        for m in 1..n / 2 {
            dev = dev.max((self.bins[m] - self.bins[n - m].conj()).norm());
        }
        dev / peak
    }
}

/// Square real image on a periodic power-of-two grid, row-major storage.
/// Index x runs along a row (the horizontal axis), y across rows.
#[derive(Debug, Clone, PartialEq)]
pub struct RealImage2D {
    pub(crate) samples: Vec<f64>,
    pub(crate) side: usize,
    pub(crate) spacing: f64,
}

impl RealImage2D {
    pub fn new(samples: Vec<f64>, side: usize, spacing: f64) -> Result<Self> {
        if !fft::is_power_of_two(side) || side < 8 {
            return Err(CoreError::SizeNotPowerOfTwo { len: side });
        }
        if samples.len() != side * side {
            return Err(CoreError::Shape("sample count must equal side * side"));
        }
        if !samples.iter().all(|s| s.is_finite()) {
            return Err(CoreError::NonFiniteSample);
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(CoreError::Parameter("spacing must be positive and finite"));
        }
        Ok(Self {
            samples,
            side,
            spacing,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn width(&self) -> usize {
        self.side
    }

    pub fn height(&self) -> usize {
        self.side
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn at(&self, x: usize, y: usize) -> f64 {
        self.samples[y * self.side + x]
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn norm(&self) -> f64 {
        math::sqrt(
            self.samples.iter().map(|s| s * s).sum::<f64>() * self.spacing * self.spacing,
        )
    }
}

/// Forward DFT of a real signal. The result is conjugate-symmetric.
pub fn forward_spectrum(signal: &RealSignal1D) -> Spectrum1D {
    Spectrum1D {
        bins: fft::fft_real(&signal.samples),
        spacing: signal.spacing,
    }
}

/// Inverse DFT back to a real signal.
///
/// The spectrum must be conjugate-symmetric to 1e-9 relative; anything
/// beyond that signals an operator bug upstream and is reported instead of
/// silently discarding an imaginary part.
pub fn inverse_spectrum(spec: &Spectrum1D) -> Result<RealSignal1D> {
    let dev = spec.asymmetry();
    if dev > 1e-9 {
        return Err(CoreError::AsymmetricSpectrum { max_dev: dev });
    }
    RealSignal1D::new(fft::ifft_real(&spec.bins), spec.spacing)
}

/// Pointwise product with a multiplier evaluated on the signed grid.
///
/// The caller is responsible for choosing multipliers that preserve
/// conjugate symmetry when a real result is expected.
pub fn apply_multiplier<F>(spec: &Spectrum1D, multiplier: F) -> Spectrum1D
where
    F: Fn(f64) -> Complex64,
{
    let bins = spec
        .bins
        .iter()
        .enumerate()
        .map(|(m, &b)| b * multiplier(spec.omega(m)))
        .collect();
    Spectrum1D {
        bins,
        spacing: spec.spacing,
    }
}

/// Raised-cosine bump on [-omega_max, omega_max], evaluated at w.
pub(crate) fn raised_cosine(w: f64, omega_max: f64) -> f64 {
    if math::abs(w) < omega_max {
        0.5 * (1.0 + math::cos(PI * w / omega_max))
    } else {
        0.0
    }
}

/// Real, symmetric window whose spectrum is a raised-cosine bump supported
/// on [-omega_max, omega_max]; exactly bandlimited on the grid by
/// construction. Used as the test-fixture window for the modulation
/// identities.
pub fn bandlimited_window(n: usize, omega_max: f64, spacing: f64) -> Result<RealSignal1D> {
    if !fft::is_power_of_two(n) || n < 8 {
        return Err(CoreError::SizeNotPowerOfTwo { len: n });
    }
    let nyquist = PI / spacing;
    if !(omega_max > 0.0 && omega_max < nyquist) {
        return Err(CoreError::Parameter(
            "window bandwidth must satisfy 0 < omega_max < pi / spacing",
        ));
    }
    let bins: Vec<Complex64> = (0..n)
        .map(|m| {
            let w = 2.0 * PI * fft::signed_bin(m, n) as f64 / (n as f64 * spacing);
            Complex64::new(raised_cosine(w, omega_max), 0.0)
        })
        .collect();
    RealSignal1D::new(fft::ifft_real(&bins), spacing)
}

/// Cyclic translation by k samples: out[n] = in[(n - k) mod N].
pub fn circular_shift(signal: &RealSignal1D, k: i64) -> RealSignal1D {
    let n = signal.samples.len() as i64;
    let samples = (0..n)
        .map(|i| signal.samples[(i - k).rem_euclid(n) as usize])
        .collect();
    RealSignal1D {
        samples,
        spacing: signal.spacing,
    }
}

/// Row-major 2D forward DFT (rows along x first, then columns).
pub(crate) fn fft2(samples: &[f64], side: usize) -> Vec<Complex64> {
    let mut grid: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft2_complex(&mut grid, side);
    grid
}

pub(crate) fn fft2_complex(grid: &mut [Complex64], side: usize) {
    for row in grid.chunks_mut(side) {
        fft::fft(row);
    }
    let mut col = vec![Complex64::new(0.0, 0.0); side];
    for x in 0..side {
        for y in 0..side {
            col[y] = grid[y * side + x];
        }
        fft::fft(&mut col);
        for y in 0..side {
            grid[y * side + x] = col[y];
        }
    }
}

pub(crate) fn ifft2_complex(grid: &mut [Complex64], side: usize) {
    for row in grid.chunks_mut(side) {
        fft::ifft(row);
    }
    let mut col = vec![Complex64::new(0.0, 0.0); side];
    for x in 0..side {
        for y in 0..side {
            col[y] = grid[y * side + x];
        }
        fft::ifft(&mut col);
        for y in 0..side {
            grid[y * side + x] = col[y];
        }
    }
}

pub(crate) fn ifft2_real(grid: &[Complex64], side: usize) -> Vec<f64> {
    let mut buf = grid.to_vec();
    ifft2_complex(&mut buf, side);
    buf.into_iter().map(|c| c.re).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Direct O(N^2) DFT used as the independent oracle.
    fn direct_dft(x: &[f64]) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|m| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, &v) in x.iter().enumerate() {
                    let ang = -2.0 * PI * (m * k) as f64 / n as f64;
                    acc += Complex64::new(v * ang.cos(), v * ang.sin());
                }
                acc
            })
            .collect()
    }

    fn direct_idft(bins: &[Complex64]) -> Vec<f64> {
        let n = bins.len();
        (0..n)
            .map(|k| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (m, &b) in bins.iter().enumerate() {
                    let ang = 2.0 * PI * (m * k) as f64 / n as f64;
                    acc += b * Complex64::new(ang.cos(), ang.sin());
                }
                acc.re / n as f64
            })
            .collect()
    }

    #[test]
    fn constant_signal_is_dc_only() {
        let sig = RealSignal1D::new(vec![1.0; 8], 1.0).unwrap();
        let spec = forward_spectrum(&sig);
        assert_relative_eq!(spec.bins()[0].re, 8.0, max_relative = 1e-14);
        for m in 1..8 {
            assert!(spec.bins()[m].norm() < 1e-13);
        }
    }

    #[test]
    fn impulse_has_flat_spectrum() {
        let mut s = vec![0.0; 8];
        s[0] = 1.0;
        let spec = forward_spectrum(&RealSignal1D::new(s, 1.0).unwrap());
        for b in spec.bins() {
            assert!((b - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn cosine_lands_on_two_bins() {
        let n = 16;
        let k0 = 2;
        let sig = RealSignal1D::new(
            (0..n)
                .map(|i| (2.0 * PI * k0 as f64 * i as f64 / n as f64).cos())
                .collect(),
            1.0,
        )
        .unwrap();
        let spec = forward_spectrum(&sig);
        let oracle = direct_dft(sig.samples());
        for (b, o) in spec.bins().iter().zip(&oracle) {
            assert!((b - o).norm() < 1e-11);
        }
        assert_relative_eq!(spec.bins()[2].re, 8.0, max_relative = 1e-12);
        assert_relative_eq!(spec.bins()[14].re, 8.0, max_relative = 1e-12);
        for m in 0..n {
            if m != 2 && m != 14 {
                assert!(spec.bins()[m].norm() < 1e-12);
            }
        }
    }

    #[test]
    fn inverse_restores_single_bin_cosine() {
        let n = 16;
        let mut bins = vec![Complex64::new(0.0, 0.0); n];
        bins[1] = Complex64::new(n as f64 / 2.0, 0.0);
        bins[n - 1] = Complex64::new(n as f64 / 2.0, 0.0);
        let spec = Spectrum1D { bins, spacing: 1.0 };
        let sig = inverse_spectrum(&spec).unwrap();
        let oracle = direct_idft(spec.bins());
        for (s, (o, i)) in sig.samples().iter().zip(oracle.iter().zip(0..)) {
            let expect = (2.0 * PI * i as f64 / 16.0).cos();
            assert_relative_eq!(*s, expect, epsilon = 1e-12);
            assert_relative_eq!(*s, *o, epsilon = 1e-12);
        }
    }

    #[test]
    fn inverse_of_zero_spectrum_is_zero() {
        let spec = Spectrum1D {
            bins: vec![Complex64::new(0.0, 0.0); 16],
            spacing: 1.0,
        };
        let sig = inverse_spectrum(&spec).unwrap();
        assert!(sig.samples().iter().all(|&s| s == 0.0));
    }

    #[test]
    fn inverse_rejects_asymmetric_spectrum() {
        let mut bins = vec![Complex64::new(0.0, 0.0); 16];
        bins[3] = Complex64::new(1.0, 1.0);
        let spec = Spectrum1D { bins, spacing: 1.0 };
        assert!(matches!(
            inverse_spectrum(&spec),
            Err(CoreError::AsymmetricSpectrum { .. })
        ));
    }

    #[test]
    fn round_trip_is_identity() {
        let sig = RealSignal1D::new(
            (0..64).map(|i| (i as f64 * 0.71).sin() + 0.4).collect(),
            0.5,
        )
        .unwrap();
        let back = inverse_spectrum(&forward_spectrum(&sig)).unwrap();
        for (a, b) in sig.samples().iter().zip(back.samples()) {
            assert_relative_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn multiplier_identity_and_zero() {
        let sig = RealSignal1D::new((0..16).map(|i| (i as f64).cos()).collect(), 1.0).unwrap();
        let spec = forward_spectrum(&sig);
        let same = apply_multiplier(&spec, |_| Complex64::new(1.0, 0.0));
        assert_eq!(same.bins(), spec.bins());
        let zero = apply_multiplier(&spec, |_| Complex64::new(0.0, 0.0));
        assert!(zero.bins().iter().all(|b| b.norm() == 0.0));
    }

    #[test]
    fn delay_multiplier_is_circular_shift() {
        let sig = RealSignal1D::new(
            (0..32).map(|i| ((i * i) as f64 * 0.13).sin()).collect(),
            1.0,
        )
        .unwrap();
        let spec = forward_spectrum(&sig);
        let d = sig.spacing();
        let delayed = apply_multiplier(&spec, |w| Complex64::new(0.0, -w * d).exp());
        let got = inverse_spectrum(&delayed).unwrap();
        let want = circular_shift(&sig, 1);
        for (g, w) in got.samples().iter().zip(want.samples()) {
            assert_relative_eq!(g, w, epsilon = 1e-12);
        }
    }

    #[test]
    fn window_is_bandlimited_real_and_symmetric() {
        let n = 256;
        let w = bandlimited_window(n, 0.3 * PI, 1.0).unwrap();
        let spec = forward_spectrum(&w);
        let mut outside = 0.0;
        let mut inside = 0.0;
        for m in 0..n {
            let e = spec.bins()[m].norm_sqr();
            if spec.omega(m).abs() >= 0.3 * PI {
                outside += e;
            } else {
                inside += e;
            }
        }
        assert!(outside <= 1e-24 * inside, "outside={outside:e}");
        for i in 1..n {
            assert_relative_eq!(w.samples()[i], w.samples()[n - i], epsilon = 1e-14);
        }
    }

    #[test]
    fn window_matches_direct_idft_oracle() {
        let n = 256;
        let omega_max = 0.3 * PI;
        let w = bandlimited_window(n, omega_max, 1.0).unwrap();
        let bins: Vec<Complex64> = (0..n)
            .map(|m| {
                let om = 2.0 * PI * fft::signed_bin(m, n) as f64 / n as f64;
                Complex64::new(raised_cosine(om, omega_max), 0.0)
            })
            .collect();
        let oracle = direct_idft(&bins);
        for (g, o) in w.samples().iter().zip(&oracle) {
            assert_relative_eq!(g, o, epsilon = 1e-12);
        }
    }

    #[test]
    fn window_near_nyquist_is_near_impulse() {
        // The broadband limit of the raised cosine is the three-tap kernel
        // [1/4, 1/2, 1/4]; everything further out must be negligible.
        let n = 64;
        let w = bandlimited_window(n, 0.999 * PI, 1.0).unwrap();
        let peak = w.samples()[0];
        assert!(peak > 0.45, "peak={peak}");
        assert!((w.samples()[1] - 0.25 * peak / 0.5).abs() < 0.02);
        let tail: f64 = (2..n - 1).map(|i| w.samples()[i].abs()).fold(0.0, f64::max);
        assert!(tail < 0.02 * peak, "tail={tail}");
    }

    #[test]
    fn window_rejects_bandwidth_at_nyquist() {
        assert!(matches!(
            bandlimited_window(64, PI, 1.0),
            Err(CoreError::Parameter(_))
        ));
    }

    #[test]
    fn signal_validation() {
        assert!(matches!(
            RealSignal1D::new(vec![0.0; 12], 1.0),
            Err(CoreError::SizeNotPowerOfTwo { len: 12 })
        ));
        assert!(matches!(
            RealSignal1D::new(vec![0.0; 4], 1.0),
            Err(CoreError::SizeNotPowerOfTwo { .. })
        ));
        assert!(matches!(
            RealSignal1D::new(vec![f64::NAN; 8], 1.0),
            Err(CoreError::NonFiniteSample)
        ));
    }

    #[test]
    fn fft2_round_trip() {
        let side = 16;
        let img: Vec<f64> = (0..side * side).map(|i| ((i as f64) * 0.37).sin()).collect();
        let spec = fft2(&img, side);
        let back = ifft2_real(&spec, side);
        for (a, b) in img.iter().zip(&back) {
            assert_relative_eq!(a, b, epsilon = 1e-12);
        }
    }
}
