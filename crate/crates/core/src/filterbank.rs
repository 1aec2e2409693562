//! Fractional B-spline wavelet systems in the frequency domain.
//!
//! The construction is parameterized by (alpha, tau). Tree a of the dual
//! tree uses shift tau, tree b uses tau + 1/2. The half-unit shift of the
//! spline phase factor is all-pass, which is exactly what makes the two
//! trees' wavelets a Hilbert pair: every spectral quantity here satisfies
//! psi_b_hat(w) = -j sign(w) psi_a_hat(w) pointwise on the grid.
//!
//! Pipeline, all evaluated analytically at grid frequencies:
//!
//! 1. the fractional B-spline spectrum
//!    beta_hat(w) = [(1 - e^{-jw})/(jw)]^{(alpha+1)/2 + tau}
//!                  [(1 - e^{jw})/(-jw)]^{(alpha+1)/2 - tau},
//!    principal branches, removable singularity at w = 0 set to 1;
//! 2. the autocorrelation A(w) = sum_n |beta_hat(w + 2 pi n)|^2, truncated
//!    once the analytic tail bound drops below 1e-12;
//! 3. the orthonormalized scaling spectrum phi_hat = beta_hat / sqrt(A);
//! 4. the refinement filter H(e^{jw}) = sqrt(2) phi_hat(2w) / phi_hat(w)
//!    on the principal domain, extended 2 pi periodically;
//! 5. the quadrature-mirror highpass G(e^{jw}) = e^{-jw} conj(H(e^{j(w+pi)}))
//!    and the mother wavelet psi_hat(w) = G(e^{jw/2}) phi_hat(w/2) / sqrt(2).
//!
//! Filters are sampled per level on the dyadic grids; mother wavelets and
//! scaling functions are sampled on a fine oversampled grid by evaluating
//! psi_hat there and inverse transforming.

use crate::error::{CoreError, Result};
use crate::fft;
use crate::math;
use crate::spectral::RealSignal1D;
use crate::Complex64;
use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2};

/// Spline degree parameter alpha (approximation order alpha + 1) and the
/// base shift tau of tree a; tree b is built at tau + 1/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplineParams {
    pub alpha: f64,
    pub tau: f64,
}

impl SplineParams {
    pub fn new(alpha: f64, tau: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 1.0) {
            return Err(CoreError::Parameter(
                "spline alpha must be finite and >= 1 (autocorrelation tail decay)",
            ));
        }
        if !tau.is_finite() {
            return Err(CoreError::Parameter("spline tau must be finite"));
        }
        Ok(Self { alpha, tau })
    }
}

/// The two branches of the dual tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tree {
    A,
    B,
}

#[derive(Debug, Clone)]
pub(crate) struct TreeFilters {
    /// Lowpass frequency response per level; level i has n/2^{i-1} bins.
    pub lowpass: Vec<Vec<Complex64>>,
    /// Highpass responses, same layout.
    pub highpass: Vec<Vec<Complex64>>,
}

/// A fully built (alpha, tau) dual-tree wavelet system: per-level filter
/// responses for both trees plus finely sampled mother wavelets and
/// scaling functions. Immutable once built; cheap to share across threads.
#[derive(Debug, Clone)]
pub struct WaveletSystem {
    params: SplineParams,
    n: usize,
    levels: usize,
    pub(crate) tree_a: TreeFilters,
    pub(crate) tree_b: TreeFilters,
    psi_a: RealSignal1D,
    psi_b: RealSignal1D,
    phi_a: RealSignal1D,
    phi_b: RealSignal1D,
    fine_len: usize,
    fine_period: f64,
}

/// Default fine-grid period for an n-sample transform, in signal units.
///
/// The period sets the table's frequency resolution 2 pi / T. Level-1
/// atoms of an n-sample transform live on a spectral grid of spacing
/// 4 pi / n, so T must be at least n/2 or the steep band edges of the
/// wavelet cannot be represented at the frequencies the signal grid
/// needs. The floor of 64 keeps short transforms comfortably clear of
/// the wavelet's own support.
pub fn default_fine_period(n: usize) -> f64 {
    64.0f64.max(n as f64 / 2.0)
}

/// Default fine-grid length for an n-sample transform.
pub fn default_fine_len(n: usize) -> usize {
    4096usize.max(8 * n)
}

fn cpow(z: Complex64, p: f64) -> Complex64 {
    let r = z.norm();
    if r == 0.0 {
        return if p == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        };
    }
    let mag = math::exp(p * math::ln(r));
    let ang = p * math::atan2(z.im, z.re);
    Complex64::new(mag * math::cos(ang), mag * math::sin(ang))
}

/// Reduce w into [-pi, pi).
fn reduce_to_pi(w: f64) -> f64 {
    math::rem_euclid(w + PI, 2.0 * PI) - PI
}

/// Fractional B-spline spectrum at a single frequency.
pub fn bspline_spectrum_at(params: SplineParams, w: f64) -> Complex64 {
    // (1 - e^{-jw})/(jw) = e^{-jw/2} sinc(w/2), exact for all w and free of
    // the cancellation the raw quotient has near w = 0.
    let s = math::sinc(0.5 * w);
    let z1 = Complex64::new(math::cos(0.5 * w) * s, -math::sin(0.5 * w) * s);
    let z2 = z1.conj();
    let p1 = 0.5 * (params.alpha + 1.0) + params.tau;
    let p2 = 0.5 * (params.alpha + 1.0) - params.tau;
    cpow(z1, p1) * cpow(z2, p2)
}

/// Fractional B-spline spectrum sampled on a frequency grid.
pub fn bspline_spectrum(params: SplineParams, omega_grid: &[f64]) -> Vec<Complex64> {
    omega_grid
        .iter()
        .map(|&w| bspline_spectrum_at(params, w))
        .collect()
}

/// Number of terms on each side of the autocorrelation sum so that the
/// analytic tail bound 2 (pi (K - 1/2))^{-(p-1)} / (pi (p - 1)) with
/// p = 2 (alpha + 1) stays below 1e-12.
pub fn autocorrelation_terms(alpha: f64) -> usize {
    let p = 2.0 * (alpha + 1.0);
    let k = 0.5 + math::exp(math::ln(2.0 / (PI * (p - 1.0) * 1e-12)) / (p - 1.0)) / PI;
    let k = math::floor(k) as usize + 1;
    k.max(2)
}

/// Autocorrelation A(w) = sum_{|q| <= K} |beta_hat(w + 2 pi q)|^2 at a
/// single frequency. Independent of tau (the tau factor is all-pass).
pub fn autocorrelation_at(alpha: f64, w: f64, k_terms: usize) -> f64 {
    let w = reduce_to_pi(w);
    let p = 2.0 * (alpha + 1.0);
    let mut acc = 0.0;
    for q in -(k_terms as i64)..=(k_terms as i64) {
        let s = math::abs(math::sinc(0.5 * w + PI * q as f64));
        if s > 0.0 {
            acc += math::exp(p * math::ln(s));
        }
    }
    acc
}

/// Autocorrelation sampled on a frequency grid.
pub fn autocorrelation(alpha: f64, omega_grid: &[f64]) -> Vec<f64> {
    let k = autocorrelation_terms(alpha);
    omega_grid
        .iter()
        .map(|&w| autocorrelation_at(alpha, w, k))
        .collect()
}

/// Per-tree spectral evaluators built once, then sampled wherever needed.
struct TreeSpectra {
    params: SplineParams,
    k_terms: usize,
}

impl TreeSpectra {
    fn new(alpha: f64, tau: f64) -> Self {
        Self {
            params: SplineParams { alpha, tau },
            k_terms: autocorrelation_terms(alpha),
        }
    }

    /// Orthonormalized scaling spectrum phi_hat(w); decays for large |w|.
    fn scaling_hat(&self, w: f64) -> Complex64 {
        let a = autocorrelation_at(self.params.alpha, w, self.k_terms);
        bspline_spectrum_at(self.params, w) / math::sqrt(a)
    }

    /// Refinement filter H(e^{jw}); 2 pi periodic by argument reduction.
    fn lowpass(&self, w: f64) -> Complex64 {
        let t = reduce_to_pi(w);
        SQRT_2 * self.scaling_hat(2.0 * t) / self.scaling_hat(t)
    }

    /// Quadrature-mirror highpass G(e^{jw}) = e^{-jw} conj(H(e^{j(w+pi)})).
    fn highpass(&self, w: f64) -> Complex64 {
        let rot = Complex64::new(math::cos(w), -math::sin(w));
        rot * self.lowpass(w + PI).conj()
    }

    /// Mother wavelet spectrum psi_hat(w) = G(e^{jw/2}) phi_hat(w/2) / sqrt(2).
    fn wavelet_hat(&self, w: f64) -> Complex64 {
        self.highpass(0.5 * w) * self.scaling_hat(0.5 * w) / SQRT_2
    }
}

/// Samples one tree's mother wavelet and scaling function on an arbitrary
/// fine grid (tau offset 0 for tree a, 1/2 for tree b). Used to build the
/// tensor-product factors of the 2D directional wavelets.
pub(crate) fn sample_tree_mothers(
    params: SplineParams,
    tau_offset: f64,
    len: usize,
    period: f64,
) -> (Vec<f64>, Vec<f64>) {
    let sp = TreeSpectra::new(params.alpha, params.tau + tau_offset);
    let psi = sample_fine(|w| sp.wavelet_hat(w), len, period);
    let phi = sample_fine(|w| sp.scaling_hat(w), len, period);
    (psi, phi)
}

/// Samples a spectral evaluator on the fine grid and inverse transforms,
/// placing x = -period/2 at index 0.
fn sample_fine<F>(f: F, fine_len: usize, period: f64) -> Vec<f64>
where
    F: Fn(f64) -> Complex64,
{
    let mut bins = Vec::with_capacity(fine_len);
    for m in 0..fine_len {
        let w = 2.0 * PI * fft::signed_bin(m, fine_len) as f64 / period;
        // e^{-j w period/2} = (-1)^m centers the sample window.
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        bins.push(f(w) * sign);
    }
    let h = period / fine_len as f64;
    fft::ifft_real(&bins).into_iter().map(|v| v / h).collect()
}

impl WaveletSystem {
    pub fn params(&self) -> SplineParams {
        self.params
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn fine_len(&self) -> usize {
        self.fine_len
    }

    /// Physical period spanned by the fine grid.
    pub fn fine_period(&self) -> f64 {
        self.fine_period
    }

    /// Fine-grid sample spacing.
    pub fn fine_spacing(&self) -> f64 {
        self.fine_period / self.fine_len as f64
    }

    /// Coordinate of fine-grid sample i; index 0 sits at -period/2.
    pub fn fine_x(&self, i: usize) -> f64 {
        -0.5 * self.fine_period + i as f64 * self.fine_spacing()
    }

    /// Mother wavelet of tree a, unit L2 norm.
    pub fn psi_a(&self) -> &RealSignal1D {
        &self.psi_a
    }

    /// Mother wavelet of tree b; equals the Hilbert transform of psi_a.
    pub fn psi_b(&self) -> &RealSignal1D {
        &self.psi_b
    }

    pub fn phi_a(&self) -> &RealSignal1D {
        &self.phi_a
    }

    pub fn phi_b(&self) -> &RealSignal1D {
        &self.phi_b
    }

    /// Lowpass frequency response of one tree at a level (1-based).
    pub fn lowpass_response(&self, tree: Tree, level: usize) -> &[Complex64] {
        let t = match tree {
            Tree::A => &self.tree_a,
            Tree::B => &self.tree_b,
        };
        &t.lowpass[level - 1]
    }

    /// Highpass frequency response of one tree at a level (1-based).
    pub fn highpass_response(&self, tree: Tree, level: usize) -> &[Complex64] {
        let t = match tree {
            Tree::A => &self.tree_a,
            Tree::B => &self.tree_b,
        };
        &t.highpass[level - 1]
    }

    /// The analytic combination psi_a + j psi_b on the fine grid.
    pub fn complex_wavelet(&self) -> Vec<Complex64> {
        self.psi_a
            .samples()
            .iter()
            .zip(self.psi_b.samples())
            .map(|(&re, &im)| Complex64::new(re, im))
            .collect()
    }
}

/// Builds the dual-tree system for an n-sample, `levels`-deep transform
/// with the default fine grid.
pub fn build_system(params: SplineParams, n: usize, levels: usize) -> Result<WaveletSystem> {
    build_system_with_fine(params, n, levels, default_fine_len(n), default_fine_period(n))
}

/// As [`build_system`] with an explicit fine-grid length and period.
pub fn build_system_with_fine(
    params: SplineParams,
    n: usize,
    levels: usize,
    fine_len: usize,
    fine_period: f64,
) -> Result<WaveletSystem> {
    SplineParams::new(params.alpha, params.tau)?;
    if !fft::is_power_of_two(n) || n < 8 {
        return Err(CoreError::SizeNotPowerOfTwo { len: n });
    }
    if levels == 0 || (n >> levels) < 8 {
        return Err(CoreError::GridTooCoarse { n, levels });
    }
    if !fft::is_power_of_two(fine_len) || fine_len < 64 {
        return Err(CoreError::Parameter(
            "fine grid length must be a power of two >= 64",
        ));
    }
    if !(fine_period.is_finite() && fine_period > 8.0) {
        return Err(CoreError::Parameter("fine period must exceed 8"));
    }

    let spectra = [
        TreeSpectra::new(params.alpha, params.tau),
        TreeSpectra::new(params.alpha, params.tau + 0.5),
    ];

    let mut filters = [
        TreeFilters {
            lowpass: Vec::new(),
            highpass: Vec::new(),
        },
        TreeFilters {
            lowpass: Vec::new(),
            highpass: Vec::new(),
        },
    ];
    for (sp, fl) in spectra.iter().zip(filters.iter_mut()) {
        for level in 1..=levels {
            let len = n >> (level - 1);
            let mut lo = Vec::with_capacity(len);
            let mut hi = Vec::with_capacity(len);
            for m in 0..len {
                let w = 2.0 * PI * fft::signed_bin(m, len) as f64 / len as f64;
                lo.push(sp.lowpass(w));
                hi.push(sp.highpass(w));
            }
            fl.lowpass.push(lo);
            fl.highpass.push(hi);
        }
    }

    let h = fine_period / fine_len as f64;
    let psi_a_raw = sample_fine(|w| spectra[0].wavelet_hat(w), fine_len, fine_period);
    let psi_b_raw = sample_fine(|w| spectra[1].wavelet_hat(w), fine_len, fine_period);
    let phi_a_raw = sample_fine(|w| spectra[0].scaling_hat(w), fine_len, fine_period);
    let phi_b_raw = sample_fine(|w| spectra[1].scaling_hat(w), fine_len, fine_period);

    // Normalize both wavelets by the same factor so psi_a has exactly unit
    // L2 norm while the norm equality of the pair stays observable.
    let norm_a = math::sqrt(psi_a_raw.iter().map(|v| v * v).sum::<f64>() * h);
    if norm_a == 0.0 {
        return Err(CoreError::DegenerateEnvelope);
    }
    let scale = 1.0 / norm_a;
    let psi_a = RealSignal1D::new(psi_a_raw.iter().map(|v| v * scale).collect(), h)?;
    let psi_b = RealSignal1D::new(psi_b_raw.iter().map(|v| v * scale).collect(), h)?;
    let phi_a = RealSignal1D::new(phi_a_raw, h)?;
    let phi_b = RealSignal1D::new(phi_b_raw, h)?;

    let [tree_a, tree_b] = filters;
    Ok(WaveletSystem {
        params,
        n,
        levels,
        tree_a,
        tree_b,
        psi_a,
        psi_b,
        phi_a,
        phi_b,
        fine_len,
        fine_period,
    })
}

/// Result of fitting a Gaussian-envelope Gabor atom to the complex wavelet.
#[derive(Debug, Clone)]
pub struct GaborFit {
    /// Energy-weighted mean frequency of the one-sided spectrum.
    pub omega0: f64,
    /// Phase of the complex wavelet at the envelope peak, modulation removed.
    pub xi0: f64,
    /// The wavelet envelope |psi_a + j psi_b|.
    pub window: RealSignal1D,
    /// Normalized correlation with the fitted Gabor atom, in [0, 1].
    pub correlation: f64,
}

/// Fits a Gabor atom to an arbitrary complex signal sampled at spacing h
/// with sample 0 at coordinate x0.
pub fn fit_gabor_atom(psi: &[Complex64], x0: f64, h: f64) -> Result<GaborFit> {
    let n = psi.len();
    let mut spec = psi.to_vec();
    crate::fft::fft(&mut spec);

    let mut num = 0.0;
    let mut den = 0.0;
    for (m, b) in spec.iter().enumerate() {
        let w = 2.0 * PI * fft::signed_bin(m, n) as f64 / (n as f64 * h);
        if w > 0.0 {
            let e = b.norm_sqr();
            num += w * e;
            den += e;
        }
    }
    if den == 0.0 {
        return Err(CoreError::DegenerateEnvelope);
    }
    let omega0 = num / den;

    let envelope: Vec<f64> = psi.iter().map(|c| c.norm()).collect();
    let (peak_idx, peak) = envelope
        .iter()
        .enumerate()
        .fold((0, 0.0), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
    if peak == 0.0 {
        return Err(CoreError::DegenerateEnvelope);
    }

    let x_peak = x0 + peak_idx as f64 * h;
    let raw_phase = math::atan2(psi[peak_idx].im, psi[peak_idx].re) - omega0 * x_peak;
    let xi0 = -reduce_to_pi(-raw_phase); // wrap into (-pi, pi]

    // Gaussian width from the second central moment of |psi|^2.
    let total: f64 = envelope.iter().map(|e| e * e).sum();
    let mean_x: f64 = envelope
        .iter()
        .enumerate()
        .map(|(i, e)| (x0 + i as f64 * h) * e * e)
        .sum::<f64>()
        / total;
    let m2: f64 = envelope
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let d = x0 + i as f64 * h - mean_x;
            d * d * e * e
        })
        .sum::<f64>()
        / total;
    if m2 <= 0.0 {
        return Err(CoreError::DegenerateEnvelope);
    }

    let mut inner = Complex64::new(0.0, 0.0);
    let mut g_energy = 0.0;
    for (i, c) in psi.iter().enumerate() {
        let x = x0 + i as f64 * h;
        let env = math::exp(-(x - mean_x) * (x - mean_x) / (4.0 * m2));
        let g = Complex64::new(env * math::cos(omega0 * x), env * math::sin(omega0 * x));
        inner += c * g.conj();
        g_energy += env * env;
    }
    let psi_energy: f64 = psi.iter().map(|c| c.norm_sqr()).sum();
    let correlation = inner.norm() / math::sqrt(psi_energy * g_energy);

    Ok(GaborFit {
        omega0,
        xi0,
        window: RealSignal1D::new(envelope, h)?,
        correlation,
    })
}

/// Measures how close the system's complex wavelet is to a Gabor atom.
pub fn gabor_fit(system: &WaveletSystem) -> Result<GaborFit> {
    fit_gabor_atom(
        &system.complex_wavelet(),
        system.fine_x(0),
        system.fine_spacing(),
    )
}
