//! The 1D dual-tree complex wavelet transform.
//!
//! Analysis runs the FFT-domain Mallat recursion independently for the two
//! trees and pairs their real coefficients into c_i[k] = (a_i[k] + j b_i[k])/2.
//! Inversion reconstructs each tree from its real part and averages the
//! two, which is perfect to machine precision. On top of that sit the
//! amplitude-phase representation (magnitudes plus fractional shifts
//! tau = arg(c)/pi), the fHT-shifted synthesis wavelets, and the
//! quadrature-pair generator.
//!
//! Branch averaging puts the factor 1/2 in front of the two expansions, so
//! a single complex coefficient c contributes |c| times one fractionally
//! shifted wavelet: 2 Re(c) psi + 2 Im(c) psi' averaged over two trees is
//! |c| (cos(pi tau) psi + sin(pi tau) H psi), i.e. the shift action is the
//! group inverse H_{-tau} of the stored tau = arg(c)/pi.

use crate::error::{CoreError, Result};
use crate::fft;
use crate::fht::{self, FhtShift};
use crate::filterbank::{SplineParams, WaveletSystem};
use crate::math;
use crate::spectral::RealSignal1D;
use crate::Complex64;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

/// Complex dual-tree coefficients of a 1D signal.
#[derive(Debug, Clone)]
pub struct DtCoeffs1D {
    /// Level i (1-based) lives at index i-1 and has n/2^i coefficients.
    levels: Vec<Vec<Complex64>>,
    residue_a: Vec<f64>,
    residue_b: Vec<f64>,
    params: SplineParams,
    n: usize,
    spacing: f64,
}

impl DtCoeffs1D {
    pub fn from_parts(
        levels: Vec<Vec<Complex64>>,
        residue_a: Vec<f64>,
        residue_b: Vec<f64>,
        params: SplineParams,
        n: usize,
        spacing: f64,
    ) -> Result<Self> {
        if levels.is_empty() || !fft::is_power_of_two(n) {
            return Err(CoreError::Shape("coefficient set must have >= 1 level"));
        }
        for (i, c) in levels.iter().enumerate() {
            if c.len() != n >> (i + 1) {
                return Err(CoreError::Shape("level length must be n / 2^level"));
            }
        }
        let coarsest = n >> levels.len();
        if residue_a.len() != coarsest || residue_b.len() != coarsest {
            return Err(CoreError::Shape("residue length must be n / 2^levels"));
        }
        Ok(Self {
            levels,
            residue_a,
            residue_b,
            params,
            n,
            spacing,
        })
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Complex coefficients of one level (1-based).
    pub fn level(&self, level: usize) -> &[Complex64] {
        &self.levels[level - 1]
    }

    pub fn residue_a(&self) -> &[f64] {
        &self.residue_a
    }

    pub fn residue_b(&self) -> &[f64] {
        &self.residue_b
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn params(&self) -> SplineParams {
        self.params
    }

    fn matches(&self, system: &WaveletSystem) -> Result<()> {
        if self.n != system.n()
            || self.levels.len() != system.levels()
            || self.params != system.params()
        {
            return Err(CoreError::Shape(
                "coefficient metadata does not match the wavelet system",
            ));
        }
        Ok(())
    }
}

/// Per-level magnitudes and fractional shifts tau = arg(c)/pi in (-1, 1].
#[derive(Debug, Clone)]
pub struct AmpPhaseMap {
    magnitude: Vec<Vec<f64>>,
    shift: Vec<Vec<f64>>,
    n: usize,
    spacing: f64,
}

impl AmpPhaseMap {
    pub fn magnitude(&self, level: usize) -> &[f64] {
        &self.magnitude[level - 1]
    }

    pub fn shift(&self, level: usize) -> &[f64] {
        &self.shift[level - 1]
    }

    pub fn depth(&self) -> usize {
        self.magnitude.len()
    }
}

/// Polar split of one complex coefficient: (|c|, arg(c)/pi in (-1, 1]).
/// Zero magnitude carries the conventional shift 0.
pub(crate) fn polar_shift(c: Complex64) -> (f64, f64) {
    let mag = c.norm();
    if mag == 0.0 {
        return (0.0, 0.0);
    }
    let mut t = math::atan2(c.im, c.re) / PI;
    if t <= -1.0 {
        t += 2.0;
    }
    (mag, t)
}

/// One analysis step: correlate with the level's filters and downsample.
pub(crate) fn analyze_step(
    x: &[f64],
    lo: &[Complex64],
    hi: &[Complex64],
) -> (Vec<f64>, Vec<f64>) {
    let len = x.len();
    let half = len / 2;
    let spec = fft::fft_real(x);
    let mut lo_bins = Vec::with_capacity(half);
    let mut hi_bins = Vec::with_capacity(half);
    for mu in 0..half {
        let a = spec[mu];
        let b = spec[mu + half];
        lo_bins.push(0.5 * (a * lo[mu].conj() + b * lo[mu + half].conj()));
        hi_bins.push(0.5 * (a * hi[mu].conj() + b * hi[mu + half].conj()));
    }
    (fft::ifft_real(&lo_bins), fft::ifft_real(&hi_bins))
}

/// One synthesis step: upsample, filter, and sum the two branches.
pub(crate) fn synthesize_step(
    approx: &[f64],
    detail: &[f64],
    lo: &[Complex64],
    hi: &[Complex64],
) -> Vec<f64> {
    let half = approx.len();
    let len = 2 * half;
    let a = fft::fft_real(approx);
    let d = fft::fft_real(detail);
    let mut bins = Vec::with_capacity(len);
    for m in 0..len {
        let mu = m % half;
        bins.push(a[mu] * lo[m] + d[mu] * hi[m]);
    }
    fft::ifft_real(&bins)
}

/// Exact half-sample shift of a periodic real signal, the frequency
/// multiplier e^{-j dir w / 2}. dir = +1 delays, dir = -1 advances; the
/// two are exact inverses. The self-conjugate Nyquist bin takes the real
/// unimodular value -1 so the operator stays unitary on real signals.
///
/// Tree b's spline shift sits half a sample to the right of tree a's, so
/// feeding tree b the half-sample-advanced input makes its coefficients
/// the inner products with H psi on the *same* translation grid as tree a.
/// Without this stage the two trees' atoms are skewed by half an input
/// sample, which in 2D destroys the quadrant cancellation behind the
/// diagonal subbands.
pub(crate) fn half_sample_shift(x: &[f64], dir: f64) -> Vec<f64> {
    let n = x.len();
    let mut bins = fft::fft_real(x);
    for (m, b) in bins.iter_mut().enumerate() {
        if m == n / 2 {
            *b = -*b;
        } else {
            let w = 2.0 * PI * fft::signed_bin(m, n) as f64 / n as f64;
            let ang = -dir * 0.5 * w;
            *b *= Complex64::new(math::cos(ang), math::sin(ang));
        }
    }
    fft::ifft_real(&bins)
}

pub(crate) fn analyze_tree(
    samples: &[f64],
    filters: &crate::filterbank::TreeFilters,
) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut details = Vec::with_capacity(filters.lowpass.len());
    let mut x = samples.to_vec();
    for (lo, hi) in filters.lowpass.iter().zip(&filters.highpass) {
        let (next, d) = analyze_step(&x, lo, hi);
        details.push(d);
        x = next;
    }
    (details, x)
}

pub(crate) fn synthesize_tree(
    details: &[Vec<f64>],
    residue: &[f64],
    filters: &crate::filterbank::TreeFilters,
) -> Vec<f64> {
    let mut x = residue.to_vec();
    for level in (0..details.len()).rev() {
        x = synthesize_step(
            &x,
            &details[level],
            &filters.lowpass[level],
            &filters.highpass[level],
        );
    }
    x
}

/// Dual-tree analysis: both trees' Mallat recursions plus the complex
/// pairing c_i[k] = (a_i[k] + j b_i[k]) / 2.
pub fn analyze(signal: &RealSignal1D, system: &WaveletSystem) -> Result<DtCoeffs1D> {
    if signal.len() != system.n() {
        return Err(CoreError::Shape("signal length must equal the system size"));
    }
    let (details_a, residue_a) = analyze_tree(signal.samples(), &system.tree_a);
    let advanced = half_sample_shift(signal.samples(), -1.0);
    let (details_b, residue_b) = analyze_tree(&advanced, &system.tree_b);
    let levels = details_a
        .iter()
        .zip(&details_b)
        .map(|(a, b)| {
            a.iter()
                .zip(b)
                .map(|(&ai, &bi)| Complex64::new(0.5 * ai, 0.5 * bi))
                .collect()
        })
        .collect();
    DtCoeffs1D::from_parts(
        levels,
        residue_a,
        residue_b,
        system.params(),
        system.n(),
        signal.spacing(),
    )
}

/// Branch-averaging inversion: each tree is inverted from its real
/// coefficients (a = 2 Re c, b = 2 Im c) and the two reconstructions are
/// averaged.
pub fn synthesize(coeffs: &DtCoeffs1D, system: &WaveletSystem) -> Result<RealSignal1D> {
    coeffs.matches(system)?;
    let details_a: Vec<Vec<f64>> = coeffs
        .levels
        .iter()
        .map(|c| c.iter().map(|v| 2.0 * v.re).collect())
        .collect();
    let details_b: Vec<Vec<f64>> = coeffs
        .levels
        .iter()
        .map(|c| c.iter().map(|v| 2.0 * v.im).collect())
        .collect();
    let ra = synthesize_tree(&details_a, &coeffs.residue_a, &system.tree_a);
    let rb = half_sample_shift(
        &synthesize_tree(&details_b, &coeffs.residue_b, &system.tree_b),
        1.0,
    );
    let samples = ra.iter().zip(&rb).map(|(a, b)| 0.5 * (a + b)).collect();
    RealSignal1D::new(samples, coeffs.spacing)
}

/// Polar decomposition of every coefficient.
pub fn amp_phase(coeffs: &DtCoeffs1D) -> AmpPhaseMap {
    let mut magnitude = Vec::with_capacity(coeffs.levels.len());
    let mut shift = Vec::with_capacity(coeffs.levels.len());
    for level in &coeffs.levels {
        let mut mags = Vec::with_capacity(level.len());
        let mut taus = Vec::with_capacity(level.len());
        for &c in level {
            let (m, t) = polar_shift(c);
            mags.push(m);
            taus.push(t);
        }
        magnitude.push(mags);
        shift.push(taus);
    }
    AmpPhaseMap {
        magnitude,
        shift,
        n: coeffs.n,
        spacing: coeffs.spacing,
    }
}

/// The fHT-shifted synthesis wavelet H_tau psi on the fine grid. Unitarity
/// of the fHT keeps its norm equal to the mother wavelet's.
pub fn shifted_wavelet(system: &WaveletSystem, shift: FhtShift) -> RealSignal1D {
    fht::fractional_hilbert(system.psi_a(), shift)
}

/// Interpolation order used when resampling fine-grid wavelets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterpOrder {
    Linear,
    /// Catmull-Rom cubic; the default, needed to stay inside the
    /// calibrated equivalence tolerance at the default fine-grid size.
    Cubic,
}

/// Periodic table lookup with the chosen interpolation order. `pos` is a
/// fractional index into a periodic table.
pub(crate) fn interp_periodic(table: &[f64], pos: f64, order: InterpOrder) -> f64 {
    let len = table.len() as f64;
    let p = math::rem_euclid(pos, len);
    let base = math::floor(p);
    let i1 = base as usize % table.len();
    let t = p - base;
    match order {
        InterpOrder::Linear => {
            let i2 = (i1 + 1) % table.len();
            table[i1] * (1.0 - t) + table[i2] * t
        }
        InterpOrder::Cubic => {
            let n = table.len();
            let p0 = table[(i1 + n - 1) % n];
            let p1 = table[i1];
            let p2 = table[(i1 + 1) % n];
            let p3 = table[(i1 + 2) % n];
            0.5 * (2.0 * p1
                + (p2 - p0) * t
                + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * t * t
                + (3.0 * (p1 - p2) + p3 - p0) * t * t * t)
        }
    }
}

/// Adds `amount` times the dilated-translated wavelet read from a fine
/// table to the output, with periodic wraparound. The scan covers exactly
/// one table period in signal coordinates (u in [-T/2, T/2)), so the atom
/// is periodized over the signal length and never replicated at the table
/// period.
#[allow(clippy::too_many_arguments)]
fn add_scaled_atom(
    out: &mut [f64],
    table: &[f64],
    scale: f64,
    k: usize,
    off: f64,
    amount: f64,
    step: f64,
    period: f64,
    order: InterpOrder,
) {
    if amount == 0.0 {
        return;
    }
    let n = out.len() as i64;
    let start = -math::floor(-(scale * (k as f64 - 0.5 * period) - off)) as i64;
    let count = math::floor(scale * period) as i64;
    for t in 0..count {
        let j = start + t;
        let u = (j as f64 + off) / scale - k as f64;
        let pos = (u + 0.5 * period) * step;
        let idx = j.rem_euclid(n) as usize;
        out[idx] += amount * interp_periodic(table, pos, order);
    }
}

/// Copy of a fine-grid table lowpassed to |w| <= cutoff (rad per signal
/// sample). Resampling a level-i atom reads the mother wavelet at steps of
/// 2^-i, so content beyond 2^i pi must be removed first or it aliases into
/// the reconstruction.
pub(crate) fn bandlimited_table(sig: &RealSignal1D, period: f64, cutoff: f64) -> Vec<f64> {
    let m = sig.len();
    let nyquist = PI * m as f64 / period;
    if cutoff >= nyquist {
        return sig.samples().to_vec();
    }
    let mut bins = fft::fft_real(sig.samples());
    for (i, b) in bins.iter_mut().enumerate() {
        let w = 2.0 * PI * fft::signed_bin(i, m) as f64 / period;
        if math::abs(w) > cutoff {
            *b = Complex64::new(0.0, 0.0);
        }
    }
    fft::ifft_real(&bins)
}

/// Reconstruction directly from the amplitude-phase representation:
/// every coefficient adds |c| times its dilated-translated, fHT-shifted
/// wavelet resampled from the fine grid, and the residues are inverted
/// through the lowpass branches and averaged.
pub fn amp_phase_synthesize(
    map: &AmpPhaseMap,
    residue_a: &[f64],
    residue_b: &[f64],
    system: &WaveletSystem,
) -> Result<RealSignal1D> {
    amp_phase_synthesize_with(map, residue_a, residue_b, system, InterpOrder::Cubic)
}

/// As [`amp_phase_synthesize`] with an explicit interpolation order.
pub fn amp_phase_synthesize_with(
    map: &AmpPhaseMap,
    residue_a: &[f64],
    residue_b: &[f64],
    system: &WaveletSystem,
    order: InterpOrder,
) -> Result<RealSignal1D> {
    let n = map.n;
    let levels = map.depth();
    if n != system.n() || levels != system.levels() {
        return Err(CoreError::Shape("map does not match the wavelet system"));
    }
    let coarsest = n >> levels;
    if residue_a.len() != coarsest || residue_b.len() != coarsest {
        return Err(CoreError::Shape("residue length must be n / 2^levels"));
    }

    // Residue part: lowpass-only inversion of both trees, averaged.
    let zero_details: Vec<Vec<f64>> = (1..=levels).map(|i| vec![0.0; n >> i]).collect();
    let ra = synthesize_tree(&zero_details, residue_a, &system.tree_a);
    let rb = half_sample_shift(
        &synthesize_tree(&zero_details, residue_b, &system.tree_b),
        1.0,
    );
    let mut out: Vec<f64> = ra.iter().zip(&rb).map(|(a, b)| 0.5 * (a + b)).collect();

    let period = system.fine_period();
    let fine_len = system.fine_len();
    let step = fine_len as f64 / period; // fine samples per signal sample

    // Embedding samples as scale-0 coefficients advances the atoms by the
    // spline shift tau (the phase of phi_hat is -tau w on the baseband).
    // The half-sample stage in analyze/synthesize already aligns tree b
    // with tree a, so both trees carry the same offset.
    let off_a = system.params().tau;
    let off_b = off_a;

    for level in 1..=levels {
        let scale = (1u64 << level) as f64;
        let cutoff = PI * scale;
        let psi = bandlimited_table(system.psi_a(), period, cutoff);
        let psi_h = bandlimited_table(system.psi_b(), period, cutoff);
        let weight = 1.0 / math::sqrt(scale);
        let mags = map.magnitude(level);
        let taus = map.shift(level);
        for (k, (&mag, &tau)) in mags.iter().zip(taus.iter()).enumerate() {
            if mag == 0.0 {
                continue;
            }
            // One term of the representation: |c| H_{-tau} psi_{i,k},
            // i.e. cos(pi tau) psi + sin(pi tau) H psi.
            let c = math::cos(PI * tau);
            let s = math::sin(PI * tau);
            add_scaled_atom(&mut out, &psi, scale, k, off_a, mag * weight * c, step, period, order);
            add_scaled_atom(
                &mut out,
                &psi_h,
                scale,
                k,
                off_b,
                mag * weight * s,
                step,
                period,
                order,
            );
        }
    }
    RealSignal1D::new(out, map.spacing)
}

/// A quadrature pair of fractionally shifted wavelets and their common
/// envelope |w1 + j w2|.
#[derive(Debug, Clone)]
pub struct QuadraturePair {
    pub w1: RealSignal1D,
    pub w2: RealSignal1D,
    pub envelope: RealSignal1D,
}

/// w1 = H_tau psi, w2 = H_{tau+1/2} psi and their envelope. The envelope
/// is independent of tau because w1 + j w2 = e^{-j pi tau} (psi - j H psi).
pub fn quadrature_pair(system: &WaveletSystem, shift: FhtShift) -> Result<QuadraturePair> {
    let w1 = fht::fractional_hilbert(system.psi_a(), shift);
    let w2 = fht::fractional_hilbert(system.psi_a(), FhtShift::new(shift.tau() + 0.5)?);
    let envelope = RealSignal1D::new(
        w1.samples()
            .iter()
            .zip(w2.samples())
            .map(|(&a, &b)| math::hypot(a, b))
            .collect(),
        w1.spacing(),
    )?;
    Ok(QuadraturePair { w1, w2, envelope })
}

/// Outcome of a modulation-identity check.
#[derive(Debug, Clone, Copy)]
pub struct Prop1Report {
    /// Max absolute deviation from the phase-shifted cosine.
    pub max_error: f64,
    /// Carrier frequency actually used (snapped to the nearest grid bin).
    pub omega0: f64,
}

/// Checks the fHT modulation identity
/// H_tau { w(x) cos(w0 x) } = w(x) cos(w0 x + pi tau)
/// on an n-sample grid with a raised-cosine window of bandwidth `omega_bw`.
///
/// The carrier is snapped to the nearest grid bin so the sidebands are
/// exact. The bandlimit hypothesis omega_bw < omega0 is deliberately not
/// enforced: violating it is the documented negative control that shows
/// the identity's sharpness. Parameters that alias (sidebands crossing
/// Nyquist) are rejected.
pub fn verify_proposition1(
    omega_bw: f64,
    omega0: f64,
    tau: f64,
    n: usize,
) -> Result<Prop1Report> {
    if !fft::is_power_of_two(n) || n < 8 {
        return Err(CoreError::SizeNotPowerOfTwo { len: n });
    }
    let bin = math::round(omega0 * n as f64 / (2.0 * PI));
    let omega0 = 2.0 * PI * bin / n as f64;
    if !(omega0 > 0.0) {
        return Err(CoreError::Parameter("carrier must snap to a positive bin"));
    }
    if omega0 + omega_bw >= PI {
        return Err(CoreError::Parameter(
            "carrier plus bandwidth must stay below Nyquist",
        ));
    }
    let window = crate::spectral::bandlimited_window(n, omega_bw, 1.0)?;
    let modulated = RealSignal1D::new(
        window
            .samples()
            .iter()
            .enumerate()
            .map(|(i, &w)| w * math::cos(omega0 * i as f64))
            .collect(),
        1.0,
    )?;
    let got = fht::fractional_hilbert(&modulated, FhtShift::new(tau)?);
    let mut max_error = 0.0f64;
    for (i, (&g, &w)) in got.samples().iter().zip(window.samples()).enumerate() {
        let want = w * math::cos(omega0 * i as f64 + PI * tau);
        max_error = max_error.max(math::abs(g - want));
    }
    Ok(Prop1Report { max_error, omega0 })
}
