//! Minimal radix-2 FFT for power-of-two lengths.
//!
//! The whole crate is restricted to power-of-two grids, so a plain
//! iterative radix-2 kernel is sufficient and keeps the core free of `std`.
//! Convention: unnormalized forward transform with the e^{-j w x} kernel,
//! the inverse carries the 1/N factor.

use crate::math;
use crate::Complex64;
use alloc::vec::Vec;

pub(crate) fn is_power_of_two(n: usize) -> bool {
    n != 0 && n & (n - 1) == 0
}

fn transform(buf: &mut [Complex64], sign: f64) {
    let n = buf.len();
    debug_assert!(is_power_of_two(n));
    if n < 2 {
        return;
    }

    // Bit-reversal permutation.
    let mut j = 0usize;
    for i in 0..n - 1 {
        if i < j {
            buf.swap(i, j);
        }
        let mut mask = n >> 1;
        while j & mask != 0 {
            j &= !mask;
            mask >>= 1;
        }
        j |= mask;
    }

    let mut len = 2;
    let mut twiddles: Vec<Complex64> = Vec::with_capacity(n / 2);
    while len <= n {
        let half = len / 2;
        twiddles.clear();
        for k in 0..half {
            let ang = sign * 2.0 * core::f64::consts::PI * k as f64 / len as f64;
            twiddles.push(Complex64::new(math::cos(ang), math::sin(ang)));
        }
        let mut start = 0;
        while start < n {
            for k in 0..half {
                let u = buf[start + k];
                let v = buf[start + k + half] * twiddles[k];
                buf[start + k] = u + v;
                buf[start + k + half] = u - v;
            }
            start += len;
        }
        len <<= 1;
    }
}

/// In-place forward DFT, unnormalized.
pub(crate) fn fft(buf: &mut [Complex64]) {
    transform(buf, -1.0);
}

/// In-place inverse DFT including the 1/N factor.
pub(crate) fn ifft(buf: &mut [Complex64]) {
    transform(buf, 1.0);
    let scale = 1.0 / buf.len() as f64;
    for v in buf.iter_mut() {
        *v *= scale;
    }
}

/// Forward DFT of a real sequence.
pub(crate) fn fft_real(x: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft(&mut buf);
    buf
}

/// Real part of the inverse DFT; the imaginary part is the caller's
/// responsibility to know is negligible.
pub(crate) fn ifft_real(bins: &[Complex64]) -> Vec<f64> {
    let mut buf = bins.to_vec();
    ifft(&mut buf);
    buf.into_iter().map(|c| c.re).collect()
}

/// Signed alias of bin index m on a length-n grid, in [-n/2, n/2).
pub(crate) fn signed_bin(m: usize, n: usize) -> i64 {
    let m = m as i64;
    let n = n as i64;
    if m < n / 2 {
        m
    } else {
        m - n
    }
}
