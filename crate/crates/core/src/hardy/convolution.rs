//! Truncated Cauchy products.
//!
//! Two paths compute the same coefficients: a direct O(n²) sum and an FFT
//! product. [`convolve`] switches to the FFT path once both operands exceed
//! [`FFT_THRESHOLD`] in degree.

use num_complex::Complex64;
use rustfft::FftPlanner;

/// Degree above which both operands must lie before the FFT path is used.
pub const FFT_THRESHOLD: usize = 64;

/// Coefficients `c_k = Σ_{i+j=k} a_i b_j` for `k <= target_order`.
pub fn convolve(a: &[Complex64], b: &[Complex64], target_order: usize) -> Vec<Complex64> {
    convolve_with_threshold(a, b, target_order, FFT_THRESHOLD)
}

pub fn convolve_with_threshold(
    a: &[Complex64],
    b: &[Complex64],
    target_order: usize,
    threshold: usize,
) -> Vec<Complex64> {
    // Trailing zeros (including those above the target order) are dropped
    // so that routing follows the true degree, not the storage length.
    let a = &a[..effective_len(a, target_order)];
    let b = &b[..effective_len(b, target_order)];
    if a.is_empty() || b.is_empty() {
        return vec![Complex64::new(0.0, 0.0); target_order + 1];
    }
    if (a.len() - 1).min(b.len() - 1) > threshold {
        convolve_fft(a, b, target_order)
    } else {
        convolve_direct(a, b, target_order)
    }
}

fn effective_len(a: &[Complex64], target_order: usize) -> usize {
    let cut = a.len().min(target_order + 1);
    a[..cut].iter().rposition(|c| *c != Complex64::new(0.0, 0.0)).map_or(0, |i| i + 1)
}

/// Schoolbook product.
pub fn convolve_direct(a: &[Complex64], b: &[Complex64], target_order: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); target_order + 1];
    for (k, slot) in out.iter_mut().enumerate() {
        let lo = k.saturating_sub(b.len().saturating_sub(1));
        let hi = k.min(a.len().saturating_sub(1));
        if a.is_empty() || b.is_empty() || lo > hi {
            continue;
        }
        // Terms are summed pairwise from both ends inward, so swapping the
        // operands (which reverses the term list) gives bitwise-equal sums.
        let (mut i, mut j) = (lo, hi);
        let mut acc = Complex64::new(0.0, 0.0);
        while i < j {
            acc += a[i] * b[k - i] + a[j] * b[k - j];
            i += 1;
            j -= 1;
        }
        if i == j {
            acc += a[i] * b[k - i];
        }
        *slot = acc;
    }
    out
}

pub fn convolve_fft(a: &[Complex64], b: &[Complex64], target_order: usize) -> Vec<Complex64> {
    let a = &a[..a.len().min(target_order + 1)];
    let b = &b[..b.len().min(target_order + 1)];
    let mut out = vec![Complex64::new(0.0, 0.0); target_order + 1];
    if a.is_empty() || b.is_empty() {
        return out;
    }
    let full = a.len() + b.len() - 1;
    let size = full.next_power_of_two();

    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(size);
    let inverse = planner.plan_fft_inverse(size);

    let mut fa = vec![Complex64::new(0.0, 0.0); size];
    let mut fb = vec![Complex64::new(0.0, 0.0); size];
    fa[..a.len()].copy_from_slice(a);
    fb[..b.len()].copy_from_slice(b);
    forward.process(&mut fa);
    forward.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= *y;
    }
    inverse.process(&mut fa);

    let scale = 1.0 / size as f64;
    let keep = full.min(target_order + 1);
    for (o, v) in out.iter_mut().zip(&fa[..keep]) {
        *o = *v * scale;
    }
    out
}
