use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;

use super::convolution::{convolve, convolve_with_threshold};
use crate::error::{Error, Result};

/// Slack allowed past the closed unit disk when evaluating at a point.
pub const DISK_SLACK: f64 = 1e-12;

/// Degree-`N` polynomial standing in for an element of H²(𝔻).
///
/// Holds exactly `N + 1` finite Taylor coefficients `a_0..a_N`. Coefficients
/// above the order are treated as zero by every operation.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
}

impl TruncatedSeries {
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Construction("coefficient list is empty".into()));
        }
        if let Some(i) = coeffs.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Construction(format!("coefficient {i} is not finite")));
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::from_coeffs(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![Complex64::new(0.0, 0.0); order + 1] }
    }

    pub fn constant(c: Complex64) -> Self {
        Self { coeffs: vec![c] }
    }

    /// `z^k` stored at order `k`.
    pub fn monomial(k: usize) -> Self {
        let mut s = Self::zero(k);
        s.coeffs[k] = Complex64::new(1.0, 0.0);
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// `a_n`, zero above the stored order.
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    /// Index of the highest nonzero coefficient, `None` for the zero series.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| *c != Complex64::new(0.0, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    /// Drops or zero-pads coefficients so the order becomes `order`.
    pub fn with_order(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, Complex64::new(0.0, 0.0));
        Self { coeffs }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Cauchy product truncated to `target_order`.
    pub fn mul(&self, other: &Self, target_order: usize) -> Self {
        Self { coeffs: convolve(&self.coeffs, &other.coeffs, target_order) }
    }

    /// Same as [`mul`](Self::mul) with an explicit FFT threshold.
    pub fn mul_with_threshold(&self, other: &Self, target_order: usize, threshold: usize) -> Self {
        Self { coeffs: convolve_with_threshold(&self.coeffs, &other.coeffs, target_order, threshold) }
    }

    /// `⟨f, g⟩ = Σ a_n conj(b_n)` over the common index range.
    pub fn inner(&self, other: &Self) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, b) in self.coeffs.iter().zip(&other.coeffs) {
            acc += a * b.conj();
        }
        acc
    }

    pub fn norm_sqr(&self) -> f64 {
        let mut acc = 0.0;
        for a in &self.coeffs {
            acc += a.norm_sqr();
        }
        acc
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Horner evaluation at a point of the closed disk.
    pub fn eval_at(&self, z: Complex64) -> Result<Complex64> {
        if !(z.norm() <= 1.0 + DISK_SLACK) {
            return Err(Error::Domain(format!("|z| = {} lies outside the closed unit disk", z.norm())));
        }
        Ok(self.eval_unchecked(z))
    }

    pub(crate) fn eval_unchecked(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a)
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len).map(|n| self.coeff(n) + rhs.coeff(n)).collect();
        TruncatedSeries { coeffs }
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len).map(|n| self.coeff(n) - rhs.coeff(n)).collect();
        TruncatedSeries { coeffs }
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn neg(self) -> TruncatedSeries {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}
