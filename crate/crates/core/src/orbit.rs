//! The multiplication operator `T_φ` and its orbits `{φⁿ f}`.

use std::borrow::Cow;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hardy::TruncatedSeries;
use crate::symbol::SymbolRealization;

/// Relative loss of squared norm beyond which an element counts as truncated
/// when only the closed-form norm is available.
pub const TRUNCATION_REL_TOL: f64 = 1e-13;
/// Slope band (in log-norm per step) treated as neither decay nor growth.
pub const DECAY_DEAD_BAND: f64 = 1e-3;
/// Shortest usable prefix for [`decay_profile`].
pub const MIN_DECAY_LEN: usize = 8;

fn symbol_series(sym: &SymbolRealization, order: usize) -> Cow<'_, TruncatedSeries> {
    let exact_fit = sym.spec.exact_degree().is_some_and(|d| d <= sym.order());
    if sym.order() >= order || exact_fit {
        Cow::Borrowed(&sym.series)
    } else {
        Cow::Owned(sym.spec.expand(order))
    }
}

/// `T_φ f = φ f`, truncated at `order`.
pub fn apply(sym: &SymbolRealization, f: &TruncatedSeries, order: usize) -> TruncatedSeries {
    symbol_series(sym, order).mul(f, order)
}

/// `{φⁿ f : 0 ≤ n ≤ K}` at truncation order `N`.
#[derive(Debug, Clone)]
pub struct Orbit {
    pub symbol: SymbolRealization,
    pub seed: TruncatedSeries,
    pub elements: Vec<TruncatedSeries>,
    pub norms: Vec<f64>,
    /// `truncated[n]` is set when `φⁿ f` has mass above order `N`, so that
    /// `elements[n]` differs from the true orbit element.
    pub truncated: Vec<bool>,
    pub order: usize,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `K`, the largest power in the orbit.
    pub fn max_power(&self) -> usize {
        self.elements.len() - 1
    }

    /// Number of leading elements that are not truncated.
    pub fn exact_prefix_len(&self) -> usize {
        self.truncated.iter().take_while(|t| !**t).count()
    }
}

pub fn orbit(sym: &SymbolRealization, f: &TruncatedSeries, max_power: usize, order: usize) -> Orbit {
    let phi = symbol_series(sym, order).into_owned();
    let seed = f.with_order(order);
    let mut elements = Vec::with_capacity(max_power + 1);
    elements.push(seed.clone());
    for n in 0..max_power {
        let next = phi.mul(&elements[n], order);
        elements.push(next);
    }
    let norms: Vec<f64> = elements.iter().map(TruncatedSeries::norm).collect();
    let truncated = truncation_flags(sym, f, &norms, order);
    Orbit { symbol: sym.clone(), seed, elements, norms, truncated, order }
}

fn truncation_flags(sym: &SymbolRealization, f: &TruncatedSeries, norms: &[f64], order: usize) -> Vec<bool> {
    let Some(seed_degree) = f.degree() else {
        return vec![false; norms.len()];
    };
    let phi_is_zero = sym.spec.expand(0).is_zero() && sym.spec.exact_degree() == Some(0);
    let mut flags = Vec::with_capacity(norms.len());
    match (sym.spec.exact_degree(), sym.spec.inner_scale()) {
        (Some(d), _) => {
            for n in 0..norms.len() {
                let degree = if n > 0 && phi_is_zero { None } else { Some(seed_degree + n * d) };
                flags.push(degree.is_some_and(|deg| deg > order));
            }
        }
        (None, Some(s)) => {
            let full = f.norm_sqr();
            let mut sticky = false;
            for (n, norm) in norms.iter().enumerate() {
                let exact = s.powi(2 * n as i32) * full;
                sticky = sticky || exact - norm * norm > TRUNCATION_REL_TOL * exact;
                flags.push(sticky);
            }
        }
        (None, None) => {
            flags.push(seed_degree > order);
            flags.extend(std::iter::repeat_n(true, norms.len() - 1));
        }
    }
    flags
}

/// Finite section of `T_φ` in the monomial basis.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSection {
    pub matrix: DMatrix<Complex64>,
    pub order: usize,
}

impl OperatorSection {
    pub fn apply_to(&self, f: &TruncatedSeries) -> TruncatedSeries {
        let v = DVector::from_iterator(self.order + 1, (0..=self.order).map(|i| f.coeff(i)));
        let out = &self.matrix * v;
        TruncatedSeries::from_coeffs(out.iter().copied().collect()).expect("finite product")
    }
}

/// Lower-triangular Toeplitz matrix with `entry(i, j) = φ_{i−j}`.
pub fn matrix_section(sym: &SymbolRealization, order: usize) -> OperatorSection {
    let phi = symbol_series(sym, order);
    let matrix = DMatrix::from_fn(order + 1, order + 1, |i, j| if i >= j { phi.coeff(i - j) } else { Complex64::new(0.0, 0.0) });
    OperatorSection { matrix, order }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayClass {
    DecaysToZero,
    BoundedNonDecaying,
    Grows,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub classification: DecayClass,
    /// `exp(slope)`, the fitted per-step norm ratio.
    pub rate_estimate: f64,
    /// Fitted slope of the log-norms; `None` when a zero norm short-circuits
    /// the fit.
    pub slope: Option<f64>,
    /// Orbit indices used by the fit.
    pub fit_range: (usize, usize),
}

/// Least-squares fit of `ln ‖φⁿ f‖` against `n` over the tail half of the
/// non-truncated prefix.
pub fn decay_profile(orb: &Orbit) -> Result<DecayReport> {
    let prefix = orb.exact_prefix_len();
    if orb.norms[..prefix].iter().any(|n| *n == 0.0) {
        return Ok(DecayReport {
            classification: DecayClass::DecaysToZero,
            rate_estimate: 0.0,
            slope: None,
            fit_range: (0, prefix),
        });
    }
    if prefix < MIN_DECAY_LEN {
        return Err(Error::Precondition(format!(
            "decay fit needs {MIN_DECAY_LEN} untruncated orbit elements, found {prefix}"
        )));
    }
    let start = prefix / 2;
    let xs: Vec<f64> = (start..prefix).map(|n| n as f64).collect();
    let ys: Vec<f64> = orb.norms[start..prefix].iter().map(|v| v.ln()).collect();
    let slope = least_squares_slope(&xs, &ys);
    let classification = if slope < -DECAY_DEAD_BAND {
        DecayClass::DecaysToZero
    } else if slope > DECAY_DEAD_BAND {
        DecayClass::Grows
    } else {
        DecayClass::BoundedNonDecaying
    };
    Ok(DecayReport { classification, rate_estimate: slope.exp(), slope: Some(slope), fit_range: (start, prefix) })
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}
