//! Multiplication symbols φ ∈ H^∞(𝔻).
//!
//! A [`SymbolSpec`] describes φ declaratively and can be evaluated in closed
//! form anywhere on the closed disk. [`realize`] expands it into a
//! [`TruncatedSeries`] for use by the orbit machinery.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hardy::{BoundaryGrid, TruncatedSeries};
use crate::json;

/// Blaschke zeros must satisfy `|a| < 1 - ZERO_MARGIN`.
pub const ZERO_MARGIN: f64 = 1e-9;
/// Allowed deviation of a unimodular prefactor from modulus one.
pub const UNIMODULAR_TOL: f64 = 1e-12;
/// Default innerness tolerance for closed-form evaluation.
pub const INNER_TOL_EXACT: f64 = 1e-9;
/// Default innerness tolerance when the truncated series is evaluated.
pub const INNER_TOL_SERIES: f64 = 1e-6;
/// Deviations in `[tol, INCONCLUSIVE_FACTOR * tol)` give an inconclusive verdict.
pub const INCONCLUSIVE_FACTOR: f64 = 1e3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeZero {
    #[serde(with = "json::complex")]
    pub zero: Complex64,
    #[serde(default = "one_usize")]
    pub multiplicity: usize,
}

fn one_usize() -> usize {
    1
}

fn unit() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Declarative description of a symbol φ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SymbolSpec {
    /// φ(z) = c
    Constant {
        #[serde(with = "json::complex")]
        c: Complex64,
    },
    /// φ(z) = z^m
    Monomial { m: usize },
    /// φ(z) = c z
    ScaledShift {
        #[serde(with = "json::complex")]
        c: Complex64,
    },
    /// φ(z) = Σ c_k z^k
    Polynomial {
        #[serde(with = "json::complex_vec")]
        coeffs: Vec<Complex64>,
    },
    /// φ(z) = u Π (|a|/a)(a − z)/(1 − ā z), with plain factors z for a = 0.
    Blaschke {
        zeros: Vec<BlaschkeZero>,
        #[serde(with = "json::complex", default = "unit")]
        prefactor: Complex64,
    },
    /// φ(z) = factor · ψ(z)
    Scaled {
        #[serde(with = "json::complex")]
        factor: Complex64,
        symbol: Box<SymbolSpec>,
    },
}

fn finite(c: Complex64) -> bool {
    c.re.is_finite() && c.im.is_finite()
}

impl SymbolSpec {
    pub fn constant(c: f64) -> Self {
        SymbolSpec::Constant { c: Complex64::new(c, 0.0) }
    }

    pub fn blaschke(zeros: &[Complex64]) -> Self {
        SymbolSpec::Blaschke {
            zeros: zeros.iter().map(|&zero| BlaschkeZero { zero, multiplicity: 1 }).collect(),
            prefactor: unit(),
        }
    }

    pub fn scaled(factor: f64, inner: SymbolSpec) -> Self {
        SymbolSpec::Scaled { factor: Complex64::new(factor, 0.0), symbol: Box::new(inner) }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SymbolSpec::Constant { c } | SymbolSpec::ScaledShift { c } => {
                if !finite(*c) {
                    return Err(Error::Spec("coefficient is not finite".into()));
                }
            }
            SymbolSpec::Monomial { .. } => {}
            SymbolSpec::Polynomial { coeffs } => {
                if coeffs.is_empty() {
                    return Err(Error::Spec("polynomial symbol has no coefficients".into()));
                }
                if !coeffs.iter().all(|c| finite(*c)) {
                    return Err(Error::Spec("polynomial coefficient is not finite".into()));
                }
            }
            SymbolSpec::Blaschke { zeros, prefactor } => {
                if !finite(*prefactor) || (prefactor.norm() - 1.0).abs() >= UNIMODULAR_TOL {
                    return Err(Error::Spec(format!("prefactor {prefactor} is not unimodular")));
                }
                for z in zeros {
                    if !finite(z.zero) || z.zero.norm() >= 1.0 - ZERO_MARGIN {
                        return Err(Error::Spec(format!("Blaschke zero {} is not inside the disk", z.zero)));
                    }
                    if z.multiplicity == 0 {
                        return Err(Error::Spec("Blaschke zero multiplicity must be at least 1".into()));
                    }
                }
            }
            SymbolSpec::Scaled { factor, symbol } => {
                if !finite(*factor) {
                    return Err(Error::Spec("scale factor is not finite".into()));
                }
                symbol.validate()?;
            }
        }
        Ok(())
    }

    /// Closed-form value φ(z). Valid for any z where the form is defined,
    /// in particular on the closed unit disk.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            SymbolSpec::Constant { c } => *c,
            SymbolSpec::Monomial { m } => z.powu(*m as u32),
            SymbolSpec::ScaledShift { c } => c * z,
            SymbolSpec::Polynomial { coeffs } => {
                coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a)
            }
            SymbolSpec::Blaschke { zeros, prefactor } => {
                let mut acc = *prefactor;
                for bz in zeros {
                    let f = blaschke_factor(bz.zero, z);
                    for _ in 0..bz.multiplicity {
                        acc *= f;
                    }
                }
                acc
            }
            SymbolSpec::Scaled { factor, symbol } => factor * symbol.eval(z),
        }
    }

    /// Polynomial degree of φ, `None` when φ is not a polynomial.
    pub fn exact_degree(&self) -> Option<usize> {
        match self {
            SymbolSpec::Constant { .. } => Some(0),
            SymbolSpec::Monomial { m } => Some(*m),
            SymbolSpec::ScaledShift { c } => Some(if *c == Complex64::new(0.0, 0.0) { 0 } else { 1 }),
            SymbolSpec::Polynomial { coeffs } => {
                Some(coeffs.iter().rposition(|c| *c != Complex64::new(0.0, 0.0)).unwrap_or(0))
            }
            SymbolSpec::Blaschke { zeros, .. } => {
                if zeros.iter().all(|z| z.zero == Complex64::new(0.0, 0.0)) {
                    Some(zeros.iter().map(|z| z.multiplicity).sum())
                } else {
                    None
                }
            }
            SymbolSpec::Scaled { factor, symbol } => {
                if *factor == Complex64::new(0.0, 0.0) {
                    Some(0)
                } else {
                    symbol.exact_degree()
                }
            }
        }
    }

    /// `s` when φ = c·θ with θ inner and |c| = s. Then ‖φⁿ f‖ = sⁿ‖f‖.
    pub fn inner_scale(&self) -> Option<f64> {
        match self {
            SymbolSpec::Constant { c } | SymbolSpec::ScaledShift { c } => Some(c.norm()),
            SymbolSpec::Monomial { .. } | SymbolSpec::Blaschke { .. } => Some(1.0),
            SymbolSpec::Polynomial { coeffs } => {
                let mut nonzero = coeffs.iter().filter(|c| **c != Complex64::new(0.0, 0.0));
                match (nonzero.next(), nonzero.next()) {
                    (Some(c), None) => Some(c.norm()),
                    (None, _) => Some(0.0),
                    _ => None,
                }
            }
            SymbolSpec::Scaled { factor, symbol } => symbol.inner_scale().map(|s| s * factor.norm()),
        }
    }

    /// True for Blaschke products, monomials, unimodular multiples of z^k
    /// and unimodular constants.
    pub fn structurally_inner(&self) -> bool {
        match self.inner_scale() {
            Some(s) => (s - 1.0).abs() < UNIMODULAR_TOL,
            None => false,
        }
    }

    /// Taylor expansion of φ truncated at `order`.
    pub fn expand(&self, order: usize) -> TruncatedSeries {
        match self {
            SymbolSpec::Constant { c } => TruncatedSeries::constant(*c).with_order(order),
            SymbolSpec::Monomial { m } => TruncatedSeries::monomial(*m).with_order(order),
            SymbolSpec::ScaledShift { c } => TruncatedSeries::monomial(1).scale(*c).with_order(order),
            SymbolSpec::Polynomial { coeffs } => {
                let mut v = coeffs.clone();
                v.resize(order + 1, Complex64::new(0.0, 0.0));
                TruncatedSeries::from_coeffs(v).expect("validated coefficients")
            }
            SymbolSpec::Blaschke { zeros, prefactor } => {
                let mut acc = TruncatedSeries::constant(*prefactor).with_order(order);
                for bz in zeros {
                    let factor = blaschke_factor_series(bz.zero, order);
                    for _ in 0..bz.multiplicity {
                        acc = acc.mul(&factor, order);
                    }
                }
                acc
            }
            SymbolSpec::Scaled { factor, symbol } => symbol.expand(order).scale(*factor),
        }
    }
}

/// (|a|/a)(a − z)/(1 − ā z), or z when a = 0.
fn blaschke_factor(a: Complex64, z: Complex64) -> Complex64 {
    if a == Complex64::new(0.0, 0.0) {
        return z;
    }
    let phase = a.norm() / a;
    phase * (a - z) / (Complex64::new(1.0, 0.0) - a.conj() * z)
}

/// Taylor coefficients (|a|/a)[a − (1 − |a|²) Σ_{n≥1} ā^{n−1} zⁿ].
fn blaschke_factor_series(a: Complex64, order: usize) -> TruncatedSeries {
    if a == Complex64::new(0.0, 0.0) {
        return TruncatedSeries::monomial(1).with_order(order);
    }
    let phase = a.norm() / a;
    let damp = 1.0 - a.norm_sqr();
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(phase * a);
    let mut pow = Complex64::new(1.0, 0.0);
    for _ in 1..=order {
        coeffs.push(-phase * damp * pow);
        pow *= a.conj();
    }
    TruncatedSeries::from_coeffs(coeffs).expect("finite Blaschke coefficients")
}

/// A symbol expanded to a fixed truncation order.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolRealization {
    pub spec: SymbolSpec,
    pub series: TruncatedSeries,
    pub sup_norm_estimate: f64,
    pub exactly_inner: bool,
}

impl SymbolRealization {
    pub fn order(&self) -> usize {
        self.series.order()
    }

    /// Closed-form evaluation of φ.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.spec.eval(z)
    }
}

/// Smallest power-of-two grid clearing the anti-aliasing bound `M > 4N`,
/// and never below 1024 points.
pub fn default_grid_size(order: usize) -> usize {
    (4 * order + 1).next_power_of_two().max(1024)
}

pub fn realize(spec: &SymbolSpec, order: usize) -> Result<SymbolRealization> {
    spec.validate()?;
    let series = spec.expand(order);
    let sup = match spec {
        SymbolSpec::Constant { c } => c.norm(),
        _ => {
            let grid = BoundaryGrid::new(default_grid_size(order))?;
            max_modulus(spec, &grid)
        }
    };
    Ok(SymbolRealization { spec: spec.clone(), series, sup_norm_estimate: sup, exactly_inner: spec.structurally_inner() })
}

fn max_modulus(spec: &SymbolSpec, grid: &BoundaryGrid) -> f64 {
    grid.points().iter().map(|p| spec.eval(*p).norm()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Evaluation {
    /// Closed-form rational or polynomial evaluation.
    Exact,
    /// Evaluation of the truncated Taylor series.
    Series,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InnernessVerdict {
    Inner,
    NonInner,
    Inconclusive,
}

/// Boundary-modulus evidence for or against innerness.
///
/// `sub_unit_fraction` is the share of grid points with `|φ| < 1 − tol`; it
/// is a finite surrogate for the measure of the set where `|φ| < 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InnernessReport {
    pub max_deviation: f64,
    pub sub_unit_fraction: f64,
    pub verdict: InnernessVerdict,
    pub tolerance: f64,
    pub evaluation: Evaluation,
    pub grid_size: usize,
}

pub fn innerness_test(
    sym: &SymbolRealization,
    grid: &BoundaryGrid,
    evaluation: Evaluation,
    tolerance: Option<f64>,
) -> Result<InnernessReport> {
    if grid.size() <= 4 * sym.order() {
        return Err(Error::Precondition(format!(
            "grid of {} points does not exceed 4N = {}",
            grid.size(),
            4 * sym.order()
        )));
    }
    let tol = tolerance.unwrap_or(match evaluation {
        Evaluation::Exact => INNER_TOL_EXACT,
        Evaluation::Series => INNER_TOL_SERIES,
    });
    let moduli: Vec<f64> = match evaluation {
        Evaluation::Exact => grid.points().iter().map(|p| sym.spec.eval(*p).norm()).collect(),
        Evaluation::Series => crate::hardy::boundary_samples(&sym.series, grid).values.iter().map(|v| v.norm()).collect(),
    };
    let max_deviation = moduli.iter().map(|m| (m - 1.0).abs()).fold(0.0, f64::max);
    let below = moduli.iter().filter(|m| **m < 1.0 - tol).count();
    let verdict = if max_deviation < tol {
        InnernessVerdict::Inner
    } else if max_deviation < INCONCLUSIVE_FACTOR * tol {
        InnernessVerdict::Inconclusive
    } else {
        InnernessVerdict::NonInner
    };
    Ok(InnernessReport {
        max_deviation,
        sub_unit_fraction: below as f64 / grid.size() as f64,
        verdict,
        tolerance: tol,
        evaluation,
        grid_size: grid.size(),
    })
}

/// Maximum of |φ| over a boundary grid, with the grid size it was taken on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupNormEstimate {
    pub value: f64,
    pub grid_size: usize,
}

/// By the maximum principle the boundary maximum bounds |φ| on all of 𝔻.
pub fn sup_norm_estimate(sym: &SymbolRealization, grid: &BoundaryGrid) -> SupNormEstimate {
    SupNormEstimate { value: max_modulus(&sym.spec, grid), grid_size: grid.size() }
}
