//! Structural diagnostics: reproducing kernels, zeros in the disk, numerical
//! span rank of an orbit, residue-class splits and the image of φ against
//! the unit circle.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hardy::{BoundaryGrid, TruncatedSeries};
use crate::json;
use crate::linalg::svd_full_right;
use crate::orbit::Orbit;
use crate::roots::polynomial_roots;
use crate::symbol::SymbolRealization;

/// Singular values below `RANK_TOL · σ_max` count as zero.
pub const RANK_TOL: f64 = 1e-10;
/// Slack on `min |φ| ≤ 1 ≤ max |φ|` in [`image_circle_intersection`].
pub const CIRCLE_TOL: f64 = 1e-9;

/// `K_{z₀}` truncated at order `N`: coefficients `conj(z₀)ⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelVector {
    pub center: Complex64,
    pub series: TruncatedSeries,
}

pub fn reproducing_kernel(z0: Complex64, order: usize) -> Result<KernelVector> {
    if !(z0.norm() < 1.0) {
        return Err(Error::Domain(format!("kernel center {z0} is not inside the unit disk")));
    }
    let w = z0.conj();
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut p = Complex64::new(1.0, 0.0);
    for _ in 0..=order {
        coeffs.push(p);
        p *= w;
    }
    Ok(KernelVector { center: z0, series: TruncatedSeries::from_coeffs(coeffs)? })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelWitness {
    pub max_pairing: f64,
    /// Largest orbit norm, the scale for judging `max_pairing`.
    pub max_norm: f64,
}

/// `max_n |⟨φⁿ f, K_{z₀}⟩|` over the orbit.
pub fn kernel_orthogonality_witness(orb: &Orbit, z0: Complex64) -> Result<KernelWitness> {
    let k = reproducing_kernel(z0, orb.order)?;
    let max_pairing = orb.elements.iter().map(|e| e.inner(&k.series).norm()).fold(0.0, f64::max);
    let max_norm = orb.norms.iter().copied().fold(0.0, f64::max);
    Ok(KernelWitness { max_pairing, max_norm })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiskZeros {
    #[serde(with = "json::complex_vec")]
    pub inside: Vec<Complex64>,
    /// Roots with `1 − margin ≤ |root| ≤ 1 + margin`.
    #[serde(with = "json::complex_vec")]
    pub boundary_ambiguous: Vec<Complex64>,
    pub margin: f64,
}

/// Roots of `f` with modulus below `1 − margin`; roots within `margin` of
/// the circle are reported separately.
pub fn zeros_in_disk(f: &TruncatedSeries, margin: f64) -> Result<DiskZeros> {
    if !(margin > 0.0 && margin < 0.5) {
        return Err(Error::Precondition(format!("margin {margin} must lie in (0, 0.5)")));
    }
    let roots = polynomial_roots(f.coeffs())?;
    let mut inside = Vec::new();
    let mut boundary_ambiguous = Vec::new();
    for r in roots {
        let m = r.norm();
        if m < 1.0 - margin {
            inside.push(r);
        } else if m <= 1.0 + margin {
            boundary_ambiguous.push(r);
        }
    }
    let by_modulus = |a: &Complex64, b: &Complex64| a.norm().total_cmp(&b.norm()).then(a.arg().total_cmp(&b.arg()));
    inside.sort_by(by_modulus);
    boundary_ambiguous.sort_by(by_modulus);
    Ok(DiskZeros { inside, boundary_ambiguous, margin })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CyclicityReport {
    pub rank: usize,
    pub span_dimension_deficit: usize,
    /// Descending singular values of the orbit's analysis matrix.
    pub singular_values: Vec<f64>,
    pub rank_tolerance: f64,
    /// Unit vector orthogonal to every orbit element, when one exists.
    #[serde(with = "optional_coeffs")]
    pub orthogonal_complement_witness: Option<TruncatedSeries>,
}

mod optional_coeffs {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Coeffs(#[serde(with = "json::complex_vec")] Vec<Complex64>);

    pub fn serialize<S: Serializer>(v: &Option<TruncatedSeries>, s: S) -> std::result::Result<S::Ok, S::Error> {
        v.as_ref().map(|t| Coeffs(t.coeffs().to_vec())).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<TruncatedSeries>, D::Error> {
        match Option::<Coeffs>::deserialize(d)? {
            None => Ok(None),
            Some(Coeffs(c)) => TruncatedSeries::from_coeffs(c).map(Some).map_err(serde::de::Error::custom),
        }
    }
}

pub fn cyclicity_rank(orb: &Orbit) -> Result<CyclicityReport> {
    cyclicity_rank_with_tolerance(orb, RANK_TOL)
}

/// Numerical rank of the `(K+1) × (N+1)` matrix whose rows are the
/// conjugated orbit coefficients, so that its kernel is the orthogonal
/// complement of the orbit span.
pub fn cyclicity_rank_with_tolerance(orb: &Orbit, rank_tol: f64) -> Result<CyclicityReport> {
    let dim = orb.order + 1;
    let analysis = DMatrix::from_fn(orb.len(), dim, |n, j| orb.elements[n].coeff(j).conj());
    let (sigma, v) = svd_full_right(&analysis)?;
    let top = sigma.first().copied().unwrap_or(0.0);
    let rank = if top == 0.0 { 0 } else { sigma.iter().filter(|s| **s > rank_tol * top).count() };
    let deficit = dim - rank;
    let witness = (deficit > 0).then(|| complement_witness(&v, rank));
    Ok(CyclicityReport {
        rank,
        span_dimension_deficit: deficit,
        singular_values: sigma,
        rank_tolerance: rank_tol,
        orthogonal_complement_witness: witness,
    })
}

/// Projects each monomial onto the numerical kernel (columns `rank..` of `v`)
/// and keeps the lowest-index one with the largest projection. A monomial
/// lying in the kernel up to rounding is returned exactly.
fn complement_witness(v: &DMatrix<Complex64>, rank: usize) -> TruncatedSeries {
    let dim = v.nrows();
    let kernel = v.columns(rank, dim - rank);
    let weights: Vec<f64> = (0..dim).map(|k| kernel.row(k).norm_squared()).collect();
    let best = weights.iter().copied().fold(0.0, f64::max);
    let k = weights.iter().position(|w| *w >= best - 1e-12).unwrap_or(0);
    if weights[k] >= 1.0 - 1e-12 {
        return TruncatedSeries::monomial(k).with_order(dim - 1);
    }
    let proj = &kernel * kernel.row(k).adjoint();
    let scale = proj.norm();
    let coeffs = proj.iter().map(|c| c / scale).collect();
    TruncatedSeries::from_coeffs(coeffs).expect("finite projection")
}

/// Coefficients of `g` split by index modulo `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidueClassDecomposition {
    pub modulus: usize,
    /// `projections[r]` keeps the coefficients at indices `≡ r (mod m)`.
    pub projections: Vec<TruncatedSeries>,
}

pub fn residue_projection(g: &TruncatedSeries, m: usize) -> Result<ResidueClassDecomposition> {
    if m < 2 {
        return Err(Error::Precondition(format!("residue modulus must be at least 2, got {m}")));
    }
    let zero = Complex64::new(0.0, 0.0);
    let projections = (0..m)
        .map(|r| {
            let coeffs = g.coeffs().iter().enumerate().map(|(i, c)| if i % m == r { *c } else { zero }).collect();
            TruncatedSeries::from_coeffs(coeffs).expect("finite coefficients")
        })
        .collect();
    Ok(ResidueClassDecomposition { modulus: m, projections })
}

/// Class `r` with every coefficient outside it exactly zero, or `None` when
/// `g` is zero or straddles classes.
pub fn residue_class_of(g: &TruncatedSeries, m: usize) -> Option<usize> {
    let zero = Complex64::new(0.0, 0.0);
    let mut class = None;
    for (i, c) in g.coeffs().iter().enumerate() {
        if *c != zero {
            match class {
                None => class = Some(i % m),
                Some(r) if r != i % m => return None,
                _ => {}
            }
        }
    }
    class
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImageCircleReport {
    pub min_modulus: f64,
    pub max_modulus: f64,
    #[serde(rename = "intersects_T")]
    pub intersects_t: bool,
    pub radial_levels: usize,
    pub angular_points: usize,
}

/// Samples `|φ(r e^{iθ})|` on circles `r = i / L`, `i = 0..=L`, with the
/// angles of `grid`. The outermost circle is the boundary itself, so a
/// symbol whose modulus only reaches 1 in the radial limit still registers.
pub fn image_circle_intersection(
    sym: &SymbolRealization,
    grid: &BoundaryGrid,
    radial_levels: usize,
) -> Result<ImageCircleReport> {
    if radial_levels < 2 {
        return Err(Error::Precondition(format!("need at least 2 radial levels, got {radial_levels}")));
    }
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for i in 0..=radial_levels {
        let r = i as f64 / radial_levels as f64;
        for p in grid.points() {
            let m = sym.eval(p * r).norm();
            lo = lo.min(m);
            hi = hi.max(m);
            if i == 0 {
                break;
            }
        }
    }
    Ok(ImageCircleReport {
        min_modulus: lo,
        max_modulus: hi,
        intersects_t: lo <= 1.0 + CIRCLE_TOL && hi >= 1.0 - CIRCLE_TOL,
        radial_levels,
        angular_points: grid.size(),
    })
}
