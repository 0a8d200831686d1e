//! Frame sums, Gram matrices and finite sections of the frame operator
//! `S g = Σ ⟨g, φⁿ f⟩ φⁿ f`.
//!
//! All bounds here are finite-section estimates carrying their `(N, K)`
//! provenance; they are not bounds of the infinite system.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hardy::TruncatedSeries;
use crate::linalg::hermitian_eigenvalues;
use crate::orbit::{orbit, Orbit};
use crate::symbol::{realize, SymbolSpec};

/// Relative gap `|A − B| < TIGHT_TOL · B` reported as tight.
pub const TIGHT_TOL: f64 = 1e-8;
/// `A < ZERO_REL_TOL · B` is reported as numerically zero.
pub const ZERO_REL_TOL: f64 = 1e-12;

/// `G_{mn} = ⟨φⁿ f, φᵐ f⟩` for an orbit of length `K + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    pub entries: DMatrix<Complex64>,
}

/// Compression of `S` to `span{z⁰..z^N}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSection {
    pub matrix: DMatrix<Complex64>,
    pub orbit_len: usize,
    pub order: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameBounds {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "A_est")]
    pub a_est: f64,
    #[serde(rename = "B_est")]
    pub b_est: f64,
    pub tight: bool,
    pub numerically_zero_lower: bool,
}

/// `Σ_{n=0}^{K} |⟨g, φⁿ f⟩|²`.
pub fn frame_sum(g: &TruncatedSeries, orb: &Orbit) -> f64 {
    let mut acc = 0.0;
    for e in &orb.elements {
        acc += g.inner(e).norm_sqr();
    }
    acc
}

/// Cumulative frame sums; entry `k` sums powers `0..=k`.
pub fn partial_frame_sums(g: &TruncatedSeries, orb: &Orbit) -> Vec<f64> {
    let mut acc = 0.0;
    orb.elements
        .iter()
        .map(|e| {
            acc += g.inner(e).norm_sqr();
            acc
        })
        .collect()
}

pub fn gram(orb: &Orbit) -> GramMatrix {
    let len = orb.len();
    let mut entries = DMatrix::zeros(len, len);
    for m in 0..len {
        for n in m..len {
            let v = orb.elements[n].inner(&orb.elements[m]);
            entries[(m, n)] = v;
            entries[(n, m)] = v.conj();
        }
        entries[(m, m)] = Complex64::new(entries[(m, m)].re, 0.0);
    }
    GramMatrix { entries }
}

/// `S = Σ_n v_n v_n*` with `v_n` the coefficient vector of `φⁿ f`.
pub fn frame_section(orb: &Orbit) -> FrameSection {
    let dim = orb.order + 1;
    let rows: Vec<Vec<Complex64>> = (0..dim)
        .into_par_iter()
        .map(|i| {
            (i..dim)
                .map(|j| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for e in &orb.elements {
                        acc += e.coeff(i) * e.coeff(j).conj();
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let mut matrix = DMatrix::zeros(dim, dim);
    for (i, row) in rows.into_iter().enumerate() {
        for (off, v) in row.into_iter().enumerate() {
            let j = i + off;
            if i == j {
                matrix[(i, i)] = Complex64::new(v.re, 0.0);
            } else {
                matrix[(i, j)] = v;
                matrix[(j, i)] = v.conj();
            }
        }
    }
    FrameSection { matrix, orbit_len: orb.len(), order: orb.order }
}

pub fn frame_bounds_estimate(sec: &FrameSection) -> Result<FrameBounds> {
    frame_bounds_with_tolerance(sec, ZERO_REL_TOL)
}

/// Extremal eigenvalues of the section, clamped below at zero.
pub fn frame_bounds_with_tolerance(sec: &FrameSection, zero_rel_tol: f64) -> Result<FrameBounds> {
    let eig = hermitian_eigenvalues(&sec.matrix)?;
    let b_est = eig.last().copied().unwrap_or(0.0).max(0.0);
    let a_est = eig.first().copied().unwrap_or(0.0).max(0.0).min(b_est);
    Ok(FrameBounds {
        n: sec.order,
        k: sec.orbit_len - 1,
        a_est,
        b_est,
        tight: (a_est - b_est).abs() < TIGHT_TOL * b_est,
        numerically_zero_lower: a_est < zero_rel_tol * b_est || b_est == 0.0,
    })
}

/// `S g = Σ ⟨g, φⁿ f⟩ φⁿ f` over the orbit.
pub fn apply_frame_operator(g: &TruncatedSeries, orb: &Orbit) -> Result<TruncatedSeries> {
    if g.degree().is_some_and(|d| d > orb.order) {
        return Err(Error::Precondition(format!("deg(g) exceeds the truncation order {}", orb.order)));
    }
    let mut acc = TruncatedSeries::zero(orb.order);
    for e in &orb.elements {
        acc = &acc + &e.scale(g.inner(e));
    }
    Ok(acc)
}

/// One [`FrameBounds`] per `(N, K)` pair, `N` outermost.
pub fn bounds_vs_truncation(
    spec: &SymbolSpec,
    f: &TruncatedSeries,
    orders: &[usize],
    powers: &[usize],
) -> Result<Vec<FrameBounds>> {
    check_ascending(orders, "truncation orders")?;
    check_ascending(powers, "orbit lengths")?;
    let k_max = *powers.last().expect("nonempty");
    let mut table = Vec::with_capacity(orders.len() * powers.len());
    for &n in orders {
        let sym = realize(spec, n)?;
        let full = orbit(&sym, f, k_max, n);
        for &k in powers {
            let prefix = Orbit {
                elements: full.elements[..=k].to_vec(),
                norms: full.norms[..=k].to_vec(),
                truncated: full.truncated[..=k].to_vec(),
                ..full.clone()
            };
            table.push(frame_bounds_estimate(&frame_section(&prefix))?);
        }
    }
    Ok(table)
}

fn check_ascending(list: &[usize], what: &str) -> Result<()> {
    if list.is_empty() {
        return Err(Error::Precondition(format!("{what} list is empty")));
    }
    if list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition(format!("{what} must be strictly ascending")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eigenvalues;
    use crate::symbol::SymbolRealization;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn one() -> TruncatedSeries {
        TruncatedSeries::constant(c(1.0, 0.0))
    }

    fn sym(spec: SymbolSpec, order: usize) -> SymbolRealization {
        realize(&spec, order).unwrap()
    }

    fn shift_orbit(k: usize, n: usize) -> Orbit {
        orbit(&sym(SymbolSpec::Monomial { m: 1 }, n), &one(), k, n)
    }

    fn half_shift_orbit(k: usize, n: usize) -> Orbit {
        orbit(&sym(SymbolSpec::ScaledShift { c: c(0.5, 0.0) }, n), &one(), k, n)
    }

    #[test]
    fn frame_sum_examples() {
        let half = orbit(&sym(SymbolSpec::constant(0.5), 0), &one(), 30, 3);
        let s = frame_sum(&one(), &half);
        assert!((s - 4.0 / 3.0).abs() <= 4f64.powi(-30));

        let hs = half_shift_orbit(20, 20);
        for k in 0..=20 {
            assert_eq!(frame_sum(&TruncatedSeries::monomial(k), &hs), 4f64.powi(-(k as i32)));
        }

        let sh = shift_orbit(6, 6);
        let g = TruncatedSeries::from_coeffs(vec![c(1.0, 2.0), c(-0.5, 0.0), c(0.0, 3.0)]).unwrap();
        assert!((frame_sum(&g, &sh) - g.norm_sqr()).abs() < 1e-14);
    }

    #[test]
    fn partial_sums_examples() {
        let u = orbit(&sym(SymbolSpec::Constant { c: Complex64::cis(std::f64::consts::FRAC_PI_4) }, 0), &one(), 9, 2);
        let sums = partial_frame_sums(&one(), &u);
        for (k, s) in sums.iter().enumerate() {
            assert!((s - (k + 1) as f64).abs() < 1e-12);
        }

        let half = orbit(&sym(SymbolSpec::constant(0.5), 0), &one(), 10, 2);
        let sums = partial_frame_sums(&one(), &half);
        for k in 1..sums.len() {
            assert_eq!(sums[k] - sums[k - 1], 4f64.powi(-(k as i32)));
        }
        assert_eq!(*sums.last().unwrap(), frame_sum(&one(), &half));

        let z2 = orbit(&sym(SymbolSpec::Monomial { m: 2 }, 8), &one(), 4, 8);
        assert!(partial_frame_sums(&TruncatedSeries::monomial(3), &z2).iter().all(|s| *s == 0.0));
    }

    #[test]
    fn gram_examples() {
        assert_eq!(gram(&shift_orbit(2, 2)).entries, DMatrix::identity(3, 3));
        let half = orbit(&sym(SymbolSpec::constant(0.5), 0), &one(), 4, 2);
        let g = gram(&half).entries;
        for m in 0..5 {
            for n in 0..5 {
                assert_eq!(g[(m, n)], c(2f64.powi(-((m + n) as i32)), 0.0));
            }
        }
        let z2 = orbit(&sym(SymbolSpec::Monomial { m: 2 }, 8), &one(), 4, 8);
        assert_eq!(gram(&z2).entries, DMatrix::identity(5, 5));
    }

    #[test]
    fn section_examples() {
        assert_eq!(frame_section(&shift_orbit(8, 8)).matrix, DMatrix::identity(9, 9));
        assert_eq!(frame_section(&shift_orbit(12, 8)).matrix, DMatrix::identity(9, 9));

        let s = frame_section(&half_shift_orbit(10, 10)).matrix;
        for i in 0..=10 {
            for j in 0..=10 {
                let want = if i == j { 4f64.powi(-(i as i32)) } else { 0.0 };
                assert_eq!(s[(i, j)], c(want, 0.0));
            }
        }

        let z2 = orbit(&sym(SymbolSpec::Monomial { m: 2 }, 10), &one(), 3, 10);
        let s = frame_section(&z2).matrix;
        for i in 0..=10 {
            let want = if i % 2 == 0 && i <= 6 { 1.0 } else { 0.0 };
            assert_eq!(s[(i, i)], c(want, 0.0));
        }
    }

    #[test]
    fn bounds_examples() {
        let b = frame_bounds_estimate(&frame_section(&shift_orbit(16, 16))).unwrap();
        assert!((b.a_est - 1.0).abs() < 1e-12 && (b.b_est - 1.0).abs() < 1e-12);
        assert!(b.tight);
        assert_eq!((b.n, b.k), (16, 16));

        for n in [4usize, 8, 12] {
            let b = frame_bounds_estimate(&frame_section(&half_shift_orbit(n, n))).unwrap();
            assert!((b.a_est - 4f64.powi(-(n as i32))).abs() < 1e-12);
            assert!((b.b_est - 1.0).abs() < 1e-12);
            assert!(!b.tight);
        }

        let z2 = orbit(&sym(SymbolSpec::Monomial { m: 2 }, 16), &one(), 16, 16);
        let b = frame_bounds_estimate(&frame_section(&z2)).unwrap();
        assert_eq!(b.a_est, 0.0);
        assert!(b.numerically_zero_lower);
    }

    #[test]
    fn frame_operator_examples() {
        let sh = shift_orbit(6, 6);
        for k in 0..=6 {
            let g = TruncatedSeries::monomial(k);
            assert_eq!(apply_frame_operator(&g, &sh).unwrap(), g.with_order(6));
        }

        let z2 = orbit(&sym(SymbolSpec::Monomial { m: 2 }, 8), &one(), 4, 8);
        assert!(apply_frame_operator(&TruncatedSeries::monomial(1), &z2).unwrap().is_zero());

        let half = orbit(&sym(SymbolSpec::constant(0.5), 0), &one(), 12, 3);
        let out = apply_frame_operator(&one(), &half).unwrap();
        let factor: f64 = (0..=12).map(|n| 4f64.powi(-n)).sum();
        assert!((out.coeff(0) - c(factor, 0.0)).norm() < 1e-15);
        assert!((factor - 4.0 / 3.0).abs() < 4f64.powi(-12));

        assert!(matches!(apply_frame_operator(&TruncatedSeries::monomial(9), &z2), Err(Error::Precondition(_))));
    }

    #[test]
    fn truncation_table() {
        let t = bounds_vs_truncation(&SymbolSpec::Monomial { m: 1 }, &one(), &[4, 8], &[8, 12]).unwrap();
        assert_eq!(t.len(), 4);
        assert!(t.iter().all(|b| (b.a_est - 1.0).abs() < 1e-12 && b.tight));

        let t = bounds_vs_truncation(&SymbolSpec::ScaledShift { c: c(0.5, 0.0) }, &one(), &[4, 8, 12], &[12]).unwrap();
        for (b, n) in t.iter().zip([4, 8, 12]) {
            assert!((b.a_est - 4f64.powi(-n)).abs() < 1e-12);
        }

        let ks = [4usize, 16, 64, 256];
        let t = bounds_vs_truncation(&SymbolSpec::Constant { c: Complex64::cis(1.0) }, &one(), &[4], &ks).unwrap();
        for (b, k) in t.iter().zip(ks) {
            assert!((b.b_est - (k + 1) as f64).abs() < 1e-9 * k as f64);
        }

        assert!(bounds_vs_truncation(&SymbolSpec::Monomial { m: 1 }, &one(), &[], &[2]).is_err());
        assert!(bounds_vs_truncation(&SymbolSpec::Monomial { m: 1 }, &one(), &[4, 2], &[2]).is_err());
    }

    fn arb_series(len: usize) -> impl Strategy<Value = TruncatedSeries> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len)
            .prop_map(|v| TruncatedSeries::from_coeffs(v.into_iter().map(|(re, im)| c(re, im)).collect()).unwrap())
    }

    fn arb_orbit() -> impl Strategy<Value = Orbit> {
        (prop::collection::vec((-0.8f64..0.8, -0.8f64..0.8), 1..4), arb_series(3), 2usize..12, 4usize..16).prop_map(
            |(p, f, k, n)| {
                let spec = SymbolSpec::Polynomial { coeffs: p.into_iter().map(|(re, im)| c(re, im)).collect() };
                orbit(&realize(&spec, n).unwrap(), &f, k, n)
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn quadratic_form_and_sandwich(orb in arb_orbit(), g in arb_series(16)) {
            let g = g.with_order(orb.order);
            let sec = frame_section(&orb);
            let v = nalgebra::DVector::from_iterator(orb.order + 1, g.coeffs().iter().copied());
            let q = (v.adjoint() * &sec.matrix * &v)[(0, 0)];
            let fs = frame_sum(&g, &orb);
            prop_assert!((q.re - fs).abs() <= 1e-10 * fs.max(1e-300) + 1e-14);
            prop_assert!(q.im.abs() <= 1e-10 * fs.max(1e-12));

            let b = frame_bounds_estimate(&sec).unwrap();
            prop_assert!(b.a_est <= b.b_est);
            let n2 = g.norm_sqr();
            prop_assert!(b.a_est * n2 <= fs + 1e-10);
            prop_assert!(fs <= b.b_est * n2 + 1e-10);
        }

        #[test]
        fn gram_is_hermitian_psd(orb in arb_orbit()) {
            let g = gram(&orb).entries;
            prop_assert!((&g - g.adjoint()).iter().all(|d| d.norm() <= 1e-12));
            let eig = hermitian_eigenvalues(&g).unwrap();
            let top = eig.last().copied().unwrap();
            prop_assert!(eig[0] >= -1e-10 * top);
        }

        #[test]
        fn frame_operator_matches_section(orb in arb_orbit(), g in arb_series(16)) {
            let g = g.with_order(orb.order);
            let sec = frame_section(&orb);
            let v = nalgebra::DVector::from_iterator(orb.order + 1, g.coeffs().iter().copied());
            let sv = &sec.matrix * v;
            let sg = apply_frame_operator(&g, &orb).unwrap();
            for (a, b) in sv.iter().zip(sg.coeffs()) {
                prop_assert!((a - b).norm() <= 1e-10 * (1.0 + b.norm()));
            }
        }

        #[test]
        fn bounds_monotone_in_orbit_length(p in prop::collection::vec((-0.9f64..0.9, -0.9f64..0.9), 1..4),
                                           f in arb_series(3)) {
            let spec = SymbolSpec::Polynomial { coeffs: p.into_iter().map(|(re, im)| c(re, im)).collect() };
            let ks: Vec<usize> = (1..=12).collect();
            let t = bounds_vs_truncation(&spec, &f, &[8], &ks).unwrap();
            for w in t.windows(2) {
                prop_assert!(w[1].b_est >= w[0].b_est - 1e-12 * w[1].b_est);
                prop_assert!(w[1].a_est >= w[0].a_est - 1e-12 * w[1].b_est);
            }
        }

        #[test]
        fn gram_and_section_share_spectrum(p in prop::collection::vec((-0.9f64..0.9, -0.9f64..0.9), 1..3),
                                           f in arb_series(2)) {
            let spec = SymbolSpec::Polynomial { coeffs: p.into_iter().map(|(re, im)| c(re, im)).collect() };
            let n = 12;
            let sym = realize(&spec, n).unwrap();
            let deg_phi = spec.exact_degree().unwrap().max(1);
            let k = (n - f.degree().unwrap_or(0)) / deg_phi;
            let orb = orbit(&sym, &f, k, n);
            prop_assert!(orb.truncated.iter().all(|t| !t));
            let mut ge = hermitian_eigenvalues(&gram(&orb).entries).unwrap();
            let mut se = hermitian_eigenvalues(&frame_section(&orb).matrix).unwrap();
            ge.reverse();
            se.reverse();
            let top = ge[0].max(1e-300);
            for (a, b) in ge.iter().zip(&se) {
                if *a > 1e-6 * top {
                    prop_assert!((a - b).abs() <= 1e-8 * a);
                }
            }
        }
    }
}
