//! Sampling on the unit circle.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::series::TruncatedSeries;
use crate::error::{Error, Result};

/// The `M`-th roots of unity `e^{2πij/M}`, `j = 0..M`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryGrid {
    points: Vec<Complex64>,
}

impl BoundaryGrid {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::Precondition("boundary grid needs at least one point".into()));
        }
        let points = (0..size).map(|j| Complex64::cis(TAU * j as f64 / size as f64)).collect();
        Ok(Self { points })
    }

    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }
}

/// Values of a series at the points of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySamples {
    pub grid: BoundaryGrid,
    pub values: Vec<Complex64>,
    /// Order of the series the values came from; decides aliasing.
    pub source_order: usize,
}

/// Root-mean-square of boundary samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryNorm {
    pub value: f64,
    /// `true` when `M > 2N`, the range where the quadrature reproduces the
    /// coefficient norm.
    pub exact: bool,
}

/// `values_j = Σ_n a_n e^{2πijn/M}`, computed by an inverse DFT of the
/// coefficients folded modulo `M`.
pub fn boundary_samples(f: &TruncatedSeries, grid: &BoundaryGrid) -> BoundarySamples {
    let m = grid.size();
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    for (n, a) in f.coeffs().iter().enumerate() {
        buf[n % m] += a;
    }
    FftPlanner::<f64>::new().plan_fft_inverse(m).process(&mut buf);
    BoundarySamples { grid: grid.clone(), values: buf, source_order: f.order() }
}

pub fn norm_via_boundary(samples: &BoundarySamples) -> BoundaryNorm {
    let m = samples.values.len();
    let mut acc = 0.0;
    for v in &samples.values {
        acc += v.norm_sqr();
    }
    BoundaryNorm { value: (acc / m as f64).sqrt(), exact: m > 2 * samples.source_order }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn grid_points_lie_on_circle() {
        let g = BoundaryGrid::new(1000).unwrap();
        assert!(g.points().iter().all(|p| (p.norm() - 1.0).abs() < 1e-15));
        assert!(BoundaryGrid::new(0).is_err());
    }

    #[test]
    fn samples_of_simple_functions() {
        let one = TruncatedSeries::constant(c(1.0, 0.0));
        let g8 = BoundaryGrid::new(8).unwrap();
        assert!(boundary_samples(&one, &g8).values.iter().all(|v| *v == c(1.0, 0.0)));

        let z = TruncatedSeries::monomial(1);
        let s = boundary_samples(&z, &BoundaryGrid::new(4).unwrap());
        let expected = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
        for (v, e) in s.values.iter().zip(&expected) {
            assert!((v - e).norm() < 1e-15, "{v} vs {e}");
        }

        let f = TruncatedSeries::from_real(&[1.0, -1.0]).unwrap();
        assert_eq!(boundary_samples(&f, &g8).values[0], c(0.0, 0.0));
    }

    #[test]
    fn samples_match_horner() {
        let f = TruncatedSeries::from_coeffs(vec![c(0.3, -0.1), c(1.0, 2.0), c(-0.5, 0.0), c(0.0, 0.7)]).unwrap();
        let grid = BoundaryGrid::new(13).unwrap();
        let s = boundary_samples(&f, &grid);
        for (p, v) in grid.points().iter().zip(&s.values) {
            assert!((f.eval_unchecked(*p) - v).norm() < 1e-14);
        }
    }

    #[test]
    fn quadrature_norm() {
        let one = TruncatedSeries::constant(c(1.0, 0.0));
        for m in [1, 2, 7, 64] {
            let n = norm_via_boundary(&boundary_samples(&one, &BoundaryGrid::new(m).unwrap()));
            assert!((n.value - 1.0).abs() < 1e-15);
        }

        let f = TruncatedSeries::from_real(&[1.0, -1.0]).unwrap();
        let n = norm_via_boundary(&boundary_samples(&f, &BoundaryGrid::new(8).unwrap()));
        assert!(n.exact);
        assert!((n.value - 2f64.sqrt()).abs() < 1e-15);

        // z² on two points aliases onto the constant 1.
        let n = norm_via_boundary(&boundary_samples(&TruncatedSeries::monomial(2), &BoundaryGrid::new(2).unwrap()));
        assert!(!n.exact);
        assert!((n.value - 1.0).abs() < 1e-15);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn discrete_parseval(coeffs in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..40), extra in 1usize..30) {
            let f = TruncatedSeries::from_coeffs(coeffs.into_iter().map(|(re, im)| c(re, im)).collect()).unwrap();
            let m = 2 * f.order() + extra;
            let bn = norm_via_boundary(&boundary_samples(&f, &BoundaryGrid::new(m).unwrap()));
            prop_assert!(bn.exact);
            prop_assert!((bn.value - f.norm()).abs() <= 1e-10 * f.norm().max(1e-300));
        }
    }
}
