//! Dense complex linear algebra on top of nalgebra.

use nalgebra::{DMatrix, SymmetricEigen, SVD};
use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_SWEEPS_PER_ROW: usize = 200;

fn diagnostics(m: &DMatrix<Complex64>) -> String {
    let finite = m.iter().all(|c| c.re.is_finite() && c.im.is_finite());
    format!("{}x{} matrix, frobenius norm {:e}, all entries finite: {finite}", m.nrows(), m.ncols(), m.norm())
}

fn check_finite(m: &DMatrix<Complex64>, what: &str) -> Result<()> {
    if m.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::Computation(format!("{what}: {}", diagnostics(m))))
    }
}

/// Eigenvalues (ascending) and matching eigenvectors of a Hermitian matrix.
pub fn hermitian_eigen(m: &DMatrix<Complex64>) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
    check_finite(m, "eigensolver input is not finite")?;
    let n = m.nrows();
    if n == 0 {
        return Ok((vec![], DMatrix::zeros(0, 0)));
    }
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, MAX_SWEEPS_PER_ROW * n)
        .ok_or_else(|| Error::Computation(format!("Hermitian eigensolver did not converge: {}", diagnostics(m))))?;
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, idx[c])]);
    Ok((values, vectors))
}

pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    Ok(hermitian_eigen(m)?.0)
}

/// Singular values (descending) and the full set of right singular vectors
/// as columns of a `ncols × ncols` matrix.
///
/// Wide inputs are padded with zero rows so that null-space directions come
/// back as well.
pub fn svd_full_right(a: &DMatrix<Complex64>) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
    check_finite(a, "SVD input is not finite")?;
    let cols = a.ncols();
    let rows = a.nrows().max(cols);
    let padded = DMatrix::from_fn(rows, cols, |r, c| if r < a.nrows() { a[(r, c)] } else { Complex64::new(0.0, 0.0) });
    let svd = SVD::try_new(padded, false, true, f64::EPSILON, MAX_SWEEPS_PER_ROW * rows.max(1))
        .ok_or_else(|| Error::Computation(format!("SVD did not converge: {}", diagnostics(a))))?;
    let v_t = svd.v_t.ok_or_else(|| Error::Computation("SVD returned no right vectors".into()))?;
    let sigma: Vec<f64> = svd.singular_values.iter().copied().collect();
    // Rows of v_t are conjugated right singular vectors.
    let v = v_t.adjoint();
    Ok((sigma, v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eigenvalues_of_hermitian_2x2() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let m = DMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)]);
        let (vals, vecs) = hermitian_eigen(&m).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-14 && (vals[1] - 3.0).abs() < 1e-14);
        let v0 = vecs.column(0).into_owned();
        let r = &m * &v0 - v0 * c(vals[0], 0.0);
        assert!(r.norm() < 1e-14);
    }

    #[test]
    fn non_finite_input_is_a_computation_error() {
        let m = DMatrix::from_element(2, 2, c(f64::NAN, 0.0));
        assert!(matches!(hermitian_eigenvalues(&m), Err(Error::Computation(_))));
    }

    #[test]
    fn wide_svd_returns_null_space() {
        // One row in C^3: null space has dimension 2.
        let a = DMatrix::from_row_slice(1, 3, &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)]);
        let (sigma, v) = svd_full_right(&a).unwrap();
        assert_eq!(sigma.len(), 3);
        assert!((sigma[0] - 2f64.sqrt()).abs() < 1e-14);
        assert!(sigma[1].abs() < 1e-14 && sigma[2].abs() < 1e-14);
        for k in 1..3 {
            let col = v.column(k).into_owned();
            assert!((&a * col).norm() < 1e-14);
        }
    }
}
