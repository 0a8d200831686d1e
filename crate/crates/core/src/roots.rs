//! Roots of complex polynomials by simultaneous Aberth iteration, refined by
//! Newton steps on the original coefficients.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};

const NEWTON_STEPS: usize = 8;
const MAX_SWEEPS: usize = 500;
const CONVERGED: f64 = 1e-15;
const START_ANGLE: f64 = 0.4;

/// All roots of `Σ coeffs[k] zᵏ`, with multiplicity.
///
/// Trailing zero coefficients are dropped; a polynomial with every
/// coefficient zero is a domain error. Leading zeros (a root at the origin)
/// are returned as exact zeros.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let top = coeffs
        .iter()
        .rposition(|c| *c != Complex64::new(0.0, 0.0))
        .ok_or_else(|| Error::Domain("the zero polynomial has no well-defined roots".into()))?;
    let low = coeffs.iter().position(|c| *c != Complex64::new(0.0, 0.0)).unwrap_or(0);
    let mut roots = vec![Complex64::new(0.0, 0.0); low];
    let p = &coeffs[low..=top];
    let deg = p.len() - 1;
    if deg == 0 {
        return Ok(roots);
    }
    for z in aberth(p) {
        roots.push(polish(p, z));
    }
    if roots.iter().any(|z| !z.is_finite()) {
        return Err(Error::Computation(format!("root iteration diverged for a degree {deg} polynomial")));
    }
    Ok(roots)
}

/// Simultaneous Aberth-Ehrlich iteration from a perturbed circle of
/// starting points whose radius is the geometric mean root modulus.
fn aberth(p: &[Complex64]) -> Vec<Complex64> {
    let deg = p.len() - 1;
    let radius = (p[0].norm() / p[deg].norm()).powf(1.0 / deg as f64);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| Complex64::from_polar(radius, TAU * k as f64 / deg as f64 + START_ANGLE))
        .collect();
    for _ in 0..MAX_SWEEPS {
        let mut moved = 0.0f64;
        for k in 0..deg {
            let (v, dv) = eval_with_derivative(p, z[k]);
            if v == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = v / dv;
            let repulsion: Complex64 = (0..deg).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
                moved = moved.max(step.norm() / z[k].norm().max(f64::MIN_POSITIVE));
            }
        }
        if moved < CONVERGED {
            break;
        }
    }
    z
}

fn polish(p: &[Complex64], mut z: Complex64) -> Complex64 {
    for _ in 0..NEWTON_STEPS {
        let (v, dv) = eval_with_derivative(p, z);
        if v == Complex64::new(0.0, 0.0) || dv == Complex64::new(0.0, 0.0) {
            break;
        }
        let step = v / dv;
        if !step.is_finite() {
            break;
        }
        let next = z - step;
        // Only accept steps that do not increase the residual.
        if eval_with_derivative(p, next).0.norm() > v.norm() {
            break;
        }
        z = next;
    }
    z
}

fn eval_with_derivative(p: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut dv = Complex64::new(0.0, 0.0);
    for c in p.iter().rev() {
        dv = dv * z + v;
        v = v * z + c;
    }
    (v, dv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn from_roots(roots: &[Complex64]) -> Vec<Complex64> {
        let mut p = vec![c(1.0, 0.0)];
        for r in roots {
            let mut next = vec![c(0.0, 0.0); p.len() + 1];
            for (k, a) in p.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= a * r;
            }
            p = next;
        }
        p
    }

    fn matched(found: &[Complex64], want: &[Complex64], tol: f64) -> bool {
        let mut used = vec![false; found.len()];
        want.iter().all(|w| {
            let best = (0..found.len())
                .filter(|&i| !used[i])
                .min_by(|&a, &b| (found[a] - w).norm().total_cmp(&(found[b] - w).norm()));
            match best {
                Some(i) if (found[i] - w).norm() <= tol => {
                    used[i] = true;
                    true
                }
                _ => false,
            }
        })
    }

    #[test]
    fn simple_cases() {
        assert!(polynomial_roots(&[c(1.0, 0.0)]).unwrap().is_empty());
        let r = polynomial_roots(&[c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        assert!((r[0] - c(1.0, 0.0)).norm() < 1e-15);
        let r = polynomial_roots(&[c(-0.5, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(r, vec![c(0.5, 0.0)]);
        let r = polynomial_roots(&[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(r, vec![c(0.0, 0.0); 2]);
        assert!(matches!(polynomial_roots(&[c(0.0, 0.0); 3]), Err(Error::Domain(_))));
    }

    #[test]
    fn roots_of_unity() {
        let mut p = vec![c(0.0, 0.0); 17];
        p[0] = c(-1.0, 0.0);
        p[16] = c(1.0, 0.0);
        let want: Vec<_> = (0..16).map(|k| Complex64::cis(2.0 * std::f64::consts::PI * k as f64 / 16.0)).collect();
        assert!(matched(&polynomial_roots(&p).unwrap(), &want, 1e-12));
    }

    #[test]
    fn high_degree_circle() {
        let deg = 128;
        let mut p = vec![c(0.0, 0.0); deg + 1];
        p[0] = c(-0.5f64.powi(deg as i32), 0.0);
        p[deg] = c(1.0, 0.0);
        let want: Vec<_> = (0..deg).map(|k| Complex64::from_polar(0.5, TAU * k as f64 / deg as f64)).collect();
        assert!(matched(&polynomial_roots(&p).unwrap(), &want, 1e-8));
    }

    proptest! {
        #[test]
        fn recovers_planted_roots(rs in prop::collection::vec((-1.5f64..1.5, -1.5f64..1.5), 1..12)) {
            let roots: Vec<_> = rs.into_iter().map(|(a, b)| c(a, b)).collect();
            // Skip near-coincident roots, which are ill-conditioned by nature.
            let sep = roots.iter().enumerate().flat_map(|(i, a)| roots[i + 1..].iter().map(move |b| (a - b).norm()))
                .fold(f64::INFINITY, f64::min);
            prop_assume!(sep > 0.05);
            let found = polynomial_roots(&from_roots(&roots)).unwrap();
            prop_assert_eq!(found.len(), roots.len());
            prop_assert!(matched(&found, &roots, 1e-8));
        }
    }
}
