//! Dense symmetric positive definite solves.

use ndarray::{Array1, Array2};
use ndarray_linalg::{error::LinalgError, FactorizeC, FactorizeCInto, SolveC, UPLO};

use crate::error::{Error, Result};

const RESIDUAL_TOL: f64 = 1e-10;

fn map_err(e: LinalgError) -> Error {
    match e {
        LinalgError::Lapack(lax::error::Error::LapackComputationalFailure { return_code }) => {
            Error::NotPositiveDefinite {
                minor: return_code as usize,
            }
        }
        other => Error::LinearAlgebra(other.to_string()),
    }
}

fn relative_residual(au: Array1<f64>, b: &Array1<f64>) -> (Array1<f64>, f64) {
    let r = b - &au;
    let nb = b.dot(b).sqrt();
    let nr = r.dot(&r).sqrt();
    (r, if nb == 0.0 { nr } else { nr / nb })
}

fn check_shape(a: &Array2<f64>, b: &[f64]) -> Result<()> {
    if a.ncols() != a.nrows() || b.len() != a.nrows() {
        return Err(Error::InvalidParameter(format!(
            "system of shape {}x{} with right-hand side of length {}",
            a.nrows(),
            a.ncols(),
            b.len()
        )));
    }
    Ok(())
}

/// Solves `A u = b` by Cholesky factorization of the symmetric matrix `a`.
///
/// A few steps of iterative refinement are applied if the first solution
/// misses the residual tolerance.
pub fn solve_spd(a: &Array2<f64>, b: &[f64]) -> Result<Vec<f64>> {
    check_shape(a, b)?;
    if b.is_empty() {
        return Ok(Vec::new());
    }
    let factor = a.factorizec(UPLO::Lower).map_err(map_err)?;
    refine(|x| factor.solvec(x).map_err(map_err), |u| Ok(a.dot(u)), b)
}

/// Like [`solve_spd`], but factorizes `a` in place and evaluates residuals
/// with `apply`, so that only one copy of the matrix is held.
pub fn solve_spd_with(
    a: Array2<f64>,
    b: &[f64],
    apply: impl Fn(&[f64]) -> Result<Vec<f64>>,
) -> Result<Vec<f64>> {
    check_shape(&a, b)?;
    if b.is_empty() {
        return Ok(Vec::new());
    }
    let factor = a.factorizec_into(UPLO::Lower).map_err(map_err)?;
    refine(
        |x| factor.solvec(x).map_err(map_err),
        |u| Ok(Array1::from(apply(u.as_slice().expect("contiguous"))?)),
        b,
    )
}

fn refine(
    solve: impl Fn(&Array1<f64>) -> Result<Array1<f64>>,
    apply: impl Fn(&Array1<f64>) -> Result<Array1<f64>>,
    b: &[f64],
) -> Result<Vec<f64>> {
    let b = Array1::from(b.to_vec());
    let mut u = solve(&b)?;
    let (mut r, mut res) = relative_residual(apply(&u)?, &b);
    for _ in 0..3 {
        if res <= RESIDUAL_TOL {
            break;
        }
        u += &solve(&r)?;
        (r, res) = relative_residual(apply(&u)?, &b);
    }
    if !(res <= RESIDUAL_TOL) {
        return Err(Error::LinearAlgebra(format!(
            "relative residual {res:e} exceeds {RESIDUAL_TOL:e}"
        )));
    }
    Ok(u.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn identity_and_scalar() {
        let id = Array2::<f64>::eye(3);
        assert_eq!(
            solve_spd(&id, &[1.0, -2.0, 3.0]).unwrap(),
            vec![1.0, -2.0, 3.0]
        );
        let one = array![[4.0]];
        assert_eq!(solve_spd(&one, &[2.0]).unwrap(), vec![0.5]);
    }

    #[test]
    fn indefinite_reports_minor() {
        let a = array![[1.0, 0.0, 0.0], [0.0, 1.0, 2.0], [0.0, 2.0, 1.0]];
        match solve_spd(&a, &[1.0, 1.0, 1.0]) {
            Err(Error::NotPositiveDefinite { minor }) => assert_eq!(minor, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn shape_mismatch() {
        assert!(solve_spd(&Array2::eye(2), &[1.0]).is_err());
    }

    #[test]
    fn owned_variant_agrees() {
        let a = array![[4.0, 1.0, 0.5], [1.0, 3.0, 0.2], [0.5, 0.2, 2.0]];
        let b = [1.0, 2.0, 3.0];
        let u = solve_spd(&a, &b).unwrap();
        let a2 = a.clone();
        let v = solve_spd_with(a.clone(), &b, |x| {
            Ok(a2.dot(&Array1::from(x.to_vec())).to_vec())
        })
        .unwrap();
        for (x, y) in u.iter().zip(&v) {
            assert!((x - y).abs() < 1e-15);
        }
    }
}
