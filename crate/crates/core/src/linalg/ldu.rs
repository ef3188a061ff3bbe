//! Gauss (LDU) factorization without pivoting.
//!
//! Pivoting would mix the unipotent factors, so a vanishing leading minor is
//! reported as an error instead of being worked around.

use super::matrix::{CMatrix, ONE, ZERO};
use super::LinalgError;

/// `a = l * d * u` with `l` lower unitriangular, `d` diagonal, `u` upper unitriangular.
#[derive(Debug, Clone)]
pub struct Ldu {
    pub l: CMatrix,
    pub d: CMatrix,
    pub u: CMatrix,
}

impl Ldu {
    pub fn reconstruct(&self) -> CMatrix {
        self.l.matmul(&self.d).matmul(&self.u)
    }
}

pub const DEFAULT_TOL_MINOR: f64 = 1e-12;

/// Doolittle elimination without row exchanges.
///
/// The k-th pivot equals the ratio of consecutive leading principal minors; a
/// pivot with modulus at or below `tol_minor * ||a||_F` yields
/// [`LinalgError::SingularMinor`] carrying the one-based minor index.
pub fn gauss_ldu_with(a: &CMatrix, tol_minor: f64) -> Result<Ldu, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    if !a.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let n = a.dim();
    let scale = a.frobenius_norm();
    let mut work = a.clone();
    let mut l = CMatrix::identity(n);
    let mut d = CMatrix::zeros(n, n);
    let mut u = CMatrix::identity(n);
    for k in 0..n {
        let pivot = work[(k, k)];
        if pivot.norm() <= tol_minor * scale || pivot == ZERO {
            return Err(LinalgError::SingularMinor(k + 1));
        }
        d[(k, k)] = pivot;
        for j in k + 1..n {
            u[(k, j)] = work[(k, j)] / pivot;
        }
        for i in k + 1..n {
            let lik = work[(i, k)] / pivot;
            l[(i, k)] = lik;
            if lik == ZERO {
                continue;
            }
            for j in k + 1..n {
                let wkj = work[(k, j)];
                work[(i, j)] -= lik * wkj;
            }
        }
    }
    debug_assert!(l.diagonal().iter().all(|&v| v == ONE));
    Ok(Ldu { l, d, u })
}

pub fn gauss_ldu(a: &CMatrix) -> Result<Ldu, LinalgError> {
    gauss_ldu_with(a, DEFAULT_TOL_MINOR)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_factors_trivially() {
        let f = gauss_ldu(&CMatrix::identity(4)).unwrap();
        assert_eq!(f.l, CMatrix::identity(4));
        assert_eq!(f.d, CMatrix::identity(4));
        assert_eq!(f.u, CMatrix::identity(4));
    }

    #[test]
    fn two_by_two_hand_values() {
        let a = CMatrix::from_real(2, &[2.0, 1.0, 1.0, 1.0]);
        let f = gauss_ldu(&a).unwrap();
        assert_eq!(f.l, CMatrix::from_real(2, &[1.0, 0.0, 0.5, 1.0]));
        assert_eq!(f.d, CMatrix::from_real(2, &[2.0, 0.0, 0.0, 0.5]));
        assert_eq!(f.u, CMatrix::from_real(2, &[1.0, 0.5, 0.0, 1.0]));
        assert!(f.reconstruct().distance(&a) < 1e-15);
    }

    #[test]
    fn zero_leading_minor_fails() {
        let a = CMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]);
        assert!(matches!(gauss_ldu(&a), Err(LinalgError::SingularMinor(1))));
    }

    #[test]
    fn second_minor_reported() {
        let a = CMatrix::from_real(3, &[1.0, 2.0, 0.0, 2.0, 4.0, 1.0, 0.0, 1.0, 1.0]);
        assert!(matches!(gauss_ldu(&a), Err(LinalgError::SingularMinor(2))));
    }
}
