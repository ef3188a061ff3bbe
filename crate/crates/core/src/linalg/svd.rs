//! One-sided (Hestenes) Jacobi SVD for complex matrices.

use num_complex::Complex64;

use super::matrix::{CMatrix, ZERO};
use super::LinalgError;

const MAX_SWEEPS: usize = 80;

/// `a = u * diag(sigma) * v^H`, singular values in non-increasing order.
///
/// `u` is `m x n` with orthonormal columns wherever `sigma > 0`; `v` is `n x n` unitary.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMatrix,
    pub sigma: Vec<f64>,
    pub v: CMatrix,
}

pub fn svd(a: &CMatrix) -> Result<Svd, LinalgError> {
    if !a.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let (m, n) = (a.nrows(), a.ncols());
    let mut w = a.clone();
    let mut v = CMatrix::identity(n);
    let negligible = (f64::EPSILON * a.frobenius_norm()).powi(2);
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, ZERO);
                for k in 0..m {
                    let (x, y) = (w[(k, i)], w[(k, j)]);
                    alpha += x.norm_sqr();
                    beta += y.norm_sqr();
                    gamma += x.conj() * y;
                }
                let g = gamma.norm();
                if g <= negligible || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma.conj() / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for mat in [&mut w, &mut v] {
                    for k in 0..mat.nrows() {
                        let x = mat[(k, i)];
                        let y = mat[(k, j)] * phase;
                        mat[(k, i)] = x * c - y * s;
                        mat[(k, j)] = x * s + y * c;
                    }
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(LinalgError::NoConvergence {
            iterations: MAX_SWEEPS,
        });
    }
    let mut order: Vec<(usize, f64)> = (0..n)
        .map(|j| (j, w.column(j).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()))
        .collect();
    order.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut u = CMatrix::zeros(m, n);
    let mut vs = CMatrix::zeros(n, n);
    let mut sigma = Vec::with_capacity(n);
    for (dst, &(src, s)) in order.iter().enumerate() {
        sigma.push(s);
        vs.set_column(dst, &v.column(src));
        if s > 0.0 {
            let col: Vec<Complex64> = w.column(src).iter().map(|z| z / s).collect();
            u.set_column(dst, &col);
        }
    }
    Ok(Svd { u, sigma, v: vs })
}

pub fn singular_values(a: &CMatrix) -> Result<Vec<f64>, LinalgError> {
    Ok(svd(a)?.sigma)
}

/// Orthonormal basis of the null space as the columns of an `n x k` matrix.
///
/// A singular value counts as zero when it is at most `tol * sigma_max`.
pub fn kernel_basis(a: &CMatrix, tol: f64) -> Result<CMatrix, LinalgError> {
    let Svd { sigma, v, .. } = svd(a)?;
    let n = a.ncols();
    let cutoff = tol * sigma.first().copied().unwrap_or(0.0);
    let null: Vec<usize> = (0..n).filter(|&k| sigma[k] <= cutoff).collect();
    let mut basis = CMatrix::zeros(n, null.len());
    for (dst, &k) in null.iter().enumerate() {
        basis.set_column(dst, &v.column(k));
    }
    Ok(basis)
}

/// Numerical rank with the same relative cutoff as [`kernel_basis`].
pub fn rank(a: &CMatrix, tol: f64) -> Result<usize, LinalgError> {
    let sigma = singular_values(a)?;
    let cutoff = tol * sigma.first().copied().unwrap_or(0.0);
    Ok(sigma.iter().filter(|&&s| s > cutoff).count())
}

/// Minimum-norm least-squares solution of `a x = b` through the pseudo-inverse.
///
/// Returns the solution and the residual norm `||a x - b||`.
pub fn lstsq(a: &CMatrix, b: &[Complex64], rcond: f64) -> Result<(Vec<Complex64>, f64), LinalgError> {
    if b.len() != a.nrows() {
        return Err(LinalgError::DimensionMismatch {
            expected: a.nrows(),
            actual: b.len(),
        });
    }
    let Svd { u, sigma, v } = svd(a)?;
    let n = a.ncols();
    let cutoff = rcond * sigma.first().copied().unwrap_or(0.0);
    let mut x = vec![ZERO; n];
    for k in 0..n {
        if sigma[k] <= cutoff || sigma[k] == 0.0 {
            continue;
        }
        let coeff: Complex64 = (0..a.nrows()).map(|i| u[(i, k)].conj() * b[i]).sum::<Complex64>() / sigma[k];
        for (i, xi) in x.iter_mut().enumerate() {
            *xi += v[(i, k)] * coeff;
        }
    }
    let ax = a.matvec(&x);
    let residual = ax
        .iter()
        .zip(b)
        .map(|(p, q)| (p - q).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok((x, residual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let k = kernel_basis(&CMatrix::zeros(3, 3), 1e-8).unwrap();
        assert_eq!(k.ncols(), 3);
    }

    #[test]
    fn identity_has_trivial_kernel() {
        let k = kernel_basis(&CMatrix::identity(4), 1e-8).unwrap();
        assert_eq!(k.ncols(), 0);
        assert_eq!(singular_values(&CMatrix::identity(4)).unwrap(), vec![1.0; 4]);
    }

    #[test]
    fn reconstruction_complex() {
        let a = CMatrix::from_rows(&[
            vec![c64(1.0, 2.0), c64(0.0, -1.0), c64(3.0, 0.0)],
            vec![c64(-0.5, 0.0), c64(2.0, 1.0), c64(0.0, 0.0)],
        ])
        .unwrap();
        let s = svd(&a).unwrap();
        let sig = CMatrix::from_diag(&s.sigma.iter().map(|&x| c64(x, 0.0)).collect::<Vec<_>>());
        let back = s.u.matmul(&sig).matmul(&s.v.adjoint());
        assert!(back.distance(&a) < 1e-13);
        assert!(s.sigma[2] < 1e-14);
    }

    #[test]
    fn rank_one_kernel() {
        // Columns are multiples of each other.
        let a = CMatrix::from_real(2, &[1.0, 2.0, 2.0, 4.0]);
        let k = kernel_basis(&a, 1e-10).unwrap();
        assert_eq!(k.ncols(), 1);
        let image = a.matvec(&k.column(0));
        assert!(image.iter().all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn least_squares_overdetermined() {
        // Fit y = 1 + 2 t exactly.
        let a = CMatrix::from_vec(3, 2, [1.0, 0.0, 1.0, 1.0, 1.0, 2.0].map(|x| c64(x, 0.0)).to_vec()).unwrap();
        let b = [1.0, 3.0, 5.0].map(|x| c64(x, 0.0));
        let (x, res) = lstsq(&a, &b, 1e-12).unwrap();
        assert!((x[0] - c64(1.0, 0.0)).norm() < 1e-13);
        assert!((x[1] - c64(2.0, 0.0)).norm() < 1e-13);
        assert!(res < 1e-13);
    }
}
