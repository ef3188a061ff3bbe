use num_complex::Complex64;

use super::matrix::{CMatrix, ZERO};
use super::LinalgError;

/// Partially pivoted LU, packed in place. `perm[i]` is the source row of row `i`.
struct PivotedLu {
    lu: CMatrix,
    perm: Vec<usize>,
    sign: f64,
}

fn factor(a: &CMatrix) -> Result<PivotedLu, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    let n = a.dim();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    let scale = a.max_abs();
    for k in 0..n {
        let (p, pmax) = (k..n)
            .map(|i| (i, lu[(i, k)].norm()))
            .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pmax <= f64::EPSILON * scale * n as f64 || pmax == 0.0 {
            return Err(LinalgError::Singular);
        }
        if p != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(p, j)];
                lu[(p, j)] = tmp;
            }
            perm.swap(k, p);
            sign = -sign;
        }
        let pivot = lu[(k, k)];
        for i in k + 1..n {
            let factor = lu[(i, k)] / pivot;
            lu[(i, k)] = factor;
            if factor == ZERO {
                continue;
            }
            for j in k + 1..n {
                let u = lu[(k, j)];
                lu[(i, j)] -= factor * u;
            }
        }
    }
    Ok(PivotedLu { lu, perm, sign })
}

impl PivotedLu {
    fn solve_vec(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.lu.dim();
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[(i, j)];
                let xj = x[j];
                x[i] -= l * xj;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = self.lu[(i, j)];
                let xj = x[j];
                x[i] -= u * xj;
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }
}

pub(crate) fn solve(a: &CMatrix, b: &CMatrix) -> Result<CMatrix, LinalgError> {
    let lu = factor(a)?;
    if b.nrows() != a.dim() {
        return Err(LinalgError::DimensionMismatch {
            expected: a.dim(),
            actual: b.nrows(),
        });
    }
    let mut out = CMatrix::zeros(b.nrows(), b.ncols());
    for j in 0..b.ncols() {
        let col = lu.solve_vec(&b.column(j));
        out.set_column(j, &col);
    }
    Ok(out)
}

pub(crate) fn inverse(a: &CMatrix) -> Result<CMatrix, LinalgError> {
    solve(a, &CMatrix::identity(a.nrows()))
}

pub(crate) fn determinant(a: &CMatrix) -> Complex64 {
    match factor(a) {
        Ok(lu) => lu
            .lu
            .diagonal()
            .into_iter()
            .fold(Complex64::new(lu.sign, 0.0), |acc, d| acc * d),
        Err(_) => ZERO,
    }
}

/// Solve a square system for a single vector right-hand side.
pub fn solve_vector(a: &CMatrix, b: &[Complex64]) -> Result<Vec<Complex64>, LinalgError> {
    let lu = factor(a)?;
    if b.len() != a.dim() {
        return Err(LinalgError::DimensionMismatch {
            expected: a.dim(),
            actual: b.len(),
        });
    }
    Ok(lu.solve_vec(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c64, ONE};

    #[test]
    fn inverse_of_permutation_like() {
        let a = CMatrix::from_real(3, &[0.0, 2.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 4.0]);
        let inv = a.inverse().unwrap();
        assert!(a.matmul(&inv).distance(&CMatrix::identity(3)) < 1e-15);
    }

    #[test]
    fn singular_is_reported() {
        let a = CMatrix::from_real(2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(matches!(a.inverse(), Err(LinalgError::Singular)));
    }

    #[test]
    fn determinant_complex() {
        let a = CMatrix::from_rows(&[vec![c64(0.0, 1.0), ONE], vec![ONE, c64(0.0, 1.0)]]).unwrap();
        // i*i - 1 = -2
        assert!((a.determinant() - c64(-2.0, 0.0)).norm() < 1e-15);
    }
}
