//! Dense row-major complex matrices.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

use super::LinalgError;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Shorthand for a complex literal.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A dense complex matrix stored row-major.
///
/// Most of the crate works with square matrices of dimension 2..=8, but the
/// type itself allows rectangular shapes so kernels and least-squares systems
/// can reuse it.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Single matrix unit `E_{ij}` (zero-based indices).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(i, j)] = ONE;
        m
    }

    pub fn from_diag(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Build from row-major data; fails when the length does not match.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch {
                expected: rows * cols,
                actual: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Build from nested rows of complex numbers.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self, LinalgError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            if row.len() != ncols {
                return Err(LinalgError::DimensionMismatch {
                    expected: ncols,
                    actual: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self {
            rows: nrows,
            cols: ncols,
            data,
        })
    }

    /// Build a square matrix from real row-major entries. Panics on a bad length.
    pub fn from_real(n: usize, entries: &[f64]) -> Self {
        assert_eq!(entries.len(), n * n, "from_real expects n*n entries");
        Self {
            rows: n,
            cols: n,
            data: entries.iter().map(|&v| c64(v, 0.0)).collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.cols
    }

    /// Dimension of a square matrix.
    #[inline]
    pub fn dim(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, values: &[Complex64]) {
        for (i, &v) in values.iter().enumerate() {
            self[(i, j)] = v;
        }
    }

    pub fn rows_vec(&self) -> Vec<Vec<Complex64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn trace(&self) -> Complex64 {
        self.diagonal().into_iter().sum()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| v * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(c64(s, 0.0))
    }

    /// `self += s * other`
    pub fn axpy(&mut self, s: Complex64, other: &CMatrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(
            self.cols, other.rows,
            "matmul shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let orow = other.row(k);
                let base = i * other.cols;
                for (j, &b) in orow.iter().enumerate() {
                    out.data[base + j] += a * b;
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    /// Commutator `[self, other] = self*other - other*self`.
    pub fn bracket(&self, other: &CMatrix) -> CMatrix {
        &self.matmul(other) - &other.matmul(self)
    }

    pub fn powi(&self, k: u32) -> CMatrix {
        let mut out = CMatrix::identity(self.dim());
        for _ in 0..k {
            out = out.matmul(self);
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// Frobenius distance to another matrix of the same shape.
    pub fn distance(&self, other: &CMatrix) -> f64 {
        (self - other).frobenius_norm()
    }

    /// Frobenius inner product `sum conj(a_ij) b_ij`.
    pub fn inner(&self, other: &CMatrix) -> Complex64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, &b)| a.conj() * b)
            .sum()
    }

    /// Off-diagonal Frobenius mass.
    pub fn off_diagonal_norm(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    acc += self[(i, j)].norm_sqr();
                }
            }
        }
        acc.sqrt()
    }

    /// Largest modulus of entries strictly below the diagonal.
    pub fn strictly_lower_max(&self) -> f64 {
        let mut acc: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..i.min(self.cols) {
                acc = acc.max(self[(i, j)].norm());
            }
        }
        acc
    }

    /// Largest modulus of entries strictly above the diagonal.
    pub fn strictly_upper_max(&self) -> f64 {
        self.transpose().strictly_lower_max()
    }

    pub fn is_upper_unitriangular(&self, tol: f64) -> bool {
        self.strictly_lower_max() <= tol
            && self.diagonal().iter().all(|d| (d - ONE).norm() <= tol)
    }

    pub fn is_lower_unitriangular(&self, tol: f64) -> bool {
        self.transpose().is_upper_unitriangular(tol)
    }

    /// Inverse via partially pivoted LU.
    pub fn inverse(&self) -> Result<CMatrix, LinalgError> {
        super::lu::inverse(self)
    }

    /// Solve `self * x = b` for a matrix right-hand side.
    pub fn solve(&self, b: &CMatrix) -> Result<CMatrix, LinalgError> {
        super::lu::solve(self, b)
    }

    pub fn determinant(&self) -> Complex64 {
        super::lu::determinant(self)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

macro_rules! elementwise {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&CMatrix> for &CMatrix {
            type Output = CMatrix;
            fn $method(self, rhs: &CMatrix) -> CMatrix {
                assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
                CMatrix {
                    rows: self.rows,
                    cols: self.cols,
                    data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a $op b).collect(),
                }
            }
        }
        impl $trait<CMatrix> for CMatrix {
            type Output = CMatrix;
            fn $method(self, rhs: CMatrix) -> CMatrix {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&CMatrix> for CMatrix {
            type Output = CMatrix;
            fn $method(self, rhs: &CMatrix) -> CMatrix {
                (&self).$method(rhs)
            }
        }
    };
}

elementwise!(Add, add, +);
elementwise!(Sub, sub, -);

impl AddAssign<&CMatrix> for CMatrix {
    fn add_assign(&mut self, rhs: &CMatrix) {
        self.axpy(ONE, rhs);
    }
}

impl SubAssign<&CMatrix> for CMatrix {
    fn sub_assign(&mut self, rhs: &CMatrix) {
        self.axpy(-ONE, rhs);
    }
}

impl Mul<&CMatrix> for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.matmul(rhs)
    }
}

impl Mul<CMatrix> for CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: CMatrix) -> CMatrix {
        self.matmul(&rhs)
    }
}

impl Mul<Complex64> for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: Complex64) -> CMatrix {
        self.scale(rhs)
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        self.scale(-ONE)
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for v in self.row(i) {
                write!(f, "{:>11.4e}{:+.4e}i  ", v.re, v.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// One row per line; precision defaults to 4 digits.
impl fmt::Display for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = f.precision().unwrap_or(4);
        for i in 0..self.rows {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[")?;
            for (k, v) in self.row(i).iter().enumerate() {
                let sep = if k == 0 { "" } else { "  " };
                write!(f, "{sep}{:>w$.p$}{:+.p$}i", v.re, v.im, w = p + 3)?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_rows() {
        let m = CMatrix::from_real(2, &[1.0, 0.0, 0.0, -1.0]);
        assert_eq!(format!("{m:.1}"), "[ 1.0+0.0i   0.0+0.0i]\n[ 0.0+0.0i  -1.0+0.0i]");
    }

    #[test]
    fn bracket_of_matrix_units() {
        let e12 = CMatrix::unit(2, 0, 1);
        let e21 = CMatrix::unit(2, 1, 0);
        let h = e12.bracket(&e21);
        assert_eq!(h, CMatrix::from_real(2, &[1.0, 0.0, 0.0, -1.0]));
    }

    #[test]
    fn from_rows_rejects_ragged() {
        let rows = vec![vec![ONE, ZERO], vec![ONE]];
        assert!(CMatrix::from_rows(&rows).is_err());
    }

    #[test]
    fn adjoint_conjugates() {
        let m = CMatrix::from_rows(&[vec![c64(1.0, 2.0), c64(0.0, 1.0)], vec![ZERO, ONE]]).unwrap();
        let a = m.adjoint();
        assert_eq!(a[(0, 0)], c64(1.0, -2.0));
        assert_eq!(a[(1, 0)], c64(0.0, -1.0));
    }
}
