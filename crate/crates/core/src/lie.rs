//! Structure data for sl(n, C): Chevalley generators, the principal sl2-triple,
//! the trace-form pairing, triangular projections and centralizers.

use std::ops::Deref;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{c64, kernel_basis, CMatrix, LinalgError, ZERO};
use crate::tolerances::Tolerances;

pub const MIN_N: usize = 2;
pub const MAX_N: usize = 8;

/// Chevalley data and the principal sl2-triple `(xi, h, eta)` for `sl_n`.
///
/// Indices are zero-based: `e_plus[i] = E_{i,i+1}`, `e_minus[i] = E_{i+1,i}`.
#[derive(Debug, Clone)]
pub struct ChevalleyData {
    n: usize,
    pub e_plus: Vec<CMatrix>,
    pub e_minus: Vec<CMatrix>,
    pub h: CMatrix,
    pub xi: CMatrix,
    pub eta: CMatrix,
    /// `eta = sum c_i e_plus[i]` with `c_i = i (n - i)`, one-based `i`.
    pub coeffs: Vec<i64>,
    /// Frobenius-normalized powers `eta^k / |eta^k|`, `k = 1..=r`; a basis of the centralizer of `eta`.
    pub section_basis: Vec<CMatrix>,
    pub tol: Tolerances,
}

impl ChevalleyData {
    pub fn new(n: usize) -> Result<Self> {
        Self::with_tolerances(n, Tolerances::default())
    }

    pub fn with_tolerances(n: usize, tol: Tolerances) -> Result<Self> {
        if !(MIN_N..=MAX_N).contains(&n) {
            return Err(Error::UnsupportedRank(n));
        }
        let r = n - 1;
        let e_plus: Vec<CMatrix> = (0..r).map(|i| CMatrix::unit(n, i, i + 1)).collect();
        let e_minus: Vec<CMatrix> = (0..r).map(|i| CMatrix::unit(n, i + 1, i)).collect();
        let h = CMatrix::from_diag(
            &(1..=n)
                .map(|k| c64((2 * k) as f64 - n as f64 - 1.0, 0.0))
                .collect::<Vec<_>>(),
        );
        let coeffs: Vec<i64> = (1..=r as i64).map(|i| i * (n as i64 - i)).collect();
        let mut xi = CMatrix::zeros(n, n);
        let mut eta = CMatrix::zeros(n, n);
        for i in 0..r {
            xi[(i + 1, i)] = c64(1.0, 0.0);
            eta[(i, i + 1)] = c64(coeffs[i] as f64, 0.0);
        }
        let section_basis = (1..=r as u32)
            .map(|k| {
                let p = eta.powi(k);
                let norm = p.frobenius_norm();
                p.scale_real(1.0 / norm)
            })
            .collect();
        Ok(Self {
            n,
            e_plus,
            e_minus,
            h,
            xi,
            eta,
            coeffs,
            section_basis,
            tol,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The rank `r = n - 1`.
    pub fn rank(&self) -> usize {
        self.n - 1
    }

    /// `xi + sum s_k b_k` on the Kostant section.
    pub fn section_point(&self, coords: &[Complex64]) -> CMatrix {
        assert_eq!(coords.len(), self.rank(), "section coordinates have length r");
        let mut x = self.xi.clone();
        for (s, b) in coords.iter().zip(&self.section_basis) {
            x.axpy(*s, b);
        }
        x
    }

    /// Coordinates of the orthogonal projection of `x - xi` onto the section directions.
    pub fn section_coords(&self, x: &CMatrix) -> Vec<Complex64> {
        let d = x - &self.xi;
        self.section_basis.iter().map(|b| b.inner(&d)).collect()
    }

    /// Relative distance `|x - xi - proj| / max(1, |x|)` of `x` from the section.
    pub fn section_deviation(&self, x: &CMatrix) -> f64 {
        let proj = self.section_point(&self.section_coords(x));
        x.distance(&proj) / x.frobenius_norm().max(1.0)
    }

    pub fn on_section(&self, x: &CMatrix) -> bool {
        self.section_deviation(x) <= self.tol.section
    }
}

/// Traceless square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement(CMatrix);

impl AlgebraElement {
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidElement(format!(
                "{}x{} matrix is not square",
                m.nrows(),
                m.ncols()
            )));
        }
        if !m.is_finite() {
            return Err(Error::InvalidElement("non-finite entries".into()));
        }
        let tr = m.trace().norm();
        if tr > 1e-12 * m.frobenius_norm().max(1.0) {
            return Err(Error::InvalidElement(format!("trace {tr:.3e} is not zero")));
        }
        Ok(Self(m))
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }
}

impl Deref for AlgebraElement {
    type Target = CMatrix;
    fn deref(&self) -> &CMatrix {
        &self.0
    }
}

/// Invertible matrix read modulo nonzero scalars, i.e. an element of PGL_n.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement(CMatrix);

impl GroupElement {
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() || !m.is_finite() {
            return Err(Error::InvalidElement("group element must be a finite square matrix".into()));
        }
        let n = m.dim() as i32;
        let det = m.determinant().norm();
        if det <= 1e-12 * m.frobenius_norm().powi(n) {
            return Err(Error::InvalidElement(format!("determinant {det:.3e} is numerically zero")));
        }
        Ok(Self(m))
    }

    /// Wraps a matrix known to be invertible, such as an exponential or a unitriangular product.
    pub(crate) fn from_invertible(m: CMatrix) -> Self {
        Self(m)
    }

    pub fn identity(n: usize) -> Self {
        Self(CMatrix::identity(n))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.inverse().expect("group element is invertible"))
    }

    pub fn mul(&self, other: &GroupElement) -> Self {
        Self(self.0.matmul(&other.0))
    }

    /// `Ad_g(x) = g x g^{-1}`, independent of the scalar representative.
    pub fn ad(&self, x: &CMatrix) -> CMatrix {
        conjugate(&self.0, x)
    }

    /// `|m - cI| / |c|` for `m = self * other^{-1}` and `c = tr(m) / n`.
    pub fn distance_mod_scalar(&self, other: &GroupElement) -> f64 {
        distance_mod_scalar(&self.0, &other.0)
    }

    pub fn equiv(&self, other: &GroupElement, tol: f64) -> bool {
        self.distance_mod_scalar(other) <= tol
    }
}

impl Deref for GroupElement {
    type Target = CMatrix;
    fn deref(&self) -> &CMatrix {
        &self.0
    }
}

/// `g x g^{-1}` for an invertible `g`.
///
/// # Panics
/// If `g` is singular; see [`try_conjugate`].
pub fn conjugate(g: &CMatrix, x: &CMatrix) -> CMatrix {
    try_conjugate(g, x).expect("conjugating element is invertible")
}

pub fn try_conjugate(g: &CMatrix, x: &CMatrix) -> Result<CMatrix> {
    if !g.is_finite() {
        return Err(LinalgError::NonFinite.into());
    }
    let gx = g.matmul(x);
    Ok(g.transpose().solve(&gx.transpose())?.transpose())
}

pub fn distance_mod_scalar(a: &CMatrix, b: &CMatrix) -> f64 {
    let m = match b.transpose().solve(&a.transpose()) {
        Ok(mt) => mt.transpose(),
        Err(_) => return f64::INFINITY,
    };
    let n = m.dim();
    let c = m.trace() / n as f64;
    if c.norm() == 0.0 {
        return f64::INFINITY;
    }
    let mut d = m;
    for i in 0..n {
        d[(i, i)] -= c;
    }
    d.frobenius_norm() / c.norm()
}

/// The invariant form `tr(xy)`.
pub fn pairing(x: &CMatrix, y: &CMatrix) -> Result<Complex64> {
    if x.nrows() != y.nrows() || x.ncols() != y.ncols() || !x.is_square() {
        return Err(Error::DimensionMismatch {
            expected: x.nrows(),
            actual: y.nrows(),
        });
    }
    Ok(trace_form(x, y))
}

pub(crate) fn trace_form(x: &CMatrix, y: &CMatrix) -> Complex64 {
    let n = x.dim();
    let mut acc = ZERO;
    for i in 0..n {
        for j in 0..n {
            acc += x[(i, j)] * y[(j, i)];
        }
    }
    acc
}

/// Basis of `sl_n`: off-diagonal units `E_ij` in row-major order, then `H_k = E_kk - E_{k+1,k+1}`.
pub fn sl_basis(n: usize) -> Vec<CMatrix> {
    let mut basis = Vec::with_capacity(n * n - 1);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                basis.push(CMatrix::unit(n, i, j));
            }
        }
    }
    for k in 0..n - 1 {
        let mut hk = CMatrix::unit(n, k, k);
        hk[(k + 1, k + 1)] = c64(-1.0, 0.0);
        basis.push(hk);
    }
    basis
}

/// Coordinates of the traceless part of `y` in [`sl_basis`].
pub fn sl_coords(y: &CMatrix) -> Vec<Complex64> {
    let n = y.dim();
    let mut out = Vec::with_capacity(n * n - 1);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out.push(y[(i, j)]);
            }
        }
    }
    let mean = y.trace() / n as f64;
    let mut partial = ZERO;
    for k in 0..n - 1 {
        partial += y[(k, k)] - mean;
        out.push(partial);
    }
    out
}

pub fn from_sl_coords(n: usize, coords: &[Complex64]) -> CMatrix {
    let mut y = CMatrix::zeros(n, n);
    for (c, b) in coords.iter().zip(sl_basis(n)) {
        y.axpy(*c, &b);
    }
    y
}

/// Matrix of `y -> [x, y]` on `sl_n` in the basis [`sl_basis`].
pub fn ad_action(x: &CMatrix) -> CMatrix {
    let basis = sl_basis(x.dim());
    let dim = basis.len();
    let mut m = CMatrix::zeros(dim, dim);
    for (j, b) in basis.iter().enumerate() {
        m.set_column(j, &sl_coords(&x.bracket(b)));
    }
    m
}

/// Numerical basis of the centralizer `g_x` inside `sl_n`.
pub fn centralizer_basis(x: &CMatrix, tol: f64) -> Result<Vec<CMatrix>> {
    let n = x.dim();
    let kernel = kernel_basis(&ad_action(x), tol)?;
    Ok((0..kernel.ncols())
        .map(|k| from_sl_coords(n, &kernel.column(k)))
        .collect())
}

/// Diagonal, strictly upper and strictly lower parts.
#[derive(Debug, Clone)]
pub struct Triangular {
    pub t: CMatrix,
    pub u: CMatrix,
    pub u_minus: CMatrix,
}

pub fn project_triangular(x: &CMatrix) -> Triangular {
    let n = x.dim();
    let mut parts = Triangular {
        t: CMatrix::zeros(n, n),
        u: CMatrix::zeros(n, n),
        u_minus: CMatrix::zeros(n, n),
    };
    for i in 0..n {
        for j in 0..n {
            let target = match i.cmp(&j) {
                std::cmp::Ordering::Equal => &mut parts.t,
                std::cmp::Ordering::Less => &mut parts.u,
                std::cmp::Ordering::Greater => &mut parts.u_minus,
            };
            target[(i, j)] = x[(i, j)];
        }
    }
    parts
}

/// Simple-root character `t_i / t_{i+1}` of a torus element, zero-based `i`.
pub fn root_char(t: &CMatrix, i: usize, tol_torus: f64) -> Result<Complex64> {
    if t.off_diagonal_norm() > tol_torus * t.frobenius_norm() {
        return Err(Error::NotInTorus);
    }
    let denom = t[(i + 1, i + 1)];
    if denom == ZERO {
        return Err(Error::InvalidElement("torus element has a zero diagonal entry".into()));
    }
    Ok(t[(i, i)] / denom)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_triple_n2() {
        let c = ChevalleyData::new(2).unwrap();
        assert_eq!(c.xi, CMatrix::from_real(2, &[0.0, 0.0, 1.0, 0.0]));
        assert_eq!(c.eta, CMatrix::from_real(2, &[0.0, 1.0, 0.0, 0.0]));
        assert_eq!(c.h, CMatrix::from_real(2, &[-1.0, 0.0, 0.0, 1.0]));
        assert_eq!(c.coeffs, vec![1]);
    }

    #[test]
    fn coefficients_n3() {
        let c = ChevalleyData::new(3).unwrap();
        assert_eq!(c.coeffs, vec![2, 2]);
        assert_eq!(c.h.diagonal(), vec![c64(-2.0, 0.0), ZERO, c64(2.0, 0.0)]);
    }

    #[test]
    fn triple_relations_exact_every_rank() {
        for n in MIN_N..=MAX_N {
            let c = ChevalleyData::new(n).unwrap();
            assert_eq!(c.xi.bracket(&c.eta), c.h, "n={n}");
            assert_eq!(c.h.bracket(&c.xi), c.xi.scale_real(2.0));
            assert_eq!(c.h.bracket(&c.eta), c.eta.scale_real(-2.0));
        }
    }

    #[test]
    fn rank_out_of_range() {
        assert!(matches!(ChevalleyData::new(1), Err(Error::UnsupportedRank(1))));
        assert!(matches!(ChevalleyData::new(9), Err(Error::UnsupportedRank(9))));
    }

    #[test]
    fn pairing_of_root_vectors() {
        let c = ChevalleyData::new(2).unwrap();
        assert_eq!(pairing(&c.e_plus[0], &c.e_minus[0]).unwrap(), c64(1.0, 0.0));
        assert_eq!(pairing(&c.h, &c.h).unwrap(), c64(2.0, 0.0));
        assert!(pairing(&CMatrix::zeros(2, 2), &CMatrix::zeros(3, 3)).is_err());
    }

    #[test]
    fn sl_coords_roundtrip() {
        let y = CMatrix::from_real(3, &[1.0, 2.0, 3.0, 4.0, -3.0, 5.0, 6.0, 7.0, 2.0]);
        assert!(from_sl_coords(3, &sl_coords(&y)).distance(&y) < 1e-15);
    }

    #[test]
    fn centralizer_of_eta_n2() {
        let c = ChevalleyData::new(2).unwrap();
        let basis = centralizer_basis(&c.eta, 1e-8).unwrap();
        assert_eq!(basis.len(), 1);
        let b = &basis[0];
        // Parallel to E12: all other entries vanish.
        assert!(b[(0, 1)].norm() > 0.99);
        assert!(b.distance(&CMatrix::unit(2, 0, 1).scale(b[(0, 1)])) < 1e-14);
    }

    #[test]
    fn centralizer_of_regular_diagonal() {
        let x = CMatrix::from_real(2, &[1.0, 0.0, 0.0, -1.0]);
        let basis = centralizer_basis(&x, 1e-8).unwrap();
        assert_eq!(basis.len(), 1);
        assert!(basis[0].off_diagonal_norm() < 1e-14);
    }

    #[test]
    fn centralizer_of_zero_is_everything() {
        assert_eq!(centralizer_basis(&CMatrix::zeros(3, 3), 1e-8).unwrap().len(), 8);
    }

    #[test]
    fn ad_xi_rank() {
        for n in 2..=5 {
            let c = ChevalleyData::new(n).unwrap();
            let rank = crate::linalg::rank(&ad_action(&c.xi), 1e-8).unwrap();
            assert_eq!(rank, n * n - n);
        }
    }

    #[test]
    fn root_char_values() {
        let t = CMatrix::from_real(2, &[2.0, 0.0, 0.0, 1.0]);
        assert_eq!(root_char(&t, 0, 1e-10).unwrap(), c64(2.0, 0.0));
        assert_eq!(root_char(&t.scale(c64(0.0, 3.0)), 0, 1e-10).unwrap(), c64(2.0, 0.0));
        assert_eq!(root_char(&CMatrix::identity(3), 1, 1e-10).unwrap(), c64(1.0, 0.0));
        assert!(matches!(
            root_char(&CMatrix::from_real(2, &[1.0, 1.0, 0.0, 1.0]), 0, 1e-10),
            Err(Error::NotInTorus)
        ));
    }

    #[test]
    fn projection_reassembles() {
        let c = ChevalleyData::new(3).unwrap();
        let p = project_triangular(&c.xi);
        assert_eq!(p.u_minus, c.xi);
        assert_eq!(p.t, CMatrix::zeros(3, 3));
        let x = CMatrix::from_real(3, &[1.0, 2.0, 3.0, 4.0, -3.0, 5.0, 6.0, 7.0, 2.0]);
        let p = project_triangular(&x);
        assert_eq!(&(&p.t + &p.u) + &p.u_minus, x);
    }

    #[test]
    fn scalar_blind_equality() {
        let g = CMatrix::from_real(2, &[1.0, 2.0, 0.0, 1.0]);
        let a = GroupElement::new(g.clone()).unwrap();
        let b = GroupElement::new(g.scale(c64(-3.0, 1.0))).unwrap();
        assert!(a.equiv(&b, 1e-12));
        assert!(!a.equiv(&GroupElement::identity(2), 1e-6));
        assert!(GroupElement::new(CMatrix::from_real(2, &[1.0, 2.0, 2.0, 4.0])).is_err());
    }

    #[test]
    fn section_coordinates() {
        let c = ChevalleyData::new(4).unwrap();
        let s = [c64(0.3, -1.0), c64(2.0, 0.5), c64(-0.7, 0.0)];
        let x = c.section_point(&s);
        let back = c.section_coords(&x);
        for (a, b) in s.iter().zip(&back) {
            assert!((a - b).norm() < 1e-14);
        }
        assert!(c.on_section(&x));
        assert!(!c.on_section(&(&x + &c.e_plus[0])));
    }
}
