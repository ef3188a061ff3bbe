//! Unsymmetric complex eigensolver.
//!
//! Householder reduction to upper Hessenberg form, then single-shift implicit
//! QR sweeps with Givens rotations (Wilkinson shift, exceptional shifts on
//! stagnation) down to a complex Schur form `a = Q T Q^H`. Eigenvectors come
//! from back-substitution on `T`.

use num_complex::Complex64;

use super::matrix::{c64, CMatrix, ONE, ZERO};
use super::LinalgError;

const MAX_ITER_PER_EIGENVALUE: usize = 60;

/// Eigenvalues (unordered) and unit-norm eigenvectors as matrix columns.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<Complex64>,
    pub vectors: CMatrix,
}

/// Complex Schur factorization `a = q * t * q^H`.
#[derive(Debug, Clone)]
pub struct Schur {
    pub q: CMatrix,
    pub t: CMatrix,
}

pub fn eig(a: &CMatrix) -> Result<Eigen, LinalgError> {
    let Schur { q, t } = schur(a)?;
    let n = t.dim();
    let values = t.diagonal();
    let smallnum = f64::EPSILON * t.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut vectors = CMatrix::zeros(n, n);
    for k in 0..n {
        let lambda = t[(k, k)];
        let mut v = vec![ZERO; n];
        v[k] = ONE;
        for i in (0..k).rev() {
            let mut acc = ZERO;
            for j in i + 1..=k {
                acc += t[(i, j)] * v[j];
            }
            let mut denom = t[(i, i)] - lambda;
            if denom.norm() < smallnum {
                denom = c64(smallnum, 0.0);
            }
            v[i] = -acc / denom;
        }
        let x = q.matvec(&v);
        let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for (i, xi) in x.into_iter().enumerate() {
            vectors[(i, k)] = xi / norm;
        }
    }
    Ok(Eigen { values, vectors })
}

/// Eigenvalues only.
pub fn eigenvalues(a: &CMatrix) -> Result<Vec<Complex64>, LinalgError> {
    Ok(schur(a)?.t.diagonal())
}

pub fn schur(a: &CMatrix) -> Result<Schur, LinalgError> {
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
    let (mut h, mut q) = hessenberg(a);
    if n < 2 {
        return Ok(Schur { q, t: h });
    }
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    while hi > 0 {
        // Locate the start of the active unreduced block.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let diag = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            let reference = if diag == 0.0 { h.max_abs() } else { diag };
            if sub <= f64::EPSILON * reference {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if iter > MAX_ITER_PER_EIGENVALUE || total > MAX_ITER_PER_EIGENVALUE * n {
            return Err(LinalgError::NoConvergence {
                iterations: total,
            });
        }
        let shift = if iter.is_multiple_of(11) {
            // Exceptional shift to break cycles.
            h[(hi, hi)] + c64(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };
        qr_sweep(&mut h, &mut q, lo, hi, shift);
    }
    // Clear rounding residue below the diagonal.
    for i in 1..n {
        for j in 0..i {
            h[(i, j)] = ZERO;
        }
    }
    Ok(Schur { q, t: h })
}

/// Eigenvalue of the trailing 2x2 block closest to its bottom-right entry.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half_tr = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (half_tr * half_tr - det).sqrt();
    let l1 = half_tr + disc;
    let l2 = half_tr - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Rotation `G = [[c, s], [-conj(s), c]]` with real `c`, mapping `(x, y)` to `(r, 0)`.
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    if y == ZERO {
        return (1.0, ZERO);
    }
    if x == ZERO {
        return (0.0, ONE);
    }
    let norm = (x.norm_sqr() + y.norm_sqr()).sqrt();
    let xabs = x.norm();
    let c = xabs / norm;
    let s = (x / xabs) * y.conj() / norm;
    (c, s)
}

fn rotate_rows(m: &mut CMatrix, k: usize, c: f64, s: Complex64, cols: std::ops::Range<usize>) {
    for j in cols {
        let a = m[(k, j)];
        let b = m[(k + 1, j)];
        m[(k, j)] = a * c + s * b;
        m[(k + 1, j)] = -s.conj() * a + b * c;
    }
}

fn rotate_cols(m: &mut CMatrix, k: usize, c: f64, s: Complex64, rows: std::ops::Range<usize>) {
    for i in rows {
        let a = m[(i, k)];
        let b = m[(i, k + 1)];
        m[(i, k)] = a * c + s.conj() * b;
        m[(i, k + 1)] = -s * a + b * c;
    }
}

fn qr_sweep(h: &mut CMatrix, q: &mut CMatrix, lo: usize, hi: usize, shift: Complex64) {
    let n = h.dim();
    for k in lo..hi {
        let (x, y) = if k == lo {
            (h[(lo, lo)] - shift, h[(lo + 1, lo)])
        } else {
            (h[(k, k - 1)], h[(k + 1, k - 1)])
        };
        let (c, s) = givens(x, y);
        let first_col = if k == lo { lo } else { k - 1 };
        rotate_rows(h, k, c, s, first_col..n);
        let last_row = (k + 3).min(hi + 1);
        rotate_cols(h, k, c, s, 0..last_row);
        rotate_cols(q, k, c, s, 0..n);
        if k > lo {
            h[(k + 1, k - 1)] = ZERO;
        }
    }
}

/// Householder reduction `a = q h q^H` with `h` upper Hessenberg.
fn hessenberg(a: &CMatrix) -> (CMatrix, CMatrix) {
    let n = a.dim();
    let mut h = a.clone();
    let mut q = CMatrix::identity(n);
    for k in 0..n.saturating_sub(2) {
        let x: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let phase = if x[0] == ZERO { ONE } else { x[0] / x[0].norm() };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // h <- P h, P = I - 2 v v^H acting on rows k+1..n
        for j in 0..n {
            let dot: Complex64 = (0..v.len()).map(|i| v[i].conj() * h[(k + 1 + i, j)]).sum();
            for i in 0..v.len() {
                h[(k + 1 + i, j)] -= v[i] * dot * 2.0;
            }
        }
        // h <- h P, q <- q P acting on columns k+1..n
        for m in [&mut h, &mut q] {
            for i in 0..n {
                let dot: Complex64 = (0..v.len()).map(|j| m[(i, k + 1 + j)] * v[j]).sum();
                for j in 0..v.len() {
                    m[(i, k + 1 + j)] -= dot * v[j].conj() * 2.0;
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    (h, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_re(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
        v
    }

    #[test]
    fn diagonal_values() {
        let a = CMatrix::from_real(3, &[3.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, -4.0]);
        let vals = sorted_re(eig(&a).unwrap().values);
        let want = [-4.0, 1.0, 3.0];
        for (v, w) in vals.iter().zip(want) {
            assert!((v - c64(w, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn swap_involution() {
        let a = CMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]);
        let vals = sorted_re(eig(&a).unwrap().values);
        assert!((vals[0] + ONE).norm() < 1e-14);
        assert!((vals[1] - ONE).norm() < 1e-14);
    }

    #[test]
    fn companion_of_cubic_roots_of_unity() {
        // Companion matrix of t^3 - 1.
        let a = CMatrix::from_real(3, &[0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
        let e = eig(&a).unwrap();
        for lam in &e.values {
            let p = lam * lam * lam - ONE;
            assert!(p.norm() < 1e-12, "char poly residual {}", p.norm());
        }
        // The three roots are distinct.
        for i in 0..3 {
            for j in i + 1..3 {
                assert!((e.values[i] - e.values[j]).norm() > 1.0);
            }
        }
    }

    #[test]
    fn residuals_are_small() {
        let a = CMatrix::from_rows(&[
            vec![c64(1.0, 0.5), c64(2.0, 0.0), c64(0.0, -1.0), c64(0.3, 0.0)],
            vec![c64(-1.0, 0.0), c64(0.0, 1.0), c64(1.5, 0.0), c64(0.0, 0.2)],
            vec![c64(0.4, 0.4), c64(0.0, 0.0), c64(-2.0, 0.0), c64(1.0, 1.0)],
            vec![c64(0.0, 0.0), c64(1.0, -1.0), c64(0.5, 0.0), c64(0.7, -0.3)],
        ])
        .unwrap();
        let e = eig(&a).unwrap();
        for k in 0..4 {
            let v = e.vectors.column(k);
            let av = a.matvec(&v);
            let res: f64 = av
                .iter()
                .zip(&v)
                .map(|(x, y)| (x - e.values[k] * y).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(res <= 1e-10 * a.frobenius_norm());
        }
    }

    #[test]
    fn nilpotent_jordan_block() {
        let mut a = CMatrix::zeros(4, 4);
        for i in 0..3 {
            a[(i + 1, i)] = ONE;
        }
        let vals = eigenvalues(&a).unwrap();
        for v in vals {
            assert!(v.norm() < 1e-3);
        }
    }
}
