//! Kostant's isomorphism `U x S -> xi + b` and the maps built on it: the chamber
//! representative `theta`, the unipotent comparisons `nu`, `delta`, the section
//! projection `beta`, the Gauss factorization on `G*`, and `lambda` / `tau`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::invariants::chamber_spectrum;
use crate::lie::{conjugate, root_char, try_conjugate, ChevalleyData, GroupElement};
use crate::linalg::{c64, gauss_ldu_with, lstsq, mat_exp, CMatrix, LinalgError, ONE, ZERO};

/// `z = Ad_u(s)` with `u` upper unitriangular and `s` on the section.
#[derive(Debug, Clone)]
pub struct PsiDecomposition {
    pub u: CMatrix,
    pub s: CMatrix,
}

impl PsiDecomposition {
    pub fn pi_u(&self) -> &CMatrix {
        &self.u
    }

    pub fn pi_s(&self) -> &CMatrix {
        &self.s
    }
}

/// `g = w0 * u_minus * t * u` modulo scalars.
#[derive(Debug, Clone)]
pub struct GStarFactorization {
    pub u_minus: CMatrix,
    pub t: CMatrix,
    pub u: CMatrix,
}

impl GStarFactorization {
    pub fn reconstruct(&self, chev: &ChevalleyData) -> CMatrix {
        w0_lift(chev)
            .matmul(&self.u_minus)
            .matmul(&self.t)
            .matmul(&self.u)
    }
}

/// Lift of the longest Weyl element with `Ad(w0) e_{alpha_i} = e_{alpha_{r+1-i}}`.
///
/// Antidiagonal of ones; the defining condition forces all entries equal.
pub fn w0_lift(chev: &ChevalleyData) -> CMatrix {
    let n = chev.n();
    CMatrix::from_fn(n, n, |i, j| if i + j == n - 1 { ONE } else { ZERO })
}

pub fn psi(u: &CMatrix, s: &CMatrix) -> CMatrix {
    conjugate(u, s)
}

/// Grade of `E_ij` under the principal grading is `j - i`; collect a diagonal band.
fn band(x: &CMatrix, k: usize) -> Vec<Complex64> {
    (0..x.dim() - k).map(|i| x[(i, i + k)]).collect()
}

/// Inverse of [`psi`] on `xi + b`, by eliminating one grade at a time.
///
/// At grade `k` the defect splits as `[xi, y] + sigma eta^k` with `y` of grade
/// `k + 1`; conjugating by `exp(y)` removes the `[xi, y]` part and only touches
/// grades `>= k`.
pub fn psi_inverse(chev: &ChevalleyData, z: &CMatrix) -> Result<PsiDecomposition> {
    let n = chev.n();
    let d = z - &chev.xi;
    let scale = z.frobenius_norm().max(1.0);
    let lower = d.strictly_lower_max();
    if lower > chev.tol.triangular * scale {
        return Err(Error::NotInXiPlusB { deviation: lower });
    }
    let mut current = z.clone();
    let mut factors = Vec::with_capacity(n);
    let mut sigma = vec![ZERO; n - 1];
    for k in 0..n {
        let defect = band(&(&current - &chev.xi), k);
        let unknowns_y = n - k - 1;
        let with_section = k >= 1;
        let cols = unknowns_y + usize::from(with_section);
        let mut a = CMatrix::zeros(n - k, cols);
        for j in 0..unknowns_y {
            let e = CMatrix::unit(n, j, j + k + 1);
            a.set_column(j, &band(&chev.xi.bracket(&e), k));
        }
        if with_section {
            a.set_column(unknowns_y, &band(&chev.section_basis[k - 1], k));
        }
        if cols == 0 {
            continue;
        }
        let (sol, residual) = lstsq(&a, &defect, 1e-13)?;
        let defect_norm: f64 = defect.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if residual > chev.tol.lstsq * (1.0 + defect_norm) {
            return Err(Error::NoConvergence("graded elimination", residual));
        }
        if with_section {
            sigma[k - 1] = sol[unknowns_y];
        }
        if unknowns_y > 0 {
            let mut y = CMatrix::zeros(n, n);
            for j in 0..unknowns_y {
                y[(j, j + k + 1)] = sol[j];
            }
            let e = mat_exp(&y);
            current = try_conjugate(&e, &current)?;
            factors.push(y);
        }
    }
    // u = exp(-y_1) exp(-y_2) ... so that Ad_u(s) = z.
    let mut u = CMatrix::identity(n);
    for y in &factors {
        u = u.matmul(&mat_exp(&-y));
    }
    Ok(PsiDecomposition {
        u,
        s: chev.section_point(&sigma),
    })
}

/// The element of `xi + C` conjugate to `x`: `xi` plus the spectrum sorted by decreasing real part.
pub fn theta(chev: &ChevalleyData, x: &CMatrix) -> Result<CMatrix> {
    let (mut values, gap) = chamber_spectrum(x)?;
    if gap <= chev.tol.chamber {
        return Err(Error::NotInV { gap });
    }
    let mean = values.iter().sum::<Complex64>() / values.len() as f64;
    for v in values.iter_mut() {
        *v -= mean;
    }
    Ok(&chev.xi + &CMatrix::from_diag(&values))
}

/// `pi_U(psi^{-1}(x)) * pi_U(psi^{-1}(theta(x)))^{-1}`, so that `Ad_nu(theta(x)) = x`.
pub fn nu(chev: &ChevalleyData, x: &CMatrix) -> Result<CMatrix> {
    let th = theta(chev, x)?;
    nu_with_theta(chev, x, &th)
}

pub(crate) fn nu_with_theta(chev: &ChevalleyData, x: &CMatrix, th: &CMatrix) -> Result<CMatrix> {
    let ux = psi_inverse(chev, x)?.u;
    let ut = psi_inverse(chev, th)?.u;
    Ok(ux.matmul(&ut.inverse()?))
}

/// `pi_U(psi^{-1}(theta(x)))^{-1}`, conjugating `theta(x)` to `beta(x)`.
pub fn delta(chev: &ChevalleyData, x: &CMatrix) -> Result<CMatrix> {
    let th = theta(chev, x)?;
    delta_of_theta(chev, &th)
}

pub(crate) fn delta_of_theta(chev: &ChevalleyData, th: &CMatrix) -> Result<CMatrix> {
    Ok(psi_inverse(chev, th)?.u.inverse()?)
}

/// `pi_S(psi^{-1}(x))`.
pub fn beta(chev: &ChevalleyData, x: &CMatrix) -> Result<CMatrix> {
    Ok(psi_inverse(chev, x)?.s)
}

/// Gauss factorization of `w0^{-1} g`.
pub fn gstar_factor(chev: &ChevalleyData, g: &CMatrix) -> Result<GStarFactorization> {
    let w0 = w0_lift(chev);
    // w0 is its own inverse.
    let shifted = w0.matmul(g);
    match gauss_ldu_with(&shifted, chev.tol.minor) {
        Ok(f) => Ok(GStarFactorization {
            u_minus: f.l,
            t: f.d,
            u: f.u,
        }),
        Err(LinalgError::SingularMinor(minor)) => Err(Error::NotInGStar { minor }),
        Err(e) => Err(e.into()),
    }
}

pub fn in_gstar(chev: &ChevalleyData, g: &CMatrix) -> bool {
    gstar_factor(chev, g).is_ok()
}

/// Root coordinates `x_{alpha_i} = x[i][i+1]` of a point of `xi + t + sum g_alpha`.
fn root_coords(x: &CMatrix) -> Vec<Complex64> {
    (0..x.dim() - 1).map(|i| x[(i, i + 1)]).collect()
}

/// The group element with `tau(theta(x), lambda(x)) = x`, assembled as `w0 u_- t u`.
///
/// `u = nu(x)`; `t = diag(1, y_1, y_1 y_2, ...)` so `alpha_i(t) = 1 / y_i`;
/// `u_- = w0^{-1} nu(Ad_{w0 t}(x))^{-1} w0`.
pub fn lambda(chev: &ChevalleyData, x: &CMatrix) -> Result<CMatrix> {
    let th = theta(chev, x)?;
    lambda_with_theta(chev, x, &th)
}

pub(crate) fn lambda_with_theta(chev: &ChevalleyData, x: &CMatrix, th: &CMatrix) -> Result<CMatrix> {
    let n = chev.n();
    let roots = root_coords(x);
    if let Some(i) = roots.iter().position(|y| y.norm() <= chev.tol.root_min) {
        return Err(Error::InvalidElement(format!("root coordinate {} vanishes", i + 1)));
    }
    let u = nu_with_theta(chev, x, th)?;
    let mut diag = Vec::with_capacity(n);
    let mut acc = ONE;
    diag.push(acc);
    for y in &roots {
        acc *= y;
        diag.push(acc);
    }
    let t = CMatrix::from_diag(&diag);
    let w0 = w0_lift(chev);
    let moved = try_conjugate(&w0.matmul(&t), x)?;
    // Ad_{w0 t} preserves the spectrum, so theta(moved) = theta(x).
    let nu_moved = nu_with_theta(chev, &moved, th)?;
    let u_minus = w0.matmul(&nu_moved.inverse()?).matmul(&w0);
    Ok(w0.matmul(&u_minus).matmul(&t).matmul(&u))
}

/// `Ad_{sigma_U(g)}(theta_x)` for `g` in `G*` centralizing `theta_x`.
pub fn tau(chev: &ChevalleyData, theta_x: &CMatrix, g: &CMatrix) -> Result<CMatrix> {
    if !g.is_finite() {
        return Err(LinalgError::NonFinite.into());
    }
    // Commutator form: no inversion, so large flow times do not inflate the residual.
    let deviation = g.bracket(theta_x).frobenius_norm()
        / (g.frobenius_norm() * theta_x.frobenius_norm().max(1.0));
    if deviation > chev.tol.centralizing {
        return Err(Error::NotCentralizing { deviation });
    }
    let f = gstar_factor(chev, g)?;
    try_conjugate(&f.u, theta_x)
}

/// Check `alpha_i(t) = 1 / x_{alpha_i}` for the torus factor of `lambda(x)`.
pub fn lambda_torus_deviation(chev: &ChevalleyData, x: &CMatrix, g: &CMatrix) -> Result<f64> {
    let f = gstar_factor(chev, g)?;
    let mut worst: f64 = 0.0;
    for (i, y) in root_coords(x).iter().enumerate() {
        let a = root_char(&f.t, i, chev.tol.torus)?;
        worst = worst.max((a * y - c64(1.0, 0.0)).norm());
    }
    Ok(worst)
}

/// Wraps `lambda(x)` as a scalar-blind group element.
pub fn lambda_element(chev: &ChevalleyData, x: &CMatrix) -> Result<GroupElement> {
    Ok(GroupElement::from_invertible(lambda(chev, x)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2(a: [f64; 4]) -> CMatrix {
        CMatrix::from_real(2, &a)
    }

    #[test]
    fn w0_condition() {
        for n in 2..=6 {
            let c = ChevalleyData::new(n).unwrap();
            let w = w0_lift(&c);
            for i in 0..n - 1 {
                let lhs = conjugate(&w, &c.e_plus[i]);
                assert_eq!(lhs, c.e_minus[n - 2 - i]);
            }
        }
    }

    #[test]
    fn psi_golden_n2() {
        let c = ChevalleyData::new(2).unwrap();
        let z = psi(&m2([1.0, 1.0, 0.0, 1.0]), &m2([0.0, 1.0, 1.0, 0.0]));
        assert!(z.distance(&m2([1.0, 0.0, 1.0, -1.0])) < 1e-15);
        let d = psi_inverse(&c, &z).unwrap();
        assert!(d.u.distance(&m2([1.0, 1.0, 0.0, 1.0])) < 1e-14);
        assert!(d.s.distance(&m2([0.0, 1.0, 1.0, 0.0])) < 1e-14);
    }

    #[test]
    fn psi_inverse_on_section_is_trivial() {
        let c = ChevalleyData::new(4).unwrap();
        let s = c.section_point(&[c64(0.5, 0.1), c64(-1.0, 0.0), c64(0.2, 0.3)]);
        let d = psi_inverse(&c, &s).unwrap();
        assert!(d.u.distance(&CMatrix::identity(4)) < 1e-14);
        assert!(d.s.distance(&s) < 1e-14);
    }

    #[test]
    fn psi_inverse_rejects_lower_entries() {
        let c = ChevalleyData::new(3).unwrap();
        let z = &c.xi + &CMatrix::unit(3, 2, 0);
        assert!(matches!(psi_inverse(&c, &z), Err(Error::NotInXiPlusB { .. })));
    }

    #[test]
    fn theta_golden_and_rejection() {
        let c = ChevalleyData::new(2).unwrap();
        let th = theta(&c, &m2([0.0, 1.0, 1.0, 0.0])).unwrap();
        assert!(th.distance(&m2([1.0, 0.0, 1.0, -1.0])) < 1e-14);
        assert!(matches!(
            theta(&c, &m2([0.0, -1.0, 1.0, 0.0])),
            Err(Error::NotInV { .. })
        ));
    }

    #[test]
    fn sl2_maps_golden() {
        let c = ChevalleyData::new(2).unwrap();
        let x0 = m2([0.0, 1.0, 1.0, 0.0]);
        let want_unip = m2([1.0, -1.0, 0.0, 1.0]);
        assert!(nu(&c, &x0).unwrap().distance(&want_unip) < 1e-14);
        assert!(delta(&c, &x0).unwrap().distance(&want_unip) < 1e-14);
        let l = lambda(&c, &x0).unwrap();
        assert!(l.distance(&m2([1.0, 0.0, 1.0, -1.0])) < 1e-14);
        let f = gstar_factor(&c, &l).unwrap();
        assert!(f.u_minus.distance(&m2([1.0, 0.0, 1.0, 1.0])) < 1e-14);
        assert!(f.t.distance(&CMatrix::identity(2)) < 1e-14);
        assert!(f.u.distance(&want_unip) < 1e-14);
        let back = tau(&c, &theta(&c, &x0).unwrap(), &l).unwrap();
        assert!(back.distance(&x0) < 1e-14);
    }

    #[test]
    fn gstar_of_w0_and_identity() {
        let c = ChevalleyData::new(2).unwrap();
        let f = gstar_factor(&c, &w0_lift(&c)).unwrap();
        assert_eq!(f.u_minus, CMatrix::identity(2));
        assert_eq!(f.t, CMatrix::identity(2));
        assert_eq!(f.u, CMatrix::identity(2));
        assert!(matches!(
            gstar_factor(&c, &CMatrix::identity(2)),
            Err(Error::NotInGStar { minor: 1 })
        ));
    }

    #[test]
    fn tau_rejects_non_centralizing() {
        let c = ChevalleyData::new(2).unwrap();
        let th = m2([1.0, 0.0, 1.0, -1.0]);
        assert!(matches!(
            tau(&c, &th, &m2([2.0, 1.0, 1.0, 1.0])),
            Err(Error::NotCentralizing { .. })
        ));
    }
}
