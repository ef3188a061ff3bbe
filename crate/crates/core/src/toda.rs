//! The Kostant–Toda phase space `xi + t + sum (g_alpha \ 0)`, its flows solved
//! by factorization in `G*`, and the embedding `phi` into the universal centralizer.

use num_complex::Complex64;

use crate::centralizer::{flow_step, ham_field, ZPoint};
use crate::error::{Error, Result};
use crate::invariants::{grad_vee, in_d, invariants};
use crate::kostant::{
    beta, delta_of_theta, gstar_factor, lambda_with_theta, tau, theta,
};
use crate::lie::{try_conjugate, ChevalleyData};
use crate::linalg::{c64, mat_exp, CMatrix, ZERO};

/// Diagonal part plus simple-root coordinates: `xi + diag + sum roots_i E_{i,i+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TodaPoint {
    pub diag: Vec<Complex64>,
    pub roots: Vec<Complex64>,
}

impl TodaPoint {
    pub fn new(chev: &ChevalleyData, diag: Vec<Complex64>, roots: Vec<Complex64>) -> Result<Self> {
        let n = chev.n();
        if diag.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: diag.len(),
            });
        }
        if roots.len() != n - 1 {
            return Err(Error::DimensionMismatch {
                expected: n - 1,
                actual: roots.len(),
            });
        }
        let tr: Complex64 = diag.iter().sum();
        let scale = diag.iter().map(|d| d.norm()).fold(1.0, f64::max);
        if tr.norm() > 1e-12 * scale {
            return Err(Error::InvalidElement(format!(
                "diagonal part has trace {:.3e}",
                tr.norm()
            )));
        }
        if let Some(i) = roots.iter().position(|y| y.norm() <= chev.tol.root_min) {
            return Err(Error::InvalidElement(format!(
                "root coordinate {} vanishes",
                i + 1
            )));
        }
        Ok(Self { diag, roots })
    }

    pub fn to_matrix(&self) -> CMatrix {
        let n = self.diag.len();
        let mut x = CMatrix::from_diag(&self.diag);
        for (i, y) in self.roots.iter().enumerate() {
            x[(i + 1, i)] = c64(1.0, 0.0);
            x[(i, i + 1)] = *y;
        }
        debug_assert_eq!(x.dim(), n);
        x
    }

    /// Projects onto the phase-space shape; returns the point and the discarded mass
    /// relative to `max(1, |x|)`.
    pub fn project(chev: &ChevalleyData, x: &CMatrix) -> Result<(Self, f64)> {
        let n = chev.n();
        let diag = x.diagonal();
        let roots: Vec<Complex64> = (0..n - 1).map(|i| x[(i, i + 1)]).collect();
        let p = Self {
            diag,
            roots,
        };
        let shape = x.distance(&p.to_matrix()) / x.frobenius_norm().max(1.0);
        if let Some(i) = p.roots.iter().position(|y| y.norm() <= chev.tol.root_min) {
            return Err(Error::InvalidElement(format!(
                "root coordinate {} vanishes",
                i + 1
            )));
        }
        Ok((p, shape))
    }

    pub fn distance(&self, other: &TodaPoint) -> f64 {
        self.to_matrix().distance(&other.to_matrix())
    }
}

pub fn in_v(chev: &ChevalleyData, p: &TodaPoint) -> bool {
    in_d(chev, &invariants(&p.to_matrix())).unwrap_or(false)
}

/// Quantities along one orbit that do not depend on time.
#[derive(Debug, Clone)]
pub struct FlowFrame {
    pub theta: CMatrix,
    pub lambda: CMatrix,
}

impl FlowFrame {
    pub fn new(chev: &ChevalleyData, p: &TodaPoint) -> Result<Self> {
        let x = p.to_matrix();
        let th = theta(chev, &x)?;
        let lambda = lambda_with_theta(chev, &x, &th)?;
        Ok(Self { theta: th, lambda })
    }

    /// `tau(theta, lambda exp(t grad_vee(theta, i)))` together with its shape residual.
    pub fn evaluate(&self, chev: &ChevalleyData, i: usize, t: Complex64) -> Result<(TodaPoint, f64)> {
        let step = mat_exp(&grad_vee(&self.theta, i).scale(t));
        let g = self.lambda.matmul(&step);
        let x = tau(chev, &self.theta, &g)?;
        TodaPoint::project(chev, &x)
    }
}

fn check_index(chev: &ChevalleyData, i: usize) -> Result<()> {
    if i == 0 || i > chev.rank() {
        return Err(Error::InvalidConfig(format!(
            "flow index {i} outside 1..={}",
            chev.rank()
        )));
    }
    Ok(())
}

/// The `i`-th Kostant–Toda flow at time `t`, by factorization.
pub fn toda_flow(chev: &ChevalleyData, i: usize, t: Complex64, p: &TodaPoint) -> Result<TodaPoint> {
    check_index(chev, i)?;
    Ok(FlowFrame::new(chev, p)?.evaluate(chev, i, t)?.0)
}

/// Central difference of the flow at `t = 0`, as a matrix.
pub fn toda_vector_field(chev: &ChevalleyData, i: usize, p: &TodaPoint, h: f64) -> Result<CMatrix> {
    check_index(chev, i)?;
    let frame = FlowFrame::new(chev, p)?;
    let plus = frame.evaluate(chev, i, c64(h, 0.0))?.0.to_matrix();
    let minus = frame.evaluate(chev, i, c64(-h, 0.0))?.0.to_matrix();
    Ok((&plus - &minus).scale_real(0.5 / h))
}

/// `phi(x) = (delta lambda delta^{-1}, beta(x))`.
pub fn phi(chev: &ChevalleyData, p: &TodaPoint) -> Result<ZPoint> {
    let x = p.to_matrix();
    let th = theta(chev, &x)?;
    let d = delta_of_theta(chev, &th)?;
    let l = lambda_with_theta(chev, &x, &th)?;
    let g = try_conjugate(&d, &l)?;
    let b = beta(chev, &x)?;
    Ok(ZPoint::from_parts(g, b))
}

/// Inverse of [`phi`] on its image.
///
/// `z = theta(x)`, `h = delta(z)^{-1} g delta(z)`, `v = tau(z, h)`.
pub fn phi_inverse(chev: &ChevalleyData, p: &ZPoint) -> Result<TodaPoint> {
    p.validate(chev)?;
    let z = match theta(chev, &p.x) {
        Ok(z) => z,
        Err(Error::NotInV { gap }) => {
            return Err(Error::NotInW(format!(
                "spectrum of x has real-part gap {gap:.3e}"
            )))
        }
        Err(e) => return Err(e),
    };
    let d = delta_of_theta(chev, &z)?;
    let h = try_conjugate(&d.inverse()?, &p.g)?;
    if let Err(Error::NotInGStar { minor }) = gstar_factor(chev, &h) {
        return Err(Error::NotInW(format!(
            "group part is outside G* (leading minor {minor} vanishes)"
        )));
    }
    let v = tau(chev, &z, &h)?;
    Ok(TodaPoint::project(chev, &v)?.0)
}

/// `phi(toda_flow(i, t, x))` against `flow_step(t, phi(x), i)`.
pub fn intertwine_check(chev: &ChevalleyData, i: usize, t: Complex64, p: &TodaPoint) -> Result<f64> {
    let moved = toda_flow(chev, i, t, p)?;
    let lhs = phi(chev, &moved)?;
    let rhs = flow_step(t, &phi(chev, p)?, i);
    Ok(lhs.distance(&rhs))
}

/// Compares the Hamiltonian field at `phi(x)` with the pushforward of the Toda field.
///
/// The pushforward is left-trivialized and reduced modulo scalars, matching the
/// projective reading of the group slot.
pub fn intertwine_infinitesimal(chev: &ChevalleyData, i: usize, p: &TodaPoint, h: f64) -> Result<f64> {
    check_index(chev, i)?;
    let frame = FlowFrame::new(chev, p)?;
    let plus = phi(chev, &frame.evaluate(chev, i, c64(h, 0.0))?.0)?;
    let minus = phi(chev, &frame.evaluate(chev, i, c64(-h, 0.0))?.0)?;
    let base = phi(chev, p)?;
    let n = chev.n();
    let dg = (&*plus.g - &*minus.g).scale_real(0.5 / h);
    let mut y = base.g.inverse().matmul(&dg);
    let mean = y.trace() / n as f64;
    for k in 0..n {
        y[(k, k)] -= mean;
    }
    let z = (&plus.x - &minus.x).scale_real(0.5 / h);
    let field = ham_field(&base, i);
    let scale = 1.0 + field.y.frobenius_norm();
    Ok((y.distance(&field.y) + z.distance(&field.z)) / scale)
}

/// The `n = 2` point `xi + E_12` used throughout as a golden reference.
pub fn sl2_golden(chev: &ChevalleyData) -> TodaPoint {
    assert_eq!(chev.n(), 2);
    TodaPoint {
        diag: vec![ZERO, ZERO],
        roots: vec![c64(1.0, 0.0)],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_in_v_n2() {
        let c = ChevalleyData::new(2).unwrap();
        let pt = |a: f64, y: f64| TodaPoint {
            diag: vec![c64(a, 0.0), c64(-a, 0.0)],
            roots: vec![c64(y, 0.0)],
        };
        assert!(in_v(&c, &pt(0.0, 1.0)));
        assert!(!in_v(&c, &pt(0.0, -1.0)));
        assert!(!in_v(&c, &pt(1.0, -1.0)));
    }

    #[test]
    fn golden_flow_is_tanh_sech2() {
        let c = ChevalleyData::new(2).unwrap();
        let x0 = sl2_golden(&c);
        for t in [0.0, 0.25, 1.0, 2.0] {
            let p = toda_flow(&c, 1, c64(t, 0.0), &x0).unwrap();
            let sech = 1.0 / f64::cosh(t);
            assert!((p.diag[0] - c64(t.tanh(), 0.0)).norm() < 1e-12, "t={t}");
            assert!((p.roots[0] - c64(sech * sech, 0.0)).norm() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn golden_embedding() {
        let c = ChevalleyData::new(2).unwrap();
        let x0 = sl2_golden(&c);
        let z = phi(&c, &x0).unwrap();
        let swap = CMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]);
        assert!(z.g.distance_mod_scalar(&crate::lie::GroupElement::new(swap.clone()).unwrap()) < 1e-12);
        assert!(z.x.distance(&swap) < 1e-14);
        let back = phi_inverse(&c, &z).unwrap();
        assert!(back.distance(&x0) < 1e-12);
    }

    #[test]
    fn identity_group_part_is_outside_w() {
        let c = ChevalleyData::new(2).unwrap();
        let s = CMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]);
        let p = ZPoint::identity_at(s);
        assert!(matches!(phi_inverse(&c, &p), Err(Error::NotInW(_))));
    }

    #[test]
    fn bad_flow_index() {
        let c = ChevalleyData::new(2).unwrap();
        let x0 = sl2_golden(&c);
        assert!(toda_flow(&c, 2, ZERO, &x0).is_err());
        assert!(toda_flow(&c, 0, ZERO, &x0).is_err());
    }
}
