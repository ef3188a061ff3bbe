//! The universal centralizer `Z = {(g, x) : x in S, Ad_g(x) = x}` inside `G x g`,
//! its symplectic form, moment maps, commuting flows and the coordinates
//! `Phi(lambda, s) = (exp(sum lambda_i grad_i(s)), s)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::invariants::{f_s_inverse, gradients, invariants, vector_distance};
use crate::lie::{sl_coords, trace_form, try_conjugate, ChevalleyData, GroupElement};
use crate::linalg::{c64, lstsq, mat_exp, rank, CMatrix, ZERO};

/// A point of the universal centralizer.
#[derive(Debug, Clone, PartialEq)]
pub struct ZPoint {
    pub g: GroupElement,
    pub x: CMatrix,
}

impl ZPoint {
    /// Validated constructor: `x` on the section and `g` in its stabilizer.
    pub fn new(chev: &ChevalleyData, g: CMatrix, x: CMatrix) -> Result<Self> {
        let p = Self {
            g: GroupElement::new(g)?,
            x,
        };
        p.validate(chev)?;
        Ok(p)
    }

    pub(crate) fn from_parts(g: CMatrix, x: CMatrix) -> Self {
        Self {
            g: GroupElement::from_invertible(g),
            x,
        }
    }

    /// `(e, x)`.
    pub fn identity_at(x: CMatrix) -> Self {
        Self::from_parts(CMatrix::identity(x.dim()), x)
    }

    /// `|Ad_g(x) - x| / max(1, |x|)`.
    pub fn stabilizer_deviation(&self) -> f64 {
        match try_conjugate(&self.g, &self.x) {
            Ok(moved) => moved.distance(&self.x) / self.x.frobenius_norm().max(1.0),
            Err(_) => f64::INFINITY,
        }
    }

    pub fn validate(&self, chev: &ChevalleyData) -> Result<()> {
        let off = chev.section_deviation(&self.x);
        if off > chev.tol.section {
            return Err(Error::InvalidElement(format!(
                "x is off the section by {off:.3e}"
            )));
        }
        let deviation = self.stabilizer_deviation();
        if deviation > chev.tol.stabilizer {
            return Err(Error::NotCentralizing { deviation });
        }
        Ok(())
    }

    /// Larger of the scalar-blind group distance and the algebra distance.
    pub fn distance(&self, other: &ZPoint) -> f64 {
        self.g
            .distance_mod_scalar(&other.g)
            .max(self.x.distance(&other.x))
    }
}

pub fn is_z_point(chev: &ChevalleyData, g: &CMatrix, x: &CMatrix, tol: f64) -> bool {
    let Ok(g) = GroupElement::new(g.clone()) else {
        return false;
    };
    let p = ZPoint { g, x: x.clone() };
    chev.section_deviation(x) <= tol && p.stabilizer_deviation() <= tol
}

pub fn mu_l(g: &GroupElement, x: &CMatrix) -> CMatrix {
    g.ad(x)
}

pub fn mu_r(x: &CMatrix) -> CMatrix {
    -x
}

pub fn mu(g: &GroupElement, x: &CMatrix) -> (CMatrix, CMatrix) {
    (mu_l(g, x), mu_r(x))
}

/// Whether `mu(g, x)` lies in `S x (-S)`, and the larger of the two section deviations.
pub fn in_moment_preimage(chev: &ChevalleyData, g: &GroupElement, x: &CMatrix) -> (bool, f64) {
    let (left, right) = mu(g, x);
    let dev = chev
        .section_deviation(&left)
        .max(chev.section_deviation(&-&right));
    (dev <= chev.tol.stabilizer, dev)
}

/// Left-trivialized tangent vector `(d_e L_g(y), z)` at `(g, x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tangent {
    pub y: CMatrix,
    pub z: CMatrix,
}

/// `<y1, z2> - <y2, z1> + <x, [y1, y2]>` at a base point with algebra part `x`.
pub fn omega(x: &CMatrix, v1: &Tangent, v2: &Tangent) -> Complex64 {
    trace_form(&v1.y, &v2.z) - trace_form(&v2.y, &v1.z) + trace_form(x, &v1.y.bracket(&v2.y))
}

pub fn f_tilde(p: &ZPoint) -> Vec<Complex64> {
    invariants(&p.x)
}

/// Hamiltonian field of `f_i` pulled to `Z`: `(grad_vee(x, i), 0)`.
pub fn ham_field(p: &ZPoint, i: usize) -> Tangent {
    let n = p.x.dim();
    Tangent {
        y: crate::invariants::grad_vee(&p.x, i),
        z: CMatrix::zeros(n, n),
    }
}

/// `(g exp(t grad_vee(x, i)), x)`.
pub fn flow_step(t: Complex64, p: &ZPoint, i: usize) -> ZPoint {
    let step = mat_exp(&crate::invariants::grad_vee(&p.x, i).scale(t));
    ZPoint::from_parts(p.g.matmul(&step), p.x.clone())
}

/// Coordinates `(lambda, s)` on `C^r x S`.
#[derive(Debug, Clone, PartialEq)]
pub struct CjlPoint {
    pub lambda: Vec<Complex64>,
    pub s: CMatrix,
}

fn gradient_combination(s: &CMatrix, lambda: &[Complex64]) -> CMatrix {
    let n = s.dim();
    let mut y = CMatrix::zeros(n, n);
    for (l, g) in lambda.iter().zip(gradients(s)) {
        y.axpy(*l, &g);
    }
    y
}

/// `Phi(lambda, s) = (exp(sum lambda_i grad_vee(s, i)), s)`.
pub fn cjl_map(c: &CjlPoint) -> ZPoint {
    ZPoint::from_parts(mat_exp(&gradient_combination(&c.s, &c.lambda)), c.s.clone())
}

/// Expansion coefficients of `y` in the gradient basis of `g_x`.
pub fn gradient_coords(chev: &ChevalleyData, y: &CMatrix, x: &CMatrix) -> Result<Vec<Complex64>> {
    let grads = gradients(x);
    let dim = x.dim() * x.dim() - 1;
    let mut a = CMatrix::zeros(dim, grads.len());
    for (k, g) in grads.iter().enumerate() {
        a.set_column(k, &sl_coords(g));
    }
    let b = sl_coords(y);
    let (coeffs, residual) = lstsq(&a, &b, 1e-12)?;
    let scale = 1.0 + y.frobenius_norm();
    if residual > chev.tol.kernel * scale {
        return Err(Error::InvalidElement(format!(
            "element is not in the span of the gradients (residual {residual:.3e})"
        )));
    }
    Ok(coeffs)
}

/// Maximum absolute deviations of `Phi^* omega` from `sum dz_i ^ df_i`, by block.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PullbackDeviation {
    /// Pairs of `lambda` directions; expected 0.
    pub lambda_lambda: f64,
    /// `lambda_i` against `f_j`; expected `delta_ij`.
    pub lambda_f: f64,
    /// Pairs of `f` directions; expected 0.
    pub f_f: f64,
}

impl PullbackDeviation {
    pub fn max(&self) -> f64 {
        self.lambda_lambda.max(self.lambda_f).max(self.f_f)
    }
}

/// Direction in `C^r x S`: either `c e_i` in `lambda` or `c d/df_i` along the section.
#[derive(Debug, Clone, Copy)]
enum Direction {
    Lambda(usize, Complex64),
    Invariant(usize, Complex64),
}

fn pushforward(
    chev: &ChevalleyData,
    c: &CjlPoint,
    base: &ZPoint,
    dir: Direction,
    h: f64,
) -> Result<Tangent> {
    let z0 = invariants(&c.s);
    let eval = |eps: f64| -> Result<ZPoint> {
        match dir {
            Direction::Lambda(i, scale) => {
                let mut lambda = c.lambda.clone();
                lambda[i] += scale * eps;
                Ok(cjl_map(&CjlPoint {
                    lambda,
                    s: c.s.clone(),
                }))
            }
            Direction::Invariant(j, scale) => {
                let mut z = z0.clone();
                z[j] += scale * eps;
                let s = f_s_inverse(chev, &z)?;
                Ok(cjl_map(&CjlPoint {
                    lambda: c.lambda.clone(),
                    s,
                }))
            }
        }
    };
    let plus = eval(h)?;
    let minus = eval(-h)?;
    let inv2h = 1.0 / (2.0 * h);
    let dg = (&*plus.g - &*minus.g).scale_real(inv2h);
    let y = base.g.inverse().matmul(&dg);
    let z = (&plus.x - &minus.x).scale_real(inv2h);
    Ok(Tangent { y, z })
}

/// `Phi(c)` and the pushforwards of the `2r` coordinate directions, `lambda` first.
pub fn cjl_tangents(chev: &ChevalleyData, c: &CjlPoint, fd_step: f64) -> Result<(ZPoint, Vec<Tangent>)> {
    let r = chev.rank();
    let base = cjl_map(c);
    let one = c64(1.0, 0.0);
    let dirs = (0..r)
        .map(|i| Direction::Lambda(i, one))
        .chain((0..r).map(|j| Direction::Invariant(j, one)));
    let tangents = dirs
        .map(|d| pushforward(chev, c, &base, d, fd_step))
        .collect::<Result<Vec<_>>>()?;
    Ok((base, tangents))
}

/// Finite-difference check of `Phi^* omega = sum dz_i ^ df_i` at `c`.
///
/// Each coordinate direction is pushed forward twice, along the real and the
/// imaginary axis; the expected pairing scales by the product of the two phases.
pub fn cjl_pullback_check(chev: &ChevalleyData, c: &CjlPoint, fd_step: f64) -> Result<PullbackDeviation> {
    if !(1e-8..=1e-4).contains(&fd_step) {
        return Err(Error::InvalidConfig(format!(
            "fd_step {fd_step:e} outside [1e-8, 1e-4]"
        )));
    }
    let r = chev.rank();
    let base = cjl_map(c);
    let phases = [c64(1.0, 0.0), c64(0.0, 1.0)];
    let mut dirs = Vec::with_capacity(4 * r);
    for i in 0..r {
        for &ph in &phases {
            dirs.push(Direction::Lambda(i, ph));
        }
    }
    for j in 0..r {
        for &ph in &phases {
            dirs.push(Direction::Invariant(j, ph));
        }
    }
    let tangents = dirs
        .iter()
        .map(|&d| pushforward(chev, c, &base, d, fd_step))
        .collect::<Result<Vec<_>>>()?;
    let mut dev = PullbackDeviation::default();
    for (a, da) in dirs.iter().enumerate() {
        for (b, db) in dirs.iter().enumerate().skip(a + 1) {
            let value = omega(&base.x, &tangents[a], &tangents[b]);
            let (expected, slot) = match (*da, *db) {
                (Direction::Lambda(..), Direction::Lambda(..)) => (ZERO, &mut dev.lambda_lambda),
                (Direction::Lambda(i, p), Direction::Invariant(j, q)) => {
                    let e = if i == j { p * q } else { ZERO };
                    (e, &mut dev.lambda_f)
                }
                (Direction::Invariant(..), Direction::Invariant(..)) => (ZERO, &mut dev.f_f),
                (Direction::Invariant(..), Direction::Lambda(..)) => unreachable!("ordering"),
            };
            *slot = slot.max((value - expected).norm());
        }
    }
    Ok(dev)
}

/// Numerical rank of the finite-difference Jacobian of `Phi` in `2r` complex coordinates.
pub fn cjl_jacobian_rank(chev: &ChevalleyData, c: &CjlPoint, fd_step: f64) -> Result<usize> {
    let r = chev.rank();
    let n = chev.n();
    let base = cjl_map(c);
    let mut dirs: Vec<Direction> = (0..r).map(|i| Direction::Lambda(i, c64(1.0, 0.0))).collect();
    dirs.extend((0..r).map(|j| Direction::Invariant(j, c64(1.0, 0.0))));
    let rows = 2 * (n * n - 1);
    let mut jac = CMatrix::zeros(rows, dirs.len());
    for (k, &d) in dirs.iter().enumerate() {
        let t = pushforward(chev, c, &base, d, fd_step)?;
        let mut col = sl_coords(&t.y);
        col.extend(sl_coords(&t.z));
        jac.set_column(k, &col);
    }
    Ok(rank(&jac, chev.tol.kernel)?)
}

/// Whether two points share an invariant value, as judged at tolerance `tol`.
pub fn same_level(p: &ZPoint, q: &ZPoint, tol: f64) -> bool {
    vector_distance(&f_tilde(p), &f_tilde(q)) <= tol
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden_x() -> CMatrix {
        CMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0])
    }

    #[test]
    fn omega_antisymmetric_and_reduces() {
        let x = CMatrix::from_real(2, &[0.5, 1.0, 2.0, -0.5]);
        let v = Tangent {
            y: CMatrix::from_real(2, &[1.0, 2.0, 0.0, -1.0]),
            z: CMatrix::from_real(2, &[0.0, 1.0, 3.0, 0.0]),
        };
        assert_eq!(omega(&x, &v, &v), ZERO);
        let zero = CMatrix::zeros(2, 2);
        let v1 = Tangent { y: v.y.clone(), z: zero.clone() };
        let v2 = Tangent { y: zero.clone(), z: v.z.clone() };
        assert_eq!(omega(&zero, &v1, &v2), trace_form(&v.y, &v.z));
    }

    #[test]
    fn omega_spot_value_n2() {
        let x = CMatrix::from_real(2, &[1.0, 0.0, 0.0, -1.0]);
        let v1 = Tangent {
            y: CMatrix::from_real(2, &[0.0, 1.0, 0.0, 0.0]),
            z: CMatrix::unit(2, 0, 1),
        };
        let v2 = Tangent {
            y: CMatrix::from_real(2, &[0.0, 0.0, 1.0, 0.0]).scale_real(1.5),
            z: CMatrix::from_real(2, &[0.0, 2.0, 3.0, 0.0]),
        };
        // <y1,z2> = tr(E12 (2E12 + 3E21)) = 3
        // <y2,z1> = tr(1.5 E21 E12) = 1.5
        // [y1,y2] = 1.5 (E11 - E22), <x, .> = 1.5 * 2 = 3
        assert!((omega(&x, &v1, &v2) - c64(4.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn flow_step_golden_n2() {
        let p = ZPoint::identity_at(golden_x());
        for t in [0.0, 0.5, 1.3] {
            let q = flow_step(c64(t, 0.0), &p, 1);
            let want = CMatrix::from_real(2, &[t.cosh(), t.sinh(), t.sinh(), t.cosh()]);
            assert!(q.g.distance(&want) < 1e-13 * want.frobenius_norm());
            assert_eq!(q.x, p.x);
        }
    }

    #[test]
    fn identity_on_xi_is_a_point() {
        let c = ChevalleyData::new(3).unwrap();
        assert!(is_z_point(&c, &CMatrix::identity(3), &c.xi, 1e-9));
        let g = CMatrix::from_real(3, &[1.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
        assert!(!is_z_point(&c, &g, &c.xi, 1e-9));
    }

    #[test]
    fn cjl_rejects_bad_step() {
        let c = ChevalleyData::new(2).unwrap();
        let p = CjlPoint {
            lambda: vec![ZERO],
            s: golden_x(),
        };
        assert!(matches!(cjl_pullback_check(&c, &p, 1e-2), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn cjl_pullback_n2() {
        let c = ChevalleyData::new(2).unwrap();
        let p = CjlPoint {
            lambda: vec![c64(0.3, -0.2)],
            s: golden_x(),
        };
        let dev = cjl_pullback_check(&c, &p, 1e-6).unwrap();
        assert!(dev.max() < 1e-6, "{dev:?}");
        assert_eq!(cjl_jacobian_rank(&c, &p, 1e-6).unwrap(), 2);
    }
}
