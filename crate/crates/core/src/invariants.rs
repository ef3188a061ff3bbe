//! Invariant polynomials `f_i(x) = tr(x^{i+1}) / (i+1)`, their trace-form gradients,
//! and the inverse of `F` restricted to the Kostant section.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lie::{trace_form, ChevalleyData};
use crate::linalg::{eigenvalues, solve_vector, CMatrix};

/// `f_i(x)` for one-based `i` in `1..=r`.
pub fn f_i(x: &CMatrix, i: usize) -> Complex64 {
    x.powi(i as u32 + 1).trace() / (i as f64 + 1.0)
}

/// `F(x) = (f_1(x), ..., f_r(x))`.
pub fn invariants(x: &CMatrix) -> Vec<Complex64> {
    let r = x.dim() - 1;
    let mut out = Vec::with_capacity(r);
    let mut p = x.clone();
    for i in 1..=r {
        p = p.matmul(x);
        out.push(p.trace() / (i as f64 + 1.0));
    }
    out
}

/// Trace-form dual of `d_x f_i`: `x^i - tr(x^i)/n I`, one-based `i`.
pub fn grad_vee(x: &CMatrix, i: usize) -> CMatrix {
    assert!(i >= 1, "gradient index is one-based");
    let n = x.dim();
    let mut p = x.powi(i as u32);
    let mean = p.trace() / n as f64;
    for k in 0..n {
        p[(k, k)] -= mean;
    }
    p
}

/// All gradients `grad_vee(x, 1..=r)`.
pub fn gradients(x: &CMatrix) -> Vec<CMatrix> {
    (1..x.dim()).map(|i| grad_vee(x, i)).collect()
}

pub fn vector_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(p, q)| (p - q).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

pub fn vector_norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `F` on the section in section coordinates.
pub fn f_s(chev: &ChevalleyData, coords: &[Complex64]) -> Vec<Complex64> {
    invariants(&chev.section_point(coords))
}

/// The unique `x` on the Kostant section with `F(x) = z`.
///
/// Each `f_i` restricted to the section is affine in the `i`-th coordinate with
/// a constant nonzero slope and involves only lower coordinates otherwise, so
/// forward substitution is exact up to rounding. Newton steps with the analytic
/// Jacobian `<grad_vee(x, i), b_k>` polish the result.
pub fn f_s_inverse(chev: &ChevalleyData, z: &[Complex64]) -> Result<CMatrix> {
    let r = chev.rank();
    if z.len() != r {
        return Err(Error::DimensionMismatch {
            expected: r,
            actual: z.len(),
        });
    }
    let mut s = vec![Complex64::new(0.0, 0.0); r];
    for i in 0..r {
        let slope = f_i(&(&chev.xi + &chev.section_basis[i]), i + 1);
        let offset = f_i(&chev.section_point(&s), i + 1);
        s[i] = (z[i] - offset) / slope;
    }
    let target = 1.0 + vector_norm(z);
    let mut x = chev.section_point(&s);
    let mut residual = vector_distance(&invariants(&x), z);
    for _ in 0..4 {
        if residual <= f64::EPSILON * target {
            break;
        }
        let fx = invariants(&x);
        let grads = gradients(&x);
        let jac = CMatrix::from_fn(r, r, |i, k| trace_form(&grads[i], &chev.section_basis[k]));
        let rhs: Vec<Complex64> = z.iter().zip(&fx).map(|(a, b)| a - b).collect();
        let Ok(step) = solve_vector(&jac, &rhs) else {
            break;
        };
        let trial: Vec<Complex64> = s.iter().zip(&step).map(|(a, b)| a + b).collect();
        let trial_x = chev.section_point(&trial);
        let trial_res = vector_distance(&invariants(&trial_x), z);
        if trial_res < residual {
            s = trial;
            x = trial_x;
            residual = trial_res;
        } else {
            break;
        }
    }
    if residual > chev.tol.section * target {
        return Err(Error::NoConvergence("inverse of F on the section", residual));
    }
    Ok(x)
}

/// Smallest gap between real parts of the spectrum after sorting.
pub fn real_part_gap(values: &[Complex64]) -> f64 {
    let mut re: Vec<f64> = values.iter().map(|v| v.re).collect();
    re.sort_by(f64::total_cmp);
    re.windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min)
}

/// Eigenvalues sorted by decreasing real part, with the minimal real-part gap.
pub fn chamber_spectrum(x: &CMatrix) -> Result<(Vec<Complex64>, f64)> {
    let mut values = eigenvalues(x)?;
    values.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    let gap = real_part_gap(&values);
    Ok((values, gap))
}

/// Whether the spectrum encoded by `z` has pairwise-distinct real parts.
pub fn in_d(chev: &ChevalleyData, z: &[Complex64]) -> Result<bool> {
    let x = f_s_inverse(chev, z)?;
    let (_, gap) = chamber_spectrum(&x)?;
    Ok(gap > chev.tol.chamber)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;

    #[test]
    fn invariants_of_involution() {
        let x = CMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]);
        assert_eq!(invariants(&x), vec![c64(1.0, 0.0)]);
    }

    #[test]
    fn nilpotent_invariants_vanish() {
        let c = ChevalleyData::new(5).unwrap();
        assert!(invariants(&c.xi).iter().all(|v| v.norm() == 0.0));
        assert!(invariants(&CMatrix::zeros(3, 3)).iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn first_gradient_is_identity_map() {
        let x = CMatrix::from_real(2, &[1.0, 0.0, 1.0, -1.0]);
        assert_eq!(grad_vee(&x, 1), x);
    }

    #[test]
    fn section_inverse_n2_golden() {
        let c = ChevalleyData::new(2).unwrap();
        let x = f_s_inverse(&c, &[c64(1.0, 0.0)]).unwrap();
        assert!(x.distance(&CMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0])) < 1e-15);
        assert_eq!(f_s_inverse(&c, &[c64(0.0, 0.0)]).unwrap(), c.xi);
    }

    #[test]
    fn zero_maps_to_xi_every_rank() {
        for n in 2..=8 {
            let c = ChevalleyData::new(n).unwrap();
            let x = f_s_inverse(&c, &vec![c64(0.0, 0.0); n - 1]).unwrap();
            assert!(x.distance(&c.xi) < 1e-14);
        }
    }

    #[test]
    fn chamber_membership_n2() {
        let c = ChevalleyData::new(2).unwrap();
        assert!(in_d(&c, &[c64(1.0, 0.0)]).unwrap());
        assert!(!in_d(&c, &[c64(-1.0, 0.0)]).unwrap());
        assert!(!in_d(&c, &[c64(0.0, 0.0)]).unwrap());
    }
}
