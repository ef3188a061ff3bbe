//! Matrix exponential by scaling and squaring with a [13/13] Padé approximant.

use super::matrix::{c64, CMatrix};

/// Denominator/numerator coefficients of the diagonal [13/13] Padé approximant.
const PADE13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

/// 1-norm bound below which [13/13] is accurate to unit roundoff.
const THETA13: f64 = 5.371_920_351_148_152;

/// `exp(a)` for a square complex matrix.
///
/// Total on finite input; the LU solve of the Padé denominator cannot fail
/// once the scaled norm is below `THETA13`.
pub fn mat_exp(a: &CMatrix) -> CMatrix {
    assert!(a.is_square(), "mat_exp requires a square matrix");
    let n = a.dim();
    let norm = a.norm_one();
    if norm == 0.0 {
        return CMatrix::identity(n);
    }
    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let scaled = a.scale_real(0.5f64.powi(squarings));
    let mut result = pade13(&scaled);
    for _ in 0..squarings {
        result = result.matmul(&result);
    }
    result
}

fn pade13(a: &CMatrix) -> CMatrix {
    let n = a.dim();
    let b = |k: usize| c64(PADE13[k], 0.0);
    let ident = CMatrix::identity(n);
    let a2 = a.matmul(a);
    let a4 = a2.matmul(&a2);
    let a6 = a4.matmul(&a2);

    let mut inner_u = a6.scale(b(13));
    inner_u.axpy(b(11), &a4);
    inner_u.axpy(b(9), &a2);
    let mut u = a6.matmul(&inner_u);
    u.axpy(b(7), &a6);
    u.axpy(b(5), &a4);
    u.axpy(b(3), &a2);
    u.axpy(b(1), &ident);
    let u = a.matmul(&u);

    let mut inner_v = a6.scale(b(12));
    inner_v.axpy(b(10), &a4);
    inner_v.axpy(b(8), &a2);
    let mut v = a6.matmul(&inner_v);
    v.axpy(b(6), &a6);
    v.axpy(b(4), &a4);
    v.axpy(b(2), &a2);
    v.axpy(b(0), &ident);

    let numer = &v + &u;
    let denom = &v - &u;
    denom
        .solve(&numer)
        .expect("Padé denominator is nonsingular for scaled input")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gives_identity() {
        assert_eq!(mat_exp(&CMatrix::zeros(3, 3)), CMatrix::identity(3));
    }

    #[test]
    fn nilpotent_order_two() {
        let t = 2.5;
        let a = CMatrix::from_real(2, &[0.0, t, 0.0, 0.0]);
        let e = mat_exp(&a);
        assert!(e.distance(&CMatrix::from_real(2, &[1.0, t, 0.0, 1.0])) < 1e-14);
    }

    #[test]
    fn involution_closed_form() {
        // A^2 = I, so exp(tA) = cosh(t) I + sinh(t) A.
        for &t in &[0.1, 1.0, 3.0, 7.5] {
            let a = CMatrix::from_real(2, &[t, 0.0, t, -t]);
            let expected =
                CMatrix::from_real(2, &[f64::exp(t), 0.0, f64::sinh(t), f64::exp(-t)]);
            let got = mat_exp(&a);
            assert!(
                got.distance(&expected) <= 1e-13 * expected.frobenius_norm(),
                "t={t}"
            );
        }
    }

    #[test]
    fn diagonal_complex() {
        let d = [c64(0.3, 1.2), c64(-2.0, 0.5), c64(1.7, -3.0)];
        let e = mat_exp(&CMatrix::from_diag(&d));
        for (i, v) in d.iter().enumerate() {
            assert!((e[(i, i)] - v.exp()).norm() < 1e-13 * v.exp().norm());
        }
    }
}
