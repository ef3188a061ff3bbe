//! Closed-form values at `x0 = xi + E_12` in `sl_2`.
//!
//! On this orbit `x(t) = [[tanh t, sech^2 t], [1, -tanh t]]`, which continues
//! analytically to complex `t` away from the poles of `tanh`.

use centralizer_lab::centralizer::f_tilde;
use centralizer_lab::kostant::{beta, delta, lambda, nu, theta};
use centralizer_lab::linalg::{c64, CMatrix};
use centralizer_lab::toda::{phi, phi_inverse, sl2_golden, toda_flow};
use centralizer_lab::{ChevalleyData, Error, GroupElement};
use num_complex::Complex64;

fn chev() -> ChevalleyData {
    ChevalleyData::new(2).unwrap()
}

#[test]
fn kostant_maps_at_x0() {
    let c = chev();
    let x = sl2_golden(&c).to_matrix();
    // Eigenvalues of x0 are +1 and -1, ordered by decreasing real part.
    assert!(theta(&c, &x).unwrap().distance(&CMatrix::from_real(2, &[1.0, 0.0, 1.0, -1.0])) < 1e-14);
    let n = nu(&c, &x).unwrap();
    assert!(n.distance(&CMatrix::from_real(2, &[1.0, -1.0, 0.0, 1.0])) < 1e-14);
    assert!(delta(&c, &x).unwrap().distance(&n) < 1e-14);
    assert!(lambda(&c, &x).unwrap().distance(&CMatrix::from_real(2, &[1.0, 0.0, 1.0, -1.0])) < 1e-14);
    // x0 already lies on the section.
    assert!(beta(&c, &x).unwrap().distance(&x) < 1e-14);
}

#[test]
fn embedding_at_x0() {
    let c = chev();
    let x0 = sl2_golden(&c);
    let z = phi(&c, &x0).unwrap();
    let swap = CMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]);
    assert!(z.g.distance_mod_scalar(&GroupElement::new(swap.clone()).unwrap()) < 1e-14);
    assert!(z.x.distance(&swap) < 1e-14);
    assert!((f_tilde(&z)[0] - c64(1.0, 0.0)).norm() < 1e-14);
    assert!(phi_inverse(&c, &z).unwrap().distance(&x0) < 1e-14);
}

#[test]
fn flow_matches_closed_form_on_real_and_complex_times() {
    let c = chev();
    let x0 = sl2_golden(&c);
    let times = [
        c64(0.0, 0.0),
        c64(-1.5, 0.0),
        c64(3.0, 0.0),
        c64(0.3, 0.2),
        c64(-0.4, 1.0),
    ];
    for t in times {
        let p = toda_flow(&c, 1, t, &x0).unwrap();
        let th: Complex64 = t.tanh();
        let sech2 = Complex64::new(1.0, 0.0) / (t.cosh() * t.cosh());
        assert!((p.diag[0] - th).norm() < 1e-12, "t = {t}");
        assert!((p.diag[1] + th).norm() < 1e-12, "t = {t}");
        assert!((p.roots[0] - sech2).norm() < 1e-12, "t = {t}");
    }
}

#[test]
fn flow_is_undefined_at_the_pole() {
    let c = chev();
    let x0 = sl2_golden(&c);
    let pole = c64(0.0, std::f64::consts::FRAC_PI_2);
    assert!(matches!(
        toda_flow(&c, 1, pole, &x0),
        Err(Error::NotInGStar { .. })
    ));
}
