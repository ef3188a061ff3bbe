//! The `n = 2` reference point `x0 = xi + E_12` and everything built from it.
//!
//! The flow has the closed form `diag = (tanh t, -tanh t)`, `root = sech^2 t`.

use centralizer_lab::kostant::{delta, lambda, nu, theta};
use centralizer_lab::linalg::c64;
use centralizer_lab::toda::{phi, sl2_golden, toda_flow};
use centralizer_lab::ChevalleyData;

fn main() -> centralizer_lab::Result<()> {
    let chev = ChevalleyData::new(2)?;
    let x0 = sl2_golden(&chev);
    let x = x0.to_matrix();
    println!("x0 =\n{x:.3}\n");
    println!("theta(x0) =\n{:.3}\n", theta(&chev, &x)?);
    println!("nu(x0) =\n{:.3}\n", nu(&chev, &x)?);
    println!("delta(x0) =\n{:.3}\n", delta(&chev, &x)?);
    println!("lambda(x0) =\n{:.3}\n", lambda(&chev, &x)?);
    let z = phi(&chev, &x0)?;
    println!("phi(x0): g (up to scalars) =\n{:.3}\nx =\n{:.3}\n", *z.g, z.x);

    println!("{:>6} {:>14} {:>14} {:>10}", "t", "diag_1", "tanh t", "|err|");
    for t in [0.25, 1.0, 2.0] {
        let p = toda_flow(&chev, 1, c64(t, 0.0), &x0)?;
        let sech = 1.0 / f64::cosh(t);
        let err = (p.diag[0] - t.tanh()).norm().max((p.roots[0] - sech * sech).norm());
        println!("{t:>6} {:>14.10} {:>14.10} {err:>10.1e}", p.diag[0].re, t.tanh());
    }
    Ok(())
}
