//! The Kostant section `S = xi + span(eta^k)`: invariants are coordinates on it,
//! and every element of `xi + b` is a unipotent conjugate of a unique point of `S`.

use centralizer_lab::invariants::{f_s_inverse, invariants};
use centralizer_lab::kostant::{psi, psi_inverse};
use centralizer_lab::linalg::c64;
use centralizer_lab::sampling::{stream, xi_plus_b};
use centralizer_lab::ChevalleyData;

fn main() -> centralizer_lab::Result<()> {
    let chev = ChevalleyData::new(4)?;
    println!("xi =\n{:.1}\n\neta =\n{:.1}\n", chev.xi, chev.eta);

    let target = vec![c64(1.0, 0.0), c64(0.0, -0.5), c64(0.25, 0.25)];
    let s = f_s_inverse(&chev, &target)?;
    println!("point of S with F = {target:?}:\n{s:.4}");
    println!("F recovered: {:?}\n", invariants(&s));

    let z = xi_plus_b(&mut stream(1, "section", 0), &chev);
    let d = psi_inverse(&chev, &z)?;
    println!("z in xi + b splits as Ad_u(s) with u =\n{:.4}\nand s =\n{:.4}", d.u, d.s);
    println!("reassembly error {:.1e}", psi(&d.u, &d.s).distance(&z));
    Ok(())
}
