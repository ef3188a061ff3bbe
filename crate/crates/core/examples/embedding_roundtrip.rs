//! `phi` sends a Toda point to the universal centralizer; `phi_inverse` brings it back.

use centralizer_lab::centralizer::f_tilde;
use centralizer_lab::invariants::{invariants, vector_distance};
use centralizer_lab::sampling::{stream, v_point};
use centralizer_lab::toda::{phi, phi_inverse};
use centralizer_lab::ChevalleyData;

fn main() -> centralizer_lab::Result<()> {
    let chev = ChevalleyData::new(4)?;
    for k in 0..5 {
        let p = v_point(&mut stream(3, "embed", k), &chev)?;
        let z = phi(&chev, &p)?;
        let back = phi_inverse(&chev, &z)?;
        println!(
            "sample {k}: roundtrip {:.1e}  stabilizer {:.1e}  |F~ - F| {:.1e}",
            back.distance(&p),
            z.stabilizer_deviation(),
            vector_distance(&f_tilde(&z), &invariants(&p.to_matrix())),
        );
    }
    Ok(())
}
