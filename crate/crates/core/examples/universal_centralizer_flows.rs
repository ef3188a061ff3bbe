//! Hamiltonian flows on the universal centralizer: they move only the group part,
//! stay on `Z_g`, compose additively in time and have isotropic generators.

use centralizer_lab::centralizer::{flow_step, ham_field, in_moment_preimage, omega};
use centralizer_lab::linalg::c64;
use centralizer_lab::sampling::{stream, z_point};
use centralizer_lab::ChevalleyData;

fn main() -> centralizer_lab::Result<()> {
    let chev = ChevalleyData::new(3)?;
    let p = z_point(&mut stream(9, "zg", 0), &chev);
    let (inside, dev) = in_moment_preimage(&chev, &p.g, &p.x);
    println!("sampled point lies in mu^-1(S x -S): {inside} (deviation {dev:.1e})");

    let (s, t) = (c64(0.3, 0.1), c64(-0.2, 0.4));
    for i in 1..=chev.rank() {
        let q = flow_step(t, &p, i);
        let two = flow_step(s, &q, i);
        let one = flow_step(s + t, &p, i);
        println!(
            "flow {i}: stabilizer {:.1e}  group law {:.1e}",
            q.stabilizer_deviation(),
            two.distance(&one)
        );
    }
    let w = omega(&p.x, &ham_field(&p, 1), &ham_field(&p, 2));
    println!("omega(H_1, H_2) = {w:.2e}");
    Ok(())
}
