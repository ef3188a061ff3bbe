//! Samples a point of `V` for `sl_3`, follows both flows and checks that the
//! invariants stay put.

use centralizer_lab::invariants::{invariants, vector_distance};
use centralizer_lab::linalg::c64;
use centralizer_lab::sampling::{stream, v_point};
use centralizer_lab::toda::FlowFrame;
use centralizer_lab::ChevalleyData;

fn main() -> centralizer_lab::Result<()> {
    let chev = ChevalleyData::new(3)?;
    let p = v_point(&mut stream(11, "example", 0), &chev)?;
    let f0 = invariants(&p.to_matrix());
    println!("x(0) =\n{:.4}\n", p.to_matrix());

    // theta and lambda do not depend on time, so one frame serves every t.
    let frame = FlowFrame::new(&chev, &p)?;
    for i in 1..=chev.rank() {
        println!("flow {i}");
        for t in [0.0, 0.2, 0.4, 0.6, 0.8, 1.0] {
            match frame.evaluate(&chev, i, c64(t, 0.0)) {
                Ok((q, shape)) => {
                    let drift = vector_distance(&invariants(&q.to_matrix()), &f0);
                    let roots: Vec<String> = q.roots.iter().map(|y| format!("{y:.4}")).collect();
                    println!("  t={t:.1}  roots=[{}]  drift={drift:.1e}  shape={shape:.1e}", roots.join(", "));
                }
                Err(e) => println!("  t={t:.1}  {e}"),
            }
        }
    }
    Ok(())
}
