//! Symplectic coordinates `(lambda, F)` on the universal centralizer.
//!
//! Pulls the symplectic form back along `Phi` by finite differences and compares
//! with `sum dz_i ^ df_i` block by block.

use centralizer_lab::centralizer::{cjl_jacobian_rank, cjl_pullback_check};
use centralizer_lab::sampling::{cjl_point, stream};
use centralizer_lab::ChevalleyData;

fn main() -> centralizer_lab::Result<()> {
    for n in 2..=4 {
        let chev = ChevalleyData::new(n)?;
        let h = chev.tol.fd_step;
        for k in 0..3 {
            let c = cjl_point(&mut stream(5, "cjl", k), &chev);
            let d = cjl_pullback_check(&chev, &c, h)?;
            let rank = cjl_jacobian_rank(&chev, &c, h)?;
            println!(
                "n={n} #{k}: lambda-lambda {:.1e}  lambda-F {:.1e}  F-F {:.1e}  rank {rank}/{}",
                d.lambda_lambda,
                d.lambda_f,
                d.f_f,
                2 * chev.rank()
            );
        }
    }
    Ok(())
}
