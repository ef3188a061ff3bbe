//! Seeded random inputs. Every sample draws from its own ChaCha8 stream, keyed by
//! the run seed, a label and the sample index, so results do not depend on the
//! order in which worker threads pick up samples.

use std::hash::{Hash, Hasher};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::centralizer::{cjl_map, CjlPoint, ZPoint};
use crate::error::{Error, Result};
use crate::invariants::gradients;
use crate::lie::ChevalleyData;
use crate::linalg::{c64, mat_exp, CMatrix};
use crate::toda::{in_v, TodaPoint};

/// Maximum rejection-sampling attempts per sample.
pub const MAX_TRIES: usize = 1000;

/// FNV-1a, fixed so stream ids are identical across platforms and releases.
struct Fnv(u64);

impl Hasher for Fnv {
    fn finish(&self) -> u64 {
        self.0
    }
    fn write(&mut self, bytes: &[u8]) {
        for b in bytes {
            self.0 ^= u64::from(*b);
            self.0 = self.0.wrapping_mul(0x0100_0000_01b3);
        }
    }
}

pub fn stream(seed: u64, label: &str, index: usize) -> ChaCha8Rng {
    let mut h = Fnv(0xcbf2_9ce4_8422_2325);
    label.hash(&mut h);
    (index as u64).hash(&mut h);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(h.finish());
    rng
}

/// Real and imaginary parts uniform in `[-1, 1]`.
pub fn complex(rng: &mut impl Rng) -> Complex64 {
    c64(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0))
}

pub fn complex_vec(rng: &mut impl Rng, len: usize) -> Vec<Complex64> {
    (0..len).map(|_| complex(rng)).collect()
}

pub fn matrix(rng: &mut impl Rng, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| complex(rng))
}

/// Random traceless matrix rescaled to Frobenius norm `norm`.
pub fn algebra(rng: &mut impl Rng, n: usize, norm: f64) -> CMatrix {
    let mut m = matrix(rng, n);
    let mean = m.trace() / n as f64;
    for k in 0..n {
        m[(k, k)] -= mean;
    }
    let f = m.frobenius_norm();
    m.scale_real(norm / f)
}

/// `exp(y)` for a random traceless `y` with `|y| <= 1`.
pub fn group(rng: &mut impl Rng, n: usize) -> CMatrix {
    let norm = rng.random_range(0.1..=1.0);
    mat_exp(&algebra(rng, n, norm))
}

pub fn section_point(rng: &mut impl Rng, chev: &ChevalleyData) -> CMatrix {
    chev.section_point(&complex_vec(rng, chev.rank()))
}

/// Random element of `xi + b` with unit-box entries on and above the diagonal.
pub fn xi_plus_b(rng: &mut impl Rng, chev: &ChevalleyData) -> CMatrix {
    let n = chev.n();
    let mut z = chev.xi.clone();
    for i in 0..n {
        for j in i..n {
            z[(i, j)] = complex(rng);
        }
    }
    let mean = z.trace() / n as f64;
    for k in 0..n {
        z[(k, k)] -= mean;
    }
    z
}

/// Random upper unitriangular matrix with unit-box entries.
pub fn unipotent(rng: &mut impl Rng, n: usize) -> CMatrix {
    let mut u = CMatrix::identity(n);
    for i in 0..n {
        for j in i + 1..n {
            u[(i, j)] = complex(rng);
        }
    }
    u
}

/// Toda point with unit-box entries; the diagonal is made traceless.
pub fn toda_point(rng: &mut impl Rng, chev: &ChevalleyData) -> TodaPoint {
    let n = chev.n();
    let mut diag = complex_vec(rng, n);
    let mean = diag.iter().sum::<Complex64>() / n as f64;
    for d in diag.iter_mut() {
        *d -= mean;
    }
    let roots = (0..n - 1)
        .map(|_| loop {
            let y = complex(rng);
            if y.norm() > chev.tol.root_min {
                break y;
            }
        })
        .collect();
    TodaPoint { diag, roots }
}

/// Rejection-samples a Toda point inside `V`.
pub fn v_point(rng: &mut impl Rng, chev: &ChevalleyData) -> Result<TodaPoint> {
    for _ in 0..MAX_TRIES {
        let p = toda_point(rng, chev);
        if in_v(chev, &p) {
            return Ok(p);
        }
    }
    Err(Error::NoConvergence("sampling in V", f64::NAN))
}

/// Random point of the universal centralizer: `Phi(lambda, s)` with
/// `|lambda_i| |grad_vee(s, i)| <= sqrt 2`.
pub fn z_point(rng: &mut impl Rng, chev: &ChevalleyData) -> ZPoint {
    cjl_map(&cjl_point(rng, chev))
}

pub fn cjl_point(rng: &mut impl Rng, chev: &ChevalleyData) -> CjlPoint {
    let s = section_point(rng, chev);
    // Unscaled coordinates overflow `exp` once `|s^(n-1)|` grows with `n`.
    let lambda = gradients(&s)
        .iter()
        .map(|g| complex(rng) / g.frobenius_norm().max(1.0))
        .collect();
    CjlPoint { lambda, s }
}

/// Random element of the centralizer of `x`: a unit-box combination of its
/// gradients, each rescaled to norm at most 1.
pub fn centralizer_direction(rng: &mut impl Rng, x: &CMatrix) -> CMatrix {
    let n = x.dim();
    let mut y = CMatrix::zeros(n, n);
    for g in gradients(x) {
        let c = complex(rng) / g.frobenius_norm().max(1.0);
        y.axpy(c, &g);
    }
    y
}
