//! Seeded property checks over every module, aggregated into a [`Report`].
//!
//! Samples fan out over a rayon pool and are collected in index order, so a
//! report depends only on `(n, seed, samples, tolerances)`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::centralizer::{
    cjl_jacobian_rank, cjl_map, cjl_pullback_check, cjl_tangents, f_tilde, flow_step, ham_field,
    in_moment_preimage, omega, gradient_coords, CjlPoint, PullbackDeviation, ZPoint,
};
use crate::error::{Error, Result};
use crate::invariants::{
    chamber_spectrum, f_i, f_s_inverse, grad_vee, gradients, invariants, vector_distance,
    vector_norm,
};
use crate::kostant::{
    beta, delta_of_theta, gstar_factor, lambda_torus_deviation, lambda_with_theta, nu_with_theta,
    psi, psi_inverse, tau, theta, w0_lift,
};
use crate::lie::{
    centralizer_basis, conjugate, distance_mod_scalar, try_conjugate, sl_coords, trace_form, ChevalleyData,
    GroupElement,
};
use crate::linalg::{c64, eig, gauss_ldu, mat_exp, rank, CMatrix, ONE};
use crate::sampling::{self, stream};
use crate::toda::{
    in_v, intertwine_check, intertwine_infinitesimal, phi, phi_inverse, sl2_golden, toda_flow,
    toda_vector_field, FlowFrame, TodaPoint,
};
use crate::tolerances::Tolerances;

/// Everything a check may depend on.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub n: usize,
    pub seed: u64,
    pub samples: usize,
    pub tolerances: Tolerances,
    /// Per-check threshold overrides keyed by check name.
    pub thresholds: BTreeMap<String, f64>,
    /// Restrict to checks whose name or module matches one of these.
    pub only: Vec<String>,
}

impl SuiteConfig {
    pub fn new(n: usize, seed: u64, samples: usize) -> Self {
        Self {
            n,
            seed,
            samples,
            tolerances: Tolerances::default(),
            thresholds: BTreeMap::new(),
            only: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub module: String,
    /// Largest deviation over evaluated samples; `null` when nothing was evaluated.
    pub max_deviation: Option<f64>,
    pub tolerance: f64,
    /// `le`: pass when `max_deviation <= tolerance`; `gt`: pass when the value exceeds it.
    pub comparison: &'static str,
    pub pass: bool,
    pub samples: usize,
    pub evaluated: usize,
    pub skipped: usize,
    pub failed: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Report {
    pub command: String,
    pub n: usize,
    pub seed: u64,
    pub samples: usize,
    pub pass: bool,
    pub checks: Vec<CheckReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

impl Report {
    pub fn new(command: &str, cfg: &SuiteConfig, checks: Vec<CheckReport>) -> Self {
        Self {
            command: command.to_string(),
            n: cfg.n,
            seed: cfg.seed,
            samples: cfg.samples,
            pass: checks.iter().all(|c| c.pass),
            checks,
            wall_time_s: None,
        }
    }

    pub fn check(&self, name: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Result of one sample.
#[derive(Debug, Clone)]
pub enum Outcome {
    Value(f64),
    /// Sample outside the domain where the property is claimed.
    Skip(String),
    Fail(String),
}

impl From<Result<f64>> for Outcome {
    fn from(r: Result<f64>) -> Self {
        match r {
            Ok(v) if v.is_finite() => Outcome::Value(v),
            Ok(v) => Outcome::Fail(format!("non-finite deviation {v}")),
            Err(e) => Outcome::Fail(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Comparison {
    AtMost,
    Exceeds,
}

#[derive(Debug, Clone, Copy)]
enum Count {
    All,
    Scaled(usize),
    AtMost(usize),
    Once,
}

/// Per-run context shared by every sample.
pub struct Ctx {
    pub chev: ChevalleyData,
    pub seed: u64,
    pub samples: usize,
}

impl Ctx {
    pub fn rng(&self, label: &str, k: usize) -> ChaCha8Rng {
        stream(self.seed, label, k)
    }

    /// The `k`-th shared sample of `V`; every Toda check sees the same points.
    pub fn v_sample(&self, k: usize) -> Result<TodaPoint> {
        sampling::v_point(&mut self.rng("v-sample", k), &self.chev)
    }

    fn n(&self) -> usize {
        self.chev.n()
    }

    fn r(&self) -> usize {
        self.chev.rank()
    }
}

type SampleFn = fn(&Ctx, usize) -> Outcome;

#[derive(Clone, Copy)]
enum Tol {
    Fixed(f64),
    PerN(fn(usize) -> f64),
}

impl Tol {
    fn at(self, n: usize) -> f64 {
        match self {
            Tol::Fixed(v) => v,
            Tol::PerN(f) => f(n),
        }
    }
}

struct CheckDef {
    name: &'static str,
    module: &'static str,
    tolerance: Tol,
    comparison: Comparison,
    count: Count,
    run: SampleFn,
}

const fn le(
    name: &'static str,
    module: &'static str,
    tolerance: Tol,
    count: Count,
    run: SampleFn,
) -> CheckDef {
    CheckDef {
        name,
        module,
        tolerance,
        comparison: Comparison::AtMost,
        count,
        run,
    }
}

fn rel(a: &CMatrix, b: &CMatrix) -> f64 {
    a.distance(b) / (1.0 + b.frobenius_norm())
}

fn is_gstar_blowup(e: &Error) -> bool {
    matches!(e, Error::NotInGStar { .. })
}

/// Flow errors off the real axis, or in G* blow-ups, mark the sample as undefined.
fn flow_or_skip<T>(r: Result<T>) -> std::result::Result<T, Outcome> {
    match r {
        Ok(v) => Ok(v),
        Err(e) if is_gstar_blowup(&e) => Err(Outcome::Skip(e.to_string())),
        Err(e) => Err(Outcome::Fail(e.to_string())),
    }
}

macro_rules! try_outcome {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return Outcome::Fail(e.to_string()),
        }
    };
}

macro_rules! try_flow {
    ($e:expr) => {
        match flow_or_skip($e) {
            Ok(v) => v,
            Err(o) => return o,
        }
    };
}

fn random_index(rng: &mut ChaCha8Rng, r: usize) -> usize {
    rng.random_range(1..=r)
}

// ---------------------------------------------------------------- linalg

fn eig_reconstruct(ctx: &Ctx, k: usize) -> Outcome {
    let mut rng = ctx.rng("eig", k);
    let a = sampling::matrix(&mut rng, ctx.n());
    let e = try_outcome!(eig(&a));
    let Ok(vinv) = e.vectors.inverse() else {
        return Outcome::Skip("eigenvector matrix singular".into());
    };
    let cond = e.vectors.frobenius_norm() * vinv.frobenius_norm();
    if cond >= 1e6 {
        return Outcome::Skip(format!("eigenvector condition {cond:.1e}"));
    }
    let back = e
        .vectors
        .matmul(&CMatrix::from_diag(&e.values))
        .matmul(&vinv);
    Outcome::Value(back.distance(&a) / a.frobenius_norm())
}

fn expm_inverse(ctx: &Ctx, k: usize) -> Outcome {
    let mut rng = ctx.rng("expm-inv", k);
    let norm = rng.random_range(0.0..=5.0);
    let a = sampling::algebra(&mut rng, ctx.n(), norm);
    let prod = mat_exp(&a).matmul(&mat_exp(&-&a));
    Outcome::Value(prod.distance(&CMatrix::identity(ctx.n())))
}

fn expm_commuting(ctx: &Ctx, k: usize) -> Outcome {
    let mut rng = ctx.rng("expm-comm", k);
    let a = sampling::algebra(&mut rng, ctx.n(), 1.0);
    // Polynomials in `a` commute with it.
    let mut b = a.scale(sampling::complex(&mut rng));
    b.axpy(sampling::complex(&mut rng), &a.matmul(&a));
    let comm = a.bracket(&b).frobenius_norm();
    if comm >= 1e-14 {
        return Outcome::Skip(format!("commutator {comm:.1e} above 1e-14"));
    }
    let lhs = mat_exp(&(&a + &b));
    let rhs = mat_exp(&a).matmul(&mat_exp(&b));
    Outcome::Value(lhs.distance(&rhs) / rhs.frobenius_norm())
}

fn ldu_roundtrip(ctx: &Ctx, k: usize) -> Outcome {
    let mut rng = ctx.rng("ldu", k);
    let a = sampling::matrix(&mut rng, ctx.n());
    let f = try_outcome!(gauss_ldu(&a));
    let structural = f.l.strictly_upper_max() + f.u.strictly_lower_max() + f.d.off_diagonal_norm();
    Outcome::Value(f.reconstruct().distance(&a) / a.frobenius_norm() + structural)
}

// ---------------------------------------------------------------- lie_core

fn chevalley_structure(ctx: &Ctx, _k: usize) -> Outcome {
    let c = &ctx.chev;
    let mut dev: f64 = 0.0;
    dev = dev.max(c.xi.bracket(&c.eta).distance(&c.h));
    dev = dev.max(c.h.bracket(&c.xi).distance(&c.xi.scale_real(2.0)));
    dev = dev.max(c.h.bracket(&c.eta).distance(&c.eta.scale_real(-2.0)));
    for i in 0..ctx.r() {
        let alpha_h = c.h[(i, i)] - c.h[(i + 1, i + 1)];
        dev = dev.max((alpha_h + 2.0).norm());
        dev = dev.max((trace_form(&c.e_plus[i], &c.e_minus[i]) - ONE).norm());
    }
    let g_eta = try_outcome!(centralizer_basis(&c.eta, c.tol.kernel));
    if g_eta.len() != ctx.r() {
        return Outcome::Fail(format!("dim g_eta = {}, expected {}", g_eta.len(), ctx.r()));
    }
    // Gram matrix of the trace form on the Cartan subalgebra.
    let basis = crate::lie::sl_basis(ctx.n());
    let cartan = &basis[basis.len() - ctx.r()..];
    let gram = CMatrix::from_fn(ctx.r(), ctx.r(), |i, j| trace_form(&cartan[i], &cartan[j]));
    if gram.determinant().norm() < 0.5 {
        return Outcome::Fail("trace form degenerate on the Cartan subalgebra".into());
    }
    Outcome::Value(dev)
}

fn pairing_invariance(ctx: &Ctx, k: usize) -> Outcome {
    let mut rng = ctx.rng("pairing", k);
    let n = ctx.n();
    let g = sampling::group(&mut rng, n);
    let x = sampling::algebra(&mut rng, n, 1.0);
    let y = sampling::algebra(&mut rng, n, 1.0);
    let lhs = trace_form(&conjugate(&g, &x), &conjugate(&g, &y));
    Outcome::Value((lhs - trace_form(&x, &y)).norm())
}

fn centralizer_dimension(ctx: &Ctx, k: usize) -> Outcome {
    let mut rng = ctx.rng("centralizer-dim", k);
    let x = if k.is_multiple_of(2) {
        sampling::algebra(&mut rng, ctx.n(), 1.0)
    } else {
        sampling::section_point(&mut rng, &ctx.chev)
    };
    let basis = try_outcome!(centralizer_basis(&x, ctx.chev.tol.kernel));
    Outcome::Value((basis.len() as f64 - ctx.r() as f64).abs())
}

fn scalar_blind(ctx: &Ctx, k: usize) -> Outcome {
    let mut rng = ctx.rng("scalar", k);
    let n = ctx.n();
    let g = sampling::group(&mut rng, n);
    let c = loop {
        let c = sampling::complex(&mut rng);
        if c.norm() > 0.1 {
            break c;
        }
    };
    let x = sampling::algebra(&mut rng, n, 1.0);
    let a = GroupElement::from_invertible(g.clone());
    let b = GroupElement::from_invertible(g.scale(c));
    let h = GroupElement::from_invertible(sampling::group(&mut rng, n));
    if !(a.equiv(&b, 1e-9) && b.equiv(&a, 1e-9) && a.equiv(&a, 1e-9)) {
        return Outcome::Fail("scalar multiples not identified".into());
    }
    if a.equiv(&h, 1e-9) != b.equiv(&h, 1e-9) {
        return Outcome::Fail("equality modulo scalars not transitive".into());
    }
    Outcome::Value(a.ad(&x).distance(&b.ad(&x)))
}

// ---------------------------------------------------------------- invariants

fn f_invariance(ctx: &Ctx, k: usize) -> Outcome {
    let mut rng = ctx.rng("f-inv", k);
    let n = ctx.n();
    let g = sampling::group(&mut rng, n);
    let x = sampling::algebra(&mut rng, n, 1.0);
    let f = invariants(&x);
    let moved = invariants(&conjugate(&g, &x));
    Outcome::Value(vector_distance(&f, &moved) / (1.0 + vector_norm(&f)))
}

fn gradient_commutes(ctx: &Ctx, k: usize) -> Outcome {
    let mut rng = ctx.rng("grad-comm", k);
    let x = sampling::algebra(&mut rng, ctx.n(), 1.0);
    let worst = (1..=ctx.r())
        .map(|i| x.bracket(&grad_vee(&x, i)).frobenius_norm())
        .fold(0.0, f64::max);
    Outcome::Value(worst)
}

fn gradient_equivariance(ctx: &Ctx, k: usize) -> Outcome {
    let mut rng = ctx.rng("grad-equiv", k);
    let n = ctx.n();
    let g = sampling::group(&mut rng, n);
    let x = sampling::algebra(&mut rng, n, 1.0);
    let y = conjugate(&g, &x);
    let worst = (1..=ctx.r())
        .map(|i| rel(&conjugate(&g, &grad_vee(&x, i)), &grad_vee(&y, i)))
        .fold(0.0, f64::max);
    Outcome::Value(worst)
}

fn gradient_fd(ctx: &Ctx, k: usize) -> Outcome {
    let mut rng = ctx.rng("grad-fd", k);
    let n = ctx.n();
    let x = sampling::algebra(&mut rng, n, 1.0);
    let z = sampling::algebra(&mut rng, n, 1.0);
    let eps = 1e-6;
    let worst = (1..=ctx.r())
        .map(|i| {
            let fd = (f_i(&(&x + &z.scale_real(eps)), i) - f_i(&(&x - &z.scale_real(eps)), i))
                / (2.0 * eps);
            (fd - trace_form(&grad_vee(&x, i), &z)).norm()
        })
        .fold(0.0, f64::max);
    Outcome::Value(worst)
}

fn section_roundtrip(ctx: &Ctx, k: usize) -> Outcome {
    let mut rng = ctx.rng("fs", k);
    let z = sampling::complex_vec(&mut rng, ctx.r());
    let x = try_outcome!(f_s_inverse(&ctx.chev, &z));
    let off = ctx.chev.section_deviation(&x);
    Outcome::Value((vector_distance(&invariants(&x), &z) / (1.0 + vector_norm(&z))).max(off))
}

fn gradient_independence(ctx: &Ctx, k: usize) -> Outcome {
    let mut rng = ctx.rng("grad-indep", k);
    let x = sampling::section_point(&mut rng, &ctx.chev);
    let grads = gradients(&x);
    let mut a = CMatrix::zeros(ctx.n() * ctx.n() - 1, ctx.r());
    for (j, g) in grads.iter().enumerate() {
        a.set_column(j, &sl_coords(g));
    }
    let rk = try_outcome!(rank(&a, ctx.chev.tol.kernel));
    Outcome::Value((ctx.r() - rk) as f64)
}

// ---------------------------------------------------------------- kostant_maps

fn psi_roundtrip(ctx: &Ctx, k: usize) -> Outcome {
    let mut rng = ctx.rng("psi", k);
    let c = &ctx.chev;
    // psi . psi^{-1} on xi + b
    let z = sampling::xi_plus_b(&mut rng, c);
    let d = try_outcome!(psi_inverse(c, &z));
    let mut dev = rel(&psi(&d.u, &d.s), &z);
    // psi^{-1} . psi on U x S
    let u = sampling::unipotent(&mut rng, ctx.n());
    let s = sampling::section_point(&mut rng, c);
    let d = try_outcome!(psi_inverse(c, &psi(&u, &s)));
    dev = dev.max(rel(&d.u, &u)).max(rel(&d.s, &s));
    if !d.u.is_upper_unitriangular(1e-12) {
        return Outcome::Fail("pi_U is not unitriangular".into());
    }
    Outcome::Value(dev)
}

fn theta_chamber(ctx: &Ctx, k: usize) -> Outcome {
    let x = try_outcome!(ctx.v_sample(k)).to_matrix();
    let th = try_outcome!(theta(&ctx.chev, &x));
    let d = th.diagonal();
    if d.windows(2).any(|w| w[0].re - w[1].re <= ctx.chev.tol.chamber) {
        return Outcome::Fail("theta(x) is not in the open chamber".into());
    }
    if (&th - &CMatrix::from_diag(&d)).distance(&ctx.chev.xi) > 0.0 {
        return Outcome::Fail("theta(x) - xi is not diagonal".into());
    }
    let f = invariants(&x);
    Outcome::Value(vector_distance(&invariants(&th), &f) / (1.0 + vector_norm(&f)))
}

fn nu_identity(ctx: &Ctx, k: usize) -> Outcome {
    let x = try_outcome!(ctx.v_sample(k)).to_matrix();
    let th = try_outcome!(theta(&ctx.chev, &x));
    let nu = try_outcome!(nu_with_theta(&ctx.chev, &x, &th));
    if !nu.is_upper_unitriangular(1e-9) {
        return Outcome::Fail("nu(x) is not unitriangular".into());
    }
    Outcome::Value(rel(&conjugate(&nu, &th), &x))
}

fn delta_identity(ctx: &Ctx, k: usize) -> Outcome {
    let x = try_outcome!(ctx.v_sample(k)).to_matrix();
    let c = &ctx.chev;
    let th = try_outcome!(theta(c, &x));
    let d = try_outcome!(delta_of_theta(c, &th));
    let b = try_outcome!(beta(c, &x));
    if !d.is_upper_unitriangular(1e-9) {
        return Outcome::Fail("delta(x) is not unitriangular".into());
    }
    Outcome::Value(rel(&conjugate(&d, &th), &b).max(c.section_deviation(&b)))
}

fn lambda_commutes(ctx: &Ctx, k: usize) -> Outcome {
    let x = try_outcome!(ctx.v_sample(k)).to_matrix();
    let th = try_outcome!(theta(&ctx.chev, &x));
    let l = try_outcome!(lambda_with_theta(&ctx.chev, &x, &th));
    Outcome::Value(l.bracket(&th).frobenius_norm() / (l.frobenius_norm() * th.frobenius_norm()))
}

fn lambda_tau_roundtrip(ctx: &Ctx, k: usize) -> Outcome {
    let x = try_outcome!(ctx.v_sample(k)).to_matrix();
    let c = &ctx.chev;
    let th = try_outcome!(theta(c, &x));
    let l = try_outcome!(lambda_with_theta(c, &x, &th));
    let back = try_outcome!(tau(c, &th, &l));
    let torus = try_outcome!(lambda_torus_deviation(c, &x, &l));
    Outcome::Value(rel(&back, &x).max(torus))
}

fn centralizer_element(rng: &mut ChaCha8Rng, x: &CMatrix, scale: f64) -> CMatrix {
    mat_exp(&sampling::centralizer_direction(rng, x).scale_real(scale))
}

fn lambda_property(ctx: &Ctx, k: usize) -> Outcome {
    let mut rng = ctx.rng("lambda-prop", k);
    let c = &ctx.chev;
    let x = try_outcome!(ctx.v_sample(k)).to_matrix();
    let th = try_outcome!(theta(c, &x));
    let l = try_outcome!(lambda_with_theta(c, &x, &th));
    let g = l.matmul(&centralizer_element(&mut rng, &th, 0.5));
    let y = try_flow!(tau(c, &th, &g));
    let (yp, _) = try_outcome!(TodaPoint::project(c, &y));
    let ly = try_outcome!(lambda_with_theta(c, &yp.to_matrix(), &th));
    Outcome::Value(distance_mod_scalar(&ly, &g))
}

fn open_stabilizer(ctx: &Ctx, k: usize) -> Outcome {
    let mut rng = ctx.rng("open-stab", k);
    let c = &ctx.chev;
    let p = try_outcome!(ctx.v_sample(k));
    let x = p.to_matrix();
    let th = try_outcome!(theta(c, &x));
    let d = try_outcome!(delta_of_theta(c, &th));
    let dinv = try_outcome!(d.inverse());
    let b = try_outcome!(beta(c, &x));
    let l = try_outcome!(lambda_with_theta(c, &x, &th));
    // G*_theta -> G*_beta
    let g = l.matmul(&centralizer_element(&mut rng, &th, 0.5));
    if gstar_factor(c, &g).is_err() {
        return Outcome::Skip("sampled centralizer element left G*".into());
    }
    let h = try_outcome!(try_conjugate(&d, &g));
    if let Err(e) = gstar_factor(c, &h) {
        return Outcome::Fail(format!("forward direction: {e}"));
    }
    let forward = rel(&try_outcome!(try_conjugate(&h, &b)), &b);
    // G*_beta -> G*_theta
    let gb = try_outcome!(try_conjugate(&d, &l)).matmul(&centralizer_element(&mut rng, &b, 0.5));
    if gstar_factor(c, &gb).is_err() {
        return Outcome::Skip("sampled centralizer element left G*".into());
    }
    let hb = try_outcome!(try_conjugate(&dinv, &gb));
    if let Err(e) = gstar_factor(c, &hb) {
        return Outcome::Fail(format!("reverse direction: {e}"));
    }
    let backward = rel(&try_outcome!(try_conjugate(&hb, &th)), &th);
    Outcome::Value(forward.max(backward))
}

fn gstar_uniqueness(ctx: &Ctx, k: usize) -> Outcome {
    let mut rng = ctx.rng("gstar", k);
    let c = &ctx.chev;
    let n = ctx.n();
    let u = sampling::unipotent(&mut rng, n);
    let u_minus = sampling::unipotent(&mut rng, n).transpose();
    let t = CMatrix::from_diag(
        &(0..n)
            .map(|_| {
                let m = rng.random_range(0.5..=1.5);
                let a = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
                Complex64::from_polar(m, a)
            })
            .collect::<Vec<_>>(),
    );
    let scalar = sampling::complex(&mut rng) + c64(2.0, 0.0);
    let g = w0_lift(c)
        .matmul(&u_minus)
        .matmul(&t)
        .matmul(&u)
        .scale(scalar);
    let f = try_outcome!(gstar_factor(c, &g));
    let dev = rel(&f.u_minus, &u_minus)
        .max(rel(&f.u, &u))
        .max(distance_mod_scalar(&f.t, &t));
    Outcome::Value(dev)
}

// ---------------------------------------------------------------- centralizer

fn zg_preimage(ctx: &Ctx, k: usize) -> Outcome {
    let mut rng = ctx.rng("zg", k);
    let c = &ctx.chev;
    let n = ctx.n();
    let x = sampling::section_point(&mut rng, c);
    let (g, expect_z) = match k % 4 {
        0 => (centralizer_element(&mut rng, &x, 1.0), true),
        1 => (sampling::unipotent(&mut rng, n), false),
        2 => (sampling::group(&mut rng, n), false),
        _ => {
            let near = centralizer_element(&mut rng, &x, 1.0);
            let kick = mat_exp(&sampling::algebra(&mut rng, n, 1e-3));
            (near.matmul(&kick), false)
        }
    };
    let ge = GroupElement::from_invertible(g);
    let p = ZPoint {
        g: ge.clone(),
        x: x.clone(),
    };
    let stab = p.stabilizer_deviation();
    let is_z = stab <= c.tol.stabilizer;
    let (in_pre, pre_dev) = in_moment_preimage(c, &ge, &x);
    if is_z != in_pre {
        return Outcome::Fail(format!(
            "inclusion broken: in Z = {is_z}, in preimage = {in_pre} (class {})",
            k % 4
        ));
    }
    if is_z != expect_z {
        return Outcome::Fail(format!("sample class {} misclassified", k % 4));
    }
    Outcome::Value(if is_z { stab.max(pre_dev) } else { 0.0 })
}

/// Times are drawn in units of `1 / |grad_vee(x, i)|` so `exp` stays representable.
fn grad_scale(x: &CMatrix, i: usize) -> f64 {
    grad_vee(x, i).frobenius_norm().max(1.0)
}

fn flow_validity(ctx: &Ctx, k: usize) -> Outcome {
    let mut rng = ctx.rng("flow-valid", k);
    let p = sampling::z_point(&mut rng, &ctx.chev);
    let i = random_index(&mut rng, ctx.r());
    let t = sampling::complex(&mut rng) / grad_scale(&p.x, i);
    let q = flow_step(t, &p, i);
    Outcome::Value(q.stabilizer_deviation())
}

fn flow_group_law(ctx: &Ctx, k: usize) -> Outcome {
    let mut rng = ctx.rng("flow-group", k);
    let p = sampling::z_point(&mut rng, &ctx.chev);
    let i = random_index(&mut rng, ctx.r());
    let scale = grad_scale(&p.x, i);
    let (s, t) = (
        sampling::complex(&mut rng) / scale,
        sampling::complex(&mut rng) / scale,
    );
    let two = flow_step(t, &flow_step(s, &p, i), i);
    let one = flow_step(s + t, &p, i);
    Outcome::Value(rel(&two.g, &one.g))
}

fn ham_isotropy(ctx: &Ctx, k: usize) -> Outcome {
    let mut rng = ctx.rng("isotropy", k);
    let p = sampling::z_point(&mut rng, &ctx.chev);
    let mut worst: f64 = 0.0;
    for i in 1..=ctx.r() {
        for j in 1..=ctx.r() {
            worst = worst.max(omega(&p.x, &ham_field(&p, i), &ham_field(&p, j)).norm());
        }
    }
    Outcome::Value(worst)
}

fn omega_duality(ctx: &Ctx, k: usize) -> Outcome {
    let mut rng = ctx.rng("duality", k);
    let c = &ctx.chev;
    let point = sampling::cjl_point(&mut rng, c);
    let (base, tangents) = try_outcome!(cjl_tangents(c, &point, c.tol.fd_step));
    let mut worst: f64 = 0.0;
    for i in 1..=ctx.r() {
        let h = ham_field(&base, i);
        let grad = grad_vee(&base.x, i);
        for v in &tangents {
            let lhs = omega(&base.x, &h, v);
            let rhs = trace_form(&grad, &v.z);
            worst = worst.max((lhs - rhs).norm());
        }
    }
    Outcome::Value(worst)
}

fn cjl_surjectivity(ctx: &Ctx, k: usize) -> Outcome {
    let mut rng = ctx.rng("cjl-surj", k);
    let c = &ctx.chev;
    let x = sampling::section_point(&mut rng, c);
    let y = sampling::centralizer_direction(&mut rng, &x);
    let g = mat_exp(&y);
    let lambda = try_outcome!(gradient_coords(c, &y, &x));
    let p = cjl_map(&CjlPoint { lambda, s: x });
    Outcome::Value(distance_mod_scalar(&p.g, &g))
}

fn cjl_rank(ctx: &Ctx, k: usize) -> Outcome {
    let mut rng = ctx.rng("cjl-rank", k);
    let point = sampling::cjl_point(&mut rng, &ctx.chev);
    let rk = try_outcome!(cjl_jacobian_rank(&ctx.chev, &point, ctx.chev.tol.fd_step));
    Outcome::Value((2 * ctx.r()) as f64 - rk as f64)
}

fn pullback_sample(ctx: &Ctx, k: usize) -> Result<PullbackDeviation> {
    let mut rng = ctx.rng("cjl-pullback", k);
    let point = sampling::cjl_point(&mut rng, &ctx.chev);
    cjl_pullback_check(&ctx.chev, &point, ctx.chev.tol.fd_step)
}

fn cjl_lambda_lambda(ctx: &Ctx, k: usize) -> Outcome {
    pullback_sample(ctx, k).map(|d| d.lambda_lambda).into()
}

fn cjl_lambda_f(ctx: &Ctx, k: usize) -> Outcome {
    pullback_sample(ctx, k).map(|d| d.lambda_f).into()
}

fn cjl_f_f(ctx: &Ctx, k: usize) -> Outcome {
    pullback_sample(ctx, k).map(|d| d.f_f).into()
}

fn level_sets(ctx: &Ctx, k: usize) -> Outcome {
    let mut rng = ctx.rng("level", k);
    let c = &ctx.chev;
    let x = sampling::section_point(&mut rng, c);
    let p = ZPoint {
        g: GroupElement::from_invertible(centralizer_element(&mut rng, &x, 1.0)),
        x: x.clone(),
    };
    let q = ZPoint {
        g: GroupElement::from_invertible(centralizer_element(&mut rng, &x, 1.0)),
        x: x.clone(),
    };
    let same = vector_distance(&f_tilde(&p), &f_tilde(&q));
    let x2 = sampling::section_point(&mut rng, c);
    let apart = vector_distance(&invariants(&x), &invariants(&x2));
    if apart > 1e-6 {
        let r = ZPoint {
            g: GroupElement::from_invertible(centralizer_element(&mut rng, &x2, 1.0)),
            x: x2.clone(),
        };
        if f_tilde(&p) == f_tilde(&r) {
            return Outcome::Fail("distinct section points share an invariant value".into());
        }
        // The level set is recovered from its value alone.
        let back = try_outcome!(f_s_inverse(c, &f_tilde(&r)));
        if rel(&back, &x2) > 1e-9 {
            return Outcome::Fail("level set does not determine its section point".into());
        }
    }
    Outcome::Value(same)
}

// ---------------------------------------------------------------- toda

const CONSERVATION_TIMES: [f64; 2] = [0.1, 0.7];

fn sorted_spectrum(x: &CMatrix) -> Result<Vec<Complex64>> {
    Ok(chamber_spectrum(x)?.0)
}

fn for_each_flow(
    ctx: &Ctx,
    k: usize,
    mut f: impl FnMut(&TodaPoint, &TodaPoint, f64) -> Result<f64>,
) -> Outcome {
    let p = try_outcome!(ctx.v_sample(k));
    let frame = try_outcome!(FlowFrame::new(&ctx.chev, &p));
    let mut worst: f64 = 0.0;
    let mut skipped = None;
    for i in 1..=ctx.r() {
        for &t in &CONSERVATION_TIMES {
            match frame.evaluate(&ctx.chev, i, c64(t, 0.0)) {
                Ok((q, shape)) => {
                    let v = try_outcome!(f(&p, &q, shape));
                    worst = worst.max(v);
                }
                Err(e) if is_gstar_blowup(&e) => skipped = Some(format!("i={i} t={t}: {e}")),
                Err(e) => return Outcome::Fail(e.to_string()),
            }
        }
    }
    match skipped {
        Some(reason) if worst == 0.0 => Outcome::Skip(reason),
        _ => Outcome::Value(worst),
    }
}

fn conservation(ctx: &Ctx, k: usize) -> Outcome {
    for_each_flow(ctx, k, |p, q, _| {
        let f0 = invariants(&p.to_matrix());
        let f1 = invariants(&q.to_matrix());
        Ok(vector_distance(&f0, &f1) / (1.0 + vector_norm(&f0)))
    })
}

fn spectrum_preserved(ctx: &Ctx, k: usize) -> Outcome {
    for_each_flow(ctx, k, |p, q, _| {
        let a = sorted_spectrum(&p.to_matrix())?;
        let b = sorted_spectrum(&q.to_matrix())?;
        let scale = 1.0 + a.iter().map(|v| v.norm()).fold(0.0, f64::max);
        Ok(vector_distance(&a, &b) / scale)
    })
}

fn flow_shape(ctx: &Ctx, k: usize) -> Outcome {
    for_each_flow(ctx, k, |_, _, shape| Ok(shape))
}

fn phi_invariants_sample(ctx: &Ctx, k: usize) -> Outcome {
    let c = &ctx.chev;
    for_each_flow(ctx, k, |p, q, _| {
        let mut worst: f64 = 0.0;
        for pt in [p, q] {
            let z = phi(c, pt)?;
            worst = worst.max(vector_distance(&f_tilde(&z), &invariants(&pt.to_matrix())));
        }
        Ok(worst)
    })
}

fn intertwine_flow(ctx: &Ctx, k: usize) -> Outcome {
    let mut rng = ctx.rng("intertwine", k);
    let p = try_outcome!(ctx.v_sample(k));
    let i = random_index(&mut rng, ctx.r());
    let t = if k % 4 == 3 {
        c64(0.3, 0.2)
    } else {
        c64(rng.random_range(-1.0..=1.0), 0.0)
    };
    Outcome::Value(try_flow!(intertwine_check(&ctx.chev, i, t, &p)))
}

fn intertwine_field(ctx: &Ctx, k: usize) -> Outcome {
    let mut rng = ctx.rng("intertwine-inf", k);
    let p = try_outcome!(ctx.v_sample(k));
    let i = random_index(&mut rng, ctx.r());
    Outcome::Value(try_flow!(intertwine_infinitesimal(&ctx.chev, i, &p, ctx.chev.tol.fd_step)))
}

fn phi_roundtrip(ctx: &Ctx, k: usize) -> Outcome {
    let mut rng = ctx.rng("phi-roundtrip", k);
    let c = &ctx.chev;
    let p = try_outcome!(ctx.v_sample(k));
    let z = try_outcome!(phi(c, &p));
    let back = try_outcome!(phi_inverse(c, &z));
    let there = rel(&back.to_matrix(), &p.to_matrix());
    // The other order on a point of W that is not itself a sampled image.
    let i = random_index(&mut rng, ctx.r());
    let t = c64(rng.random_range(-0.5..=0.5), 0.0);
    let w = flow_step(t, &z, i);
    let v = try_flow!(phi_inverse(c, &w));
    let again = try_outcome!(phi(c, &v));
    Outcome::Value(there.max(again.distance(&w)))
}

fn phi_image(ctx: &Ctx, k: usize) -> Outcome {
    let c = &ctx.chev;
    let p = try_outcome!(ctx.v_sample(k));
    let z = try_outcome!(phi(c, &p));
    if let Err(e) = gstar_factor(c, &z.g) {
        return Outcome::Fail(format!("group part outside G*: {e}"));
    }
    let (_, gap) = try_outcome!(chamber_spectrum(&z.x));
    if gap <= c.tol.chamber {
        return Outcome::Fail("section part outside D".into());
    }
    Outcome::Value(z.stabilizer_deviation().max(c.section_deviation(&z.x)))
}

fn phi_injectivity(ctx: &Ctx, _k: usize) -> Outcome {
    let c = &ctx.chev;
    let pts: Vec<TodaPoint> = try_outcome!((0..ctx.samples).map(|k| ctx.v_sample(k)).collect());
    let imgs: Vec<ZPoint> = try_outcome!(pts.iter().map(|p| phi(c, p)).collect());
    let mut collisions = 0usize;
    for a in 0..pts.len() {
        for b in a + 1..pts.len() {
            if pts[a].distance(&pts[b]) > 1e-6 && imgs[a].distance(&imgs[b]) <= 1e-9 {
                collisions += 1;
            }
        }
    }
    Outcome::Value(collisions as f64)
}

fn flow_constancy(ctx: &Ctx, k: usize) -> Outcome {
    let mut rng = ctx.rng("constancy", k);
    let c = &ctx.chev;
    let p = try_outcome!(ctx.v_sample(k));
    let i = random_index(&mut rng, ctx.r());
    let q = try_flow!(toda_flow(c, i, c64(0.5, 0.0), &p));
    let (x0, x1) = (p.to_matrix(), q.to_matrix());
    let th0 = try_outcome!(theta(c, &x0));
    let th1 = try_outcome!(theta(c, &x1));
    let b0 = try_outcome!(beta(c, &x0));
    let b1 = try_outcome!(beta(c, &x1));
    let d0 = try_outcome!(delta_of_theta(c, &th0));
    let d1 = try_outcome!(delta_of_theta(c, &th1));
    Outcome::Value(rel(&th1, &th0).max(rel(&b1, &b0)).max(rel(&d1, &d0)))
}

fn semigroup(ctx: &Ctx, k: usize) -> Outcome {
    let mut rng = ctx.rng("semigroup", k);
    let c = &ctx.chev;
    let p = try_outcome!(ctx.v_sample(k));
    let i = random_index(&mut rng, ctx.r());
    let s = c64(rng.random_range(0.0..=0.5), 0.0);
    let t = c64(rng.random_range(0.0..=0.5), 0.0);
    let mid = try_flow!(toda_flow(c, i, t, &p));
    let two = try_flow!(toda_flow(c, i, s, &mid));
    let one = try_flow!(toda_flow(c, i, s + t, &p));
    Outcome::Value(rel(&two.to_matrix(), &one.to_matrix()))
}

fn flows_commute(ctx: &Ctx, k: usize) -> Outcome {
    let mut rng = ctx.rng("commute", k);
    let c = &ctx.chev;
    let p = try_outcome!(ctx.v_sample(k));
    let i = random_index(&mut rng, ctx.r());
    let j = random_index(&mut rng, ctx.r());
    let s = c64(rng.random_range(-0.5..=0.5), 0.0);
    let t = c64(rng.random_range(-0.5..=0.5), 0.0);
    let a = try_flow!(toda_flow(c, i, t, &p));
    let ab = try_flow!(toda_flow(c, j, s, &a));
    let b = try_flow!(toda_flow(c, j, s, &p));
    let ba = try_flow!(toda_flow(c, i, t, &b));
    Outcome::Value(rel(&ab.to_matrix(), &ba.to_matrix()))
}

fn field_tangent(ctx: &Ctx, k: usize) -> Outcome {
    let mut rng = ctx.rng("field", k);
    let c = &ctx.chev;
    let p = try_outcome!(ctx.v_sample(k));
    let i = random_index(&mut rng, ctx.r());
    let frame = try_outcome!(FlowFrame::new(c, &p));
    // Differenced before projection, so leakage off the phase-space shape shows up.
    let raw = |t: f64| -> Result<CMatrix> {
        let step = mat_exp(&grad_vee(&frame.theta, i).scale_real(t));
        tau(c, &frame.theta, &frame.lambda.matmul(&step))
    };
    let h = c.tol.fd_step;
    let plus = try_flow!(raw(h));
    let minus = try_flow!(raw(-h));
    let v = (&plus - &minus).scale_real(0.5 / h);
    let n = ctx.n();
    let mut off: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            if b != a && b != a + 1 {
                off = off.max(v[(a, b)].norm());
            }
        }
    }
    Outcome::Value(off / (1.0 + v.frobenius_norm()))
}

fn field_conserves(ctx: &Ctx, k: usize) -> Outcome {
    let mut rng = ctx.rng("field", k);
    let c = &ctx.chev;
    let p = try_outcome!(ctx.v_sample(k));
    let i = random_index(&mut rng, ctx.r());
    let v = try_flow!(toda_vector_field(c, i, &p, c.tol.fd_step));
    let x = p.to_matrix();
    let h = 1e-6;
    let fp = invariants(&(&x + &v.scale_real(h)));
    let fm = invariants(&(&x - &v.scale_real(h)));
    let rate: Vec<Complex64> = fp.iter().zip(&fm).map(|(a, b)| (a - b) / (2.0 * h)).collect();
    Outcome::Value(vector_norm(&rate) / (1.0 + vector_norm(&invariants(&x))))
}

fn v_fraction(ctx: &Ctx, _k: usize) -> Outcome {
    let draws = 20 * ctx.samples.max(1);
    let hits = (0..draws)
        .into_par_iter()
        .filter(|&k| {
            let mut rng = ctx.rng("v-fraction", k);
            in_v(&ctx.chev, &sampling::toda_point(&mut rng, &ctx.chev))
        })
        .count();
    Outcome::Value(hits as f64 / draws as f64)
}

/// Classical RK4 on the finite-difference Toda field, compared with direct factorization.
pub fn rk4_versus_factorization(
    chev: &ChevalleyData,
    i: usize,
    p: &TodaPoint,
    t_end: f64,
    dt: f64,
) -> Result<f64> {
    let steps = (t_end / dt).round() as usize;
    let h = chev.tol.fd_step;
    let field = |x: &CMatrix| -> Result<CMatrix> {
        let (q, _) = TodaPoint::project(chev, x)?;
        toda_vector_field(chev, i, &q, h)
    };
    let mut x = p.to_matrix();
    for _ in 0..steps {
        let k1 = field(&x)?;
        let k2 = field(&(&x + &k1.scale_real(dt / 2.0)))?;
        let k3 = field(&(&x + &k2.scale_real(dt / 2.0)))?;
        let k4 = field(&(&x + &k3.scale_real(dt)))?;
        let mut incr = k1;
        incr.axpy(c64(2.0, 0.0), &k2);
        incr.axpy(c64(2.0, 0.0), &k3);
        incr.axpy(ONE, &k4);
        x.axpy(c64(dt / 6.0, 0.0), &incr);
    }
    let direct = toda_flow(chev, i, c64(steps as f64 * dt, 0.0), p)?.to_matrix();
    Ok(x.distance(&direct))
}

fn rk4_crosscheck(ctx: &Ctx, _k: usize) -> Outcome {
    let c = &ctx.chev;
    let (p, i, t_end) = if ctx.n() == 2 {
        (sl2_golden(c), 1, 1.0)
    } else {
        let mut rng = ctx.rng("rk4", 0);
        let p = try_outcome!(ctx.v_sample(0));
        (p, random_index(&mut rng, ctx.r()), 0.5)
    };
    Outcome::Value(try_flow!(rk4_versus_factorization(c, i, &p, t_end, 1e-3)))
}

fn cjl_tolerance(n: usize) -> f64 {
    if n <= 3 {
        1e-5
    } else {
        1e-4
    }
}

fn checks() -> Vec<CheckDef> {
    use Count::*;
    vec![
        le("eig_reconstruct", "linalg", Tol::Fixed(1e-9), All, eig_reconstruct),
        le("expm_inverse", "linalg", Tol::Fixed(1e-12), All, expm_inverse),
        le("expm_commuting_sum", "linalg", Tol::Fixed(1e-10), All, expm_commuting),
        le("ldu_roundtrip", "linalg", Tol::Fixed(1e-12), All, ldu_roundtrip),
        le("chevalley_structure", "lie_core", Tol::Fixed(1e-14), Once, chevalley_structure),
        le("pairing_ad_invariance", "lie_core", Tol::Fixed(1e-10), All, pairing_invariance),
        le("centralizer_dimension", "lie_core", Tol::Fixed(0.0), All, centralizer_dimension),
        le("ad_scalar_blind", "lie_core", Tol::Fixed(1e-12), All, scalar_blind),
        le("f_invariance", "invariants", Tol::Fixed(1e-9), All, f_invariance),
        le("gradient_centralizes", "invariants", Tol::Fixed(1e-12), All, gradient_commutes),
        le("gradient_equivariance", "invariants", Tol::Fixed(1e-9), All, gradient_equivariance),
        le("gradient_fd", "invariants", Tol::Fixed(1e-6), All, gradient_fd),
        le("section_roundtrip", "invariants", Tol::Fixed(1e-10), All, section_roundtrip),
        le("gradient_independence", "invariants", Tol::Fixed(0.0), All, gradient_independence),
        le("psi_roundtrip", "kostant_maps", Tol::Fixed(1e-10), All, psi_roundtrip),
        le("theta_chamber", "kostant_maps", Tol::Fixed(1e-9), All, theta_chamber),
        le("nu_identity", "kostant_maps", Tol::Fixed(1e-9), All, nu_identity),
        le("delta_identity", "kostant_maps", Tol::Fixed(1e-9), All, delta_identity),
        le("lambda_centralizes", "kostant_maps", Tol::Fixed(1e-9), All, lambda_commutes),
        le("lambda_tau_roundtrip", "kostant_maps", Tol::Fixed(1e-9), All, lambda_tau_roundtrip),
        le("lambda_property", "kostant_maps", Tol::Fixed(1e-8), All, lambda_property),
        le("open_stabilizer", "kostant_maps", Tol::Fixed(1e-8), All, open_stabilizer),
        le("gstar_uniqueness", "kostant_maps", Tol::Fixed(1e-10), All, gstar_uniqueness),
        le("zg_preimage", "centralizer", Tol::Fixed(1e-9), Scaled(2), zg_preimage),
        le("flow_validity", "centralizer", Tol::Fixed(1e-9), All, flow_validity),
        le("flow_group_law", "centralizer", Tol::Fixed(1e-10), All, flow_group_law),
        le("hamiltonian_isotropy", "centralizer", Tol::Fixed(1e-10), All, ham_isotropy),
        le("omega_duality", "centralizer", Tol::Fixed(1e-6), AtMost(20), omega_duality),
        le("cjl_surjectivity", "centralizer", Tol::Fixed(1e-8), All, cjl_surjectivity),
        le("cjl_jacobian_rank", "centralizer", Tol::Fixed(0.0), AtMost(20), cjl_rank),
        le("cjl_lambda_lambda", "centralizer", Tol::PerN(cjl_tolerance), AtMost(20), cjl_lambda_lambda),
        le("cjl_lambda_f", "centralizer", Tol::PerN(cjl_tolerance), AtMost(20), cjl_lambda_f),
        le("cjl_f_f", "centralizer", Tol::PerN(cjl_tolerance), AtMost(20), cjl_f_f),
        le("level_sets", "centralizer", Tol::Fixed(0.0), AtMost(50), level_sets),
        le("conservation", "toda", Tol::Fixed(1e-8), All, conservation),
        le("spectrum_preserved", "toda", Tol::Fixed(1e-8), All, spectrum_preserved),
        le("flow_shape", "toda", Tol::Fixed(1e-8), All, flow_shape),
        le("phi_invariants", "toda", Tol::Fixed(1e-9), All, phi_invariants_sample),
        le("intertwine_flow", "toda", Tol::Fixed(1e-7), All, intertwine_flow),
        le("intertwine_field", "toda", Tol::Fixed(1e-5), All, intertwine_field),
        le("phi_roundtrip", "toda", Tol::Fixed(1e-8), All, phi_roundtrip),
        le("phi_image_in_w", "toda", Tol::Fixed(1e-9), All, phi_image),
        le("phi_injectivity", "toda", Tol::Fixed(0.0), Once, phi_injectivity),
        le("flow_constancy", "toda", Tol::Fixed(1e-7), All, flow_constancy),
        le("flow_semigroup", "toda", Tol::Fixed(1e-8), All, semigroup),
        le("flows_commute", "toda", Tol::Fixed(1e-7), All, flows_commute),
        le("field_tangent", "toda", Tol::Fixed(1e-6), All, field_tangent),
        le("field_conserves", "toda", Tol::Fixed(1e-5), All, field_conserves),
        CheckDef {
            name: "v_fraction",
            module: "toda",
            tolerance: Tol::Fixed(0.0),
            comparison: Comparison::Exceeds,
            count: Once,
            run: v_fraction,
        },
        le("rk4_crosscheck", "toda", Tol::Fixed(1e-5), Once, rk4_crosscheck),
    ]
}

/// Names of every check, in report order.
pub fn check_names() -> Vec<&'static str> {
    checks().iter().map(|c| c.name).collect()
}

/// Names of every module that owns checks.
pub fn module_names() -> Vec<&'static str> {
    let mut m: Vec<&'static str> = checks().iter().map(|c| c.module).collect();
    m.dedup();
    m
}

fn sample_count(count: Count, samples: usize) -> usize {
    match count {
        Count::All => samples,
        Count::Scaled(f) => f * samples,
        Count::AtMost(m) => samples.min(m),
        Count::Once => 1,
    }
}

fn run_check(def: &CheckDef, ctx: &Ctx, threshold: f64) -> CheckReport {
    let count = sample_count(def.count, ctx.samples);
    let outcomes: Vec<Outcome> = (0..count)
        .into_par_iter()
        .map(|k| (def.run)(ctx, k))
        .collect();
    let mut max: Option<f64> = None;
    let (mut evaluated, mut skipped, mut failed) = (0, 0, 0);
    let mut note = None;
    for (k, o) in outcomes.iter().enumerate() {
        match o {
            Outcome::Value(v) => {
                evaluated += 1;
                max = Some(max.map_or(*v, |m: f64| m.max(*v)));
            }
            Outcome::Skip(reason) => {
                skipped += 1;
                note.get_or_insert_with(|| format!("sample {k} skipped: {reason}"));
            }
            Outcome::Fail(reason) => {
                failed += 1;
                if !note.as_deref().is_some_and(|s: &str| s.contains("failed")) {
                    note = Some(format!("sample {k} failed: {reason}"));
                }
            }
        }
    }
    let within = match (def.comparison, max) {
        (Comparison::AtMost, Some(m)) => m <= threshold,
        (Comparison::Exceeds, Some(m)) => m > threshold,
        (_, None) => false,
    };
    if evaluated == 0 && note.is_none() {
        note = Some("no sample could be evaluated".into());
    }
    CheckReport {
        name: def.name.to_string(),
        module: def.module.to_string(),
        max_deviation: max,
        tolerance: threshold,
        comparison: match def.comparison {
            Comparison::AtMost => "le",
            Comparison::Exceeds => "gt",
        },
        pass: within && failed == 0,
        samples: count,
        evaluated,
        skipped,
        failed,
        note,
    }
}

/// Runs every selected check.
pub fn run(cfg: &SuiteConfig) -> Result<Report> {
    run_defs(cfg, "check", checks())
}

/// The three pullback blocks, over all requested samples.
pub fn run_cjl(cfg: &SuiteConfig) -> Result<Report> {
    let defs = checks()
        .into_iter()
        .filter(|d| matches!(d.name, "cjl_lambda_lambda" | "cjl_lambda_f" | "cjl_f_f"))
        .map(|mut d| {
            d.count = Count::All;
            d
        })
        .collect();
    run_defs(cfg, "cjl", defs)
}

fn run_defs(cfg: &SuiteConfig, command: &str, defs: Vec<CheckDef>) -> Result<Report> {
    let chev = ChevalleyData::with_tolerances(cfg.n, cfg.tolerances)?;
    if cfg.samples == 0 {
        return Err(Error::InvalidConfig("samples must be at least 1".into()));
    }
    let fd = cfg.tolerances.fd_step;
    if !(1e-8..=1e-4).contains(&fd) {
        return Err(Error::InvalidConfig(format!("fd_step {fd:e} outside [1e-8, 1e-4]")));
    }
    let names: Vec<&str> = defs.iter().map(|d| d.name).collect();
    for key in cfg.thresholds.keys() {
        if !check_names().contains(&key.as_str()) {
            return Err(Error::InvalidConfig(format!("unknown check {key}")));
        }
    }
    let modules = module_names();
    for sel in &cfg.only {
        if !names.contains(&sel.as_str()) && !modules.contains(&sel.as_str()) {
            return Err(Error::InvalidConfig(format!("unknown check or module {sel}")));
        }
    }
    let ctx = Ctx {
        chev,
        seed: cfg.seed,
        samples: cfg.samples,
    };
    let reports = defs
        .iter()
        .filter(|d| cfg.only.is_empty() || cfg.only.iter().any(|s| s == d.name || s == d.module))
        .map(|d| {
            let threshold = cfg
                .thresholds
                .get(d.name)
                .copied()
                .unwrap_or_else(|| d.tolerance.at(cfg.n));
            run_check(d, &ctx, threshold)
        })
        .collect();
    Ok(Report::new(command, cfg, reports))
}

/// Default threshold of a named check at rank `n`.
pub fn default_threshold(name: &str, n: usize) -> Option<f64> {
    checks().iter().find(|d| d.name == name).map(|d| d.tolerance.at(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique() {
        let mut names = check_names();
        let before = names.len();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), before);
    }

    #[test]
    fn unknown_threshold_rejected() {
        let mut cfg = SuiteConfig::new(2, 1, 1);
        cfg.thresholds.insert("nope".into(), 1.0);
        assert!(run(&cfg).is_err());
    }
}
