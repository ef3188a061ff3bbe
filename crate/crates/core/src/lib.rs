//! Numerics for the universal centralizer of `sl(n, C)` and the Kostant–Toda lattice.
//!
//! The crate is organised bottom-up: [`linalg`] provides dense complex kernels,
//! [`lie`] the Chevalley data and principal sl2-triple, [`invariants`] the
//! power-trace invariants and the Kostant section, [`kostant`] the maps built
//! from Kostant's slice theorem, [`centralizer`] the symplectic geometry of the
//! universal centralizer and [`toda`] the factorization solution of the lattice
//! and its embedding. [`suite`] runs seeded property checks over all of them.

pub mod centralizer;
pub mod cli;
pub mod error;
pub mod invariants;
pub mod kostant;
pub mod lie;
pub mod linalg;
pub mod sampling;
pub mod suite;
pub mod tolerances;
pub mod toda;

pub use error::{Error, Result};
pub use lie::{ChevalleyData, GroupElement};
pub use tolerances::Tolerances;
