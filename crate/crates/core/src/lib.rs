//! Solvers for the ground-state phase diagram of the one-dimensional
//! Dicke-Ising chain
//!
//! ```text
//! H = ω a†a + ε Σ s_i^z + (2g/√N) Σ s_i^x (a + a†) − 4J Σ_<ij> s_i^z s_j^z
//! ```
//!
//! Sign convention: `J > 0` is ferromagnetic, `J < 0` antiferromagnetic.
//!
//! Four routes to the ground state are provided:
//!
//! * [`mean_field`]: coherent photon ⊗ two-sublattice product state.
//! * [`effective`]: photon elimination into a self-consistent transverse
//!   field `h`, exact in the thermodynamic limit, with a free-fermion chain
//!   solver (`ε = 0`) and a momentum-sector exact-diagonalization chain
//!   solver (`ε > 0`).
//! * [`ed_full`]: exact diagonalization of the full light-matter
//!   Hamiltonian in a truncated Fock space.
//! * [`model::classical_ground`]: the diagonal `g = 0` limit.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod ed_full;
pub mod effective;
mod error;
pub mod exec;
pub mod linalg;
pub mod mean_field;
pub mod model;
pub mod optimize;
pub mod quadrature;
pub mod transition;

pub use error::{Error, Result};
pub use exec::{GridMap, Sequential};
pub use model::{
    classical_ground, classify_orders, validate_params, ClassicalGround, ModelParams, OrderParams,
    PhaseLabel, ToleranceSet,
};
