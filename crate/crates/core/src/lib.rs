//! Continuous degree of symmetry for quantum many-body systems.
//!
//! The crate measures how far a Hamiltonian or a quantum state is from being
//! invariant under a product of single-site SO(2) rotations, and provides the
//! closed forms relating that measure to order parameters in three models:
//! a non-interacting spin register ([`spin`]), a BCS superconductor in
//! pseudospin form ([`bcs`]) and a condensate mapped onto collective spins
//! ([`bec`]). Every closed form can be checked against full matrices built
//! with [`operator`] and averaged with [`symmetry`].

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bcs;
pub mod bec;
pub mod error;
pub mod numerics;
pub mod operator;
pub mod sampling;
pub mod spin;
pub mod symmetry;
pub mod verify;

pub use error::{Error, Result};
