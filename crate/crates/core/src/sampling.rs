//! Seeded random fixtures.
//!
//! Every task draws from its own ChaCha8 stream of the master seed, so results
//! do not depend on the order in which tasks run.

use nalgebra::DMatrix;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::operator::{Operator, State, C64};

pub fn task_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// A fresh u64 seed for the `stream`-th task of a run.
pub fn task_seed(seed: u64, stream: u64) -> u64 {
    task_rng(seed, stream).next_u64()
}

fn random_complex(rng: &mut impl Rng) -> C64 {
    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// (G + G†)/2 with G entries uniform in the unit square.
pub fn random_hermitian(rng: &mut impl Rng, dim: usize) -> Result<Operator> {
    let g = DMatrix::from_fn(dim, dim, |_, _| random_complex(rng));
    Operator::hermitian((&g + g.adjoint()) * C64::new(0.5, 0.0))
}

/// GG†/Tr(GG†), full rank with probability one.
pub fn random_density(rng: &mut impl Rng, dim: usize) -> Result<State> {
    let g = DMatrix::from_fn(dim, dim, |_, _| random_complex(rng));
    let mut rho = &g * g.adjoint();
    let tr = rho.trace().re;
    rho /= C64::new(tr, 0.0);
    // remove the rounding asymmetry of the product
    let rho = (&rho + rho.adjoint()) * C64::new(0.5, 0.0);
    State::mixed(Operator::hermitian(rho)?)
}
