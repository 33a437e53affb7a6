//! Seeded randomness. Every random draw in the crate goes through here so
//! that a seed fully determines the output.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Recorded in reports next to the seed.
pub const GENERATOR: &str = "chacha8/v1";

pub type Generator = ChaCha8Rng;

pub fn generator(seed: u64) -> Generator {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform on `[-bound, bound] \ {0}`; a zero bound is treated as 1.
pub fn nonzero_int<R: Rng + ?Sized>(rng: &mut R, bound: u32) -> i64 {
    let b = bound.max(1) as i64;
    let v = rng.gen_range(1..=b);
    if rng.gen_bool(0.5) {
        v
    } else {
        -v
    }
}

/// Uniform on `[-bound, bound]`.
pub fn int<R: Rng + ?Sized>(rng: &mut R, bound: u32) -> i64 {
    let b = bound as i64;
    rng.gen_range(-b..=b)
}
