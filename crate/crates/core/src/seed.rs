//! Seed derivation. Every random choice in the crate comes from a ChaCha
//! stream keyed by a user seed and a stream index, so results do not depend
//! on thread scheduling.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poly::Rational;

/// splitmix64 finalizer.
pub fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive(seed: u64, stream: u64) -> u64 {
    mix(seed ^ mix(stream.wrapping_add(0x5851_F42D_4C95_7F2D)))
}

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(seed, stream))
}

/// Uniform integer in `[-bound, bound]`, as a rational.
pub fn symmetric_int<R: Rng>(rng: &mut R, bound: i64) -> Rational {
    Rational::from_integer(BigInt::from(rng.gen_range(-bound..=bound)))
}

/// Sampling half-width `2^16 * (degree + 1)`.
pub fn sample_bound(degree: u32) -> i64 {
    (1i64 << 16) * (degree as i64 + 1)
}
