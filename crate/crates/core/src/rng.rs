//! Seed derivation for reproducible, scheduling-independent sampling.
//!
//! Every sample draws from its own ChaCha8 stream seeded by
//! `splitmix64(master ^ splitmix64(index))`, so results depend only on the
//! master seed and the sample index, never on the number of workers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const RNG_ALGORITHM: &str =
    "ChaCha8 (rand_chacha 0.3); per-sample seed = splitmix64(master ^ splitmix64(index))";

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index))
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn sample_rng(master: u64, index: u64) -> ChaCha8Rng {
    rng_from_seed(derive_seed(master, index))
}
