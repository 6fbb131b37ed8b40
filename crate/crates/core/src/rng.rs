//! Seeded randomness.
//!
//! Every random draw in the crate comes from xoshiro256** seeded through
//! SplitMix64 (`seed_from_u64`). Parallel ensembles derive one stream per
//! item from `(seed, tag, index)` so results do not depend on scheduling.

use rand::SeedableRng;
use rand_xoshiro::Xoshiro256StarStar;

pub type Rng = Xoshiro256StarStar;

pub fn from_seed(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}

/// Independent stream for item `index` of ensemble `tag`.
pub fn stream(seed: u64, tag: u64, index: u64) -> Rng {
    let mixed = splitmix(splitmix(seed ^ splitmix(tag)) ^ index);
    Rng::seed_from_u64(mixed)
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
