//! Seeded random streams.
//!
//! Every randomized routine draws from `ChaCha8Rng::seed_from_u64(seed)` with the
//! stream number set to the round (or trial block) index, so rounds can run in
//! any order or in parallel and still see the same numbers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
