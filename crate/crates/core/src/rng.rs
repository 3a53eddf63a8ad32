//! Seeding contract for reproducible parallel simulation.
//!
//! Replicates are generated in fixed-size blocks. Block `i` of a run with
//! seed `s` draws from ChaCha8 seeded with `s` on stream `i`, so results do
//! not depend on how blocks are scheduled across threads. Grid cells derive
//! their own seed from the master seed and their coordinates.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Replicates per block.
pub const BLOCK: usize = 1000;

/// RNG for block `block` of a run seeded with `seed`.
pub fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stable 64-bit mix of a master seed and grid coordinates.
pub fn cell_seed(master: u64, coords: &[u64]) -> u64 {
    let mut h = splitmix64(master);
    for &c in coords {
        h = splitmix64(h ^ splitmix64(c));
    }
    h
}
