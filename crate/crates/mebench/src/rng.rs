//! Deterministic per-block random substreams.
//!
//! Every block gets its own generator, keyed by (run seed, frame index,
//! block row, block column) through a fixed mixing function. Results are
//! therefore independent of worker count and iteration order, and a run is
//! reproducible from its seed alone.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer; good avalanche for cheap key mixing.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Fixed substream key derivation. Changing this function changes every
/// seeded result, so it is frozen by golden tests.
pub fn substream_seed(seed: u64, frame_index: u64, block_row: u64, block_col: u64) -> u64 {
    let mut state = mix64(seed);
    state = mix64(state ^ frame_index);
    state = mix64(state ^ block_row);
    state ^ mix64(state ^ block_col)
}

/// Generator for one block's search.
pub fn block_rng(seed: u64, frame_index: u64, block_row: u64, block_col: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(substream_seed(seed, frame_index, block_row, block_col))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn substream_keys_are_frozen() {
        // Golden values: any change here breaks every recorded seeded run.
        assert_eq!(substream_seed(0, 0, 0, 0), 194219067823144185);
        assert_eq!(substream_seed(7, 1, 2, 3), 1084241885052804717);
    }

    #[test]
    fn distinct_keys_give_distinct_seeds() {
        let mut seen = HashSet::new();
        for frame in 0..8u64 {
            for row in 0..16u64 {
                for col in 0..16u64 {
                    assert!(seen.insert(substream_seed(42, frame, row, col)));
                }
            }
        }
    }

    #[test]
    fn different_run_seeds_decorrelate() {
        assert_ne!(substream_seed(1, 0, 0, 0), substream_seed(2, 0, 0, 0));
    }
}
