//! Deterministic random number streams.
//!
//! All randomness flows through seeded ChaCha8 generators. A seed plus a
//! stream id fully determines a generator, so data generation and chain
//! sampling derived from the same base seed never share a stream.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream used when generating synthetic datasets.
pub const STREAM_DATA: u64 = 0;
/// Stream used by the mediation-model chain.
pub const STREAM_CHAIN: u64 = 1;
/// Stream used by network-only (dimension selection) chains.
pub const STREAM_LSM: u64 = 2;
/// Stream used by the invariance-check harness.
pub const STREAM_ISOMETRY: u64 = 3;

/// A generator for `seed` on the given stream.
pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn same_seed_same_stream_is_identical() {
        let mut a = stream(7, STREAM_CHAIN);
        let mut b = stream(7, STREAM_CHAIN);
        for _ in 0..32 {
            assert_eq!(a.random::<u64>(), b.random::<u64>());
        }
    }

    #[test]
    fn streams_do_not_alias() {
        let mut a = stream(7, STREAM_DATA);
        let mut b = stream(7, STREAM_CHAIN);
        let xs: Vec<u64> = (0..8).map(|_| a.random()).collect();
        let ys: Vec<u64> = (0..8).map(|_| b.random()).collect();
        assert_ne!(xs, ys);
    }
}
