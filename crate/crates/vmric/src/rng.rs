//! Seed discipline: one master seed, named substreams, and a mixing function
//! for per-replication seeds so parallel runs are order-independent.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Substream label for the AR(2) innovations δ.
pub const STREAM_DELTA: u64 = 1;
/// Substream label for the AR(1) innovations υ.
pub const STREAM_UPSILON: u64 = 2;
/// Substream label for the forecast-noise innovations ε.
pub const STREAM_EPSILON: u64 = 3;

/// Deterministic generator for (seed, stream); identical inputs yield
/// identical sequences regardless of thread scheduling.
pub fn substream(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// SplitMix64-style mix of a master seed with context labels
/// (table tag, sample size, replication index, candidate index).
pub fn mix_seed(master: u64, labels: &[u64]) -> u64 {
    let mut state = master ^ 0x9e37_79b9_7f4a_7c15;
    for &label in labels {
        state = state
            .wrapping_add(label)
            .wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        state = z ^ (z >> 31);
    }
    state
}
