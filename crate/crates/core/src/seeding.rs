//! Deterministic seed derivation.
//!
//! Streams (instances of a dataset, ensemble members, restarts) get their
//! own RNG seeds through a fixed 64-bit mixing rule so that every run is
//! reproducible element-wise and independent of batch size or evaluation
//! order.

/// SplitMix64 finalizer.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive the seed for sub-stream `stream` of `seed`:
/// `splitmix64(seed + (stream + 1) * 0x9E3779B97F4A7C15)`.
pub fn derive(seed: u64, stream: u64) -> u64 {
    splitmix64(seed.wrapping_add(stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}
