//! Seeding helpers for the reproducible samplers.
//!
//! Batches are generated from an explicitly seeded PCG generator; factor i
//! of a product draws from the sub-stream `sub_seed(seed, i)`, so concurrent
//! batches must use distinct top-level seeds. Streams are stable for a fixed
//! crate version but not across RNG-library upgrades; distributional tests
//! (KS) are the cross-version contract, never raw streams.

use rand_pcg::Pcg64Mcg;

/// SplitMix64 step, used for seed derivation only.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Sub-seed for factor `index` of a multi-factor draw:
/// `seed XOR splitmix64(index + 1)`.
pub fn sub_seed(seed: u64, index: usize) -> u64 {
    seed ^ splitmix64(index as u64 + 1)
}

/// Deterministic generator for a given seed.
pub fn seeded_rng(seed: u64) -> Pcg64Mcg {
    Pcg64Mcg::new(((splitmix64(seed) as u128) << 64) | seed as u128 | 1)
}
