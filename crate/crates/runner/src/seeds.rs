//! Deterministic per-replicate seed derivation.
//!
//! Every replicate owns an independent RNG whose seed is a pure function of
//! (master seed, hypothesis tag, replicate index), so results do not depend
//! on how replicates are distributed over workers.

use bfsim_core::genmodel::Hypothesis;
use rand::SeedableRng;
use rand_pcg::Pcg64Mcg;

/// SplitMix64 finalizer used as the 64-bit mixing function.
pub fn splitmix64(seed: u64) -> u64 {
    let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const H0_TAG: u64 = 0x6A09_E667_F3BC_C908;
const H1_TAG: u64 = 0xBB67_AE85_84CA_A73B;

/// Stream seed for one replicate: mix(mix(master ⊕ tag) ⊕ mix(index)).
pub fn replicate_seed(master_seed: u64, hypothesis: Hypothesis, replicate_index: u64) -> u64 {
    let tag = match hypothesis {
        Hypothesis::H0 => H0_TAG,
        Hypothesis::H1 => H1_TAG,
    };
    splitmix64(splitmix64(master_seed ^ tag) ^ splitmix64(replicate_index))
}

/// The RNG a replicate runs with.
pub fn replicate_rng(master_seed: u64, hypothesis: Hypothesis, replicate_index: u64) -> Pcg64Mcg {
    Pcg64Mcg::seed_from_u64(replicate_seed(master_seed, hypothesis, replicate_index))
}
