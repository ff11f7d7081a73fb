//! Deterministic seed derivation for paired Monte Carlo experiments.
//!
//! Every randomized stage receives a seed derived from the master seed and
//! the coordinates that identify the stage (realization index, sweep cell,
//! link index, draw index). Stages that must share randomness across
//! compared variants (e.g. the same AP field for both connection schemes)
//! simply omit the distinguishing coordinate from the derivation.

/// SplitMix64 finalizer. Used as the mixing primitive for seed derivation.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed from a master seed and a list of coordinates.
///
/// The derivation is `s0 = splitmix64(master)` followed by
/// `s = splitmix64(s xor part)` for each coordinate in order.
pub fn derive_seed(master: u64, parts: &[u64]) -> u64 {
    let mut s = splitmix64(master);
    for &p in parts {
        s = splitmix64(s ^ p);
    }
    s
}
