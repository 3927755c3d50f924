//! Deterministic seed derivation shared by the randomized routines.

/// SplitMix64 finalizer.
pub(crate) fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Folds a sequence of words into a seed. Stable across platforms and builds.
pub(crate) fn fold<I: IntoIterator<Item = u64>>(seed: u64, words: I) -> u64 {
    words.into_iter().fold(mix64(seed), |acc, w| mix64(acc ^ w))
}

/// Derives the `index`-th child seed of `master`.
pub fn derive(master: u64, index: u64) -> u64 {
    fold(master, [index])
}
