//! Seeded randomness. Every random choice in the crate flows from a
//! SplitMix64 stream so results are reproducible from a single `u64`.

use rand::SeedableRng;
pub use rand_xoshiro::SplitMix64;

/// Name recorded in reports.
pub const RNG_ALGORITHM: &str = "splitmix64";

pub fn seeded(seed: u64) -> SplitMix64 {
    SplitMix64::seed_from_u64(seed)
}

/// An independent stream for a named sub-task.
pub fn substream(seed: u64, label: &str) -> SplitMix64 {
    // FNV-1a over the label, folded into the seed
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    seeded(seed ^ h.rotate_left(17))
}
