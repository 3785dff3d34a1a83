//! Seed derivation for independent, reproducible random streams.
//!
//! Every consumer of randomness (AP placement, STA placement, channel draws,
//! shadowing, each STA's agent) gets its own [`ChaCha8Rng`] whose seed is a
//! mix of a parent seed and a label. Changing one sweep dimension therefore
//! never shifts the draws seen by an unrelated consumer.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// FNV-1a over the label bytes, used only to fold strings into the mix.
fn label_hash(label: &str) -> u64 {
    label.bytes().fold(0xCBF2_9CE4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01B3)
    })
}

/// Derives a child seed from a parent seed, a textual label and an index.
pub fn derive_seed(parent: u64, label: &str, index: u64) -> u64 {
    let a = mix(parent.wrapping_add(GOLDEN));
    let b = mix(a ^ label_hash(label));
    mix(b ^ index.wrapping_mul(GOLDEN).wrapping_add(1))
}

pub fn stream(parent: u64, label: &str, index: u64) -> SimRng {
    SimRng::seed_from_u64(derive_seed(parent, label, index))
}
