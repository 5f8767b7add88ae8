//! Portable, splittable random streams.
//!
//! Every random draw goes through ChaCha8 keyed by the run seed and a
//! purpose tag, with the stream selected by a stable hash of the document id.
//! A document therefore sees the same random sequence in a given sweep no
//! matter where it sits in the corpus or which worker thread processes it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// FNV-1a over the UTF-8 bytes; stable across platforms and releases.
pub fn stable_hash(text: &str) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in text.as_bytes() {
        hash ^= u64::from(*byte);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

fn mix(mut z: u64) -> u64 {
    // splitmix64 finalizer
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Purposes keep initialization, training sweeps and fold-in inference on
/// disjoint key material.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Purpose {
    Init,
    Sweep(u32),
    FoldIn,
    Synthetic,
}

impl Purpose {
    fn tag(self) -> u64 {
        match self {
            Purpose::Init => 1,
            Purpose::Sweep(n) => 0x1_0000_0000 | u64::from(n),
            Purpose::FoldIn => 2,
            Purpose::Synthetic => 3,
        }
    }
}

/// Random stream for one document under one purpose.
pub fn doc_stream(seed: u64, purpose: Purpose, doc_id: &str) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(mix(seed ^ mix(purpose.tag())));
    rng.set_stream(stable_hash(doc_id));
    rng
}

/// Plain seeded generator, for fixtures and anything not tied to a document.
pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
