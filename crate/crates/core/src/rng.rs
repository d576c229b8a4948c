//! Counter-keyed random substreams.
//!
//! Every random draw in the crate comes from a ChaCha8 stream selected by a
//! key derived from the master seed and a path of labels, plus a stream
//! index (the IC number, genome slot, ...). Draws therefore depend only on
//! that path and never on scheduling or evaluation order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamKey(u64);

impl StreamKey {
    pub fn new(master_seed: u64) -> Self {
        StreamKey(master_seed)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    /// Key for a labeled sub-purpose of this key.
    pub fn child(self, label: u64) -> Self {
        StreamKey(splitmix64(self.0 ^ splitmix64(label.wrapping_add(0x5851_F42D_4C95_7F2D))))
    }

    pub fn rng(self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.0);
        rng.set_stream(index);
        rng
    }
}

pub(crate) mod labels {
    pub const EVALUATE: u64 = 1;
    pub const FITNESS_DENSITY: u64 = 2;
    pub const FITNESS_LOGICAL: u64 = 3;
    pub const GA_INIT: u64 = 4;
    pub const GA_BREED: u64 = 5;
    pub const GA_SAMPLE: u64 = 6;
    pub const HELD_OUT: u64 = 7;
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn same_key_same_stream() {
        let a = StreamKey::new(7).child(3).rng(11).next_u64();
        let b = StreamKey::new(7).child(3).rng(11).next_u64();
        assert_eq!(a, b);
    }

    #[test]
    fn indices_and_labels_separate_streams() {
        let k = StreamKey::new(7);
        let x = k.rng(0).next_u64();
        assert_ne!(x, k.rng(1).next_u64());
        assert_ne!(k.child(1).rng(0).next_u64(), k.child(2).rng(0).next_u64());
        assert_ne!(k.child(1), k);
    }
}
