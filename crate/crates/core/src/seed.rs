//! Labeled child seeds derived from one master seed.

use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use sha2::{Digest, Sha256};

pub fn derive(master: u64, label: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(master.to_le_bytes());
    h.update(label.as_bytes());
    let out = h.finalize();
    u64::from_le_bytes(out[..8].try_into().expect("8 bytes"))
}

pub fn rng(master: u64, label: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(master, label))
}

#[cfg(test)]
mod tests {
    #[test]
    fn labels_separate_streams() {
        assert_eq!(super::derive(7, "a"), super::derive(7, "a"));
        assert_ne!(super::derive(7, "a"), super::derive(7, "b"));
        assert_ne!(super::derive(7, "a"), super::derive(8, "a"));
    }
}
