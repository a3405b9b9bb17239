use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

/// Reproducible random stream: ChaCha20 keyed from a 64-bit seed.
///
/// The 64-bit seed is expanded to a ChaCha key with `SeedableRng::seed_from_u64`
/// (PCG32 expansion, as documented by `rand_core`). Child streams are derived
/// with [`derive_seed`], so any stream can be reconstructed from the master seed
/// and its derivation path alone.
#[derive(Clone, Debug)]
pub struct SeededRng {
    seed: u64,
    children: u64,
    inner: ChaCha20Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            children: 0,
            inner: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent child stream; the n-th call yields `derive_seed(seed, &[n])`.
    pub fn split(&mut self) -> SeededRng {
        let child = derive_seed(self.seed, &[self.children]);
        self.children += 1;
        SeededRng::new(child)
    }
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// SplitMix64 finalizer.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds a path of tags into a seed: `h = splitmix64(h ^ splitmix64(tag))` per tag.
pub fn derive_seed(master: u64, tags: &[u64]) -> u64 {
    tags.iter().fold(splitmix64(master), |h, &tag| {
        splitmix64(h ^ splitmix64(tag))
    })
}
