use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used for every randomized decision.
pub type Rng = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `⌈log₂ n⌉`, at least 1.
pub fn ceil_log2(n: usize) -> usize {
    if n <= 2 {
        1
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// `⌊log₂ n⌋` for `n ≥ 1`.
pub fn floor_log2(n: usize) -> usize {
    (usize::BITS - 1 - n.max(1).leading_zeros()) as usize
}
