//! Deterministic stream splitting: one master seed per run expands into
//! independent generators for environment noise, guess noise, wildcard
//! fill, and baseline exploration.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const STREAM_ENV: u64 = 0;
pub const STREAM_GUESS: u64 = 1;
pub const STREAM_FILL: u64 = 2;
pub const STREAM_EXPLORE: u64 = 3;

/// An independent generator for (master seed, stream id).
pub fn stream(master: u64, stream_id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(stream_id);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn streams_are_independent_and_reproducible() {
        let mut a1 = stream(42, STREAM_ENV);
        let mut a2 = stream(42, STREAM_ENV);
        let mut b = stream(42, STREAM_GUESS);
        let xs: Vec<u32> = (0..8).map(|_| a1.next_u32()).collect();
        let ys: Vec<u32> = (0..8).map(|_| a2.next_u32()).collect();
        let zs: Vec<u32> = (0..8).map(|_| b.next_u32()).collect();
        assert_eq!(xs, ys);
        assert_ne!(xs, zs);
    }
}
