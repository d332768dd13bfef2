//! Seed plumbing. Every randomized stage draws from its own ChaCha stream so
//! that adding a draw to one stage never shifts the numbers seen by another.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream identifiers for the pipeline stages.
pub mod stream {
    pub const SPECTRUM: u64 = 1;
    pub const AWGN: u64 = 2;
    pub const SELECTION: u64 = 3;
    pub const PERTURBATION: u64 = 4;
    pub const DENSE_MATRIX: u64 = 5;
    pub const RIP: u64 = 6;
}

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
