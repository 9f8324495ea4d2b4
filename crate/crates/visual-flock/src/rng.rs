//! Seeded random-number streams with a stable substream layout.
//!
//! One master seed spawns independent per-agent substreams, so changing the
//! agent count never reshuffles the noise existing agents draw. Substream
//! seeds are expanded with splitmix64, which is stable across platforms.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const INIT_STREAM: u64 = 0;
const AGENT_STREAM_BASE: u64 = 1;

fn splitmix64(state: &mut u64) {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
}

fn splitmix64_next(state: &mut u64) -> u64 {
    splitmix64(state);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mix an arbitrary list of words into one 64-bit value.
pub fn mix_words(words: &[u64]) -> u64 {
    let mut state = 0x6c62_272e_07bb_0142;
    let mut acc = 0u64;
    for &w in words {
        state ^= w;
        acc ^= splitmix64_next(&mut state);
    }
    // One extra round so a trailing zero word still changes the result.
    acc ^ splitmix64_next(&mut state)
}

fn chacha_from(words: &[u64]) -> ChaCha8Rng {
    let mut state = mix_words(words);
    let mut seed = [0u8; 32];
    for chunk in seed.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64_next(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(seed)
}

/// Master seed plus the substream derivation contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngStream {
    seed: u64,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        RngStream { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Stream used for initial placement and headings.
    pub fn init(&self) -> ChaCha8Rng {
        chacha_from(&[self.seed, INIT_STREAM])
    }

    /// Independent noise stream of one agent; stable under agent-count changes.
    pub fn agent(&self, index: usize) -> ChaCha8Rng {
        chacha_from(&[self.seed, AGENT_STREAM_BASE + index as u64])
    }
}

/// Seed for one sweep replicate, keyed on the parameter values themselves so
/// grids of different shapes share results for identical cells.
pub fn replicate_seed(master_seed: u64, k_attract: f64, k_align: f64, replicate: usize) -> u64 {
    mix_words(&[
        master_seed,
        k_attract.to_bits(),
        k_align.to_bits(),
        replicate as u64,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn same_seed_same_draws() {
        let a: Vec<u64> = RngStream::new(7).agent(3).random_iter().take(8).collect();
        let b: Vec<u64> = RngStream::new(7).agent(3).random_iter().take(8).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn substreams_are_distinct() {
        let s = RngStream::new(7);
        let a: u64 = s.agent(0).random();
        let b: u64 = s.agent(1).random();
        let i: u64 = s.init().random();
        assert_ne!(a, b);
        assert_ne!(a, i);
    }

    #[test]
    fn agent_streams_stable_under_count_changes() {
        // The substream of agent 3 is a function of (seed, 3) alone.
        let x: u64 = RngStream::new(99).agent(3).random();
        let y: u64 = RngStream::new(99).agent(3).random();
        assert_eq!(x, y);
    }

    #[test]
    fn replicate_seed_depends_on_all_inputs() {
        let s = replicate_seed(1, 0.1, 0.2, 0);
        assert_ne!(s, replicate_seed(2, 0.1, 0.2, 0));
        assert_ne!(s, replicate_seed(1, 0.15, 0.2, 0));
        assert_ne!(s, replicate_seed(1, 0.1, 0.25, 0));
        assert_ne!(s, replicate_seed(1, 0.1, 0.2, 1));
    }
}
