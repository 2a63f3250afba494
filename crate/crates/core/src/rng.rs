//! Deterministic stream derivation.
//!
//! Every random decision in a run draws from a ChaCha stream derived from
//! `(run seed, purpose, iteration, player)`, so per-player trajectories
//! within an iteration are independent and any part of a run can be
//! reproduced in isolation.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream purposes; distinct constants keep streams disjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamKind {
    Trajectory,
    Probe,
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mix words into a single stream seed.
#[must_use]
pub fn stream_seed(seed: u64, kind: StreamKind, iteration: u64, player: usize) -> u64 {
    let tag = match kind {
        StreamKind::Trajectory => 0x54,
        StreamKind::Probe => 0x50,
    };
    let mut acc = splitmix(seed);
    for word in [tag, iteration, player as u64] {
        acc = splitmix(acc ^ word);
    }
    acc
}

/// The RNG for one stream.
#[must_use]
pub fn stream_rng(seed: u64, kind: StreamKind, iteration: u64, player: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stream_seed(seed, kind, iteration, player))
}
