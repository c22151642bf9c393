#![allow(dead_code)]

use dgms::game::{PositionalStructure, UtilityFunction, Value, WinLosePartition};
use dgms::generate::{gen_random, RandomParams};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Small random two-person structures whose profile count stays enumerable.
pub fn small_structure(max_vertices: usize) -> impl Strategy<Value = PositionalStructure> {
    (2..=max_vertices, 1u32..=6, 0u32..=4, any::<u64>()).prop_filter_map("too many profiles", |(n, d, t, seed)| {
        let params = RandomParams {
            vertices: n,
            players: 2,
            density: d as f64 / 10.0,
            terminal_fraction: t as f64 / 10.0,
            seed,
        };
        gen_random(&params).ok().filter(|s| s.profile_count() <= 4096)
    })
}

pub fn random_partition(rng: &mut ChaCha8Rng, outcomes: usize) -> WinLosePartition {
    WinLosePartition::from_a1(outcomes, (0..outcomes).filter(|_| rng.random_bool(0.5)))
}

/// Zero-sum utility with small random rationals for player 1.
pub fn random_zero_sum(rng: &mut ChaCha8Rng, outcomes: usize) -> UtilityFunction {
    UtilityFunction::zero_sum((0..outcomes).map(|_| random_rational(rng)).collect())
}

pub fn random_rational(rng: &mut ChaCha8Rng) -> Value {
    Value::new(rng.random_range(-6..=6), rng.random_range(1..=4))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
