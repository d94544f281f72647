//! Seeded random instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::{Instance, Model};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomSpec {
    pub leader_items: usize,
    pub follower_items: usize,
    /// Weights are drawn uniformly from 1..=max_weight.
    pub max_weight: i64,
    pub capacity: i64,
}

pub fn random_instance(model: Model, spec: RandomSpec, seed: u64) -> Result<Instance> {
    if spec.max_weight < 1 {
        return Err(Error::ZeroOrNegativeWeight {
            field: "max_weight",
            index: 0,
            value: spec.max_weight,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |n: usize| -> Vec<i64> { (0..n).map(|_| rng.gen_range(1..=spec.max_weight)).collect() };
    let leader = draw(spec.leader_items);
    let follower = draw(spec.follower_items);
    Instance::new(model, spec.capacity, leader, follower)
}

/// Random Partition numbers in 1..=max with an even total.
pub fn random_partition_numbers(count: usize, max: i64, seed: u64) -> Vec<i64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut numbers: Vec<i64> = (0..count).map(|_| rng.gen_range(1..=max.max(1))).collect();
    if numbers.iter().sum::<i64>() % 2 != 0 {
        if let Some(first) = numbers.first_mut() {
            *first += if *first > 1 { -1 } else { 1 };
        }
    }
    numbers
}
