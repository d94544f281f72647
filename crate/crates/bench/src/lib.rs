//! Fixed, seeded workloads shared by the benchmarks.

use stackelberg_core::{random_instance, Instance, Model, RandomSpec};

pub const SEED: u64 = 0x5eed;

/// Leader-heavy instance: `leader_items` weights in 1..=60 and six follower
/// items, at the given capacity.
pub fn workload(model: Model, leader_items: usize, capacity: i64) -> Instance {
    let spec = RandomSpec {
        leader_items,
        follower_items: 6,
        max_weight: 60,
        capacity,
    };
    random_instance(model, spec, SEED + leader_items as u64).expect("workload parameters are valid")
}
