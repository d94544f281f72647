//! Brute-force leader optimum for the two discrete models.
//!
//! Enumerates every block S₁ ⊆ L placed ahead of the follower, replays the
//! follower's Greedy fill directly, and solves what remains exactly. Meant for
//! small |L| as ground truth for the dynamic programs.

use std::thread;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{Instance, Model};
use crate::reach::{best_subset_sum_dp, best_subset_sum_mitm};

pub const DEFAULT_ORACLE_LIMIT: usize = 16;

/// Above this capacity the inner subset sum switches to meet in the middle.
pub const DP_CAPACITY_LIMIT: i64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleOptions {
    pub max_leader_items: usize,
    pub threads: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            max_leader_items: DEFAULT_ORACLE_LIMIT,
            threads: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum Witness {
    Objective {
        before_set: Vec<usize>,
        after_set: Vec<usize>,
    },
    Constraint {
        before_set: Vec<usize>,
        chosen_item: Option<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    /// Optimum with ε neglected.
    pub value: i64,
    pub witness: Witness,
    /// Leader strategies examined.
    pub enumerated_count: u64,
    /// Blocks S₁ whose best inflated item is not the lightest remaining one.
    pub structure_violations: u64,
}

fn follower_fill(sorted_desc: &[i64], capacity: i64) -> i64 {
    let mut used = 0;
    for &v in sorted_desc {
        if used + v <= capacity {
            used += v;
        }
    }
    used
}

fn members(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&j| mask >> j & 1 == 1).collect()
}

struct Scan {
    best: Option<(Vec<i64>, u32, Witness)>,
    enumerated: u64,
    violations: u64,
}

// Runs `visit` on every mask, split across threads, and keeps the largest
// rank; equal ranks keep the smallest mask.
fn scan<F>(n: usize, threads: usize, visit: F) -> Scan
where
    F: Fn(u32, &mut Scan) + Sync,
{
    let total = 1u64 << n;
    let run = |lo: u64, hi: u64| {
        let mut s = Scan {
            best: None,
            enumerated: 0,
            violations: 0,
        };
        for mask in lo..hi {
            visit(mask as u32, &mut s);
        }
        s
    };
    let threads = threads.max(1) as u64;
    if threads == 1 {
        return run(0, total);
    }
    let chunk = total.div_ceil(threads);
    let parts: Vec<Scan> = thread::scope(|sc| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                let (lo, hi) = ((t * chunk).min(total), ((t + 1) * chunk).min(total));
                let run = &run;
                sc.spawn(move || run(lo, hi))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("oracle worker")).collect()
    });
    let mut out = Scan {
        best: None,
        enumerated: 0,
        violations: 0,
    };
    for p in parts {
        out.enumerated += p.enumerated;
        out.violations += p.violations;
        if let Some(b) = p.best {
            offer(&mut out, b.0, b.1, b.2);
        }
    }
    out
}

fn offer(s: &mut Scan, rank: Vec<i64>, mask: u32, witness: Witness) {
    let replace = match &s.best {
        None => true,
        Some((r, m, _)) => rank > *r || (rank == *r && mask < *m),
    };
    if replace {
        s.best = Some((rank, mask, witness));
    }
}

fn check_size(instance: &Instance, options: &OracleOptions) -> Result<()> {
    let n = instance.leader.len();
    let limit = options.max_leader_items.min(30);
    if n > limit {
        return Err(Error::InstanceTooLargeForOracle { leader_items: n, limit });
    }
    Ok(())
}

pub fn oracle_objective(instance: &Instance) -> Result<OracleResult> {
    oracle_objective_with(instance, &OracleOptions::default())
}

pub fn oracle_objective_with(instance: &Instance, options: &OracleOptions) -> Result<OracleResult> {
    instance.require_model("objective", &[Model::ObjectiveControl])?;
    check_size(instance, options)?;
    let leader = &instance.leader;
    let n = leader.len();
    let c = instance.capacity;
    let mut follower = instance.follower.clone();
    follower.sort_unstable_by(|a, b| b.cmp(a));

    let s = scan(n, options.threads, |mask, s| {
        let before = members(mask, n);
        let w1: i64 = before.iter().map(|&j| leader[j]).sum();
        if w1 > c {
            return;
        }
        s.enumerated += 1;
        let residual = c - w1 - follower_fill(&follower, c - w1);
        let rest: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 0).collect();
        let (w2, after) = if c <= DP_CAPACITY_LIMIT {
            best_subset_sum_dp(leader, &rest, residual)
        } else {
            best_subset_sum_mitm(leader, &rest, residual)
        };
        offer(
            s,
            vec![w2],
            mask,
            Witness::Objective {
                before_set: before,
                after_set: after,
            },
        );
    });
    let (rank, _, witness) = s.best.expect("empty S1 is always feasible");
    Ok(OracleResult {
        value: rank[0],
        witness,
        enumerated_count: s.enumerated,
        structure_violations: 0,
    })
}

pub fn oracle_constraint(instance: &Instance) -> Result<OracleResult> {
    oracle_constraint_with(instance, &OracleOptions::default())
}

/// Also counts blocks S₁ whose best choice of w′ is not the lightest item
/// remaining in L ∖ S₁.
pub fn oracle_constraint_with(instance: &Instance, options: &OracleOptions) -> Result<OracleResult> {
    instance.require_model("constraint", &[Model::ConstraintControl])?;
    check_size(instance, options)?;
    let leader = &instance.leader;
    let n = leader.len();
    let c = instance.capacity;
    let mut follower = instance.follower.clone();
    follower.sort_unstable_by(|a, b| b.cmp(a));

    let s = scan(n, options.threads, |mask, s| {
        let before = members(mask, n);
        let w1: i64 = before.iter().map(|&j| leader[j]).sum();
        if w1 > c {
            return;
        }
        let residual = c - w1 - follower_fill(&follower, c - w1);
        // abstaining from w′ is always possible
        s.enumerated += 1;
        offer(
            s,
            vec![0, 0, 0, 0, 0],
            mask,
            Witness::Constraint {
                before_set: Vec::new(),
                chosen_item: None,
            },
        );
        let mut best_here: Option<(i64, i64)> = None;
        for j in (0..n).filter(|j| mask >> j & 1 == 0) {
            s.enumerated += 1;
            let gain = residual - leader[j];
            if gain <= 0 {
                continue;
            }
            if best_here.is_none_or(|(g, _)| gain > g) {
                best_here = Some((gain, leader[j]));
            }
            // larger gain, fewer items ahead, lighter w′, smaller W₁, lower index
            let rank = vec![gain, -(before.len() as i64), -leader[j], -w1, -(j as i64)];
            offer(
                s,
                rank,
                mask,
                Witness::Constraint {
                    before_set: before.clone(),
                    chosen_item: Some(j),
                },
            );
        }
        if let Some((_, w)) = best_here {
            let lightest = (0..n).filter(|j| mask >> j & 1 == 0).map(|j| leader[j]).min();
            if lightest != Some(w) {
                s.violations += 1;
            }
        }
    });
    let (rank, _, witness) = s.best.expect("abstaining is always feasible");
    Ok(OracleResult {
        value: rank[0],
        witness,
        enumerated_count: s.enumerated,
        structure_violations: s.violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(model: Model, c: i64, l: &[i64], f: &[i64]) -> Instance {
        Instance::new(model, c, l.to_vec(), f.to_vec()).unwrap()
    }

    #[test]
    fn objective_examples() {
        let r = oracle_objective(&inst(Model::ObjectiveControl, 20, &[9, 8, 5, 3], &[12, 11, 10, 4])).unwrap();
        assert_eq!(r.value, 5);
        assert_eq!(
            r.witness,
            Witness::Objective {
                before_set: vec![1, 3],
                after_set: vec![2]
            }
        );
        let r = oracle_objective(&inst(Model::ObjectiveControl, 103, &[1, 2, 3, 100], &[101])).unwrap();
        assert_eq!(r.value, 100);
        let r = oracle_objective(&inst(Model::ObjectiveControl, 103, &[2, 2, 2, 100], &[101])).unwrap();
        assert_eq!(r.value, 2);
    }

    #[test]
    fn constraint_examples() {
        let r = oracle_constraint(&inst(Model::ConstraintControl, 10, &[3, 4], &[5])).unwrap();
        assert_eq!(r.value, 2);
        assert_eq!(
            r.witness,
            Witness::Constraint {
                before_set: vec![],
                chosen_item: Some(0)
            }
        );
        assert_eq!(r.structure_violations, 0);
        let r = oracle_constraint(&inst(Model::ConstraintControl, 10, &[2], &[])).unwrap();
        assert_eq!(r.value, 8);
        assert_eq!(r.enumerated_count, 3);
        let r = oracle_constraint(&inst(Model::ConstraintControl, 10, &[], &[4])).unwrap();
        assert_eq!(r.value, 0);
    }

    #[test]
    fn mitm_path_for_large_capacity() {
        let i = inst(
            Model::ObjectiveControl,
            50_000,
            &[20_000, 17_000, 9_000, 30_000],
            &[45_000],
        );
        let r = oracle_objective(&i).unwrap();
        let mut best = 0;
        for mask in 0u32..16 {
            let w1: i64 = (0..4).filter(|j| mask >> j & 1 == 1).map(|j| i.leader[j]).sum();
            if w1 > i.capacity {
                continue;
            }
            let f = if 45_000 <= i.capacity - w1 { 45_000 } else { 0 };
            let residual = i.capacity - w1 - f;
            for sub in 0u32..16 {
                if sub & mask != 0 {
                    continue;
                }
                let w2: i64 = (0..4).filter(|j| sub >> j & 1 == 1).map(|j| i.leader[j]).sum();
                if w2 <= residual {
                    best = best.max(w2);
                }
            }
        }
        assert_eq!(r.value, best);
    }

    #[test]
    fn threads_agree() {
        let i = inst(Model::ConstraintControl, 60, &[7, 3, 12, 9, 5, 14, 2], &[20, 11, 6]);
        let a = oracle_constraint(&i).unwrap();
        let b = oracle_constraint_with(
            &i,
            &OracleOptions {
                threads: 3,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(a, b);
        let o = i.with_model(Model::ObjectiveControl);
        let a = oracle_objective(&o).unwrap();
        let b = oracle_objective_with(
            &o,
            &OracleOptions {
                threads: 4,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn size_limit() {
        let i = inst(Model::ObjectiveControl, 10, &[1; 17], &[]);
        assert_eq!(
            oracle_objective(&i),
            Err(Error::InstanceTooLargeForOracle {
                leader_items: 17,
                limit: 16
            })
        );
    }
}
