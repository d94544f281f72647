//! Constraint control: the leader reprices its items in the capacity constraint.
//!
//! The leader sends a block S₁ ahead of the follower at price `w − ε`, lets
//! Greedy pack follower items, then inflates one remaining item w′ so that it
//! exactly consumes the residual c̄, earning `c̄ − w′`. Every other leader item
//! is priced out of the knapsack.
//!
//! Two solvers produce identical results. The naive one runs a reaching DP
//! over `L ∖ {w′}` for every candidate w′. The batched one splits L into
//! about √|L| groups, builds the DP over everything outside a group once, and
//! only finishes it per candidate inside the group.

use std::thread;

use serde::Serialize;

use crate::dual::DualWeight;
use crate::error::{Error, Result};
use crate::greedy::{fill_table, FillTable};
use crate::instance::{Instance, Model, WeightAssignment};
use crate::reach::{min_card_witness, MinCardReach};

/// Split of the leader indices into k contiguous groups of near-equal size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhasePlan {
    pub k: usize,
    pub groups: Vec<Vec<usize>>,
}

impl PhasePlan {
    pub fn new(leader_items: usize) -> PhasePlan {
        let n = leader_items;
        let k = ((n as f64).sqrt().round() as usize).clamp(1, n.max(1));
        let (size, extra) = (n / k, n % k);
        let mut groups = Vec::with_capacity(k);
        let mut start = 0;
        for g in 0..k {
            let len = size + usize::from(g < extra);
            groups.push((start..start + len).collect());
            start += len;
        }
        PhasePlan { k, groups }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ConstraintOptions {
    /// Worker threads for candidate evaluation; 0 and 1 both mean sequential.
    pub threads: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstraintSolveResult {
    /// Exact payoff `(c̄* − w′*, −|S₁*|)`, or zero when the leader abstains.
    pub value: DualWeight,
    pub before_set: Vec<usize>,
    pub before_weight: i64,
    /// Leader index of the inflated item w′*, if any.
    pub chosen_item: Option<usize>,
    pub follower_fill: i64,
    pub residual: i64,
    pub assignment: WeightAssignment,
    /// Reaching-DP cells visited; deterministic for a given instance.
    pub cell_updates: u64,
}

// Best (w′, W₁) found so far. Ordering: larger gain, fewer S₁ items, lighter
// w′, smaller W₁, lower index of w′.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Choice {
    gain: i64,
    items_before: u32,
    chosen_weight: i64,
    before_weight: i64,
    chosen: usize,
}

impl Choice {
    fn rank(&self) -> (i64, i64, i64, i64, i64) {
        (
            self.gain,
            -(self.items_before as i64),
            -self.chosen_weight,
            -self.before_weight,
            -(self.chosen as i64),
        )
    }

    fn better(a: Option<Choice>, b: Option<Choice>) -> Option<Choice> {
        match (a, b) {
            (Some(x), Some(y)) => Some(if y.rank() > x.rank() { y } else { x }),
            (x, None) => x,
            (None, y) => y,
        }
    }
}

fn evaluate(reach: &MinCardReach, fill: &FillTable, chosen: usize, weight: i64) -> Option<Choice> {
    let mut best = None;
    for (w1, count) in reach.reachable() {
        let residual = fill.residual(w1 as i64);
        if residual > weight {
            let c = Choice {
                gain: residual - weight,
                items_before: count,
                chosen_weight: weight,
                before_weight: w1 as i64,
                chosen,
            };
            best = Choice::better(best, Some(c));
        }
    }
    best
}

fn fan_out<F>(candidates: &[usize], threads: usize, work: F) -> (Option<Choice>, u64)
where
    F: Fn(usize) -> (Option<Choice>, u64) + Sync,
{
    let fold = |items: &[usize]| {
        items.iter().fold((None, 0u64), |(best, updates), &idx| {
            let (c, u) = work(idx);
            (Choice::better(best, c), updates + u)
        })
    };
    if threads <= 1 || candidates.len() <= 1 {
        return fold(candidates);
    }
    let chunk = candidates.len().div_ceil(threads);
    thread::scope(|s| {
        let handles: Vec<_> = candidates
            .chunks(chunk)
            .map(|part| s.spawn(move || fold(part)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("candidate worker panicked"))
            .fold((None, 0), |(b, u), (c, v)| (Choice::better(b, c), u + v))
    })
}

pub fn solve_constraint_naive(instance: &Instance) -> Result<ConstraintSolveResult> {
    solve_constraint_naive_with(instance, &ConstraintOptions::default())
}

pub fn solve_constraint_naive_with(instance: &Instance, options: &ConstraintOptions) -> Result<ConstraintSolveResult> {
    instance.require_model("constraint", &[Model::ConstraintControl])?;
    instance.check()?;
    let fill = fill_table(instance);
    let leader = &instance.leader;
    let cap = instance.capacity_usize();
    let candidates: Vec<usize> = (0..leader.len()).collect();
    let (best, updates) = fan_out(&candidates, options.threads, |idx| {
        let mut reach = MinCardReach::new(cap);
        let mut updates = 0;
        for (j, &w) in leader.iter().enumerate() {
            if j != idx {
                updates += reach.add_item(w);
            }
        }
        (evaluate(&reach, &fill, idx, leader[idx]), updates)
    });
    finish(instance, &fill, best, updates)
}

pub fn solve_constraint_batched(instance: &Instance) -> Result<ConstraintSolveResult> {
    solve_constraint_batched_with(instance, &ConstraintOptions::default())
}

pub fn solve_constraint_batched_with(
    instance: &Instance,
    options: &ConstraintOptions,
) -> Result<ConstraintSolveResult> {
    instance.require_model("constraint", &[Model::ConstraintControl])?;
    instance.check()?;
    let fill = fill_table(instance);
    let leader = &instance.leader;
    let cap = instance.capacity_usize();
    let plan = PhasePlan::new(leader.len());

    let mut best = None;
    let mut updates = 0;
    for group in &plan.groups {
        let mut frozen = MinCardReach::new(cap);
        let mut in_group = vec![false; leader.len()];
        for &j in group {
            in_group[j] = true;
        }
        for (j, &w) in leader.iter().enumerate() {
            if !in_group[j] {
                updates += frozen.add_item(w);
            }
        }
        let (b, u) = fan_out(group, options.threads, |idx| {
            let mut reach = frozen.clone();
            let mut updates = 0;
            for &j in group {
                if j != idx {
                    updates += reach.add_item(leader[j]);
                }
            }
            (evaluate(&reach, &fill, idx, leader[idx]), updates)
        });
        best = Choice::better(best, b);
        updates += u;
    }
    finish(instance, &fill, best, updates)
}

fn finish(
    instance: &Instance,
    fill: &FillTable,
    best: Option<Choice>,
    cell_updates: u64,
) -> Result<ConstraintSolveResult> {
    let Some(choice) = best else {
        return Ok(ConstraintSolveResult {
            value: DualWeight::ZERO,
            before_set: Vec::new(),
            before_weight: 0,
            chosen_item: None,
            follower_fill: fill.get(0),
            residual: fill.residual(0),
            assignment: instance.identity_assignment(),
            cell_updates,
        });
    };
    let others: Vec<usize> = (0..instance.leader.len()).filter(|&j| j != choice.chosen).collect();
    let before_set =
        min_card_witness(&instance.leader, &others, choice.before_weight).expect("reachable W1 has a witness");
    debug_assert_eq!(before_set.len() as u32, choice.items_before);
    let residual = fill.residual(choice.before_weight);
    let assignment = reconstruct_constraint(instance, &before_set, choice.chosen, residual)?;
    Ok(ConstraintSolveResult {
        value: DualWeight::new(choice.gain, -(choice.items_before as i64)),
        before_set,
        before_weight: choice.before_weight,
        chosen_item: Some(choice.chosen),
        follower_fill: fill.get(choice.before_weight),
        residual,
        assignment,
        cell_updates,
    })
}

/// Prices for S₁ ahead of the follower and `chosen` filling the residual.
///
/// S₁ items get `w − ε` (efficiency just above 1), the chosen item gets the
/// residual c̄ itself, and every other leader item gets `max(c̄, w) + 1`: its
/// efficiency stays below 1 and it no longer fits once the follower is done.
pub fn reconstruct_constraint(
    instance: &Instance,
    before_set: &[usize],
    chosen: usize,
    residual: i64,
) -> Result<WeightAssignment> {
    instance.require_model("constraint", &[Model::ConstraintControl])?;
    let n = instance.leader.len();
    if chosen >= n {
        return Err(Error::InvalidDecomposition(format!("no leader item {chosen}")));
    }
    let mut in_before = vec![false; n];
    for &j in before_set {
        if j >= n || j == chosen || std::mem::replace(&mut in_before[j], true) {
            return Err(Error::InvalidDecomposition(format!(
                "S1 entry {j} is out of range, repeated or the chosen item"
            )));
        }
    }
    let before_weight: i64 = before_set.iter().map(|&j| instance.leader[j]).sum();
    if before_weight > instance.capacity {
        return Err(Error::InvalidDecomposition(format!(
            "S1 weighs {before_weight}, more than the capacity"
        )));
    }
    let actual = fill_table(instance).residual(before_weight);
    if actual != residual {
        return Err(Error::InvalidDecomposition(format!(
            "residual after S1 is {actual}, not {residual}"
        )));
    }
    let chosen_weight = instance.leader[chosen];
    if chosen_weight >= residual {
        return Err(Error::ChosenItemTooLarge {
            weight: chosen_weight,
            residual,
        });
    }
    let prices = instance
        .leader
        .iter()
        .enumerate()
        .map(|(j, &w)| {
            if in_before[j] {
                DualWeight::new(w, -1)
            } else if j == chosen {
                DualWeight::int(residual)
            } else {
                DualWeight::int(residual.max(w) + 1)
            }
        })
        .collect();
    Ok(WeightAssignment(prices))
}
