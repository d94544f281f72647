//! Objective control: the leader reprices its items in the follower's objective.
//!
//! An optimal leader strategy packs a block S₁ of its items before every
//! follower item (priced `w + ε`), lets Greedy fill with follower items, and
//! then packs a second block S₂ into what is left (priced near zero). The
//! solver enumerates all disjoint (S₁, S₂) weight pairs with a two-dimensional
//! reaching table and picks the best S₂ for every feasible W₁ = w(S₁).

use serde::Serialize;

use crate::dual::DualWeight;
use crate::error::{Error, Result};
use crate::greedy::{fill_table, simulate, FillTable, PackingOutcome};
use crate::instance::{Instance, Model, WeightAssignment};

/// Default storage budget for the reach table, in bits.
pub const DEFAULT_BUDGET_BITS: u128 = 1 << 33;

// one reach bit plus one 32-bit predecessor per cell
const BITS_PER_CELL: u128 = 33;
const NO_PRED: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ObjectiveOptions {
    pub budget_bits: u128,
}

impl Default for ObjectiveOptions {
    fn default() -> Self {
        ObjectiveOptions {
            budget_bits: DEFAULT_BUDGET_BITS,
        }
    }
}

/// Where a leader item goes relative to the follower block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Placement {
    Before,
    After,
}

/// `r(W₁, W₂)`: whether disjoint S₁, S₂ ⊆ L reach weights (W₁, W₂).
pub struct ReachArray {
    side: usize,
    bits: Vec<u64>,
    // (item << 1) | placement of the item that first reached the cell
    pred: Vec<u32>,
    cell_updates: u64,
}

impl ReachArray {
    pub fn build(leader: &[i64], capacity: i64, options: &ObjectiveOptions) -> Result<ReachArray> {
        let side = capacity as usize + 1;
        let needed_bits = (side as u128) * (side as u128) * BITS_PER_CELL;
        if needed_bits > options.budget_bits {
            return Err(Error::CapacityTooLarge {
                capacity,
                needed_bits,
                budget_bits: options.budget_bits,
            });
        }
        if leader.len() >= (NO_PRED >> 1) as usize {
            return Err(Error::Overflow("too many leader items for predecessor encoding"));
        }
        let cells = side * side;
        let mut r = ReachArray {
            side,
            bits: vec![0; cells.div_ceil(64)],
            pred: vec![NO_PRED; cells],
            cell_updates: 0,
        };
        r.set(0, 0);

        let c = capacity as usize;
        let mut total = 0usize;
        for (j, &w) in leader.iter().enumerate() {
            let w = w as usize;
            // every reachable cell has w1 + w2 <= total
            let bound = total.min(c);
            // Sources in decreasing (w1, w2) order: both targets are larger
            // cells and have already been visited, so item j is used once.
            for w1 in (0..=bound).rev() {
                for w2 in (0..=(bound - w1)).rev() {
                    r.cell_updates += 1;
                    if !r.get(w1, w2) {
                        continue;
                    }
                    if w1 + w <= c && !r.get(w1 + w, w2) {
                        r.set(w1 + w, w2);
                        r.pred[(w1 + w) * side + w2] = (j as u32) << 1;
                    }
                    if w2 + w <= c && !r.get(w1, w2 + w) {
                        r.set(w1, w2 + w);
                        r.pred[w1 * side + w2 + w] = (j as u32) << 1 | 1;
                    }
                }
            }
            total = total.saturating_add(w);
        }
        Ok(r)
    }

    fn set(&mut self, w1: usize, w2: usize) {
        let i = w1 * self.side + w2;
        self.bits[i / 64] |= 1 << (i % 64);
    }

    pub fn get(&self, w1: usize, w2: usize) -> bool {
        if w1 >= self.side || w2 >= self.side {
            return false;
        }
        let i = w1 * self.side + w2;
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn side(&self) -> usize {
        self.side
    }

    /// Number of (item, cell) visits made while building.
    pub fn cell_updates(&self) -> u64 {
        self.cell_updates
    }

    /// Largest W₂ ≤ `limit` with r(W₁, W₂) = 1, if row W₁ is reachable at all.
    pub fn best_in_row(&self, w1: usize, limit: i64) -> Option<usize> {
        if !self.get(w1, 0) {
            return None;
        }
        let top = limit.clamp(0, self.side as i64 - 1) as usize;
        (0..=top).rev().find(|&w2| self.get(w1, w2))
    }

    /// One pair of disjoint leader index sets reaching the cell.
    pub fn witness(&self, w1: usize, w2: usize, leader: &[i64]) -> Option<(Vec<usize>, Vec<usize>)> {
        if !self.get(w1, w2) {
            return None;
        }
        let (mut a, mut b) = (w1, w2);
        let (mut before, mut after) = (Vec::new(), Vec::new());
        while (a, b) != (0, 0) {
            let p = self.pred[a * self.side + b];
            let item = (p >> 1) as usize;
            let w = leader[item] as usize;
            if p & 1 == 0 {
                before.push(item);
                a -= w;
            } else {
                after.push(item);
                b -= w;
            }
        }
        before.sort_unstable();
        after.sort_unstable();
        Some((before, after))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObjectiveSolveResult {
    /// Exact leader payoff of `assignment`; `base` is the optimum W₂*.
    pub value: DualWeight,
    /// S₁, leader indices packed before the follower items.
    pub before_set: Vec<usize>,
    pub before_weight: i64,
    /// F(W₁*), weight Greedy takes from the follower.
    pub follower_fill: i64,
    /// S₂, leader indices packed after the follower items.
    pub after_set: Vec<usize>,
    pub after_weight: i64,
    /// c̄ = c − W₁* − F(W₁*)
    pub residual: i64,
    pub assignment: WeightAssignment,
    pub cell_updates: u64,
}

pub fn solve_objective(instance: &Instance) -> Result<ObjectiveSolveResult> {
    solve_objective_with(instance, &ObjectiveOptions::default())
}

pub fn solve_objective_with(instance: &Instance, options: &ObjectiveOptions) -> Result<ObjectiveSolveResult> {
    instance.require_model("objective", &[Model::ObjectiveControl])?;
    instance.check()?;
    let reach = ReachArray::build(&instance.leader, instance.capacity, options)?;
    let fill = fill_table(instance);

    let mut rows = Vec::new();
    for w1 in 0..=instance.capacity {
        if let Some(w2) = reach.best_in_row(w1 as usize, fill.residual(w1)) {
            rows.push((w1, w2 as i64));
        }
    }
    let best_base = rows.iter().map(|r| r.1).max().unwrap_or(0);

    // Equal bases: larger ε coefficient wins, then smaller W₁. Rows are in
    // increasing W₁, so only a strictly larger coefficient replaces.
    let mut best: Option<ObjectiveSolveResult> = None;
    for &(w1, w2) in rows.iter().filter(|r| r.1 == best_base) {
        let (s1, s2) = reach
            .witness(w1 as usize, w2 as usize, &instance.leader)
            .expect("row entry is reachable");
        let (assignment, outcome) = reconstruct_and_replay(instance, &fill, w1, &s1, &s2)?;
        let value = outcome.leader_payoff;
        if best.as_ref().is_some_and(|b| b.value >= value) {
            continue;
        }
        let after_set: Vec<usize> = {
            let mut v: Vec<usize> = outcome.packed_leader().filter(|j| !s1.contains(j)).collect();
            v.sort_unstable();
            v
        };
        let after_weight = after_set.iter().map(|&j| instance.leader[j]).sum();
        best = Some(ObjectiveSolveResult {
            value,
            before_set: s1,
            before_weight: w1,
            follower_fill: fill.get(w1),
            after_set,
            after_weight,
            residual: fill.residual(w1),
            assignment,
            cell_updates: reach.cell_updates(),
        });
        if value.eps_coeff >= 0 {
            break;
        }
    }
    Ok(best.expect("W1 = 0 is always a candidate"))
}

/// Prices realising the three-block structure (S₁, follower block, S₂).
///
/// S₁ items get `w + ε` so they precede every follower item. If leaving every
/// other leader item at price 0 already makes Greedy pack weight w(S₂) after
/// the follower block, that assignment is returned. Otherwise S₂ items get
/// price `ε`, which puts them ahead of the remaining zero-priced items.
pub fn reconstruct_objective(
    instance: &Instance,
    before_weight: i64,
    before_set: &[usize],
    after_set: &[usize],
) -> Result<WeightAssignment> {
    instance.require_model("objective", &[Model::ObjectiveControl])?;
    let fill = fill_table(instance);
    Ok(reconstruct_and_replay(instance, &fill, before_weight, before_set, after_set)?.0)
}

fn reconstruct_and_replay(
    instance: &Instance,
    fill: &FillTable,
    before_weight: i64,
    before_set: &[usize],
    after_set: &[usize],
) -> Result<(WeightAssignment, PackingOutcome)> {
    let n = instance.leader.len();
    let mut role = vec![None; n];
    for (set, placement) in [(before_set, Placement::Before), (after_set, Placement::After)] {
        for &j in set {
            if j >= n {
                return Err(Error::InvalidDecomposition(format!("no leader item {j}")));
            }
            if role[j].replace(placement).is_some() {
                return Err(Error::InvalidDecomposition(format!("leader item {j} appears twice")));
            }
        }
    }
    let w_before: i64 = before_set.iter().map(|&j| instance.leader[j]).sum();
    if w_before != before_weight {
        return Err(Error::InvalidDecomposition(format!(
            "S1 weighs {w_before}, expected {before_weight}"
        )));
    }
    if before_weight > instance.capacity {
        return Err(Error::InvalidDecomposition(format!(
            "S1 weighs {before_weight}, more than the capacity"
        )));
    }
    let residual = fill.residual(before_weight);
    let w_after: i64 = after_set.iter().map(|&j| instance.leader[j]).sum();
    if w_after > residual {
        return Err(Error::InvalidDecomposition(format!(
            "S2 weighs {w_after}, residual capacity is {residual}"
        )));
    }

    let price = |after_price: DualWeight| {
        WeightAssignment(
            role.iter()
                .zip(&instance.leader)
                .map(|(r, &w)| match r {
                    Some(Placement::Before) => DualWeight::new(w, 1),
                    Some(Placement::After) => after_price,
                    None => DualWeight::ZERO,
                })
                .collect(),
        )
    };
    let free = price(DualWeight::ZERO);
    let outcome = simulate(instance, &free)?;
    if outcome.leader_payoff.base == w_after {
        return Ok((free, outcome));
    }
    let priced = price(DualWeight::new(0, 1));
    let outcome = simulate(instance, &priced)?;
    Ok((priced, outcome))
}
