//! Exact replay of the follower's Greedy packing.
//!
//! Items are visited by non-increasing efficiency. Ties are broken by the
//! item's weight in the follower objective (larger first), then follower items
//! before leader items, then lower index. Efficiencies are compared by
//! cross-multiplying dual numbers, so an ε perturbation always separates two
//! otherwise equal items.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::dual::DualWeight;
use crate::error::{Error, Result};
use crate::instance::{Instance, ItemId, Model, Side, WeightAssignment};

/// Efficiency as an exact fraction `numerator / denominator`, denominator > 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EfficiencyKey {
    pub numerator: DualWeight,
    pub denominator: DualWeight,
}

impl EfficiencyKey {
    pub fn new(numerator: DualWeight, denominator: DualWeight) -> Self {
        debug_assert!(denominator > DualWeight::ZERO);
        EfficiencyKey { numerator, denominator }
    }

    /// Follower items and untouched items: w / w.
    pub fn unit(weight: i64) -> Self {
        EfficiencyKey::new(DualWeight::int(weight), DualWeight::int(weight))
    }

    pub fn compare(&self, other: &EfficiencyKey) -> Ordering {
        let lhs = self.numerator.wide_mul(other.denominator);
        let rhs = other.numerator.wide_mul(self.denominator);
        lhs.cmp(&rhs)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub item: ItemId,
    /// Position in the Greedy visiting order, starting at 0.
    pub rank: usize,
    pub packed: bool,
    pub residual_after: DualWeight,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackingOutcome {
    /// Packed items in the order Greedy took them.
    pub packed: Vec<ItemId>,
    pub trace: Vec<TraceStep>,
    /// Total constraint-side weight of the packed items.
    pub consumed: DualWeight,
    pub leader_payoff: DualWeight,
}

impl PackingOutcome {
    pub fn packed_leader(&self) -> impl Iterator<Item = usize> + '_ {
        self.packed
            .iter()
            .filter(|id| id.side == Side::Leader)
            .map(|id| id.index)
    }

    pub fn packed_follower(&self) -> impl Iterator<Item = usize> + '_ {
        self.packed
            .iter()
            .filter(|id| id.side == Side::Follower)
            .map(|id| id.index)
    }

    pub fn is_packed(&self, item: ItemId) -> bool {
        self.packed.contains(&item)
    }
}

struct Candidate {
    item: ItemId,
    efficiency: EfficiencyKey,
    objective_weight: DualWeight,
    constraint_weight: DualWeight,
}

// Decreasing efficiency, then decreasing objective weight, followers first,
// lower index first.
fn visit_order(a: &Candidate, b: &Candidate) -> Ordering {
    b.efficiency
        .compare(&a.efficiency)
        .then_with(|| b.objective_weight.cmp(&a.objective_weight))
        .then_with(|| b.item.side.cmp(&a.item.side))
        .then_with(|| a.item.index.cmp(&b.item.index))
}

fn candidates(instance: &Instance, assignment: &WeightAssignment) -> Result<Vec<Candidate>> {
    let mut out = Vec::with_capacity(instance.len());
    for (index, &w) in instance.follower.iter().enumerate() {
        out.push(Candidate {
            item: ItemId::follower(index),
            efficiency: EfficiencyKey::unit(w),
            objective_weight: DualWeight::int(w),
            constraint_weight: DualWeight::int(w),
        });
    }
    for (index, &w) in instance.leader.iter().enumerate() {
        let priced = assignment.get(index);
        let original = DualWeight::int(w);
        let candidate = if instance.model.prices_constraint() {
            if priced == DualWeight::ZERO {
                return Err(Error::ZeroConstraintWeightDivision { index });
            }
            Candidate {
                item: ItemId::leader(index),
                efficiency: EfficiencyKey::new(original, priced),
                objective_weight: original,
                constraint_weight: priced,
            }
        } else {
            Candidate {
                item: ItemId::leader(index),
                efficiency: EfficiencyKey::new(priced, original),
                objective_weight: priced,
                constraint_weight: original,
            }
        };
        out.push(candidate);
    }
    Ok(out)
}

/// Items in Greedy's visiting order as (item, constraint-side weight).
///
/// Works for every model, including the LP relaxations, since only the
/// efficiencies and tie-breaks are involved.
pub fn visiting_order(instance: &Instance, assignment: &WeightAssignment) -> Result<Vec<(ItemId, DualWeight)>> {
    if assignment.len() != instance.leader.len() {
        return Err(Error::MissingAssignment {
            expected: instance.leader.len(),
            found: assignment.len(),
        });
    }
    assignment.check()?;
    Ok(ordered(instance, assignment)?
        .into_iter()
        .map(|c| (c.item, c.constraint_weight))
        .collect())
}

fn ordered(instance: &Instance, assignment: &WeightAssignment) -> Result<Vec<Candidate>> {
    let mut items = candidates(instance, assignment)?;
    items.sort_by(visit_order);
    Ok(items)
}

/// Greedy's response to the leader's prices and the leader payoff it yields.
///
/// Supports the three discrete models. The payoff is `Σ (w − w̃)` under
/// objective control, `Σ (w̃ − w)` under constraint control and `Σ w̃` for the
/// simple constraint variant, summed over packed leader items.
pub fn simulate(instance: &Instance, assignment: &WeightAssignment) -> Result<PackingOutcome> {
    instance.require_model(
        "objective, constraint or constraint-simple",
        &[
            Model::ObjectiveControl,
            Model::ConstraintControl,
            Model::ConstraintSimple,
        ],
    )?;
    if assignment.len() != instance.leader.len() {
        return Err(Error::MissingAssignment {
            expected: instance.leader.len(),
            found: assignment.len(),
        });
    }
    assignment.check()?;

    let items = ordered(instance, assignment)?;

    let capacity = DualWeight::int(instance.capacity);
    let mut residual = capacity;
    let mut payoff = DualWeight::ZERO;
    let mut packed = Vec::new();
    let mut trace = Vec::with_capacity(items.len());
    for (rank, c) in items.iter().enumerate() {
        let fits = c.constraint_weight <= residual;
        if fits {
            residual = residual
                .checked_sub(c.constraint_weight)
                .ok_or(Error::Overflow("residual capacity"))?;
            packed.push(c.item);
            if c.item.side == Side::Leader {
                let w = DualWeight::int(instance.leader[c.item.index]);
                let priced = assignment.get(c.item.index);
                let gain = match instance.model {
                    Model::ObjectiveControl => w.checked_sub(priced),
                    Model::ConstraintControl => priced.checked_sub(w),
                    _ => Some(priced),
                };
                payoff = gain
                    .and_then(|g| payoff.checked_add(g))
                    .ok_or(Error::Overflow("leader payoff"))?;
            }
        }
        trace.push(TraceStep {
            item: c.item,
            rank,
            packed: fits,
            residual_after: residual,
        });
    }

    Ok(PackingOutcome {
        packed,
        trace,
        consumed: capacity - residual,
        leader_payoff: payoff,
    })
}

/// F(W₁) for every W₁ in `0..=c`: what Greedy packs from the follower's own
/// items into the residual capacity `c − W₁`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FillTable {
    fill: Vec<i64>,
}

impl FillTable {
    pub fn get(&self, before: i64) -> i64 {
        self.fill[before as usize]
    }

    /// Residual capacity `c̄ = c − W₁ − F(W₁)` left after the follower block.
    pub fn residual(&self, before: i64) -> i64 {
        let capacity = (self.fill.len() - 1) as i64;
        capacity - before - self.get(before)
    }

    pub fn capacity(&self) -> i64 {
        (self.fill.len() - 1) as i64
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.fill
    }
}

/// Follower weights in Greedy order.
pub fn follower_order(instance: &Instance) -> Vec<i64> {
    let mut sorted = instance.follower.clone();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    sorted
}

/// Pack-if-fits over weights already in Greedy order.
pub fn greedy_fill(sorted_desc: &[i64], capacity: i64) -> i64 {
    let mut left = capacity;
    for &w in sorted_desc {
        if w <= left {
            left -= w;
        }
    }
    capacity - left
}

pub fn fill_table(instance: &Instance) -> FillTable {
    let sorted = follower_order(instance);
    let c = instance.capacity;
    let fill = (0..=c).map(|before| greedy_fill(&sorted, c - before)).collect();
    FillTable { fill }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn worked_example() -> Instance {
        Instance::new(Model::ObjectiveControl, 20, vec![9, 8, 5, 3], vec![12, 11, 10, 4]).unwrap()
    }

    fn assign(ws: &[(i64, i64)]) -> WeightAssignment {
        WeightAssignment::new(ws.iter().map(|&(b, e)| DualWeight::new(b, e)).collect()).unwrap()
    }

    #[test]
    fn suboptimal_pricing_replay() {
        // leader order: 9, 8, 5, 3
        let out = simulate(&worked_example(), &assign(&[(9, 1), (8, 1), (0, 0), (0, 0)])).unwrap();
        assert_eq!(out.leader_payoff, DualWeight::new(3, -2));
        // 8 has the larger efficiency 1 + ε/8 > 1 + ε/9
        assert_eq!(
            out.packed,
            vec![ItemId::leader(1), ItemId::leader(0), ItemId::leader(3)]
        );
        assert_eq!(out.consumed, DualWeight::int(20));
    }

    #[test]
    fn optimal_pricing_replay() {
        let out = simulate(&worked_example(), &assign(&[(0, 0), (8, 1), (0, 0), (3, 1)])).unwrap();
        assert_eq!(out.leader_payoff, DualWeight::new(5, -2));
        assert_eq!(
            out.packed,
            vec![
                ItemId::leader(3),
                ItemId::leader(1),
                ItemId::follower(3),
                ItemId::leader(2)
            ]
        );
    }

    #[test]
    fn eps_priced_after_block_costs_eps() {
        // same structure with 5 priced at ε: one more ε of cost
        let out = simulate(&worked_example(), &assign(&[(0, 0), (8, 1), (0, 1), (3, 1)])).unwrap();
        assert_eq!(out.leader_payoff, DualWeight::new(5, -3));
    }

    #[test]
    fn no_leader_items() {
        let inst = Instance::new(Model::ObjectiveControl, 15, vec![], vec![4, 9, 7]).unwrap();
        let out = simulate(&inst, &inst.identity_assignment()).unwrap();
        assert_eq!(out.packed, vec![ItemId::follower(1), ItemId::follower(0)]);
        assert_eq!(out.leader_payoff, DualWeight::ZERO);
    }

    #[test]
    fn errors() {
        let inst = Instance::new(Model::ConstraintControl, 10, vec![3, 4], vec![5]).unwrap();
        assert_eq!(
            simulate(&inst, &assign(&[(3, 0), (0, 0)])),
            Err(Error::ZeroConstraintWeightDivision { index: 1 })
        );
        assert_eq!(
            simulate(&inst, &assign(&[(3, 0)])),
            Err(Error::MissingAssignment { expected: 2, found: 1 })
        );
        let lp = inst.with_model(Model::LpConstraint);
        assert!(matches!(
            simulate(&lp, &inst.identity_assignment()),
            Err(Error::WrongModel { .. })
        ));
    }

    #[test]
    fn slightly_above_one_beats_followers() {
        let up = EfficiencyKey::new(DualWeight::new(7, 1), DualWeight::int(7));
        assert_eq!(up.compare(&EfficiencyKey::unit(100)), Ordering::Greater);
        let down = EfficiencyKey::new(DualWeight::int(7), DualWeight::new(7, -1));
        assert_eq!(down.compare(&EfficiencyKey::unit(1)), Ordering::Greater);
        let inflated = EfficiencyKey::new(DualWeight::int(3), DualWeight::int(5));
        assert_eq!(inflated.compare(&EfficiencyKey::unit(1)), Ordering::Less);
    }

    #[test]
    fn constraint_replay() {
        // S1 = ∅, follower packs 5, item 3 inflated to the residual 5
        let inst = Instance::new(Model::ConstraintControl, 10, vec![3, 4], vec![5]).unwrap();
        let out = simulate(&inst, &assign(&[(5, 0), (6, 0)])).unwrap();
        assert_eq!(out.leader_payoff, DualWeight::int(2));
        assert_eq!(out.packed, vec![ItemId::follower(0), ItemId::leader(0)]);
        // identity: no alteration, no gain
        let out = simulate(&inst, &inst.identity_assignment()).unwrap();
        assert_eq!(out.leader_payoff, DualWeight::ZERO);
    }

    #[test]
    fn fill_table_examples() {
        let t = fill_table(&worked_example());
        assert_eq!(t.get(11), 4);
        assert_eq!(t.get(17), 0);
        assert_eq!(t.get(20), 0);
        assert_eq!(t.residual(11), 5);
        assert_eq!(t.as_slice().len(), 21);
    }

    fn instance_strategy() -> impl Strategy<Value = Instance> {
        (
            1i64..60,
            prop::collection::vec(1i64..25, 0..6),
            prop::collection::vec(1i64..25, 1..7),
        )
            .prop_map(|(c, l, f)| Instance::new(Model::ObjectiveControl, c, l, f).unwrap())
    }

    fn random_assignment(n: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
        prop::collection::vec((0i64..30, -1i64..2), n)
    }

    proptest! {
        #[test]
        fn fill_bounds(inst in instance_strategy()) {
            let t = fill_table(&inst);
            for w1 in 0..=inst.capacity {
                prop_assert!(t.get(w1) >= 0);
                prop_assert!(w1 + t.get(w1) <= inst.capacity);
            }
            prop_assert_eq!(t.get(inst.capacity), 0);
        }

        #[test]
        fn fill_matches_padded_simulation(inst in instance_strategy(), pad in 0i64..60) {
            let pad = pad.min(inst.capacity);
            let table = fill_table(&inst);
            // a single leader item of weight `pad`, pushed in front of every follower item
            let padded = Instance::new(Model::ObjectiveControl, inst.capacity, vec![pad.max(1)], inst.follower.clone()).unwrap();
            let out = simulate(&padded, &assign(&[(pad.max(1), 1)])).unwrap();
            let follower: i64 = out.packed_follower().map(|i| inst.follower[i]).sum();
            let before = if pad >= 1 { pad } else { 1 };
            prop_assert_eq!(follower, table.get(before));
        }

        #[test]
        fn replay_is_deterministic_and_monotone(
            inst in instance_strategy(),
            raw in random_assignment(6),
        ) {
            let ws: Vec<_> = raw.iter().take(inst.leader.len())
                .map(|&(b, e)| if b == 0 && e < 0 { DualWeight::ZERO } else { DualWeight::new(b, e) })
                .collect();
            let a = WeightAssignment::new(ws).unwrap();
            let x = simulate(&inst, &a).unwrap();
            let y = simulate(&inst, &a).unwrap();
            prop_assert_eq!(&x, &y);
            let mut prev = DualWeight::int(inst.capacity);
            for step in &x.trace {
                prop_assert!(step.residual_after <= prev);
                prop_assert!(step.residual_after >= DualWeight::ZERO);
                prev = step.residual_after;
            }
            prop_assert!(x.consumed <= DualWeight::int(inst.capacity));
            prop_assert_eq!(x.trace.len(), inst.len());
        }
    }
}
