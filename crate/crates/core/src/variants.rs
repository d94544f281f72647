//! Closed forms: the simple constraint-pricing variant and the three LP
//! relaxations, where the follower may pack fractions of items.

use num_rational::Ratio;
use serde::Serialize;

use crate::dual::DualWeight;
use crate::error::{Error, Result};
use crate::greedy::visiting_order;
use crate::instance::{Instance, ItemId, Model, Side, WeightAssignment};

/// Which closed-form branch produced a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// Σ_L w > c: the leader fills the knapsack.
    CapacityLimited,
    /// Σ_L w ≤ c: every leader item is packed.
    WeightLimited,
    /// w(F) ≥ c: the follower fills the knapsack on its own.
    FollowerFills,
    /// Gain c − w(F), the positive part of c − w(F).
    FollowerResidual,
    /// Gain capped by the leader's total weight, Σ_L w < c − w(F).
    LeaderMassLimited,
    /// Gain c − w(F) approached by one item priced at a large M.
    LargePriceLimit,
    /// No leader items, nothing to gain.
    NoLeaderItems,
}

/// A finite witness for the LP constraint-control limit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LimitWitness {
    /// The large price M put on the chosen item.
    pub price: i64,
    pub chosen_item: usize,
    /// (M − w_j′)(c − w(F)) / M as numerator and denominator.
    pub gain_numer: i128,
    pub gain_denom: i128,
}

impl LimitWitness {
    pub fn gain(&self) -> Ratio<i128> {
        Ratio::new(self.gain_numer, self.gain_denom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedFormResult {
    pub value: DualWeight,
    pub assignment: WeightAssignment,
    pub branch: Branch,
    pub limit_witness: Option<LimitWitness>,
    /// Item visits; linear in n.
    pub ops: u64,
}

pub fn solve_constraint_simple(instance: &Instance) -> Result<ClosedFormResult> {
    instance.require_model("constraint-simple", &[Model::ConstraintSimple])?;
    instance.check()?;
    let c = instance.capacity;
    let mut used = 0i64;
    let mut discounted = 0i64;
    let mut cut = false;
    let mut ops = 0;
    let prices = instance
        .leader
        .iter()
        .map(|&w| {
            ops += 1;
            if cut {
                DualWeight::int(c + 1)
            } else if used + w <= c {
                used += w;
                discounted += 1;
                DualWeight::new(w, -1)
            } else {
                cut = true;
                let rest = c - used;
                used = c;
                // a zero price has no constraint-side efficiency
                DualWeight::int(if rest > 0 { rest } else { c + 1 })
            }
        })
        .collect();
    Ok(ClosedFormResult {
        value: DualWeight::new(used, -discounted),
        assignment: WeightAssignment(prices),
        branch: if cut {
            Branch::CapacityLimited
        } else {
            Branch::WeightLimited
        },
        limit_witness: None,
        ops,
    })
}

/// Multiplier used for the LP constraint-control price M = c · 10⁶.
pub const LIMIT_PRICE_FACTOR: i64 = 1_000_000;

/// LP relaxations. Values disregard ε, so `eps_coeff` is always 0.
pub fn solve_lp(instance: &Instance) -> Result<ClosedFormResult> {
    instance.require_model(
        "lp-objective, lp-constraint or lp-constraint-simple",
        &[Model::LpObjective, Model::LpConstraint, Model::LpConstraintSimple],
    )?;
    instance.check()?;
    let c = instance.capacity;
    let follower_total = instance.follower_total();
    let leader_total = instance.leader_total();
    let ops = instance.len() as u64;
    let gap = (c - follower_total).max(0);

    match instance.model {
        Model::LpObjective => {
            let value = gap.min(leader_total);
            let branch = if gap == 0 {
                Branch::FollowerFills
            } else if leader_total < gap {
                Branch::LeaderMassLimited
            } else {
                Branch::FollowerResidual
            };
            Ok(ClosedFormResult {
                value: DualWeight::int(value),
                assignment: WeightAssignment(vec![DualWeight::ZERO; instance.leader.len()]),
                branch,
                limit_witness: None,
                ops,
            })
        }
        Model::LpConstraint => {
            let lightest = (0..instance.leader.len()).min_by_key(|&j| (instance.leader[j], j));
            let (Some(chosen), true) = (lightest, gap > 0) else {
                return Ok(ClosedFormResult {
                    value: DualWeight::ZERO,
                    assignment: instance.identity_assignment(),
                    branch: if instance.leader.is_empty() {
                        Branch::NoLeaderItems
                    } else {
                        Branch::FollowerFills
                    },
                    limit_witness: None,
                    ops,
                });
            };
            let price = c
                .checked_mul(LIMIT_PRICE_FACTOR)
                .ok_or(Error::Overflow("LP price M = c * 10^6"))?;
            // every other item: efficiency w / (M w + 1) < w_j′ / M
            let prices = instance
                .leader
                .iter()
                .enumerate()
                .map(|(j, &w)| {
                    if j == chosen {
                        Ok(DualWeight::int(price))
                    } else {
                        price
                            .checked_mul(w)
                            .and_then(|p| p.checked_add(1))
                            .map(DualWeight::int)
                            .ok_or(Error::Overflow("LP price M * w + 1"))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            let gain = Ratio::new(
                (price as i128 - instance.leader[chosen] as i128) * gap as i128,
                price as i128,
            );
            Ok(ClosedFormResult {
                value: DualWeight::int(gap),
                assignment: WeightAssignment(prices),
                branch: Branch::LargePriceLimit,
                limit_witness: Some(LimitWitness {
                    price,
                    chosen_item: chosen,
                    gain_numer: *gain.numer(),
                    gain_denom: *gain.denom(),
                }),
                ops,
            })
        }
        _ => Ok(ClosedFormResult {
            value: DualWeight::int(c.min(leader_total)),
            assignment: WeightAssignment(instance.leader.iter().map(|&w| DualWeight::new(w, -1)).collect()),
            branch: if leader_total > c {
                Branch::CapacityLimited
            } else {
                Branch::WeightLimited
            },
            limit_witness: None,
            ops,
        }),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalOutcome {
    /// Packed fraction per item in visiting order; zero-fraction items omitted.
    pub fractions: Vec<(ItemId, Ratio<i128>)>,
    pub leader_payoff: Ratio<i128>,
}

/// Greedy with a fractional follower: items in the usual visiting order, each
/// taken whole if it fits and otherwise as the fraction that fills the
/// knapsack. Amounts ignore ε; the visiting order does not.
pub fn fractional_greedy(instance: &Instance, assignment: &WeightAssignment) -> Result<FractionalOutcome> {
    let order = visiting_order(instance, assignment)?;
    let zero = Ratio::from_integer(0i128);
    let one = Ratio::from_integer(1i128);
    let mut residual = Ratio::from_integer(instance.capacity as i128);
    let mut payoff = zero;
    let mut fractions = Vec::new();
    for (item, weight) in order {
        let w = weight.base as i128;
        let x = if w <= 0 || residual >= Ratio::from_integer(w) {
            one
        } else {
            residual / w
        };
        if x == zero {
            continue;
        }
        residual -= x * w;
        fractions.push((item, x));
        if item.side == Side::Leader {
            let original = instance.leader[item.index] as i128;
            let priced = assignment.get(item.index).base as i128;
            let coefficient = match instance.model {
                Model::ObjectiveControl | Model::LpObjective => original - priced,
                Model::ConstraintControl | Model::LpConstraint => priced - original,
                _ => priced,
            };
            payoff += x * coefficient;
        }
    }
    Ok(FractionalOutcome {
        fractions,
        leader_payoff: payoff,
    })
}
