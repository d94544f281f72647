//! Partition reductions turned into instance generators.
//!
//! Each generator maps a Partition instance to a leader problem whose optimum
//! reveals the Partition answer, and records what it predicts in a
//! [`Provenance`] block. Small gadgets are solved by the oracle before they are
//! emitted; a gadget whose prediction the oracle refutes is not emitted.

use serde::{Deserialize, Serialize};

use crate::dual::DualWeight;
use crate::error::{Error, Result};
use crate::instance::{Instance, InstanceFile, Model};
use crate::oracle::{oracle_constraint, oracle_objective};
use crate::reach::best_subset_sum_dp;

pub const MAX_PARTITION_ITEMS: usize = 24;

/// Gadgets with at most this many Partition numbers are oracle-checked.
pub const SELF_CHECK_ITEMS: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionInstance {
    pub numbers: Vec<i64>,
    /// b, half the total.
    pub half_sum: i64,
    pub yes_certificate: Option<Vec<usize>>,
}

impl PartitionInstance {
    pub fn new(numbers: Vec<i64>) -> Result<Self> {
        if numbers.is_empty() {
            return Err(Error::InvalidPartition("no numbers".into()));
        }
        if let Some(&bad) = numbers.iter().find(|&&a| a <= 0) {
            return Err(Error::InvalidPartition(format!("{bad} is not positive")));
        }
        let total = numbers
            .iter()
            .try_fold(0i64, |s, &a| s.checked_add(a))
            .filter(|&s| s < 1 << 40)
            .ok_or(Error::Overflow("partition total"))?;
        if total % 2 != 0 {
            return Err(Error::OddTotalSum(total));
        }
        Ok(PartitionInstance {
            numbers,
            half_sum: total / 2,
            yes_certificate: None,
        })
    }

    /// Decides the instance and stores the certificate on a YES answer.
    pub fn certified(mut self) -> Result<Self> {
        self.yes_certificate = match decide_partition(&self)? {
            PartitionAnswer::Yes(cert) => Some(cert),
            PartitionAnswer::No => None,
        };
        Ok(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartitionAnswer {
    /// Indices of numbers summing to exactly b.
    Yes(Vec<usize>),
    No,
}

impl PartitionAnswer {
    pub fn is_yes(&self) -> bool {
        matches!(self, PartitionAnswer::Yes(_))
    }
}

pub fn decide_partition(p: &PartitionInstance) -> Result<PartitionAnswer> {
    if p.numbers.len() > MAX_PARTITION_ITEMS {
        return Err(Error::InvalidPartition(format!(
            "{} numbers, at most {MAX_PARTITION_ITEMS} supported",
            p.numbers.len()
        )));
    }
    let items: Vec<usize> = (0..p.numbers.len()).collect();
    let (best, subset) = best_subset_sum_dp(&p.numbers, &items, p.half_sum);
    Ok(if best == p.half_sum {
        PartitionAnswer::Yes(subset)
    } else {
        PartitionAnswer::No
    })
}

/// What a generated gadget is and what its optimum should be.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    /// 2 for the objective-control gadget, 4 for the constraint-control one.
    pub theorem: u8,
    pub partition: Vec<i64>,
    pub half_sum: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub big_m: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<i64>,
    /// Optimum on a YES instance.
    pub predicted_yes: i64,
    /// Upper bound on the optimum for a NO instance.
    pub predicted_no_at_most: i64,
    /// Partition answer, when the instance was small enough to decide.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition_yes: Option<bool>,
    /// The oracle optimum matched the prediction.
    pub verified: bool,
}

impl Provenance {
    /// The predicted optimum for the decided answer, if decided.
    pub fn predicted_optimum(&self) -> Option<i64> {
        self.partition_yes.map(|yes| {
            if yes {
                self.predicted_yes
            } else {
                self.predicted_no_at_most
            }
        })
    }

    fn agrees(&self, actual: i64, yes: bool) -> bool {
        if yes {
            actual == self.predicted_yes
        } else if self.theorem == 2 {
            actual <= self.predicted_no_at_most
        } else {
            actual == self.predicted_no_at_most
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GadgetBundle {
    pub instance: Instance,
    pub provenance: Provenance,
}

impl GadgetBundle {
    pub fn to_file(&self) -> InstanceFile {
        InstanceFile {
            instance: self.instance.clone(),
            provenance: Some(self.provenance.clone()),
        }
    }
}

fn decided(p: &PartitionInstance) -> Option<bool> {
    if p.numbers.len() > MAX_PARTITION_ITEMS {
        return None;
    }
    decide_partition(p).ok().map(|a| a.is_yes())
}

// Solves small gadgets with `optimum` and refuses ones the oracle refutes.
fn self_check(p: &PartitionInstance, provenance: &mut Provenance, optimum: impl FnOnce() -> Result<i64>) -> Result<()> {
    provenance.partition_yes = decided(p);
    let Some(yes) = provenance.partition_yes else {
        return Ok(());
    };
    if p.numbers.len() > SELF_CHECK_ITEMS {
        return Ok(());
    }
    let actual = optimum()?;
    if !provenance.agrees(actual, yes) {
        return Err(Error::GadgetUnconfirmed {
            predicted: provenance.predicted_optimum().unwrap_or(0),
            actual,
        });
    }
    provenance.verified = true;
    Ok(())
}

/// Default big item for the objective gadget: 10·b + 1.
pub fn default_big_m(p: &PartitionInstance) -> i64 {
    10 * p.half_sum + 1
}

/// Objective-control gadget: L = {a₁, …, a_m, M}, F = {M + 1}, c = M + b.
///
/// On a YES instance the leader blocks the follower item with a subset of
/// weight b and then packs M for free. On a NO instance it earns at most b − 1.
pub fn gen_objective_gadget(p: &PartitionInstance, big_m: Option<i64>) -> Result<GadgetBundle> {
    let m = big_m.unwrap_or_else(|| default_big_m(p));
    if m <= 2 * p.half_sum {
        return Err(Error::MTooSmall {
            m,
            half_sum: p.half_sum,
        });
    }
    let mut leader = p.numbers.clone();
    leader.push(m);
    let capacity = m.checked_add(p.half_sum).ok_or(Error::Overflow("M + b"))?;
    let instance = Instance::new(Model::ObjectiveControl, capacity, leader, vec![m + 1])?;
    let mut provenance = Provenance {
        theorem: 2,
        partition: p.numbers.clone(),
        half_sum: p.half_sum,
        big_m: Some(m),
        k: None,
        scale: None,
        predicted_yes: m,
        predicted_no_at_most: p.half_sum - 1,
        partition_yes: None,
        verified: false,
    };
    self_check(p, &mut provenance, || Ok(oracle_objective(&instance)?.value))?;
    Ok(GadgetBundle { instance, provenance })
}

/// The constraint gadget before scaling, with its ε item kept symbolic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicConstraintGadget {
    pub leader: Vec<DualWeight>,
    pub follower: Vec<i64>,
    pub capacity: i64,
    pub k: u32,
}

/// L = {2a₁, …, 2a_m, ε, 2^k − 2b}, F = {2, 4, …, 2^(k−1), 3, 2^k + 2},
/// c = 2^(k+1) + 3, with k the least exponent such that 2^k > Σ 2a_i + ε.
pub fn constraint_gadget_symbolic(p: &PartitionInstance) -> Result<SymbolicConstraintGadget> {
    let doubled = 4 * p.half_sum;
    // 2^k > 4b + ε  <=>  2^k > 4b
    let k = (0u32..62)
        .find(|&j| (1i64 << j) > doubled)
        .ok_or(Error::Overflow("gadget exponent"))?;
    if k + 2 >= 62 {
        return Err(Error::Overflow("gadget exponent"));
    }
    let m = p.numbers.len() as f64;
    let a_max = *p.numbers.iter().max().expect("non-empty") as f64;
    debug_assert!(k as f64 <= (2.0 * m * a_max + 2.0).log2().ceil() + 1.0);

    let pow = |e: u32| 1i64 << e;
    let mut leader: Vec<DualWeight> = p.numbers.iter().map(|&a| DualWeight::int(2 * a)).collect();
    leader.push(DualWeight::new(0, 1));
    leader.push(DualWeight::int(pow(k) - 2 * p.half_sum));
    let mut follower: Vec<i64> = (1..k).map(pow).collect();
    follower.push(3);
    follower.push(pow(k) + 2);
    Ok(SymbolicConstraintGadget {
        leader,
        follower,
        capacity: pow(k + 1) + 3,
        k,
    })
}

/// Constraint-control gadget scaled by `scale`; the ε item becomes weight 1.
///
/// Predicts an optimum of `scale − 1` on YES instances and 0 on NO instances.
pub fn gen_constraint_gadget(p: &PartitionInstance, scale: i64) -> Result<GadgetBundle> {
    if scale < 2 {
        return Err(Error::ScaleTooSmall(scale));
    }
    let g = constraint_gadget_symbolic(p)?;
    let up = |x: i64| x.checked_mul(scale).ok_or(Error::Overflow("gadget scaling"));
    let leader = g
        .leader
        .iter()
        .map(|w| if w.is_eps_free() { up(w.base) } else { Ok(1) })
        .collect::<Result<Vec<_>>>()?;
    let follower = g.follower.iter().map(|&v| up(v)).collect::<Result<Vec<_>>>()?;
    let instance = Instance::new(Model::ConstraintControl, up(g.capacity)?, leader, follower)?;
    let mut provenance = Provenance {
        theorem: 4,
        partition: p.numbers.clone(),
        half_sum: p.half_sum,
        big_m: None,
        k: Some(g.k),
        scale: Some(scale),
        predicted_yes: scale - 1,
        predicted_no_at_most: 0,
        partition_yes: None,
        verified: false,
    };
    self_check(p, &mut provenance, || Ok(oracle_constraint(&instance)?.value))?;
    Ok(GadgetBundle { instance, provenance })
}
