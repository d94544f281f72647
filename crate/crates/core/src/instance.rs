//! Instances, item identities, weight assignments and the instance file format.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dual::DualWeight;
use crate::error::{Error, Result};
use crate::hardness::Provenance;

/// Which leader problem an instance poses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    /// Leader rewrites its items' profits in the follower objective.
    #[serde(rename = "objective")]
    ObjectiveControl,
    /// Leader rewrites its items' weights in the capacity constraint.
    #[serde(rename = "constraint")]
    ConstraintControl,
    /// Constraint control where the leader earns the rewritten weights themselves.
    #[serde(rename = "constraint-simple")]
    ConstraintSimple,
    LpObjective,
    LpConstraint,
    LpConstraintSimple,
}

impl Model {
    pub const ALL: [Model; 6] = [
        Model::ObjectiveControl,
        Model::ConstraintControl,
        Model::ConstraintSimple,
        Model::LpObjective,
        Model::LpConstraint,
        Model::LpConstraintSimple,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Model::ObjectiveControl => "objective",
            Model::ConstraintControl => "constraint",
            Model::ConstraintSimple => "constraint-simple",
            Model::LpObjective => "lp-objective",
            Model::LpConstraint => "lp-constraint",
            Model::LpConstraintSimple => "lp-constraint-simple",
        }
    }

    /// True when the leader's prices sit in the follower's capacity constraint.
    pub fn prices_constraint(self) -> bool {
        !matches!(self, Model::ObjectiveControl | Model::LpObjective)
    }

    pub fn is_lp(self) -> bool {
        matches!(
            self,
            Model::LpObjective | Model::LpConstraint | Model::LpConstraintSimple
        )
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Model::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown model {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Leader,
    Follower,
}

/// Positional item identity. Equal weights on the same side are still distinct items.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ItemId {
    pub side: Side,
    pub index: usize,
}

impl ItemId {
    pub const fn leader(index: usize) -> Self {
        ItemId {
            side: Side::Leader,
            index,
        }
    }

    pub const fn follower(index: usize) -> Self {
        ItemId {
            side: Side::Follower,
            index,
        }
    }
}

impl fmt::Display for ItemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::Leader => write!(f, "L{}", self.index),
            Side::Follower => write!(f, "F{}", self.index),
        }
    }
}

// Sums of all weights plus the capacity stay below this, leaving room for the
// `c̄ + 1` style prices and scaled gadgets without overflowing i64.
const MAGNITUDE_LIMIT: i128 = 1 << 61;

/// Serializes in the instance file layout; parse through [`Instance::from_json`]
/// so the result is validated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Instance {
    pub capacity: i64,
    pub leader: Vec<i64>,
    pub follower: Vec<i64>,
    pub model: Model,
}

impl Instance {
    /// Builds and validates an instance.
    pub fn new(model: Model, capacity: i64, leader: Vec<i64>, follower: Vec<i64>) -> Result<Self> {
        Instance {
            capacity,
            leader,
            follower,
            model,
        }
        .validate()
    }

    /// Returns the instance unchanged if it is well formed.
    pub fn validate(self) -> Result<Self> {
        self.check()?;
        Ok(self)
    }

    pub fn check(&self) -> Result<()> {
        if self.capacity <= 0 {
            return Err(Error::ZeroCapacity(self.capacity));
        }
        if self.leader.is_empty() && self.follower.is_empty() {
            return Err(Error::EmptyInstance);
        }
        for (field, weights) in [("leader", &self.leader), ("follower", &self.follower)] {
            if let Some((index, &value)) = weights.iter().enumerate().find(|(_, &w)| w <= 0) {
                return Err(Error::ZeroOrNegativeWeight { field, index, value });
            }
        }
        let total: i128 = self
            .leader
            .iter()
            .chain(&self.follower)
            .map(|&w| w as i128)
            .sum::<i128>()
            + self.capacity as i128;
        if total >= MAGNITUDE_LIMIT {
            return Err(Error::Overflow("total weight plus capacity exceeds 2^61"));
        }
        Ok(())
    }

    pub fn with_model(&self, model: Model) -> Instance {
        Instance { model, ..self.clone() }
    }

    /// Total item count n = |L| + |F|.
    pub fn len(&self) -> usize {
        self.leader.len() + self.follower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn weight(&self, item: ItemId) -> i64 {
        match item.side {
            Side::Leader => self.leader[item.index],
            Side::Follower => self.follower[item.index],
        }
    }

    pub fn leader_total(&self) -> i64 {
        self.leader.iter().sum()
    }

    pub fn follower_total(&self) -> i64 {
        self.follower.iter().sum()
    }

    /// The leader leaves every weight as it is.
    pub fn identity_assignment(&self) -> WeightAssignment {
        WeightAssignment(self.leader.iter().map(|&w| DualWeight::int(w)).collect())
    }

    pub(crate) fn capacity_usize(&self) -> usize {
        self.capacity as usize
    }

    pub(crate) fn require_model(&self, expected: &'static str, ok: &[Model]) -> Result<()> {
        if ok.contains(&self.model) {
            Ok(())
        } else {
            Err(Error::WrongModel {
                expected,
                found: self.model,
            })
        }
    }

    pub fn from_json(text: &str) -> Result<Instance> {
        Ok(InstanceFile::from_json(text)?.instance)
    }

    pub fn to_json(&self) -> String {
        InstanceFile {
            instance: self.clone(),
            provenance: None,
        }
        .to_json()
    }
}

/// The leader's chosen weight for each leader item, by leader index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightAssignment(pub Vec<DualWeight>);

impl WeightAssignment {
    pub fn new(weights: Vec<DualWeight>) -> Result<Self> {
        let a = WeightAssignment(weights);
        a.check()?;
        Ok(a)
    }

    pub fn check(&self) -> Result<()> {
        match self.0.iter().position(|w| !w.is_nonnegative()) {
            Some(index) => Err(Error::NegativeAssignedWeight {
                index,
                value: self.0[index].to_string(),
            }),
            None => Ok(()),
        }
    }

    pub fn get(&self, index: usize) -> DualWeight {
        self.0[index]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[DualWeight] {
        &self.0
    }

    /// `{"assignment": [{"base": .., "eps_coeff": ..}, ..]}`
    pub fn from_json(text: &str) -> Result<WeightAssignment> {
        let file: AssignmentFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        WeightAssignment::new(file.assignment)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&AssignmentFile {
            assignment: self.0.clone(),
        })
        .expect("assignment serializes")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AssignmentFile {
    assignment: Vec<DualWeight>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstanceFile {
    model: Model,
    capacity: i64,
    leader: Vec<i64>,
    follower: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<Provenance>,
}

/// An instance as stored on disk, with the optional gadget provenance block.
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceFile {
    pub instance: Instance,
    pub provenance: Option<Provenance>,
}

impl InstanceFile {
    pub fn from_json(text: &str) -> Result<InstanceFile> {
        let raw: RawInstanceFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let instance = Instance {
            capacity: raw.capacity,
            leader: raw.leader,
            follower: raw.follower,
            model: raw.model,
        }
        .validate()?;
        Ok(InstanceFile {
            instance,
            provenance: raw.provenance,
        })
    }

    pub fn to_json(&self) -> String {
        let raw = RawInstanceFile {
            model: self.instance.model,
            capacity: self.instance.capacity,
            leader: self.instance.leader.clone(),
            follower: self.instance.follower.clone(),
            provenance: self.provenance.clone(),
        };
        serde_json::to_string_pretty(&raw).expect("instance serializes")
    }
}
