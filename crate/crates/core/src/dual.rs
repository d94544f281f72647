//! Exact numbers of the form `base + eps_coeff·ε` for a positive infinitesimal ε.
//!
//! Every "slightly above" or "slightly below" price the leader sets is one of
//! these. Values are ordered lexicographically: the integer part decides, and
//! the ε coefficient only breaks ties. ε is never given a numeric value.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

/// `base + eps_coeff·ε`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DualWeight {
    pub base: i64,
    pub eps_coeff: i64,
}

impl DualWeight {
    pub const ZERO: DualWeight = DualWeight { base: 0, eps_coeff: 0 };

    pub const fn new(base: i64, eps_coeff: i64) -> Self {
        DualWeight { base, eps_coeff }
    }

    /// An ε-free value.
    pub const fn int(base: i64) -> Self {
        DualWeight { base, eps_coeff: 0 }
    }

    pub const fn is_eps_free(self) -> bool {
        self.eps_coeff == 0
    }

    pub fn is_nonnegative(self) -> bool {
        self >= DualWeight::ZERO
    }

    pub fn checked_add(self, rhs: DualWeight) -> Option<DualWeight> {
        Some(DualWeight {
            base: self.base.checked_add(rhs.base)?,
            eps_coeff: self.eps_coeff.checked_add(rhs.eps_coeff)?,
        })
    }

    pub fn checked_sub(self, rhs: DualWeight) -> Option<DualWeight> {
        Some(DualWeight {
            base: self.base.checked_sub(rhs.base)?,
            eps_coeff: self.eps_coeff.checked_sub(rhs.eps_coeff)?,
        })
    }

    /// Scales both components by a plain integer.
    pub fn checked_scale(self, k: i64) -> Option<DualWeight> {
        Some(DualWeight {
            base: self.base.checked_mul(k)?,
            eps_coeff: self.eps_coeff.checked_mul(k)?,
        })
    }

    /// Product with the ε² term dropped, widened so it cannot overflow.
    ///
    /// Exact whenever one factor is ε-free, which holds for every efficiency
    /// cross-multiplication the follower performs.
    pub fn wide_mul(self, rhs: DualWeight) -> WideDual {
        let (a, b) = (self.base as i128, self.eps_coeff as i128);
        let (c, d) = (rhs.base as i128, rhs.eps_coeff as i128);
        WideDual {
            base: a * c,
            eps_coeff: a * d + b * c,
        }
    }
}

/// Result of [`DualWeight::wide_mul`]; only used for comparisons.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct WideDual {
    pub base: i128,
    pub eps_coeff: i128,
}

impl Ord for DualWeight {
    fn cmp(&self, other: &Self) -> Ordering {
        self.base.cmp(&other.base).then(self.eps_coeff.cmp(&other.eps_coeff))
    }
}

impl PartialOrd for DualWeight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Three-way lexicographic comparison.
pub fn dual_compare(a: DualWeight, b: DualWeight) -> Ordering {
    a.cmp(&b)
}

// The operator impls panic on overflow. Callers handling user-supplied
// magnitudes go through the `checked_*` methods instead.
impl Add for DualWeight {
    type Output = DualWeight;
    fn add(self, rhs: DualWeight) -> DualWeight {
        self.checked_add(rhs).expect("DualWeight addition overflow")
    }
}

impl Sub for DualWeight {
    type Output = DualWeight;
    fn sub(self, rhs: DualWeight) -> DualWeight {
        self.checked_sub(rhs).expect("DualWeight subtraction overflow")
    }
}

impl Neg for DualWeight {
    type Output = DualWeight;
    fn neg(self) -> DualWeight {
        DualWeight::ZERO - self
    }
}

impl From<i64> for DualWeight {
    fn from(base: i64) -> Self {
        DualWeight::int(base)
    }
}

impl fmt::Display for DualWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.eps_coeff {
            0 => write!(f, "{}", self.base),
            1 => write!(f, "{}+ε", self.base),
            -1 => write!(f, "{}-ε", self.base),
            e if e > 0 => write!(f, "{}+{}ε", self.base, e),
            e => write!(f, "{}-{}ε", self.base, -e),
        }
    }
}
