//! Optimal leader strategies for a Stackelberg subset sum game.
//!
//! A leader prices its own items, then a follower packs a knapsack of
//! capacity `c` with the Greedy rule: visit items by efficiency and take each
//! one that still fits. The leader earns from its items that end up packed.
//! Prices are dual numbers `a + bε`, so ties can be broken by an
//! infinitesimal.
//!
//! Two exact solvers cover the discrete models:
//!
//! * [`solve_objective`] when the leader rewrites profits,
//! * [`solve_constraint_naive`] and [`solve_constraint_batched`] when it
//!   rewrites weights.
//!
//! [`solve_constraint_simple`] and [`solve_lp`] handle the closed-form
//! variants, and [`oracle`] holds a brute-force reference for small inputs.

pub mod constraint;
pub mod dual;
pub mod error;
pub mod greedy;
pub mod hardness;
pub mod instance;
pub mod objective;
pub mod oracle;
pub mod random;
pub mod reach;
pub mod variants;

pub use constraint::{
    reconstruct_constraint, solve_constraint_batched, solve_constraint_batched_with, solve_constraint_naive,
    solve_constraint_naive_with, ConstraintOptions, ConstraintSolveResult, PhasePlan,
};
pub use dual::{dual_compare, DualWeight};
pub use error::{Error, Result};
pub use greedy::{fill_table, simulate, visiting_order, FillTable, PackingOutcome, TraceStep};
pub use hardness::{
    decide_partition, gen_constraint_gadget, gen_objective_gadget, GadgetBundle, PartitionAnswer, PartitionInstance,
    Provenance,
};
pub use instance::{Instance, InstanceFile, ItemId, Model, Side, WeightAssignment};
pub use objective::{
    reconstruct_objective, solve_objective, solve_objective_with, ObjectiveOptions, ObjectiveSolveResult,
};
pub use oracle::{oracle_constraint, oracle_objective, OracleOptions, OracleResult, Witness};
pub use random::{random_instance, RandomSpec};
pub use variants::{fractional_greedy, solve_constraint_simple, solve_lp, Branch, ClosedFormResult};
