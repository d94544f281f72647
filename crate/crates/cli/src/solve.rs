use std::time::Instant;

use serde::Serialize;
use stackelberg_core::oracle::{oracle_constraint_with, oracle_objective_with};
use stackelberg_core::variants::LimitWitness;
use stackelberg_core::{
    fill_table, fractional_greedy, reconstruct_constraint, reconstruct_objective, simulate,
    solve_constraint_batched_with, solve_constraint_naive_with, solve_constraint_simple, solve_lp, solve_objective,
    Branch, ConstraintOptions, ConstraintSolveResult, DualWeight, Instance, Model, OracleOptions, WeightAssignment,
    Witness,
};

use crate::{read_instance, Algorithm, Failure, SolveArgs};

#[derive(Debug, Serialize)]
pub struct SolveReport {
    pub input: Instance,
    pub model: Model,
    pub algorithm: &'static str,
    pub value: DualWeight,
    pub solution: Solution,
    pub assignment: Vec<DualWeight>,
    /// The replayed payoff of `assignment` equals `value`.
    pub replay_confirmed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<Branch>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit_witness: Option<LimitWitness>,
    pub stats: Stats,
}

#[derive(Debug, Default, Serialize)]
pub struct Solution {
    pub before_set: Vec<usize>,
    /// Follower indices packed during the replay.
    pub follower_packed: Vec<usize>,
    pub follower_fill: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub after_set: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chosen_item: Option<usize>,
    pub residual: i64,
}

#[derive(Debug, Default, Serialize)]
pub struct Stats {
    pub elapsed_ms: f64,
    pub cell_updates: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub enumerated: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub operations: Option<u64>,
}

fn default_algorithm(model: Model) -> Algorithm {
    match model {
        Model::ObjectiveControl | Model::ConstraintControl => Algorithm::Dp,
        _ => Algorithm::ClosedForm,
    }
}

fn check_compatible(model: Model, algorithm: Algorithm) -> Result<(), Failure> {
    let ok = match algorithm {
        Algorithm::Dp | Algorithm::Oracle => matches!(model, Model::ObjectiveControl | Model::ConstraintControl),
        Algorithm::DpBatched => model == Model::ConstraintControl,
        Algorithm::ClosedForm => !matches!(model, Model::ObjectiveControl | Model::ConstraintControl),
    };
    if ok {
        Ok(())
    } else {
        Err(Failure::incompatible(format!(
            "algorithm {} does not apply to the {model} model",
            algorithm.name()
        )))
    }
}

struct Raw {
    value: DualWeight,
    assignment: WeightAssignment,
    solution: Solution,
    branch: Option<Branch>,
    limit_witness: Option<LimitWitness>,
    stats: Stats,
}

fn from_constraint(r: ConstraintSolveResult) -> Raw {
    Raw {
        value: r.value,
        assignment: r.assignment,
        solution: Solution {
            before_set: r.before_set,
            follower_fill: r.follower_fill,
            chosen_item: r.chosen_item,
            residual: r.residual,
            ..Solution::default()
        },
        branch: None,
        limit_witness: None,
        stats: Stats {
            cell_updates: r.cell_updates,
            ..Stats::default()
        },
    }
}

fn dispatch(instance: &Instance, algorithm: Algorithm, threads: usize) -> Result<Raw, Failure> {
    let constraint = ConstraintOptions { threads };
    let oracle = OracleOptions {
        threads,
        ..OracleOptions::default()
    };
    Ok(match (algorithm, instance.model) {
        (Algorithm::Dp, Model::ObjectiveControl) => {
            let r = solve_objective(instance)?;
            Raw {
                value: r.value,
                assignment: r.assignment,
                solution: Solution {
                    before_set: r.before_set,
                    follower_fill: r.follower_fill,
                    after_set: Some(r.after_set),
                    residual: r.residual,
                    ..Solution::default()
                },
                branch: None,
                limit_witness: None,
                stats: Stats {
                    cell_updates: r.cell_updates,
                    ..Stats::default()
                },
            }
        }
        (Algorithm::Dp, _) => from_constraint(solve_constraint_naive_with(instance, &constraint)?),
        (Algorithm::DpBatched, _) => from_constraint(solve_constraint_batched_with(instance, &constraint)?),
        (Algorithm::Oracle, Model::ObjectiveControl) => {
            let r = oracle_objective_with(instance, &oracle)?;
            let Witness::Objective { before_set, after_set } = r.witness else {
                unreachable!("objective oracle returns an objective witness")
            };
            let before_weight = before_set.iter().map(|&j| instance.leader[j]).sum();
            let assignment = reconstruct_objective(instance, before_weight, &before_set, &after_set)?;
            let replay = simulate(instance, &assignment)?;
            let fill = fill_table(instance);
            Raw {
                value: replay.leader_payoff,
                assignment,
                solution: Solution {
                    before_set,
                    follower_fill: fill.get(before_weight),
                    after_set: Some(after_set),
                    residual: fill.residual(before_weight),
                    ..Solution::default()
                },
                branch: None,
                limit_witness: None,
                stats: Stats {
                    enumerated: Some(r.enumerated_count),
                    ..Stats::default()
                },
            }
        }
        (Algorithm::Oracle, _) => {
            let r = oracle_constraint_with(instance, &oracle)?;
            let Witness::Constraint {
                before_set,
                chosen_item,
            } = r.witness
            else {
                unreachable!("constraint oracle returns a constraint witness")
            };
            let before_weight = before_set.iter().map(|&j| instance.leader[j]).sum();
            let fill = fill_table(instance);
            let residual = fill.residual(before_weight);
            let (value, assignment) = match chosen_item {
                Some(j) => {
                    let a = reconstruct_constraint(instance, &before_set, j, residual)?;
                    (simulate(instance, &a)?.leader_payoff, a)
                }
                None => (DualWeight::ZERO, instance.identity_assignment()),
            };
            Raw {
                value,
                assignment,
                solution: Solution {
                    before_set,
                    follower_fill: fill.get(before_weight),
                    chosen_item,
                    residual,
                    ..Solution::default()
                },
                branch: None,
                limit_witness: None,
                stats: Stats {
                    enumerated: Some(r.enumerated_count),
                    ..Stats::default()
                },
            }
        }
        (Algorithm::ClosedForm, model) => {
            let r = if model == Model::ConstraintSimple {
                solve_constraint_simple(instance)?
            } else {
                solve_lp(instance)?
            };
            Raw {
                value: r.value,
                assignment: r.assignment,
                solution: Solution::default(),
                branch: Some(r.branch),
                limit_witness: r.limit_witness,
                stats: Stats {
                    operations: Some(r.ops),
                    ..Stats::default()
                },
            }
        }
    })
}

/// Replays the assignment, fills in the follower side of the solution and
/// reports whether the replay reproduces the value.
fn confirm(instance: &Instance, raw: &mut Raw) -> Result<bool, Failure> {
    if instance.model.is_lp() {
        let out = fractional_greedy(instance, &raw.assignment)?;
        return Ok(out.leader_payoff.is_integer()
            && raw.value.is_eps_free()
            && *out.leader_payoff.numer() == raw.value.base as i128);
    }
    let out = simulate(instance, &raw.assignment)?;
    let s = &mut raw.solution;
    s.follower_packed = out.packed_follower().collect();
    s.follower_packed.sort_unstable();
    if instance.model == Model::ConstraintSimple {
        s.before_set = out.packed_leader().collect();
        s.before_set.sort_unstable();
        s.follower_fill = s.follower_packed.iter().map(|&i| instance.follower[i]).sum();
        s.residual = instance.capacity - out.consumed.base;
    }
    Ok(out.leader_payoff == raw.value)
}

pub fn build_report(instance: Instance, algorithm: Option<Algorithm>, threads: usize) -> Result<SolveReport, Failure> {
    let algorithm = algorithm.unwrap_or_else(|| default_algorithm(instance.model));
    check_compatible(instance.model, algorithm)?;
    let started = Instant::now();
    let mut raw = dispatch(&instance, algorithm, threads)?;
    raw.stats.elapsed_ms = started.elapsed().as_secs_f64() * 1e3;
    let replay_confirmed = confirm(&instance, &mut raw)?;
    Ok(SolveReport {
        model: instance.model,
        algorithm: algorithm.name(),
        value: raw.value,
        solution: raw.solution,
        assignment: raw.assignment.0,
        replay_confirmed,
        branch: raw.branch,
        limit_witness: raw.limit_witness,
        stats: raw.stats,
        input: instance,
    })
}

pub fn run(args: &SolveArgs) -> Result<(), Failure> {
    let file = read_instance(&args.file, args.model)?;
    let report = build_report(file.instance, args.algorithm, args.threads)?;
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    Ok(())
}
