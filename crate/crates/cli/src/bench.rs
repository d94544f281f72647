use serde::Serialize;
use stackelberg_core::{random_instance, solve_constraint_batched, solve_constraint_naive, Model, RandomSpec};

use crate::{BenchArgs, Failure};

#[derive(Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub naive_cell_updates: u64,
    pub batched_cell_updates: u64,
    /// naive / batched; 1 when both counts are zero.
    pub ratio: f64,
}

pub fn parse_sizes(text: &str) -> Result<Vec<usize>, Failure> {
    let sizes: Vec<usize> = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| Failure::invalid(format!("size {t:?}: {e}")))
        })
        .collect::<Result<_, _>>()?;
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(Failure::invalid("sizes must be positive"));
    }
    Ok(sizes)
}

pub fn rows(args: &BenchArgs) -> Result<Vec<BenchRow>, Failure> {
    if args.model != Model::ConstraintControl {
        return Err(Failure::incompatible(format!(
            "bench compares the constraint solvers; got the {} model",
            args.model
        )));
    }
    parse_sizes(&args.sizes)?
        .into_iter()
        .map(|n| {
            let spec = RandomSpec {
                leader_items: n,
                follower_items: args.follower_items,
                max_weight: args.max_weight,
                capacity: args.capacity,
            };
            let instance = random_instance(Model::ConstraintControl, spec, args.seed.wrapping_add(n as u64))?;
            let naive = solve_constraint_naive(&instance)?.cell_updates;
            let batched = solve_constraint_batched(&instance)?.cell_updates;
            let ratio = if batched == 0 {
                1.0
            } else {
                naive as f64 / batched as f64
            };
            Ok(BenchRow {
                n,
                naive_cell_updates: naive,
                batched_cell_updates: batched,
                ratio,
            })
        })
        .collect()
}

pub fn run(args: &BenchArgs) -> Result<(), Failure> {
    let rows = rows(args)?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&rows).expect("rows serialize"));
        return Ok(());
    }
    println!("{:>6} {:>14} {:>14} {:>8}", "n", "naive", "batched", "ratio");
    for r in &rows {
        println!(
            "{:>6} {:>14} {:>14} {:>8.3}",
            r.n, r.naive_cell_updates, r.batched_cell_updates, r.ratio
        );
    }
    Ok(())
}
