use std::fs;

use stackelberg_core::{
    gen_constraint_gadget, gen_objective_gadget, random_instance, InstanceFile, Model, PartitionInstance, RandomSpec,
};

use crate::{read_text, Failure, GenerateArgs};

/// Integers separated by commas or whitespace, with optional brackets.
pub fn parse_numbers(text: &str) -> Result<Vec<i64>, Failure> {
    text.split(|c: char| c == ',' || c.is_whitespace() || "[]{}".contains(c))
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<i64>()
                .map_err(|e| Failure::invalid(format!("partition entry {t:?}: {e}")))
        })
        .collect()
}

fn positive(value: i64, what: &str) -> Result<usize, Failure> {
    usize::try_from(value).map_err(|_| Failure::invalid(format!("{what} must be non-negative, got {value}")))
}

pub fn generate(args: &GenerateArgs) -> Result<InstanceFile, Failure> {
    if let Some(r) = &args.random {
        let spec = RandomSpec {
            leader_items: positive(r[0], "leader item count")?,
            follower_items: positive(r[1], "follower item count")?,
            max_weight: r[2],
            capacity: r[3],
        };
        let seed = args.seed.ok_or_else(|| Failure::invalid("--random needs --seed"))?;
        let model = args.model.unwrap_or(Model::ObjectiveControl);
        return Ok(InstanceFile {
            instance: random_instance(model, spec, seed)?,
            provenance: None,
        });
    }
    let path = args
        .from_partition
        .as_ref()
        .ok_or_else(|| Failure::invalid("one of --random or --from-partition is required"))?;
    let partition = PartitionInstance::new(parse_numbers(&read_text(path)?)?)?;
    let bundle = match args.theorem {
        Some(2) => gen_objective_gadget(&partition, args.big_m)?,
        Some(4) => gen_constraint_gadget(&partition, args.scale)?,
        other => return Err(Failure::invalid(format!("--theorem must be 2 or 4, got {other:?}"))),
    };
    Ok(bundle.to_file())
}

pub fn run(args: &GenerateArgs) -> Result<(), Failure> {
    let text = generate(args)?.to_json();
    match &args.output {
        Some(path) => fs::write(path, text + "\n").map_err(|e| Failure::invalid(format!("{}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}
