use stackelberg_core::{simulate, DualWeight, Instance, PackingOutcome, Side, WeightAssignment};

use crate::{read_instance, read_text, Failure, VerifyArgs};

/// Parses `base,eps_coeff`; a Unicode minus sign is accepted.
pub fn parse_claim(text: &str) -> Result<DualWeight, Failure> {
    let text = text.replace('\u{2212}', "-");
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [base, eps] = parts.as_slice() else {
        return Err(Failure::invalid(format!("claim {text:?} is not `base,eps_coeff`")));
    };
    let parse = |s: &str| {
        s.parse::<i64>()
            .map_err(|e| Failure::invalid(format!("claim component {s:?}: {e}")))
    };
    Ok(DualWeight::new(parse(base)?, parse(eps)?))
}

pub fn render_trace(instance: &Instance, assignment: &WeightAssignment, out: &PackingOutcome) -> String {
    let mut lines = vec![format!(
        "{:>4}  {:<5} {:>10} {:>10}  {:<6} {:>10}",
        "rank", "item", "weight", "price", "packed", "residual"
    )];
    for step in &out.trace {
        let weight = instance.weight(step.item);
        let price = match step.item.side {
            Side::Leader => assignment.get(step.item.index).to_string(),
            Side::Follower => weight.to_string(),
        };
        lines.push(format!(
            "{:>4}  {:<5} {:>10} {:>10}  {:<6} {:>10}",
            step.rank,
            step.item.to_string(),
            weight,
            price,
            if step.packed { "yes" } else { "no" },
            step.residual_after.to_string()
        ));
    }
    lines.push(format!("leader payoff: {}", out.leader_payoff));
    lines.join("\n")
}

pub fn run(args: &VerifyArgs) -> Result<u8, Failure> {
    let file = read_instance(&args.file, args.model)?;
    let instance = file.instance;
    let text = read_text(&args.assignment)?;
    let assignment = WeightAssignment::from_json(&text)
        .map_err(|e| Failure::invalid(format!("{}: {e}", args.assignment.display())))?;
    let claim = args.claim.as_deref().map(parse_claim).transpose()?;
    let out = simulate(&instance, &assignment)?;
    println!("{}", render_trace(&instance, &assignment, &out));
    Ok(match claim {
        Some(c) if c == out.leader_payoff => {
            println!("claim {c}: confirmed");
            0
        }
        Some(c) => {
            println!("claim {c}: rejected, replay gives {}", out.leader_payoff);
            1
        }
        None => 0,
    })
}
