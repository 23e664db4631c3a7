//! Problem files from code: build one, then run an action and a suite on it.

use avmod::cli::{cmd_act, cmd_verify, Operator, Problem, ProblemFile};
use avmod::verify::Suite;

const PROBLEM: &str = r#"{
  "variety": { "variables": ["x", "y"], "generators": ["x^2 + y^2 - 1"] },
  "points": { "north": ["0", "1"] },
  "modules": [
    { "id": "T", "chart": "2*y", "u": { "kind": "one_dim", "alpha": "-1" } }
  ],
  "seed": 5,
  "samples": 10
}"#;

fn main() -> avmod::Result<()> {
    let p = Problem::build(ProblemFile::from_json(PROBLEM)?)?;
    let cfg = p.config();
    let act = cmd_act(&p, "T", "x", &Operator::Field("-y, x".into()), None, cfg.seed)?;
    print!("{}", act.to_text());
    print!("{}", cmd_verify(&p, &[Suite::Gauge, Suite::Pairing], &cfg).to_text());
    Ok(())
}
