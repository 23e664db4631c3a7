//! Acceptance gate: one PASS/FAIL line per criterion, with the sample
//! counts and runtime bounds fixed here rather than taken from defaults.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use avmod::verify::{run_suite, Record, Suite, SuiteConfig};

struct Criterion {
    id: u32,
    title: &'static str,
    limit: Duration,
    run: fn() -> Result<usize, String>,
}

fn cfg(samples: usize, max_degree: u32, depth: u32) -> SuiteConfig {
    SuiteConfig { seed: 20_240_611, samples, max_degree, depth, budget: 10_000 }
}

/// All records must pass and be backed by at least `min` samples each.
fn require(records: &[Record], names: &[&str], min: usize) -> Result<usize, String> {
    if let Some(r) = records.iter().find(|r| !r.passed()) {
        return Err(format!("{}: {}", r.name, r.witness.clone().unwrap_or_default()));
    }
    for n in names {
        let hits: Vec<&Record> = records.iter().filter(|r| r.name.contains(n)).collect();
        if hits.is_empty() {
            return Err(format!("no record matching `{n}`"));
        }
        if let Some(r) = hits.iter().find(|r| r.samples < min) {
            return Err(format!("{} ran only {} samples (< {min})", r.name, r.samples));
        }
    }
    Ok(records.len())
}

fn sphere_structure() -> Result<usize, String> {
    let recs = run_suite(Suite::Structure, &cfg(1, 1, 1));
    require(&recs, &["jacobian", "atlas", "relation"], 1)?;
    let rel = recs.iter().find(|r| r.name.ends_with("relation")).unwrap();
    if rel.anchor != "x₁Δ₂₃+x₂Δ₃₁+x₃Δ₁₂=0" {
        return Err(format!("anchor {}", rel.anchor));
    }
    Ok(recs.len())
}

fn lie() -> Result<usize, String> {
    let recs = run_suite(Suite::Lie, &cfg(200, 3, 1));
    for v in ["sphere", "circle", "a1", "a2"] {
        for law in ["jacobi", "closure", "leibniz"] {
            require(&recs, &[&format!("lie.{v}.{law}")], 200)?;
        }
    }
    Ok(recs.len())
}

fn gauge() -> Result<usize, String> {
    let recs = run_suite(Suite::Gauge, &cfg(100, 4, 1));
    for m in ["a1", "sphere_f"] {
        for a in ["0", "1", "1/2", "-1"] {
            require(&recs, &[&format!("gauge.{m}[{a}].axioms")], 1)?;
            require(&recs, &[&format!("gauge.{m}[{a}].lie_action"), &format!("gauge.{m}[{a}].compatibility")], 100)?;
        }
    }
    require(&recs, &["chart_free"], 100)
}

fn circle() -> Result<usize, String> {
    let recs = run_suite(Suite::Circle, &cfg(1, 1, 1));
    for a in ["0", "1", "1/2"] {
        require(&recs, &[&format!("circle.f[{a}].action")], 121)?;
        require(&recs, &[&format!("circle.f[{a}].dual")], 1)?;
    }
    Ok(recs.len())
}

fn rudakov() -> Result<usize, String> {
    let recs = run_suite(Suite::Rudakov, &cfg(100, 3, 4));
    for m in ["a1[level2]", "sphere[natural]"] {
        let p = |s: &str| format!("rudakov.{m}.{s}");
        require(&recs, &[&p("base_lowering"), &p("level_drop_m"), &p("level_drop_d"), &p("nilpotent_m"), &p("nilpotent_d")], 1)?;
        require(&recs, &[&p("base_kernel"), &p("t_derivative"), &p("lie_action"), &p("compatibility"), &p("truncation")], 100)?;
    }
    Ok(recs.len())
}

fn reduction() -> Result<usize, String> {
    let recs = run_suite(Suite::Reduction, &cfg(50, 1, 3));
    require(&recs, &["reduction.a1", "reduction.sphere"], 50)
}

fn density() -> Result<usize, String> {
    let recs = run_suite(Suite::Density, &cfg(100, 2, 1));
    require(&recs, &["closed_form"], 100)?;
    require(&recs, &["sphere_f[0].sweep", "sphere_f[1].sweep", "a1[natural].sweep"], 20)
}

fn pairing() -> Result<usize, String> {
    let recs = run_suite(Suite::Pairing, &cfg(100, 3, 1));
    require(&recs, &["adjoint_function", "adjoint_field", "well_defined"], 100)?;
    require(&recs, &["pairing.a1", "pairing.sphere_f"], 1)
}

fn jets() -> Result<usize, String> {
    let recs = run_suite(Suite::Jets, &cfg(1, 1, 1));
    require(&recs, &["newton_z", "truncated_lift"], 1)
}

fn negative() -> Result<usize, String> {
    let recs = run_suite(Suite::Negative, &cfg(1, 1, 1));
    require(&recs, &["corrupted_gauge_field", "corrupted_rho", "perturbed_circle_dual"], 1)?;
    for r in &recs {
        match &r.witness {
            Some(w) if !w.is_empty() => println!("    {}: {w}", r.name),
            _ => return Err(format!("{} has no witness", r.name)),
        }
    }
    Ok(recs.len())
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, title: "sphere structure", limit: Duration::from_secs(1), run: sphere_structure },
        Criterion { id: 2, title: "Lie suite", limit: Duration::from_secs(30), run: lie },
        Criterion { id: 3, title: "gauge suite", limit: Duration::from_secs(120), run: gauge },
        Criterion { id: 4, title: "circle family", limit: Duration::from_secs(5), run: circle },
        Criterion { id: 5, title: "Rudakov suite", limit: Duration::from_secs(180), run: rudakov },
        Criterion { id: 6, title: "reduction probe", limit: Duration::from_secs(60), run: reduction },
        Criterion { id: 7, title: "density probe", limit: Duration::from_secs(300), run: density },
        Criterion { id: 8, title: "pairing suite", limit: Duration::from_secs(180), run: pairing },
        Criterion { id: 9, title: "jets", limit: Duration::from_secs(10), run: jets },
        // No runtime bound is pinned for the controls; a minute is generous.
        Criterion { id: 10, title: "negative controls", limit: Duration::from_secs(60), run: negative },
    ];
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for c in criteria.iter().filter(|c| filter.is_empty() || filter.contains(&c.id)) {
        let start = Instant::now();
        let res = (c.run)();
        let took = start.elapsed();
        let verdict = match res {
            Ok(_) if took > c.limit => Err(format!("took {took:.2?}, limit {:?}", c.limit)),
            other => other,
        };
        match verdict {
            Ok(n) => println!("PASS criterion {:>2} {:<18} {n} records in {took:.2?} (limit {:?})", c.id, c.title, c.limit),
            Err(w) => {
                failed += 1;
                println!("FAIL criterion {:>2} {:<18} {w}", c.id, c.title);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
