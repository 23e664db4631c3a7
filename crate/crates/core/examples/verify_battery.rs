//! The property battery over the standard fixtures, with a small sample
//! size. `cargo run --release --example verify_battery -- 50` for more.

use avmod::verify::{run, Suite, SuiteConfig};

fn main() {
    let samples = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5);
    let cfg = SuiteConfig { samples, ..SuiteConfig::default() };
    let report = run(&Suite::ALL, &cfg);
    print!("{}", report.to_text());
    println!("{} records, all pass: {}", report.records.len(), report.all_pass());
}
