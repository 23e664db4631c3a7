use std::io::Write;
use std::process::{Command, Output};

fn avmod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_avmod")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("JSON report")
}

#[test]
fn variety_reports_the_atlas() {
    let o = avmod(&["variety", "--example", "sphere", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["data"]["variety"]["charts"].as_array().unwrap().len(), 3);
    assert_eq!(r["data"]["variety"]["dimension"], 2);
    let o = avmod(&["variety", "--example", "line", "--json"]);
    assert_eq!(json(&o)["data"]["variety"]["charts"].as_array().unwrap().len(), 1);
}

#[test]
fn act_prints_exact_results() {
    let o = avmod(&["act", "--example", "line", "--module", "F", "--element", "t^2", "--chart-field", "t"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("result: (5/2*t^2) ⊗ u1"), "{}", stdout(&o));
    let o = avmod(&["act", "--example", "line", "--module", "F", "--rudakov", "origin", "--element", "y1^2*u1", "--function", "t", "--json"]);
    assert_eq!(json(&o)["data"]["result"], "-2*y1 ⊗ u1");
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "--example", "sphere", "--suite", "gauge", "--samples", "4", "--seed", "11", "--json"];
    let (a, b) = (avmod(&args), avmod(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let r = json(&a);
    assert_eq!(r["seed"], 11);
    assert!(r["records"].as_array().unwrap().iter().all(|x| x["status"] == "pass" && x["anchor"].is_string()));
}

#[test]
fn pairing_on_the_line() {
    let o = avmod(&["verify", "--example", "line", "--suite", "pairing", "--samples", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS  pairing.F@origin.adjoint_field"));
    let o = avmod(&["pair", "--example", "line", "--module", "F", "--point", "origin", "--element", "t^2+1", "--word", "d:1; d:t", "--phi", "2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["data"]["value"], "0");
}

#[test]
fn sweep_and_probe() {
    let o = avmod(&["sweep", "--example", "sphere", "--module", "F", "--point", "north", "--element", "y^2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["data"]["outcome"]["status"], "reached");
    // a tiny budget is inconclusive, not a failure
    let o = avmod(&["sweep", "--example", "sphere", "--module", "F", "--point", "north", "--element", "y^2", "--budget", "1", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["records"][0]["status"], "inconclusive");
    let o = avmod(&["probe", "--example", "sphere", "--module", "N", "--point", "north", "--element", "y1^2*y2*u2 - y2*u1", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["data"]["probe"]["reached"], true);
}

#[test]
fn failures_and_input_errors_have_distinct_codes() {
    let dir = std::env::temp_dir().join(format!("avmod-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    // B = (0, x) on the plane: dB_2/dt_1 = 1 breaks flatness
    let bad = dir.join("bad.json");
    writeln!(
        std::fs::File::create(&bad).unwrap(),
        r#"{{"variety": {{"variables": ["x", "y"]}}, "modules": [{{"id": "M", "alpha": "1", "b": [[["0"]], [["x"]]]}}]}}"#
    )
    .unwrap();
    let o = avmod(&["verify", "--file", bad.to_str().unwrap(), "--suite", "gauge"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("axiom (iii)"));
    let empty = dir.join("empty.json");
    std::fs::write(&empty, r#"{"variety": {"variables": ["x"], "generators": ["x", "x - 1"]}}"#).unwrap();
    let o = avmod(&["variety", "--file", empty.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("empty"));
    // a singular point makes the variety report fail
    let cusp = dir.join("cusp.json");
    std::fs::write(&cusp, r#"{"variety": {"variables": ["x", "y"], "generators": ["y^2 - x^3"]}, "points": {"o": ["0", "0"]}}"#).unwrap();
    let o = avmod(&["variety", "--file", cusp.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert_eq!(avmod(&["act", "--example", "nowhere", "--module", "F", "--element", "1", "--function", "1"]).status.code(), Some(2));
    assert_eq!(avmod(&["verify", "--suite", "bogus"]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}
