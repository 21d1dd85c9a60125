//! End-to-end tests of the command-line interface: output schemas, exit
//! codes, and scalar round-trips.

use std::process::Command;

use padicjc::prime::Prime;
use padicjc::scalar::PadicScalar;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_padicjc"))
}

fn run_json(args: &[&str]) -> (serde_json::Value, i32) {
    let output = bin().args(args).output().expect("binary runs");
    let stdout = String::from_utf8(output.stdout).expect("utf8");
    let value = serde_json::from_str(&stdout)
        .unwrap_or_else(|e| panic!("bad json from {args:?}: {e}\n{stdout}"));
    (value, output.status.code().unwrap_or(-1))
}

#[test]
fn eval_example() {
    let (value, code) = run_json(&["--prime", "3", "eval", "--point", "0,0,1,0,0"]);
    assert_eq!(code, 0);
    assert_eq!(value["j"], "1");
    assert_eq!(value["h"], "0");
}

#[test]
fn image_necessary_condition() {
    let (value, code) = run_json(&["--prime", "2", "image", "--j", "6", "--h", "1/2"]);
    assert_eq!(code, 0);
    assert_eq!(value["verdict"], "NotInImage");
    assert_eq!(value["reason"], "ord(j)>=1 requires ord(h)>=0");
}

#[test]
fn image_with_witness() {
    let (value, code) = run_json(&["--prime", "2", "image", "--j", "22", "--h", "1"]);
    assert_eq!(code, 0);
    assert_eq!(value["verdict"], "InImage");
    let witness = value["witness"].as_array().expect("witness tuple");
    assert_eq!(witness.len(), 5);
    // every printed scalar re-parses
    let prime = Prime::new(2).unwrap();
    for coord in witness {
        PadicScalar::parse(prime, coord.as_str().unwrap()).expect("round-trip");
    }
}

#[test]
fn orbit_count_example() {
    let (value, code) = run_json(&["--prime", "5", "orbits", "--k", "1", "--r", "0"]);
    assert_eq!(code, 0);
    assert_eq!(value["count"], 4);
}

#[test]
fn orbit_enumeration_matches_count() {
    let (value, code) = run_json(&[
        "--prime",
        "3",
        "orbits",
        "--k",
        "1",
        "--r",
        "0",
        "--enumerate",
    ]);
    assert_eq!(code, 0);
    assert_eq!(value["count"], 4);
    assert_eq!(value["labels"].as_array().unwrap().len(), 4);
}

#[test]
fn classify_round_trips_scalars() {
    // (au, av, -a^2, u, v) for a = 3/5, (u, v) = (4/3, 4/5)
    let (value, code) = run_json(&[
        "--prime",
        "7",
        "classify",
        "--point",
        "4/5,12/25,-9/25,4/3,4/5",
    ]);
    assert_eq!(code, 0);
    assert_eq!(value["classification"], "rank1");
    let prime = Prime::new(7).unwrap();
    let a = PadicScalar::parse(prime, value["a"].as_str().unwrap()).unwrap();
    assert_eq!(a.known_value(), padicjc::scalar::rat_frac(3, 5));
}

#[test]
fn usage_error_exits_one() {
    let output = bin().args(["no-such-command"]).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn domain_error_exits_two() {
    // an eval point that is not on the sphere
    let output = bin()
        .args(["--prime", "3", "eval", "--point", "1,1,1,0,0"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let value: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(value["error"]["operation"], "eval");
}

#[test]
fn precision_env_override() {
    let output = bin()
        .env("PADICJC_PRECISION", "4")
        .args(["--prime", "3", "eval", "--point", "0,0,1,0,0"])
        .output()
        .unwrap();
    // precision below 8 violates the run-config invariant
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn viz_writes_deterministic_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path_a = dir.path().join("a.csv");
    let path_b = dir.path().join("b.csv");
    for path in [&path_a, &path_b] {
        let status = bin()
            .args([
                "--prime",
                "2",
                "viz",
                "--dataset",
                "fiber",
                "--j",
                "22",
                "--h",
                "1",
                "--mod-exp",
                "5",
                "--output",
                path.to_str().unwrap(),
            ])
            .status()
            .unwrap();
        assert!(status.success());
    }
    let a = std::fs::read(&path_a).unwrap();
    let b = std::fs::read(&path_b).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn truncated_scalar_syntax_with_semicolons() {
    // 2-adic truncated coordinates separated by ';'
    let (value, code) = run_json(&[
        "--prime",
        "2",
        "eval",
        "--point",
        "0;0;1;0:1,0,1;0",
    ]);
    assert_eq!(code, 0);
    // u = 5 + O(8): J = u^2/2 + 1 known to some precision
    let prime = Prime::new(2).unwrap();
    let j = PadicScalar::parse(prime, value["j"].as_str().unwrap()).unwrap();
    assert!(!j.is_exact());
}
