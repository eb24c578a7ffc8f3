use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn qstat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qstat"))
        .args(args)
        .env_remove("QSTAT_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn universe(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("universes")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn scratch(name: &str, body: &str) -> String {
    let path = std::env::temp_dir().join(format!("qstat-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn count_prints_eight() {
    let o = qstat(&["count", "--model", "mb", "-N", "3", "-n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "8\n");
    let o = qstat(&["count", "--model", "be", "-N", "3", "-n", "2"]);
    assert_eq!(stdout(&o), "4\n");
    let o = qstat(&["count", "--model", "fd", "-N", "3", "-n", "2"]);
    assert_eq!(stdout(&o), "0\n");
}

#[test]
fn identity_csv() {
    let o = qstat(&["identity", "-N", "3", "-n", "2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "occupancy,weight");
    let weights: Vec<&str> = lines[1..5]
        .iter()
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    assert_eq!(weights, ["1", "3", "3", "1"]);
    assert_eq!(lines[5], "total,8");
    assert_eq!(lines.len(), 6);
}

#[test]
fn check_small_universe() {
    let o = qstat(&["check", &universe("canonical_small.json")]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = stdout(&o);
    assert!(text.contains("0 failures"));
    assert!(text
        .lines()
        .any(|l| l.starts_with("Q17") && l.contains("not-checkable")));
    assert!(!text.contains(" fails "));
}

#[test]
fn check_json_shape() {
    let o = qstat(&[
        "check",
        "--universe",
        &universe("canonical_mixed.json"),
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let axioms = v["axioms"].as_array().unwrap();
    assert_eq!(axioms.len(), 30);
    for a in axioms {
        assert!(a["axiom"].is_string());
        assert!(a["verdict"].is_string());
        assert!(a["cost"].is_u64());
        assert!(a.get("witness").is_some());
    }
    assert_eq!(v["failures"], 0);
}

#[test]
fn demo_figures() {
    let o = qstat(&["demo", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows = |f: &str| -> Vec<String> {
        let mut r: Vec<String> = text
            .lines()
            .skip(1)
            .filter(|l| l.starts_with(&format!("{f},")))
            .map(|l| l.rsplit(',').next().unwrap().to_string())
            .collect();
        r.sort();
        r
    };
    assert_eq!(rows("1").len(), 4);
    assert_eq!(rows("2").len(), 8);
    assert_eq!(rows("3").len(), 8);
    assert_ne!(rows("2"), rows("3"));
    let three = rows("3");
    let count = |v: &str| three.iter().filter(|r| *r == v).count();
    assert_eq!(
        [count("3|0"), count("2|1"), count("1|2"), count("0|3")],
        [1, 3, 3, 1]
    );

    let table = stdout(&qstat(&["demo"]));
    assert_eq!(table.lines().filter(|l| l.starts_with('|')).count(), 20);
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["demo"],
        vec![
            "enumerate",
            "--model",
            "mb",
            "-N",
            "4",
            "-n",
            "3",
            "--format",
            "json",
        ],
        vec!["check", "--format", "csv"],
    ] {
        let mut args: Vec<String> = args.into_iter().map(String::from).collect();
        if args[0] == "check" {
            args.insert(1, universe("canonical_small.json"));
        }
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(qstat(&args).stdout, qstat(&args).stdout);
    }
}

#[test]
fn json_big_integers_round_trip() {
    let o = qstat(&["identity", "-N", "41", "-n", "3", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["lhs"], "36472996377170786403");
    assert_eq!(v["lhs"], v["rhs"]);
    let o = qstat(&["count", "-N", "10", "-n", "2", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["count"].as_u64(), Some(1024));
}

#[test]
fn exit_codes() {
    let o = qstat(&["count", "--frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(String::from_utf8_lossy(&o.stderr).lines().count(), 1);
    assert_eq!(qstat(&["nonsense"]).status.code(), Some(2));
    assert_eq!(
        qstat(&["check", "/nonexistent/universe.json"])
            .status
            .code(),
        Some(2)
    );
    let bad = scratch("bad.json", "{\"kinds\": 3}");
    assert_eq!(qstat(&["check", &bad]).status.code(), Some(2));

    let o = qstat(&["most-probable", "--model", "be", "-N", "3", "-n", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("equiweighted"));

    assert_eq!(
        qstat(&["enumerate", "-N", "12", "-n", "4"]).status.code(),
        Some(3)
    );
    let o = Command::new(env!("CARGO_BIN_EXE_qstat"))
        .args(["enumerate", "-N", "3", "-n", "2"])
        .env("QSTAT_CAP", "5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    let o = qstat(&["enumerate", "-N", "3", "-n", "2", "--cap", "5", "--force"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 8);
}

#[test]
fn level_scheme_commands() {
    let two = scratch(
        "two.json",
        r#"{"levels": [{"energy": 0, "g": 1}, {"energy": 1, "g": 1}], "N": 10000, "E": 3000, "mode": "exact"}"#,
    );
    let o = qstat(&["asymptotic", "--levels", &two, "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let occ: Vec<f64> = v["occupancies"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert!((occ[0] - 7000.0).abs() < 1e-6 && (occ[1] - 3000.0).abs() < 1e-6);

    let three = scratch(
        "three.json",
        r#"{"levels": [{"energy": 0, "g": 1}, {"energy": 1, "g": 1}, {"energy": 2, "g": 1}], "N": 100, "E": 80}"#,
    );
    let o = qstat(&["most-probable", "--levels", &three, "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "occupancy,weight\n44|32|24,215043782349144421754358966934853886283005000\n"
    );

    let o = qstat(&["asymptotic", "--levels", &three, "-N", "1"]);
    assert_eq!(o.status.code(), Some(1));
}
