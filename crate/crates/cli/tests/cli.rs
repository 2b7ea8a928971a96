use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn exe() -> Command {
    Command::new(env!("CARGO_BIN_EXE_laxalg"))
}

fn bundled(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(format!("{name}.json"))
}

fn scratch(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("laxalg-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn run(args: &[&str]) -> Output {
    exe().args(args).output().unwrap()
}

fn run_text(tag: &str, config: &str, args: &[&str]) -> Output {
    let dir = scratch(tag);
    let p = dir.join("config.json");
    std::fs::write(&p, config).unwrap();
    let mut all = args.to_vec();
    all.extend(["--config", p.to_str().unwrap()]);
    run(&all)
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

const SL2: &str = r#"{
  "name": "t",
  "marked": { "in_points": ["0"], "out_points": ["inf"], "algebra": { "family": "sl", "n": 2 } },
  "window": [-2, 2]
}"#;

#[test]
fn malformed_point_is_a_config_error() {
    let bad = SL2.replace(r#"["0"]"#, r#"["zero"]"#);
    let out = run_text("point", &bad, &["basis"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn config_errors_exit_with_two() {
    let cases = [
        ("unknown", SL2.replace(r#""name""#, r#""nmae""#)),
        ("window", SL2.replace("[-2, 2]", "[2, -2]")),
        ("collision", SL2.replace(r#"["inf"]"#, r#"["0"]"#)),
        ("family", SL2.replace(r#""sl""#, r#""e8""#)),
        ("cycle", SL2.replace(r#""window""#, r#""cycles": [{"5": 1}], "window""#)),
    ];
    for (tag, text) in cases {
        let out = run_text(tag, &text, &["basis"]);
        assert_eq!(out.status.code(), Some(2), "{tag}: {}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(run(&["basis", "--config", "/nonexistent/laxalg.json"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate", "--config", bundled("classical-sl2").to_str().unwrap()]).status.code(), Some(2));
    let c = bundled("classical-sl2");
    assert_eq!(run(&["basis", "--config", c.to_str().unwrap(), "--window", "3"]).status.code(), Some(2));
}

#[test]
fn classify_reports_a_single_local_class_for_two_points() {
    let c = bundled("sl2-two-points");
    let dir = scratch("classify");
    let out = run(&["classify", "--config", c.to_str().unwrap(), "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["command"], "classify");
    let art: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("classify.json")).unwrap()).unwrap();
    assert_eq!(art["local"]["local_rank"], 1);
    assert_eq!(art["local"]["bounded_rank"], 2);
    let saved = std::fs::read(dir.join("report.json")).unwrap();
    assert_eq!(saved, out.stdout);
}

#[test]
fn overrides_and_narrow_windows() {
    let c = bundled("sp4-one-tyurin");
    let out = run(&["cocycle", "--config", c.to_str().unwrap(), "--window", "-2:2", "--seed", "9", "--jobs", "2"]);
    let r = report(&out);
    assert_eq!(r["window"], serde_json::json!([-2, 2]));
    assert_eq!(r["seed"], 9);
    // too narrow to see the lower bound of the sp(4) table
    assert_eq!(out.status.code(), Some(1));
    let failed: Vec<&Value> = r["checks"].as_array().unwrap().iter().filter(|c| c["status"] == "fail").collect();
    assert!(failed.iter().all(|c| c["counterexample"].is_string()));

    let base = report(&run(&["cocycle", "--config", c.to_str().unwrap()]));
    assert_ne!(base["inputs_hash"], r["inputs_hash"]);
}

#[test]
fn basis_and_verify_pass_on_the_classical_config() {
    let c = bundled("classical-sl2");
    let dir = scratch("basis");
    let out = run(&["basis", "--config", c.to_str().unwrap(), "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let b: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("basis.json")).unwrap()).unwrap();
    assert_eq!(b["elements"].as_array().unwrap().len(), 7 * 3);

    let out = run(&["verify", "--config", c.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let r = report(&out);
    assert_eq!(r["observed_s"], 0);
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass" || c["status"] == "info"));
}
