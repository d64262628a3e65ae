use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_knotmosaic"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn gen_validate_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &["gen", "--setting", "hex-standard", "-r", "3", "--knot", "-o", "k.hexmo"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["validate", "k.hexmo"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "valid");
    let o = run(&["--json", "analyze", "k.hexmo"], dir.path());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["components"], 1);
    assert_eq!(v["crossing_number"]["kind"], "certified");
    assert_eq!(v["crossing_number"]["crossings"], 19);
}

#[test]
fn broken_file_fails_validation() {
    let dir = tempfile::tempdir().unwrap();
    run(
        &["gen", "--setting", "hex-standard", "-r", "3", "-o", "l.hexmo"],
        dir.path(),
    );
    let text = std::fs::read_to_string(dir.path().join("l.hexmo")).unwrap();
    let broken = text.replacen("cell 1 1: (1-2)", "cell 1 1: -", 1);
    assert_ne!(broken, text);
    std::fs::write(dir.path().join("b.hexmo"), broken).unwrap();
    let o = run(&["--json", "validate", "b.hexmo"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["valid"], false);
    assert!(!v["violations"].as_array().unwrap().is_empty());
    // commands that need a valid board refuse it
    assert_eq!(run(&["complement", "b.hexmo"], dir.path()).status.code(), Some(1));
}

#[test]
fn parse_error_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("x.hexmo"),
        "hexmo v1\ngeometry: hex\nr: 2\nsetting: hex-standard\ncell 1 1: (7-8)\n",
    )
    .unwrap();
    let o = run(&["validate", "x.hexmo"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 5"));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["frobnicate"], dir.path()).status.code(), Some(2));
    assert_eq!(
        run(&["gen", "--setting", "hex-standard"], dir.path()).status.code(),
        Some(2)
    );
    let o = run(
        &["search", "--setting", "hex-standard", "-r", "4", "--mode", "exhaustive"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_small_range() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &[
            "--json",
            "verify",
            "--r-min",
            "2",
            "--r-max",
            "4",
            "--setting",
            "hex-standard",
            "--setting",
            "rect",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["failed"], 0);
    assert!(v["passed"].as_u64().unwrap() > 10);
    assert!(v["rows"].as_array().unwrap().iter().all(|r| r["anchor"].is_string()));
}

#[test]
fn search_and_render() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &[
            "--json",
            "search",
            "--setting",
            "hex-standard",
            "-r",
            "2",
            "--mode",
            "exhaustive",
            "-o",
            "w.hexmo",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["max_crossings"], 3);
    assert_eq!(v["exceeded_bound"], false);
    let o = run(&["render", "w.hexmo", "-o", "w.svg"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let svg = std::fs::read_to_string(dir.path().join("w.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains(r#"data-gaps="3""#));
    let o = run(&["render", "w.hexmo", "--format", "ascii"], dir.path());
    assert_eq!(stdout(&o).lines().count(), 3);
}

#[test]
fn complement_and_reduce() {
    let dir = tempfile::tempdir().unwrap();
    run(
        &["gen", "--setting", "hex-enhanced", "-r", "4", "--knot", "-o", "k.hexmo"],
        dir.path(),
    );
    let o = run(&["complement", "k.hexmo"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("(s,w) = (0,0)"));
    let o = run(&["--json", "reduce", "k.hexmo"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["history"], serde_json::json!([[0, 0]]));
    let o = run(&["eliminate", "k.hexmo"], dir.path());
    assert_eq!(stdout(&o).trim(), "no complement arc to eliminate");
}

#[test]
fn catalog_lists_classes() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["--json", "catalog"], dir.path());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 27);
    let o = run(&["catalog", "--geometry", "rect"], dir.path());
    assert!(stdout(&o).starts_with("5 classes"));
}

#[test]
fn eliminate_reports_a_failed_precondition() {
    let dir = tempfile::tempdir().unwrap();
    run(
        &["gen", "--setting", "hex-standard", "-r", "3", "-o", "l.hexmo"],
        dir.path(),
    );
    // small unknot around one vertex of the center tile, everything else blank
    let text: String = std::fs::read_to_string(dir.path().join("l.hexmo"))
        .unwrap()
        .lines()
        .map(|l| match l.split_once(':') {
            Some((k, _)) if k.starts_with("cell") => {
                let code = match k {
                    "cell 3 3" => "(0-1)",
                    "cell 2 3" => "(2-3)",
                    "cell 3 4" => "(4-5)",
                    _ => "-",
                };
                format!("{k}: {code}\n")
            }
            _ => format!("{l}\n"),
        })
        .collect();
    std::fs::write(dir.path().join("u.hexmo"), text).unwrap();
    assert_eq!(run(&["validate", "u.hexmo"], dir.path()).status.code(), Some(0));
    let o = run(&["complement", "u.hexmo"], dir.path());
    assert!(stdout(&o).starts_with("(s,w) = (0,9)"));
    let o = run(&["eliminate", "u.hexmo"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("precondition failed"));
    let o = run(&["--json", "reduce", "u.hexmo"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["error"].as_str().unwrap().starts_with("precondition failed"));
}
