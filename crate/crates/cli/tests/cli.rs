use std::process::{Command, Output};

fn kleinrec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kleinrec"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn cohomology_table() {
    let o = kleinrec(&["cohomology", "--input", "catalog:sl3-borel", "--format", "structured"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let dims: Vec<u64> = v["report"]["spaces"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["dim"].as_u64().unwrap())
        .collect();
    assert_eq!(dims, [1, 3, 0]);
    assert_eq!(v["manifest"]["command"], "cohomology");
    assert!(v["manifest"].get("timing").is_none());
}

#[test]
fn reconstruct_is_deterministic() {
    let args = ["reconstruct", "--input", "catalog:sl3-borel", "--format", "structured"];
    let (a, b) = (kleinrec(&args), kleinrec(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["report"]["rigidity"]["rigid"], true);
    assert_eq!(v["report"]["branches"].as_array().unwrap().len(), 2);
}

#[test]
fn export_import_and_verify() {
    let dir = std::env::temp_dir().join(format!("kleinrec-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sl2.json");
    let p = path.to_str().unwrap();
    let o = kleinrec(&["catalog", "export", "sl2", "--output", p]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(kleinrec(&["verify", "--input", p]).status.code(), Some(0));

    let mut doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    doc["brackets"][0]["coeffs"]["1"] = "3".into();
    std::fs::write(&path, doc.to_string()).unwrap();
    let o = kleinrec(&["verify", "--input", p]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("(0, 1, 2)"));

    std::fs::write(&path, "{\"dim\": 1,\n \"basis\": [\"x\"], \"brackets\": [}").unwrap();
    let o = kleinrec(&["verify", "--input", p]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn extract_rejects_non_subalgebra() {
    let o = kleinrec(&["extract", "--input", "catalog:sl3", "--h-indices", "2,5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("[e2, e5]"));
}

#[test]
fn lemmas_all_hold() {
    let o = kleinrec(&[
        "lemmas",
        "--input",
        "catalog:sl3-borel",
        "--samples",
        "20",
        "--seed",
        "7",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o)
        .lines()
        .any(|l| l.starts_with("total") && l.ends_with(" 60/60")));
}

#[test]
fn input_errors_exit_2() {
    assert_eq!(kleinrec(&["catalog", "show", "nope"]).status.code(), Some(2));
    let o = kleinrec(&["cohomology", "--input", "catalog:sl3-borel", "--module", "m ⊗ q"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("position 4"));
}
