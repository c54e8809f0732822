use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn tranca(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tranca"))
        .args(args)
        .env_remove("DOMINO_CORPUS_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = tranca(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn replay_prints_outcome() {
    assert_eq!(stdout(&["replay", "corpus/inmortal.json"]), "DominoOut team A 111\n");
    assert_eq!(stdout(&["replay", "witness_107.json"]), "Blocked at 0 team A 107\n");
    let minimal = stdout(&["replay", "minimal_tranca.json", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&minimal).unwrap();
    assert_eq!(v["board_pips"], 42);
    assert_eq!(v["outcome"]["blocking_number"], 0);
}

#[test]
fn json_outputs_match_golden_files() {
    let cases: [(&[&str], &str); 6] = [
        (&["bounds-table", "--json"], "bounds_table.json"),
        (&["oracle", "--max-pip", "2", "--json"], "oracle_d2.json"),
        (&["replay", "witness_107.json", "--json"], "replay_witness_107.json"),
        (
            &["enumerate-blocked", "--k", "6", "--max-tiles", "10", "--count", "--json"],
            "enumerate_k6_count.json",
        ),
        (
            &["search", "--target", "108", "--scope", "ten-tile", "--json"],
            "search_108_ten_tile.json",
        ),
        (&["bounds-table"], "bounds_table.txt"),
    ];
    for (args, file) in cases {
        assert_eq!(stdout(args), golden(file), "{args:?}");
    }
}

#[test]
fn oracle_on_double_three() {
    assert_eq!(stdout(&["oracle"]), golden("oracle_d3.txt"));
}

#[test]
fn small_queries() {
    assert_eq!(stdout(&["min-board-sum", "--k", "3", "--tiles", "10"]), "60\n");
    assert_eq!(stdout(&["count-chains"]), "7959229931520\n");
    assert_eq!(stdout(&["count-chains", "--max-pip", "2"]), "12\n");
    assert_eq!(stdout(&["hand-check", "0,1,2,3"]), "no 7-tile hand avoids 0,1,2,3\n");
    assert_eq!(stdout(&["hand-check", "4,5,6"]), "a 7-tile hand avoids 4,5,6\n");
    assert_eq!(stdout(&["validate", "inmortal.json"]), "valid: inmortal (25 moves)\n");
}

#[test]
fn json_does_not_depend_on_threads() {
    let args = |n: &'static str| ["search", "--target", "107", "--scope", "ten-tile", "--json", "--threads", n];
    assert_eq!(stdout(&args("1")), stdout(&args("3")));
}

#[test]
fn prove_max_writes_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().to_str().unwrap();
    let text = stdout(&["prove-max", "--scope", "ten-tile", "--no-budget", "--out", out_dir]);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("MAX=107"));
    assert!(text.contains(&format!("wrote {out_dir}/certificate.json")));
    let cert: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("certificate.json")).unwrap()).unwrap();
    assert_eq!(cert["max_blocked_score"], 107);
    assert_eq!(cert["unsat"]["verdict"], "UNSAT");
    assert_eq!(cert["sat"]["verdict"], "SAT");
    let witness = dir.path().join("witness_107.json");
    let replayed = stdout(&["replay", witness.to_str().unwrap()]);
    assert!(replayed.starts_with("Blocked at 0 team "));
}

#[test]
fn search_writes_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    let text = stdout(&["search", "--target", "107", "--scope", "ten-tile", "--out", path.to_str().unwrap()]);
    assert!(text.starts_with("target 107: SAT"));
    assert!(stdout(&["validate", path.to_str().unwrap()]).starts_with("valid: "));
}

#[test]
fn exit_codes() {
    assert_eq!(tranca(&["bogus"]).status.code(), Some(2));
    assert_eq!(tranca(&["replay"]).status.code(), Some(2));
    assert_eq!(tranca(&["replay", "missing.json"]).status.code(), Some(2));
    assert_eq!(tranca(&["search", "--target", "0"]).status.code(), Some(2));
    assert_eq!(tranca(&["search", "--target", "107", "--prune", "P9"]).status.code(), Some(2));
    assert_eq!(tranca(&["min-board-sum", "--k", "7"]).status.code(), Some(2));

    let budget = tranca(&["search", "--target", "107", "--scope", "ten-tile", "--budget", "100"]);
    assert_eq!(budget.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&budget.stderr).contains("budget"));

    // Player 2 cannot lay [5,5] on [1,1].
    let dir = tempfile::tempdir().unwrap();
    let mut record: serde_json::Value =
        serde_json::from_str(tranca::records::corpus::text("inmortal.json").unwrap()).unwrap();
    record["moves"][1] = serde_json::json!({"player": 2, "play": "5-5"});
    let path = dir.path().join("broken.json");
    fs::write(&path, serde_json::to_string(&record).unwrap()).unwrap();
    assert_eq!(tranca(&["validate", path.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(tranca(&["replay", path.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn corpus_directory_override() {
    let dir = tempfile::tempdir().unwrap();
    let mut record: serde_json::Value =
        serde_json::from_str(tranca::records::corpus::text("inmortal.json").unwrap()).unwrap();
    record["name"] = "from the override".into();
    fs::write(dir.path().join("inmortal.json"), serde_json::to_string(&record).unwrap()).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_tranca"))
        .args(["replay", "inmortal.json", "--json"])
        .env("DOMINO_CORPUS_DIR", dir.path())
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["name"], "from the override");
}
