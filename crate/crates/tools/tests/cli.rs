//! The `edgegame` binary end to end.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use edgegame_tools::io::read_records;

fn edgegame(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_edgegame"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn solve_and_index() {
    let dir = tempfile::tempdir().unwrap();
    let path5 = write(dir.path(), "path5.txt", "6\n0 1\n1 2\n2 3\n3 4\n4 5\n");

    let out = edgegame(&["index", "--tree", &path5]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("index: 3\n"), "{}", stdout(&out));

    let out = edgegame(&["solve", "--tree", &path5, "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("BobWins, best move "));

    let json = dir.path().join("solve.json");
    let out = edgegame(&[
        "solve",
        "--tree",
        &path5,
        "--k",
        "3",
        "--pv",
        "--output",
        json.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(value["winner"], "AliceWins");
    assert!(value["principal_variation"].as_array().unwrap().len() >= 5);

    let out = edgegame(&["solve", "--tree", &path5, "--k", "3", "--threads", "2"]);
    assert!(stdout(&out).starts_with("AliceWins"));
}

#[test]
fn positions_and_analysis() {
    let dir = tempfile::tempdir().unwrap();
    let text = "6\n0 1\n0 2\n0 3\n3 4\n3 5\nc 0 1\nc 1 2\nc 3 1\n";
    let position = write(dir.path(), "pos.txt", text);
    let out = edgegame(&[
        "solve",
        "--position",
        &position,
        "--k",
        "4",
        "--mover",
        "alice",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(stdout(&out).contains("Wins, best move"));

    let out = edgegame(&["analyze", "--position", &position, "--k", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("piece 0"));
}

#[test]
fn enumerate_counts() {
    let out = edgegame(&[
        "enumerate",
        "--min-vertices",
        "8",
        "--max-vertices",
        "10",
        "--count",
    ]);
    assert_eq!(stdout(&out), "8 23\n9 47\n10 106\n");
    let out = edgegame(&["enumerate", "--max-vertices", "4"]);
    assert_eq!(stdout(&out).matches("\n\n").count(), 1 + 1 + 1 + 2 - 1);
}

#[test]
fn exit_codes() {
    assert_eq!(edgegame(&["--version"]).status.code(), Some(0));
    assert_eq!(edgegame(&["solve"]).status.code(), Some(2));
    assert_eq!(
        edgegame(&["solve", "--tree", "/no/such/file", "--k", "3"])
            .status
            .code(),
        Some(2)
    );

    let dir = tempfile::tempdir().unwrap();
    let star = write(dir.path(), "star.txt", "5\n0 1\n0 2\n0 3\n0 4\n");
    let out = edgegame(&["solve", "--tree", &star, "--k", "5", "--budget", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let broken = write(dir.path(), "broken.txt", "3\n0 1\n0 1\n");
    assert_eq!(
        edgegame(&["index", "--tree", &broken]).status.code(),
        Some(2)
    );
}

#[test]
fn verify_resume_and_baseline() {
    let dir = tempfile::tempdir().unwrap();
    let records = dir.path().join("t1.jsonl");
    let records = records.to_str().unwrap();
    let out = edgegame(&[
        "verify",
        "theorem1",
        "--max-vertices",
        "9",
        "--output",
        records,
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let first = read_records(Path::new(records)).unwrap();
    assert!(!first.is_empty());
    assert!(dir.path().join("t1.csv").exists());

    let out = edgegame(&[
        "verify",
        "theorem1",
        "--max-vertices",
        "9",
        "--output",
        records,
        "--resume",
        "--baseline",
        records,
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(
        stdout(&out).contains(&format!("({} resumed)", first.len())),
        "{}",
        stdout(&out)
    );

    let out = edgegame(&["verify", "lemmas", "--samples", "300", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("300 positions"));

    let out = edgegame(&["verify", "prior", "--max-vertices", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).matches("0 counterexamples").count(), 4);

    let out = edgegame(&["probe", "--max-vertices", "8"]);
    assert_eq!(out.status.code(), Some(0));
}
