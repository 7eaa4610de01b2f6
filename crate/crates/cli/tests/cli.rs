use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn mutau(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mutau")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn data_line(out: &Output) -> Vec<String> {
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let header: Vec<&str> = reader.headers().unwrap().iter().take(5).collect();
    assert_eq!(header, ["n", "m", "route", "mu", "tau_min"]);
    let record = reader.records().next().unwrap().unwrap();
    record.iter().map(str::to_owned).collect()
}

#[test]
fn invariants_coprime_pair() {
    let out = mutau(&["invariants", "--pair", "8", "11"]);
    assert_eq!(code(&out), 0);
    let row = data_line(&out);
    assert_eq!(&row[..3], ["8", "11", "Delorme"]);
    assert_eq!(row[3], "70");
    assert_eq!((row[9].as_str(), row[10].as_str()), ("70", "57"));
    assert_eq!(row[12], "Holds");
}

#[test]
fn invariants_weighted_pair_uses_recursion() {
    let out = mutau(&["invariants", "--pair", "6", "14"]);
    assert_eq!(code(&out), 0);
    let row = data_line(&out);
    assert_eq!(row[2], "BGM");
    assert_eq!(row[4], "54");
    assert!(row[13].contains("BP(14,6)"), "{}", row[13]);
}

#[test]
fn cusp_row() {
    let out = mutau(&["invariants", "--pair", "2", "3"]);
    assert_eq!(code(&out), 0);
    let row = data_line(&out);
    assert_eq!((row[3].as_str(), row[4].as_str()), ("2", "2"));
}

#[test]
fn non_coprime_on_delorme_is_input_error() {
    let out = mutau(&["invariants", "--pair", "6", "14", "--route", "delorme"]);
    assert_eq!(code(&out), 2);
    assert!(out.stdout.is_empty());
}

#[test]
fn bad_arguments_exit_two() {
    assert_eq!(code(&mutau(&["invariants", "--pair", "8"])), 2);
    assert_eq!(code(&mutau(&["scan", "--max", "3"])), 2);
    assert_eq!(code(&mutau(&["lp-sweep", "--pmax", "1", "--qmax", "3", "--dmax", "1"])), 2);
    assert_eq!(code(&mutau(&["frobnicate"])), 2);
}

#[test]
fn delorme_scan_holds() {
    let out = mutau(&["scan", "--max", "30"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let rows = text.lines().count() - 1;
    let expected = (2..=30i64)
        .flat_map(|m| (2..m).map(move |n| (n, m)))
        .filter(|&(n, m)| num_integer::gcd(n, m) == 1)
        .count();
    assert_eq!(rows, expected);
    assert!(text.lines().skip(1).all(|l| l.contains(",Holds,")));
}

#[test]
fn output_independent_of_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let mut seen = Vec::new();
    for jobs in ["1", "3"] {
        let path = dir.path().join(format!("bgm{jobs}.csv"));
        let out = mutau(&["scan", "--max", "24", "--route", "bgm", "--jobs", jobs, "--out", path.to_str().unwrap()]);
        assert_eq!(code(&out), 0);
        seen.push(fs::read(&path).unwrap());
    }
    assert_eq!(seen[0], seen[1]);
}

#[test]
fn json_output() {
    let out = mutau(&["invariants", "--pair", "5", "7", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let row = &v["rows"][0];
    assert_eq!(row["tau_min"], 21);
    assert_eq!(row["route"], "Delorme");
    assert!(v["summary"].is_object());
}

#[test]
fn crosscheck_with_oracle_agrees() {
    let out = mutau(&["crosscheck", "--max", "12", "--oracle"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("0 mismatches"));
}

#[test]
fn lp_sweep_single_member() {
    let out = mutau(&["lp-sweep", "--pmax", "2", "--qmax", "3", "--dmax", "1"]);
    assert_eq!(code(&out), 0);
    let row = data_line(&out);
    assert_eq!(row[2], "LPFamily");
    assert_eq!(row[3], "16");
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn oracle_on_file() {
    let dir = tempfile::tempdir().unwrap();
    let cusp = write(dir.path(), "cusp.txt", "1 1 0 2\n-1 1 3 0\n");
    let out = mutau(&["oracle", &cusp]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("mu 2\n") && text.contains("tau 2\n"), "{text}");

    let bad = write(dir.path(), "bad.txt", "1 1 zero 2\n");
    assert_eq!(code(&mutau(&["oracle", &bad])), 2);
    let unit = write(dir.path(), "unit.txt", "1 1 0 0\n1 1 1 0\n");
    assert_eq!(code(&mutau(&["oracle", &unit])), 2);
    assert_eq!(code(&mutau(&["oracle", "/nonexistent/poly.txt"])), 2);
}

#[test]
fn oracle_on_pair() {
    let out = mutau(&["oracle", "--pair", "6", "14"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("tau_min_estimate 54\n"));
}

#[test]
fn table_feeds_the_recursion() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("sigma.txt");
    let table = table.to_str().unwrap();
    let out = mutau(&["build-table", "--max", "10", "--out", table]);
    assert_eq!(code(&out), 0);
    assert!(!fs::read_to_string(table).unwrap().trim().is_empty());

    let before = mutau(&["invariants", "--pair", "4", "4"]);
    let after = mutau(&["invariants", "--pair", "4", "4", "--table", table]);
    assert_eq!(code(&after), 0);
    let (b, a) = (data_line(&before), data_line(&after));
    assert_ne!(b[12], "Violated");
    assert_eq!(a[7], "0");
    assert_eq!(a[12], "Holds");

    let scan = mutau(&["scan", "--max", "10", "--route", "bgm", "--table", table]);
    assert_eq!(code(&scan), 0);
    assert!(!stdout(&scan).contains(",Unavailable,"));
}
