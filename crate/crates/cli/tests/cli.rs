use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use polysda::io;

fn polysda(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polysda")).args(args).output().expect("spawn polysda")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

// class "solo" has a single respondent, so its polygons are degenerate
const SMALL_CSV: &str = "\
group,x,smoker
a,1.0,yes
a,2.0,no
a,3.0,yes
b,10.0,no
b,12.0,no
b,11.0,
c,20.0,yes
c,21.5,yes
solo,5.0,no
";

fn small_table(dir: &Path, vertices: &str) -> PathBuf {
    let csv = dir.join("small.csv");
    fs::write(&csv, SMALL_CSV).unwrap();
    let table = dir.join(format!("small{vertices}.json"));
    let out = polysda(&[
        "aggregate",
        "--input",
        s(&csv),
        "--class-col",
        "group",
        "--vertices",
        vertices,
        "--output",
        s(&table),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    table
}

#[test]
fn distance_of_unit_to_itself_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let table = small_table(dir.path(), "4");
    let out = polysda(&["distance", "--input", s(&table), "--unit-a", "b", "--unit-b", "b"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "0");
}

#[test]
fn distance_between_units_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let table_path = small_table(dir.path(), "8");
    let out = polysda(&["distance", "--input", s(&table_path), "--unit-a", "a", "--unit-b", "c"]);
    assert!(out.status.success());
    let table = io::read_table(&table_path).unwrap();
    let expected =
        polysda::unit_distance(&table.unit("a").unwrap().polygons, &table.unit("c").unwrap().polygons).unwrap();
    assert_eq!(stdout(&out).trim().parse::<f64>().unwrap(), expected);
}

#[test]
fn aggregate_reports_binary_columns_and_missing_cells() {
    let dir = tempfile::tempdir().unwrap();
    let table_path = small_table(dir.path(), "4");
    let table = io::read_table(&table_path).unwrap();
    assert_eq!(table.variables(), ["x", "smoker"]);
    assert_eq!(table.len(), 4);
    // two of three smokers in class a; the missing cell in b is skipped
    assert_eq!(table.unit("a").unwrap().polygons[1].center(), 2.0 / 3.0);
    assert_eq!(table.unit("b").unwrap().polygons[1].center(), 0.0);
}

#[test]
fn help_exits_zero_and_usage_errors_exit_one() {
    assert_eq!(polysda(&["--help"]).status.code(), Some(0));
    assert_eq!(polysda(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(polysda(&["cluster", "--input", "x.json"]).status.code(), Some(1));
    assert_eq!(polysda(&["verify", "--suite", "nonsense"]).status.code(), Some(1));
}

#[test]
fn missing_input_is_a_data_error() {
    let out = polysda(&["distance", "--input", "/nonexistent/table.json", "--unit-a", "a", "--unit-b", "b"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("/nonexistent/table.json"));
}

#[test]
fn malformed_csv_names_row_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bad.csv");
    fs::write(&csv, "group,x\na,1\na,two\n").unwrap();
    let table = dir.path().join("t.json");
    let out =
        polysda(&["aggregate", "--input", s(&csv), "--class-col", "group", "--vertices", "4", "--output", s(&table)]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("row 2") && err.contains("\"x\""), "{err}");
    assert!(!table.exists());
}

#[test]
fn unknown_unit_and_variable_are_data_errors() {
    let dir = tempfile::tempdir().unwrap();
    let table = small_table(dir.path(), "4");
    let out = polysda(&["distance", "--input", s(&table), "--unit-a", "a", "--unit-b", "zzz"]);
    assert_eq!(out.status.code(), Some(2));
    let out = polysda(&["pdf", "--input", s(&table), "--variable", "nope", "--x", "0", "--y", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pdf_rejects_degenerate_polygons_and_evaluates_otherwise() {
    let dir = tempfile::tempdir().unwrap();
    let table = small_table(dir.path(), "4");
    // the singleton class makes one x polygon degenerate
    let out = polysda(&["pdf", "--input", s(&table), "--variable", "x", "--x", "2", "--y", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("degenerate"));

    let single = dir.path().join("single.json");
    let t = polysda::SymbolicTable::from_params(vec!["v".into()], 4, vec![("u".into(), vec![(0.0, 1.0)])]).unwrap();
    io::write_table(&single, &t).unwrap();
    let out = polysda(&["pdf", "--input", s(&single), "--variable", "v", "--x", "0", "--y", "0"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "0.5");
    let out = polysda(&["pdf", "--input", s(&single), "--variable", "v", "--x", "-3", "--y", "0"]);
    assert_eq!(stdout(&out).trim(), "0");
}

#[test]
fn render_draws_degenerate_polygons_as_dots() {
    let dir = tempfile::tempdir().unwrap();
    let table = small_table(dir.path(), "8");
    let svg_path = dir.path().join("x.svg");
    let out = polysda(&["render", "--input", s(&table), "--variable", "x", "--output", s(&svg_path)]);
    assert!(out.status.success(), "{}", stderr(&out));
    let svg = fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
    assert_eq!(svg.matches("<polygon").count(), 3);
    assert_eq!(svg.matches("<circle").count(), 1);
    assert!(svg.contains("8-gon"));
}

#[test]
fn cluster_result_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let table = small_table(dir.path(), "4");
    let result = dir.path().join("result.json");
    let out = polysda(&["cluster", "--input", s(&table), "--k", "2", "--seed", "3", "--output", s(&result)]);
    assert!(out.status.success(), "{}", stderr(&out));

    let text = fs::read_to_string(&result).unwrap();
    let file = io::read_result(&result).unwrap();
    assert_eq!(file.to_json_string(), text);
    assert_eq!(file.assignments.len(), 4);
    assert_eq!(file.prototypes.len(), 2);
    assert_eq!(file.criterion, *file.trace.last().unwrap());
    assert!(file.assignments.iter().all(|a| (1..=2).contains(&a.cluster)));
}

#[test]
fn cluster_rejects_k_larger_than_unit_count() {
    let dir = tempfile::tempdir().unwrap();
    let table = small_table(dir.path(), "4");
    let result = dir.path().join("result.json");
    let out = polysda(&["cluster", "--input", s(&table), "--k", "9", "--seed", "0", "--output", s(&result)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!result.exists());
}

#[test]
fn verify_all_suites_pass() {
    let dir = tempfile::tempdir().unwrap();
    let reports = dir.path().join("reports.jsonl");
    let out = polysda(&["verify", "--suite", "all", "--seed", "7", "--output", s(&reports)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let lines = stdout(&out);
    assert_eq!(fs::read_to_string(&reports).unwrap(), lines);
    for line in lines.lines() {
        assert!(line.starts_with('{') && line.contains("\"pass\":true"), "{line}");
    }
    assert!(lines.lines().any(|l| l.contains("measured only")));
}
