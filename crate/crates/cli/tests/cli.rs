use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn shvg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shvg")).args(args).output().expect("binary runs")
}

fn shvg_with_input(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_shvg"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn graph_file(name: &str, n: usize, edges: &[(usize, usize)]) -> PathBuf {
    let mut text = format!("{n} {}\n", edges.len());
    for (u, v) in edges {
        text += &format!("{u} {v}\n");
    }
    scratch(name, &text)
}

fn path_file(name: &str, n: usize) -> PathBuf {
    let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    graph_file(name, n, &edges)
}

fn t3_file() -> PathBuf {
    let edges: Vec<_> = (1..15).map(|v| ((v - 1) / 2, v)).collect();
    graph_file("t3.graph", 15, &edges)
}

fn assert_schema(schema: &str, value: &Value) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas").join(format!("{schema}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(value).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{}: {errors:?}", path.display());
}

fn json_output(args: &[&str]) -> Value {
    let o = shvg(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

const FORMULA: &str = "c forall x exists y: (x or y) and (not x or not y)\np qcnf 2 2\na 1\ne 2\n1 2 0\n-1 -2 0\n";

#[test]
fn solve_p5_prints_score_one() {
    let o = shvg(&["solve", path_file("p5.graph", 5).to_str().unwrap(), "--mover", "maker"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().any(|l| l == "score: 1"), "{}", stdout(&o));
}

#[test]
fn solve_t3_both_as_json() {
    let v = json_output(&["solve", t3_file().to_str().unwrap(), "--both", "--json"]);
    assert_eq!((v["ms"].as_u64(), v["bs"].as_u64()), (Some(2), Some(2)));
    assert_schema("solve-pair", &v);
}

#[test]
fn solve_single_mover_json_and_trace_match_schemas() {
    let file = path_file("p4.graph", 4);
    let v = json_output(&["solve", file.to_str().unwrap(), "--mover", "breaker", "--json", "--no-closed-form"]);
    assert_schema("solve-report", &v);
    let trace = json_output(&["solve", file.to_str().unwrap(), "--trace"]);
    assert_schema("trace", &trace);
    assert_eq!(trace["plies"].as_array().unwrap().len(), 4);
}

#[test]
fn oracle_flag_agrees_with_default() {
    let file = t3_file();
    let a = json_output(&["solve", file.to_str().unwrap(), "--both", "--json", "--oracle"]);
    let b = json_output(&["solve", file.to_str().unwrap(), "--both", "--json", "--threads", "4"]);
    assert_eq!((&a["ms"], &a["bs"]), (&b["ms"], &b["bs"]));
}

#[test]
fn budget_exhaustion_exits_with_two() {
    // 60 vertices of a sparse random-looking graph; far beyond a millisecond of search.
    let mut edges = Vec::new();
    for u in 0..60usize {
        for v in u + 1..60 {
            if (u * 31 + v * 17) % 13 == 0 {
                edges.push((u, v));
            }
        }
    }
    let file = graph_file("huge.graph", 60, &edges);
    let o = shvg(&["solve", file.to_str().unwrap(), "--budget", "1ms"]);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
    assert!(String::from_utf8_lossy(&o.stderr).contains("resource exceeded"));
}

#[test]
fn usage_and_parse_errors_exit_with_one() {
    assert_eq!(shvg(&["solve"]).status.code(), Some(1));
    assert_eq!(shvg(&["solve", "/definitely/missing.graph"]).status.code(), Some(1));
    let bad = scratch("bad.graph", "3 1\n0 7\n");
    let o = shvg(&["solve", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
    assert_eq!(shvg(&["verify", "no-such-suite"]).status.code(), Some(1));
    assert_eq!(shvg(&["--help"]).status.code(), Some(0));
}

#[test]
fn position_files_are_accepted() {
    let file = scratch("p3pos.graph", "3 2\n0 1\n1 2\nM: 1\nB:\n");
    let o = shvg(&["solve", file.to_str().unwrap(), "--mover", "breaker"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("score: 1"));
}

#[test]
fn classify_and_closed_form() {
    let v = json_output(&["classify", path_file("p7.graph", 7).to_str().unwrap(), "--json"]);
    assert_schema("classify", &v);
    assert_eq!(v["class"]["class"], "path");
    assert_eq!(v["scores"]["ms"], 1);
    let petersen = graph_file(
        "petersen.graph",
        10,
        &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 5), (1, 6), (2, 7), (3, 8), (4, 9), (5, 7), (7, 9), (9, 6), (6, 8), (8, 5)],
    );
    let v = json_output(&["classify", petersen.to_str().unwrap(), "--json"]);
    assert_schema("classify", &v);
    assert!(v["scores"].is_null());
    let v = json_output(&["closed-form", "star", "1", "1", "1", "--json"]);
    assert_schema("classify", &v);
    assert_eq!((v["scores"]["ms"].as_u64(), v["scores"]["bs"].as_u64()), (Some(1), Some(0)));
    let o = shvg(&["closed-form", "binary-tree", "3"]);
    assert!(stdout(&o).contains("ms 2 bs 2"));
    assert_eq!(shvg(&["closed-form", "star", "1", "0", "2"]).status.code(), Some(1));
}

#[test]
fn fpt_matches_solver_on_a_complete_bipartite_graph() {
    let edges: Vec<_> = (0..3).flat_map(|u| (3..7).map(move |v| (u, v))).collect();
    let file = graph_file("k34.graph", 7, &edges);
    let v = json_output(&["fpt", file.to_str().unwrap(), "--both", "--json"]);
    assert_schema("fpt", &v);
    assert_eq!(v["width"], 2);
    let s = json_output(&["solve", file.to_str().unwrap(), "--both", "--json"]);
    assert_eq!(v["results"][0]["report"]["score"], s["ms"]);
    assert_eq!(v["results"][1]["report"]["score"], s["bs"]);
}

#[test]
fn formula_value() {
    let file = scratch("f.qcnf", FORMULA);
    let v = json_output(&["formula", file.to_str().unwrap(), "-k", "2", "--json"]);
    assert_schema("formula", &v);
    assert_eq!(v["value"], 2);
    assert_eq!(v["satisfier_wins"], true);
}

#[test]
fn reduce_writes_graph_and_sidecar_and_round_trips() {
    let formula = scratch("f2.qcnf", FORMULA);
    let out = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli").join("f2-tree.graph");
    for k in 0..=3 {
        let o = shvg(&["reduce", formula.to_str().unwrap(), "-k", &k.to_string(), "-o", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let sidecar: Value = serde_json::from_str(&std::fs::read_to_string(out.with_extension("json")).unwrap()).unwrap();
        assert_schema("sidecar", &sidecar);
        let threshold = sidecar["threshold"].as_i64().unwrap();
        assert_eq!(threshold, sidecar["baseline"].as_i64().unwrap() + 2 - k + 1);
        assert!(stdout(&o).contains(&format!("threshold: {threshold}")));
        let ms = json_output(&["solve", out.to_str().unwrap(), "--json"])["score"].as_i64().unwrap();
        let value = json_output(&["formula", formula.to_str().unwrap(), "--json"])["value"].as_i64().unwrap();
        assert_eq!(ms >= threshold, value < k, "k = {k}");
    }
}

#[test]
fn reduce_rejects_bad_formulas() {
    let empty = scratch("empty.qcnf", "p qcnf 1 0\ne 1\n");
    let o = shvg(&["reduce", empty.to_str().unwrap(), "-k", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
    let cyclic = scratch("cyc.qcnf", "p qcnf 3 3\ne 1 2 3\n1 2 0\n2 3 0\n3 1 0\n");
    assert_eq!(shvg(&["reduce", cyclic.to_str().unwrap(), "-k", "1"]).status.code(), Some(1));
    let o = shvg(&["reduce", cyclic.to_str().unwrap(), "-k", "1", "--prepare"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = shvg(&["reduce", cyclic.to_str().unwrap(), "-k", "1", "--prepare", "--target", "caterpillar"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn verify_examples_pass() {
    for args in [
        vec!["verify", "paths", "--max-n", "12"],
        vec!["verify", "super-lemma", "--max-n", "10"],
        vec!["verify", "reduction", "--vars", "2", "--clauses", "2"],
    ] {
        let o = shvg(&args);
        assert!(o.status.success(), "{args:?}: {}", stdout(&o));
        assert!(stdout(&o).starts_with("PASS"));
    }
    let v = json_output(&["verify", "all", "--max-n", "7", "--samples", "10", "--json", "--seed", "9"]);
    assert_schema("verify", &v);
    assert_eq!(v["passed"], true);
    assert_eq!(v["seed"], 9);
}

#[test]
fn play_p3_engine_maker_scores_one() {
    let file = path_file("p3.graph", 3);
    for line in ["0\n", "2\n"] {
        let o = shvg_with_input(&["play", file.to_str().unwrap(), "--human", "breaker"], line);
        assert!(o.status.success());
        let out = stdout(&o);
        assert!(out.contains("engine (maker) plays 1"), "{out}");
        assert!(out.trim_end().ends_with("final score: 1"), "{out}");
    }
}

#[test]
fn play_reprompts_on_illegal_moves() {
    let file = path_file("p3b.graph", 3);
    let o = shvg_with_input(&["play", file.to_str().unwrap(), "--human", "breaker"], "1\nx\n9\n0\n");
    let out = stdout(&o);
    assert!(o.status.success(), "{out}");
    assert_eq!(out.matches("is not a free vertex").count(), 3, "{out}");
    assert!(out.trim_end().ends_with("final score: 1"));
}

#[test]
fn play_star_human_maker() {
    let file = graph_file("k13.graph", 4, &[(0, 1), (0, 2), (0, 3)]);
    // Center first, then any free leaf.
    let o = shvg_with_input(&["play", file.to_str().unwrap(), "--human", "maker"], "0\n1\n2\n3\n");
    let out = stdout(&o);
    assert!(out.trim_end().ends_with("final score: 1"), "{out}");
}

#[test]
fn play_fails_cleanly_when_input_ends() {
    let file = path_file("p3c.graph", 3);
    let o = shvg_with_input(&["play", file.to_str().unwrap(), "--human", "maker"], "");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bench_is_deterministic_and_matches_schema() {
    let args = ["bench", "--family", "twins", "--max-n", "10", "--samples", "2", "--json", "--seed", "3"];
    let a = json_output(&args);
    let b = json_output(&args);
    assert_schema("bench", &a);
    let strip = |v: &Value| -> Vec<(Value, Value)> {
        v["rows"].as_array().unwrap().iter().map(|r| (r["ms"].clone(), r["bs"].clone())).collect()
    };
    assert_eq!(strip(&a), strip(&b));
}
