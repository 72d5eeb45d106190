use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use proptest::prelude::*;
use serde_json::Value;
use stepbound_cli::{parse_rational, GraphDocument, SchemeDocument, StepDocument};
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_stepbound"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn family(dir: &TempDir, args: &[&str], name: &str) -> PathBuf {
    let p = dir.path().join(name);
    let mut full = vec!["graph"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", p.to_str().unwrap(), "--quiet"]);
    assert!(run(&full).status.success());
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn graph_families_have_expected_edge_counts() {
    for (args, edges) in [
        (vec!["cycle", "--n", "6"], 6),
        (vec!["wheel"], 10),
        (vec!["lattice", "--l", "4"], 24),
        (vec!["path", "--n", "5"], 4),
        (vec!["complete", "--n", "5"], 10),
    ] {
        let mut full = vec!["graph"];
        full.extend(args);
        let v = json(&run(&full));
        assert_eq!(v["edges"].as_array().unwrap().len(), edges);
    }
    let v = json(&run(&["graph", "lattice", "--l", "4"]));
    assert_eq!(v["family"], "lattice");
    assert_eq!(v["params"]["l"], 4);
    assert_eq!(v["n"], 16);
}

#[test]
fn graph_missing_parameter_exits_2() {
    assert_eq!(run(&["graph", "cycle"]).status.code(), Some(2));
    assert_eq!(run(&["graph", "cycle", "--n", "2"]).status.code(), Some(2));
}

#[test]
fn bounds_examples() {
    let dir = TempDir::new().unwrap();
    let wheel = family(&dir, &["wheel"], "w.json");
    let v = json(&run(&["bounds", s(&wheel), "--quiet"]));
    assert_eq!(v["steps_lower"], 6);
    assert_eq!(v["steps_lower_thm3"]["lower"], 6);
    assert_eq!(v["min_eigenvalue"]["verdict"]["kind"], "irrational");
    assert_eq!(v["overhead_lower"]["strict"], true);
    assert_eq!(v["steps_upper_case3"], 16);

    let c6 = family(&dir, &["cycle", "--n", "6"], "c6.json");
    let v = json(&run(&["bounds", s(&c6), "--quiet"]));
    assert_eq!(v["steps_lower"], 5);
    assert_eq!(v["overhead_lower"]["strict"], false);
    assert_eq!(v["overhead_lower"]["exact"], "2");

    let p3 = family(&dir, &["path", "--n", "3"], "p3.json");
    let v = json(&run(&["bounds", s(&p3), "--coupling", "identity", "--quiet"]));
    assert_eq!(v["steps_lower_thm3"]["case"], "case2");
    assert_eq!(v["steps_lower_thm3"]["lower"], 2);
    assert_eq!(v["steps_upper_thm2"], 28);
}

#[test]
fn bounds_with_custom_coupling_and_natural() {
    let dir = TempDir::new().unwrap();
    let p3 = family(&dir, &["path", "--n", "3"], "p3.json");
    let k3 = family(&dir, &["complete", "--n", "3"], "k3.json");
    let c = write(&dir, "c.json", "[[1, 0], [0, 2]]");
    let v = json(&run(&["bounds", s(&p3), "--natural", s(&k3), "--coupling", s(&c), "--quiet"]));
    assert_eq!(v["coupling"], "custom");
    assert_eq!(v["m"], 2);
    assert!(v["steps_lower"].as_u64().unwrap() >= 1);

    let bad = write(&dir, "bad.json", "[[1, 2], [0, 2]]");
    assert_eq!(run(&["bounds", s(&p3), "--coupling", s(&bad)]).status.code(), Some(2));
    assert_eq!(run(&["bounds", s(&p3), "--natural", s(&p3)]).status.code(), Some(2));
}

#[test]
fn scheme_examples_verify() {
    let dir = TempDir::new().unwrap();
    for (args, method, steps) in [
        (vec!["cycle", "--n", "8"], "cycle", 8),
        (vec!["wheel"], "wheel", 12),
        (vec!["lattice", "--l", "4"], "lattice", 48),
        (vec!["path", "--n", "3"], "auto", 4),
    ] {
        let g = family(&dir, &args, "g.json");
        let out = dir.path().join("s.json");
        let r = run(&["scheme", s(&g), "--method", method, "--out", s(&out), "--quiet"]);
        assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
        let doc: SchemeDocument = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(doc.steps.len(), steps, "{args:?}");
        let v = json(&run(&["verify", s(&out), s(&g), "--quiet"]));
        assert_eq!(v["ok"], true);
    }
}

#[test]
fn scheme_preset_mismatch_exits_2() {
    let dir = TempDir::new().unwrap();
    let c6 = family(&dir, &["cycle", "--n", "6"], "c6.json");
    assert_eq!(run(&["scheme", s(&c6), "--method", "wheel"]).status.code(), Some(2));
    let p4 = family(&dir, &["path", "--n", "4"], "p4.json");
    assert_eq!(run(&["scheme", s(&p4), "--method", "cycle"]).status.code(), Some(2));
    assert!(run(&["scheme", s(&p4), "--method", "matchings"]).status.success());
}

#[test]
fn weighted_scheme_verifies() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.json", r#"{"n": 4, "edges": [[0, 1, "2"], [1, 2, "-1/2"], [0, 3, "3"]]}"#);
    let out = dir.path().join("s.json");
    assert!(run(&["scheme", s(&g), "--out", s(&out), "--quiet"]).status.success());
    let v = json(&run(&["verify", s(&out), s(&g)]));
    assert_eq!(v["ok"], true);
}

#[test]
fn verify_failure_exits_1_and_lists_defects() {
    let dir = TempDir::new().unwrap();
    let p3 = family(&dir, &["path", "--n", "3"], "p3.json");
    let k3 = family(&dir, &["complete", "--n", "3"], "k3.json");
    let sch = write(&dir, "s.json", r#"{"n": 3, "steps": [{"t": "1", "signs": [1, 1, 1]}]}"#);
    let r = run(&["verify", s(&sch), s(&k3), "--quiet"]);
    assert_eq!(r.status.code(), Some(0));
    let r = run(&["verify", s(&sch), s(&p3), "--quiet"]);
    assert_eq!(r.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(v["ok"], false);
    assert_eq!(v["defects"].as_array().unwrap().len(), 1);
}

#[test]
fn empty_scheme_verifies_empty_graph() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.json", r#"{"n": 3, "edges": []}"#);
    let sch = write(&dir, "s.json", r#"{"n": 3, "steps": []}"#);
    let r = run(&["verify", s(&sch), s(&g)]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
}

#[test]
fn invalid_inputs_exit_2() {
    let dir = TempDir::new().unwrap();
    let p3 = family(&dir, &["path", "--n", "3"], "p3.json");
    let cases = [
        r#"{"n": 3, "edges": [[1, 0, "1"]]}"#,
        r#"{"n": 3, "edges": [[0, 1, "0"]]}"#,
        r#"{"n": 3, "edges": [[0, 1, "1"], [0, 1, "1"]]}"#,
        r#"{"n": 3, "edges": [[0, 5, "1"]]}"#,
        r#"{"n": 3, "edges": [[0, 1, "x"]]}"#,
        "not json",
    ];
    for text in cases {
        let g = write(&dir, "bad.json", text);
        assert_eq!(run(&["spectrum", s(&g)]).status.code(), Some(2), "{text}");
    }
    let sch = write(&dir, "s.json", r#"{"n": 3, "steps": [{"t": "-1", "signs": [1, 1, 1]}]}"#);
    assert_eq!(run(&["verify", s(&sch), s(&p3)]).status.code(), Some(2));
    let sch = write(&dir, "s.json", r#"{"n": 3, "steps": [{"t": "1", "signs": [1, 0, 1]}]}"#);
    assert_eq!(run(&["verify", s(&sch), s(&p3)]).status.code(), Some(2));
    assert_eq!(run(&["spectrum", "/nonexistent/graph.json"]).status.code(), Some(2));
}

#[test]
fn optimal_tau_examples() {
    let dir = TempDir::new().unwrap();
    let p3 = family(&dir, &["path", "--n", "3"], "p3.json");
    let k3 = family(&dir, &["complete", "--n", "3"], "k3.json");
    let v = json(&run(&["optimal-tau", s(&p3), "--exact", "--quiet"]));
    assert_eq!(v["tau"], "2");
    assert_eq!(v["status"], "optimal");
    let v = json(&run(&["optimal-tau", s(&k3), "--exact", "--quiet"]));
    assert_eq!(v["tau"], "1");
    let v = json(&run(&["optimal-tau", s(&p3), "--quiet"]));
    assert!((v["tau"].as_f64().unwrap() - 2.0).abs() < 1e-9);
}

#[test]
fn optimal_tau_size_limit_exits_2() {
    let dir = TempDir::new().unwrap();
    let big = family(&dir, &["cycle", "--n", "17"], "c17.json");
    assert_eq!(run(&["optimal-tau", s(&big)]).status.code(), Some(2));
    let mid = family(&dir, &["cycle", "--n", "15"], "c15.json");
    assert_eq!(run(&["optimal-tau", s(&mid), "--exact"]).status.code(), Some(2));
}

#[test]
fn min_steps_examples() {
    let dir = TempDir::new().unwrap();
    let p3 = family(&dir, &["path", "--n", "3"], "p3.json");
    let v = json(&run(&["min-steps", s(&p3), "--max-steps", "4", "--quiet"]));
    assert_eq!(v["steps"], 3);
    assert_eq!(v["scheme"]["steps"].as_array().unwrap().len(), 3);
    let v = json(&run(&["min-steps", s(&p3), "--max-steps", "2", "--quiet"]));
    assert!(v["steps"].is_null());
    let c6 = family(&dir, &["cycle", "--n", "6"], "c6.json");
    assert_eq!(run(&["min-steps", s(&c6)]).status.code(), Some(2));
}

#[test]
fn spectrum_reports_clusters() {
    let dir = TempDir::new().unwrap();
    let c6 = family(&dir, &["cycle", "--n", "6"], "c6.json");
    let v = json(&run(&["spectrum", s(&c6), "--quiet"]));
    assert_eq!(v["min_eigenvalue"]["verdict"]["kind"], "integer");
    assert_eq!(v["min_eigenvalue"]["verdict"]["root"], "-2");
    let total: u64 = v["clusters"].as_array().unwrap().iter().map(|c| c["multiplicity"].as_u64().unwrap()).sum();
    assert_eq!(total, 6);
}

#[test]
fn quiet_suppresses_summary_and_output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let w = family(&dir, &["wheel"], "w.json");
    let a = run(&["scheme", s(&w), "--quiet"]);
    let b = run(&["scheme", s(&w), "--quiet"]);
    assert!(a.stderr.is_empty());
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["scheme", s(&w)]);
    assert!(!c.stderr.is_empty());
    assert_eq!(a.stdout, c.stdout);
}

fn rational_string() -> impl Strategy<Value = String> {
    (-50i64..=50, 1i64..=12).prop_filter("nonzero", |(p, _)| *p != 0).prop_map(|(p, q)| format!("{p}/{q}"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_documents_round_trip(n in 2usize..8, picks in prop::collection::vec((0usize..8, 0usize..8, rational_string()), 0..12)) {
        let mut seen = std::collections::BTreeSet::new();
        let edges: Vec<_> = picks
            .into_iter()
            .filter_map(|(a, b, w)| {
                let (k, l) = (a.min(b) % n, a.max(b) % n);
                (k < l && seen.insert((k, l))).then_some((k, l, w))
            })
            .collect();
        let doc = GraphDocument { n, family: None, params: None, edges };
        let g = doc.to_graph().unwrap();
        let back = GraphDocument::from_graph(&g, None);
        let text = serde_json::to_string(&back).unwrap();
        let parsed: GraphDocument = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(parsed.to_graph().unwrap(), g);
        for (k, l, w) in &doc.edges {
            prop_assert_eq!(parsed.to_graph().unwrap().weight(*k, *l), parse_rational(w).unwrap());
        }
    }

    #[test]
    fn scheme_documents_round_trip(n in 1usize..7, raw in prop::collection::vec((1i64..20, 1i64..6, any::<u32>()), 0..6)) {
        let steps = raw
            .into_iter()
            .map(|(p, q, bits)| StepDocument {
                t: format!("{p}/{q}"),
                signs: (0..n).map(|i| if bits >> i & 1 == 1 { -1 } else { 1 }).collect(),
            })
            .collect();
        let doc = SchemeDocument { n, steps };
        let scheme = doc.to_scheme().unwrap();
        let back = SchemeDocument::from_scheme(&scheme);
        let parsed: SchemeDocument = serde_json::from_str(&serde_json::to_string(&back).unwrap()).unwrap();
        prop_assert_eq!(parsed.to_scheme().unwrap(), scheme);
    }
}
