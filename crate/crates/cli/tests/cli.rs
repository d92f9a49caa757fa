use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn testdata() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../testdata")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jetfiber"))
        .args(args)
        .current_dir(testdata())
        .env_remove("JETFIBER_MAX_POINTS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn diagnostic(o: &Output) -> Value {
    let err = String::from_utf8(o.stderr.clone()).unwrap();
    let line = err.lines().rev().find(|l| l.starts_with('{')).expect("json diagnostic on stderr");
    serde_json::from_str(line).unwrap()
}

/// (golden file, arguments). Regenerate with `JETFIBER_BLESS=1`.
const GOLDEN: &[(&str, &[&str])] = &[
    ("jet_node_m3.txt", &["jet", "node.var", "--m", "3"]),
    ("jet_a1_fiber_m2.txt", &["jet", "a1.var", "--m", "2", "--fiber"]),
    ("jet_cusp_offset_fiber_m2.txt", &["jet", "cusp_offset.var", "--m", "2", "--fiber"]),
    ("lct_a2.txt", &["lct", "x^2,y^2,z^3"]),
    ("components_node_m3.json", &["--format", "json", "components", "node", "--m", "3", "--oracle", "5"]),
    ("components_ca2_m3.txt", &["components", "cA:2", "--m", "3"]),
    ("graph_ca2_max5.txt", &["graph", "cA:2", "--max", "5"]),
    ("enum_node_m3_q5.txt", &["enum", "node.var", "--m", "3", "--q", "5", "--targets", "y-x, y+x"]),
    ("enum_cone_m3_q3.json", &["--format", "json", "enum", "cone:4:2", "--m", "3", "--q", "3", "--cone-check"]),
    ("hdv_e2_e6.json", &["--format", "json", "hdv-cert", "--e", "2", "--type", "E6"]),
];

#[test]
fn golden_corpus() {
    let bless = std::env::var_os("JETFIBER_BLESS").is_some();
    let mut mismatched = Vec::new();
    for (name, args) in GOLDEN {
        let out = run(args);
        assert!(out.status.success(), "{name}: {:?}\n{}", out.status, String::from_utf8_lossy(&out.stderr));
        let path = testdata().join("golden").join(name);
        if bless {
            std::fs::write(&path, stdout(&out)).unwrap();
            continue;
        }
        let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden {name}"));
        if expected != stdout(&out) {
            mismatched.push(*name);
        }
    }
    assert!(mismatched.is_empty(), "golden mismatch: {mismatched:?}");
}

#[test]
fn jet_prints_generators() {
    let out = run(&["jet", "a1.var", "--m", "2", "--fiber"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("x#1*y#1 - z#1^2"));
}

#[test]
fn seed_is_echoed_everywhere() {
    let cases: &[&[&str]] = &[
        &["--seed", "7", "--format", "json", "jet", "node", "--m", "2"],
        &["--seed", "7", "--format", "json", "lct", "x^2,y^3"],
        &["--seed", "7", "--format", "json", "components", "cA:1", "--m", "2"],
        &["--seed", "7", "--format", "json", "graph", "cA:1", "--max", "2"],
        &["--seed", "7", "--format", "json", "hdv-cert", "--e", "1", "--type", "A", "--n", "1"],
        &["--seed", "7", "--format", "json", "enum", "node", "--m", "2", "--q", "3"],
        &["--seed", "7", "--format", "json", "verify", "lct"],
    ];
    for args in cases {
        let out = run(args);
        assert!(out.status.success(), "{args:?}");
        let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(v["seed"], 7, "{args:?}");
    }
    let text = run(&["--seed", "7", "lct", "x^2"]);
    assert!(stdout(&text).contains("seed: 7"));
}

#[test]
fn deterministic_given_seed() {
    let args = ["--seed", "3", "--format", "json", "hdv-cert", "--e", "2", "--type", "A2"];
    assert_eq!(stdout(&run(&args)), stdout(&run(&args)));
}

#[test]
fn missing_file_is_usage_error() {
    let out = run(&["jet", "no_such_file.var", "--m", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let d = diagnostic(&out);
    assert_eq!(d["exit_code"], 2);
    assert_eq!(d["seed"], 1);
}

#[test]
fn malformed_inputs_exit_2() {
    for args in [
        &["jet", "bad_point.var", "--m", "1"][..],
        &["jet", "bad_stanza.var", "--m", "1"],
        &["components", "cB:2", "--m", "2"],
        &["lct", "x^2 + y"],
        &["verify", "nonsense"],
        &["hdv-cert", "--e", "2", "--type", "F4"],
        &["enum", "node", "--m", "2", "--q", "4"],
        &["frobnicate"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let kind = diagnostic(&out)["error"].as_str().unwrap().to_string();
        assert!(kind == "usage" || kind == "input", "{args:?}: {kind}");
    }
}

#[test]
fn budget_cap_exits_3() {
    let out = run(&["--max-points", "100", "enum", "cA:2", "--m", "3", "--q", "5"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(diagnostic(&out)["error"], "resource_cap");

    let env = Command::new(env!("CARGO_BIN_EXE_jetfiber"))
        .args(["enum", "cA:2", "--m", "3", "--q", "5"])
        .env("JETFIBER_MAX_POINTS", "100")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(3));
}

#[test]
fn failed_certificate_exits_1() {
    let out = run(&["hdv-cert", "--e", "2", "--type", "D", "--n", "4", "--draws", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(diagnostic(&out)["error"], "verification_failed");
    assert!(stdout(&out).contains("mld verdict: not certified"));
}

#[test]
fn hdv_e6_certificate() {
    let out = run(&["--format", "json", "hdv-cert", "--e", "2", "--type", "E6"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["mld_verdict"], "1");
    assert_eq!(v["dim_minus_ecodim"], 1);
}

#[test]
fn components_json_and_dot_files() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("c.json");
    let out = run(&["components", "cA:2", "--m", "3", "--json", json.to_str().unwrap()]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["schema"], "jetfiber/1");
    assert_eq!(v["count"], 2);
    assert_eq!(v["certified"], true);

    let dot = dir.path().join("g.dot");
    let gjson = dir.path().join("g.json");
    let out = run(&[
        "graph",
        "cA:3",
        "--max",
        "6",
        "--dot",
        dot.to_str().unwrap(),
        "--json",
        gjson.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("digraph jetgraph {") && text.trim_end().ends_with('}'));
    let g: Value = serde_json::from_str(&std::fs::read_to_string(&gjson).unwrap()).unwrap();
    assert_eq!(g["chains"]["chains"], 3);
    assert!(g["chains"]["m0"].as_u64().unwrap() <= 4);
    assert_eq!(g["graph"]["schema"], "jetfiber/1");
}

#[test]
fn lct_reports_witness() {
    let out = run(&["lct", "x^2,y^2,z^3"]);
    let s = stdout(&out);
    assert!(s.starts_with("lct = 4/3\n"), "{s}");
    assert!(s.contains("witness"));
}

#[test]
fn verify_lct_suite_passes() {
    let out = run(&["verify", "lct"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("[PASS]  5"));
}

#[test]
fn verify_hdv_suite_fails_honestly() {
    let out = run(&["verify", "hdv"]);
    assert_eq!(out.status.code(), Some(1));
    let s = stdout(&out);
    assert!(s.contains("[FAIL]  6") && s.contains("[PASS]  7"), "{s}");
}

fn validate(schema: &str, instance: &Value, what: &str) {
    let path = testdata().join("../docs/schemas").join(schema);
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(instance).map(|e| format!("{}: {e}", e.instance_path())).collect();
    assert!(errors.is_empty(), "{what} violates {}: {errors:?}", path.display());
}

#[test]
fn json_outputs_match_shipped_schemas() {
    let cases: &[(&str, &[&str])] = &[
        ("jet.schema.json", &["jet", "node.var", "--m", "3"]),
        ("jet.schema.json", &["jet", "a1.var", "--m", "2", "--fiber"]),
        ("lct.schema.json", &["lct", "x^2,y^2,z^3"]),
        ("component-report.schema.json", &["components", "node", "--m", "3", "--oracle", "5"]),
        ("component-report.schema.json", &["components", "cA:2", "--m", "3"]),
        ("jet-graph.schema.json", &["graph", "cA:2", "--max", "5"]),
        ("jet-graph.schema.json", &["graph", "node", "--max", "4"]),
        ("enum.schema.json", &["enum", "node", "--m", "3", "--q", "5", "--targets", "y-x, y+x"]),
        ("enum.schema.json", &["enum", "cone:4:2", "--m", "2", "--q", "3", "--cone-check"]),
        ("hdv-certificate.schema.json", &["hdv-cert", "--e", "2", "--type", "E6"]),
        ("hdv-certificate.schema.json", &["hdv-cert", "--e", "2", "--type", "E7", "--draws", "1"]),
        ("verify.schema.json", &["verify", "fast"]),
    ];
    for (schema, args) in cases {
        let mut full = vec!["--format", "json"];
        full.extend_from_slice(args);
        let out = run(&full);
        let v: Value = serde_json::from_str(&stdout(&out)).unwrap_or_else(|e| panic!("{args:?}: {e}"));
        validate(schema, &v, &format!("{args:?}"));
    }
    let err = run(&["jet", "missing.var", "--m", "1"]);
    validate("diagnostic.schema.json", &diagnostic(&err), "diagnostic");
    let cap = run(&["--max-points", "1", "enum", "node", "--m", "2", "--q", "3"]);
    validate("diagnostic.schema.json", &diagnostic(&cap), "diagnostic");
}

#[test]
fn component_report_file_matches_schema() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    assert!(run(&["components", "cA:1", "--m", "2", "--json", json.to_str().unwrap()]).status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    validate("component-report.schema.json", &v, "components --json");
}

#[test]
fn schemas_reject_malformed_documents() {
    let path = testdata().join("../docs/schemas/component-report.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(testdata().join("golden/components_node_m3.json")).unwrap()).unwrap();
    assert!(validator.is_valid(&v));
    v["count"] = Value::from("three");
    assert!(!validator.is_valid(&v));
    v["count"] = Value::from(3);
    v["schema"] = Value::from("jetfiber/0");
    assert!(!validator.is_valid(&v));
}
