use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn ontocdm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ontocdm")).args(args).output().expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn transform_reports_counts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("gcdm.json");
    let o = ontocdm(&["transform", path(&fixture("mini_tambis.json")), "--roots", "protein", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let stderr = String::from_utf8_lossy(&o.stderr);
    assert!(stderr.contains("entity types: 19, relationships: 7, attributes: 17, generalizations: 12"));
    let model: Value = serde_json::from_slice(&std::fs::read(out).unwrap()).unwrap();
    assert_eq!(model["entityTypes"].as_array().unwrap().len(), 19);
}

#[test]
fn transform_unknown_root() {
    let o = ontocdm(&["transform", path(&fixture("mini_tambis.json")), "--roots", "unicorn"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unicorn"));
}

#[test]
fn transform_empty_ontology() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("empty.json");
    std::fs::write(&input, r#"{"iri": "urn:empty"}"#).unwrap();
    let o = ontocdm(&["transform", path(&input)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr)
        .contains("entity types: 0, relationships: 0, attributes: 0, generalizations: 0"));
}

#[test]
fn strict_mode_rejects_unsupported_construct() {
    let input = fixture("transitive.owl");
    let strict = ontocdm(&["transform", path(&input), "--strict"]);
    assert_eq!(strict.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&strict.stderr).contains("owl:TransitiveProperty"));
    let lenient = ontocdm(&["transform", path(&input)]);
    assert_eq!(lenient.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&lenient.stderr).contains("UNSUPPORTED_CONSTRUCT"));
}

#[test]
fn validate_repair_revalidate() {
    let dir = tempfile::tempdir().unwrap();
    let repaired = dir.path().join("repaired.json");
    let annotations = fixture("mini_tambis.annotations.json");
    let o = ontocdm(&[
        "validate",
        path(&fixture("mini_tambis.gcdm.json")),
        "--annotations",
        path(&annotations),
        "--repairs",
        "apply",
        "--out",
        path(&repaired),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let diagnostics: Value = serde_json::from_slice(&o.stdout).unwrap();
    let rule1: Vec<&str> = diagnostics
        .as_array()
        .unwrap()
        .iter()
        .filter(|d| d["code"] == "RULE1")
        .map(|d| d["subjects"][0].as_str().unwrap())
        .collect();
    assert!(rule1.contains(&"accession-number") && rule1.contains(&"protein-name"));

    let again = ontocdm(&["validate", path(&repaired), "--annotations", path(&annotations)]);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(serde_json::from_slice::<Value>(&again.stdout).unwrap(), Value::Array(vec![]));
    let golden: Value = serde_json::from_slice(&std::fs::read(fixture("mini_tambis.repaired.json")).unwrap()).unwrap();
    let written: Value = serde_json::from_slice(&std::fs::read(&repaired).unwrap()).unwrap();
    assert_eq!(written, golden);
}

#[test]
fn validate_with_empty_annotations() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.json");
    std::fs::write(&empty, "").unwrap();
    let o = ontocdm(&["validate", path(&fixture("mini_tambis.gcdm.json")), "--annotations", path(&empty)]);
    assert_eq!(o.status.code(), Some(0));
    let d: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(d.as_array().unwrap().iter().all(|d| d["code"] == "MISSING_ANNOTATION" && d["severity"] == "warning"));
}

#[test]
fn validate_malformed_annotations() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"[{"concept": "x", "rigidity": "R"}]"#).unwrap();
    let o = ontocdm(&["validate", path(&fixture("mini_tambis.gcdm.json")), "--annotations", path(&bad)]);
    assert_eq!(o.status.code(), Some(2));
}

fn synthetic_ontology(n: usize) -> String {
    let classes: Vec<String> = (0..n).map(|i| format!(r#"{{"name": "c{i}", "kind": "named"}}"#)).collect();
    let subs: Vec<String> = (1..n).map(|i| format!(r#"["c{i}", "c{}"]"#, i - 1)).collect();
    let mut props: Vec<String> = (0..n / 5)
        .map(|i| format!(r#"{{"name": "r{i}", "kind": "mutual", "domain": "c{i}", "range": "c{}"}}"#, i + 1))
        .collect();
    props.extend((0..n / 5 + 1).map(|i| format!(r#"{{"name": "a{i}", "kind": "intrinsic", "domain": "c{i}", "range": "string"}}"#)));
    format!(
        r#"{{"iri": "urn:s{n}", "classes": [{}], "properties": [{}], "subsumptions": [{}]}}"#,
        classes.join(","),
        props.join(","),
        subs.join(",")
    )
}

#[test]
fn metrics_regression_over_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let mut manifest = Vec::new();
    for n in [5, 10, 15] {
        let onto = dir.path().join(format!("o{n}.json"));
        let model = dir.path().join(format!("m{n}.json"));
        std::fs::write(&onto, synthetic_ontology(n)).unwrap();
        let o = ontocdm(&["transform", path(&onto), "--out", path(&model)]);
        assert_eq!(o.status.code(), Some(0));
        manifest.push(serde_json::json!({"ontology_path": format!("o{n}.json"), "model_path": format!("m{n}.json")}));
    }
    let mpath = dir.path().join("pairs.json");
    std::fs::write(&mpath, serde_json::to_string(&manifest).unwrap()).unwrap();
    let o = ontocdm(&["metrics", "--pairs", path(&mpath)]);
    assert_eq!(o.status.code(), Some(0));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    let r2 = r["regression"]["table"]["classesEntityTypes"]["rSquared"].as_f64().unwrap();
    assert!((r2 - 1.0).abs() < 1e-9);

    std::fs::write(&mpath, serde_json::to_string(&manifest[..1]).unwrap()).unwrap();
    let single = ontocdm(&["metrics", "--pairs", path(&mpath)]);
    assert_eq!(single.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&single.stderr).contains("degenerate"));
}

#[test]
fn metrics_gold_equals_generated() {
    let model = fixture("mini_tambis.gcdm.json");
    let lexicon = fixture("mini_lexicon.txt");
    let o = ontocdm(&["metrics", "--gold", path(&model), "--generated", path(&model), "--lexicon", path(&lexicon)]);
    assert_eq!(o.status.code(), Some(0));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    for kind in ["entityTypes", "generalizations", "relationships", "attributes"] {
        assert_eq!(r["accuracy"][kind]["recall"], 1.0);
        assert_eq!(r["accuracy"][kind]["precision"], 1.0);
    }
    assert!(r["lexical"].as_object().unwrap().len() == 1);
}

#[test]
fn metrics_without_inputs_is_usage_error() {
    assert_eq!(ontocdm(&["metrics"]).status.code(), Some(2));
}

#[test]
fn emit_is_deterministic() {
    let model = fixture("mini_tambis.repaired.json");
    let a = ontocdm(&["emit", path(&model), "--format", "plantuml"]);
    let b = ontocdm(&["emit", path(&model), "--format", "plantuml"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, std::fs::read(fixture("mini_tambis.repaired.puml")).unwrap());
}
