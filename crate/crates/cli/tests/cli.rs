use std::process::{Command, Output};

use jsonschema::JSONSchema;
use serde_json::Value;

const GL23: &str = "Perm[(1,4,7)(2,8,5);(1,3,2,6)(4,5,8,7);(3,6)(4,7)(5,8)]";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_equisym"))
        .args(args)
        .env_remove("EQUISYM_MAX_ORDER")
        .env_remove("EQUISYM_MAX_VECTORS")
        .env_remove("EQUISYM_MAX_ORBIT")
        .output()
        .unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn schema_for(def: &str) -> JSONSchema {
    let text = include_str!("../schemas/report.schema.json");
    let mut s: Value = serde_json::from_str(text).unwrap();
    let obj = s.as_object_mut().unwrap();
    obj.remove("anyOf");
    obj.insert("$ref".into(), Value::String(format!("#/$defs/{def}")));
    JSONSchema::compile(&s).unwrap()
}

fn assert_schema(def: &str, v: &Value) {
    let schema = schema_for(def);
    if let Err(errors) = schema.validate(v) {
        let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("{def} output violates the schema: {msgs:#?}");
    }
    let whole: Value = serde_json::from_str(include_str!("../schemas/report.schema.json")).unwrap();
    assert!(JSONSchema::compile(&whole).unwrap().is_valid(v));
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn klein_five_point_action_has_one_class_of_sixty() {
    let v = json(&["classes", "--group", "C2xC2", "--signature", "0;2,2,2,2,2"]);
    assert_schema("classes", &v);
    let classes = v.as_array().unwrap();
    assert_eq!(classes.len(), 1);
    assert_eq!(classes[0]["orbit_size"], 60);
}

#[test]
fn enumerate_counts_and_schema() {
    let v = json(&["enumerate", "--group", "C3", "--signature", "0;3^4"]);
    assert_schema("enumerate", &v);
    assert_eq!(v["genus"], 2);
    assert_eq!(v["count"], 6);
    assert_eq!(v["vectors"].as_array().unwrap().len(), 6);
}

#[test]
fn output_is_deterministic() {
    let args = ["classes", "--group", "D4", "--signature", "0;2,2,2,2,2"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn restrict_with_words() {
    let v = json(&[
        "restrict", "--group", "C4xC2", "--names", "x,y", "--elliptic", "y;y;x;x^-1", "--subgroup", "x^2;y",
    ]);
    assert_schema("restrict", &v);
    assert_eq!(v["subgroup_order"], 4);
    assert_eq!(v["index"], 2);
    assert_eq!(v["surface_genus"], 3);
}

#[test]
fn detect_on_gl23_finds_no_klein_witness() {
    let e = json(&["enumerate", "--group", GL23, "--signature", "0;2,3,8"]);
    let first = &e["vectors"][0]["elliptic"];
    let elliptic: Vec<&str> = first.as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    let v = json(&["detect", "--group", GL23, "--elliptic", &elliptic.join(";"), "--target", "C2xC2"]);
    assert_schema("detect", &v);
    let reports = v["reports"].as_array().unwrap();
    assert!(reports.iter().all(|r| r["verdict"] == "no_witness"));
}

#[test]
fn scan_genus_two_schema() {
    let v = json(&["scan", "--genus", "2"]);
    assert_schema("scan", &v);
}

#[test]
fn catalog_verify_schema() {
    let v = json(&["catalog-verify", "--genus", "2"]);
    assert_schema("catalog", &v);
    assert_eq!(v["passed"], true);
}

#[test]
fn family_pass_and_fail_exit_codes() {
    let out = run(&["family", "--name", "cyclic_2n", "--n", "3"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_schema("family", &v);

    // the dihedral construction degenerates at g = 3
    let out = run(&["family", "--name", "dihedral_8n", "--g", "3"]);
    assert_eq!(code(&out), 1);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_schema("family", &v);
    assert_eq!(v["passed"], false);
}

#[test]
fn markdown_output() {
    let out = run(&["classes", "--group", "C2xC2", "--signature", "0;2,2,2,2,2", "--format", "md"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("| class | representative | orbit size |"));
}

#[test]
fn usage_and_parse_errors_exit_two() {
    let out = run(&["classes", "--group", "C2", "--signature", "0;2,x"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error[signatures]"));

    let out = run(&["classes", "--group", "Q9", "--signature", "0;2,2,2,2,2"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error[group-core]"));

    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["family", "--name", "cyclic_2n"])), 2);
}

#[test]
fn budgets_exit_two() {
    let out = run(&["enumerate", "--group", "C2xC2", "--signature", "0;2^6", "--max-vectors", "3"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error[budget]"));

    let out = Command::new(env!("CARGO_BIN_EXE_equisym"))
        .args(["classes", "--group", "S5", "--signature", "0;2,4,5"])
        .env("EQUISYM_MAX_ORDER", "60")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error[group-core]"));
}

#[test]
fn mathematical_failures_exit_one() {
    // relation fails: product is not the identity
    let out = run(&["restrict", "--group", "C2xC2", "--elliptic", "g1;g1;g2;g2;g1", "--subgroup", "g1"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error[ske]"));

    let out = run(&["enumerate", "--group", "C3", "--signature", "0;2,2,2,2,2"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error[signatures]"));
}
