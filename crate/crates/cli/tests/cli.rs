use std::path::PathBuf;
use std::process::Command;

use eldef_core::parse_concept;
use tempfile::TempDir;

const CUISINE: &str = "Ontology(
    SubClassOf(ObjectIntersectionOf(Dumplings Entree) Gnocci)
    SubClassOf(Gnocci Dumplings)
    SubClassOf(Dumplings Entree)
)
";

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn eldef_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_eldef"));
    cmd.args(args).env_remove("ELDEF_MAX_DEFINITIONS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let output = cmd.output().expect("binary runs");
    Run {
        code: output.status.code().expect("exit code"),
        out: String::from_utf8(output.stdout).expect("utf-8"),
        err: String::from_utf8(output.stderr).expect("utf-8"),
    }
}

fn eldef(args: &[&str]) -> Run {
    eldef_env(args, &[])
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path: PathBuf = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn family(dir: &TempDir, n: &str) -> String {
    let gen = eldef(&["generate", n]);
    assert_eq!(gen.code, 0);
    write(dir, &format!("family{n}.ofn"), &gen.out)
}

#[test]
fn cuisine_definition_over_gnocci_and_entree() {
    let dir = TempDir::new().unwrap();
    let o = write(&dir, "cuisine.ofn", CUISINE);
    let r = eldef(&["define", "--ontology", &o, "--concept", "ObjectIntersectionOf(Dumplings Entree)", "--signature", "Gnocci,Entree"]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.lines().any(|l| l == "Gnocci"), "{}", r.out);
}

#[test]
fn no_definition_over_entree() {
    let dir = TempDir::new().unwrap();
    let o = write(&dir, "cuisine.ofn", CUISINE);
    let r = eldef(&["define", "--ontology", &o, "--concept", "ObjectIntersectionOf(Dumplings Entree)", "--signature", "Entree"]);
    assert_eq!(r.code, 3);
    assert!(r.out.is_empty());
    assert!(r.err.contains("no definition"), "{}", r.err);
}

#[test]
fn family_has_four_definitions() {
    let dir = TempDir::new().unwrap();
    let o = family(&dir, "1");
    let r = eldef(&["define", "--ontology", &o, "--concept", "A_0", "--signature", "r,s,D_1,D_2"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let lines: Vec<&str> = r.out.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines.contains(&"ObjectIntersectionOf(ObjectSomeValuesFrom(r D_1) ObjectSomeValuesFrom(s D_2))"), "{}", r.out);
}

#[test]
fn all_roles_adds_the_roles() {
    let dir = TempDir::new().unwrap();
    let o = family(&dir, "1");
    let without = eldef(&["define", "--ontology", &o, "--concept", "A_0", "--signature", "D_1,D_2"]);
    assert_eq!(without.code, 3);
    let with = eldef(&["define", "--ontology", &o, "--concept", "A_0", "--signature", "D_1,D_2", "--all-roles"]);
    assert_eq!(with.code, 0);
    assert_eq!(with.out.lines().count(), 4);
}

#[test]
fn exclude_mode_uses_the_rest_of_the_ontology() {
    let dir = TempDir::new().unwrap();
    let o = write(&dir, "cuisine.ofn", CUISINE);
    let r = eldef(&["define", "--ontology", &o, "--concept", "Dumplings", "--exclude", "Dumplings"]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(r.out.lines().next(), Some("Gnocci"));
    assert!(!r.out.contains("Dumplings"));
}

#[test]
fn include_and_exclude_conflict() {
    let dir = TempDir::new().unwrap();
    let o = write(&dir, "cuisine.ofn", CUISINE);
    let r = eldef(&["define", "--ontology", &o, "--concept", "Dumplings", "--exclude", "Dumplings", "--signature", "Gnocci"]);
    assert_eq!(r.code, 1);
}

#[test]
fn json_report_shape() {
    let dir = TempDir::new().unwrap();
    let o = family(&dir, "2");
    let r = eldef(&["define", "--ontology", &o, "--concept", "A_0", "--signature", "r,s,D_1,D_2", "--format", "json"]);
    assert_eq!(r.code, 0);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["format"], 1);
    assert_eq!(v["definable"], true);
    assert_eq!(v["truncated"], false);
    assert!(v["stats"].is_object());
    let defs = v["definitions"].as_array().unwrap();
    assert_eq!(defs.len(), 16);
    for d in defs {
        parse_concept(d.as_str().unwrap()).unwrap();
    }
}

#[test]
fn json_for_an_undefinable_concept() {
    let dir = TempDir::new().unwrap();
    let o = write(&dir, "cuisine.ofn", CUISINE);
    let r = eldef(&["define", "--ontology", &o, "--concept", "Dumplings", "--signature", "Entree", "--format", "json"]);
    assert_eq!(r.code, 3);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["definable"], false);
    assert_eq!(v["definitions"].as_array().unwrap().len(), 0);
}

#[test]
fn outputs_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let o = family(&dir, "2");
    for format in ["text", "json"] {
        let args = ["define", "--ontology", &o, "--concept", "A_0", "--signature", "r,s,D_1,D_2", "--format", format];
        assert_eq!(eldef(&args).out, eldef(&args).out);
    }
    assert_eq!(eldef(&["generate", "3"]).out, eldef(&["generate", "3"]).out);
}

#[test]
fn max_definitions_flag_and_env() {
    let dir = TempDir::new().unwrap();
    let o = family(&dir, "1");
    let args = ["define", "--ontology", &o, "--concept", "A_0", "--signature", "r,s,D_1,D_2"];
    let mut capped = args.to_vec();
    capped.extend(["--max-definitions", "2"]);
    let r = eldef(&capped);
    assert_eq!(r.out.lines().count(), 2);
    assert!(r.err.contains("2 more"), "{}", r.err);
    let r = eldef_env(&args, &[("ELDEF_MAX_DEFINITIONS", "1")]);
    assert_eq!(r.out.lines().count(), 1);
    let r = eldef_env(&capped, &[("ELDEF_MAX_DEFINITIONS", "1")]);
    assert_eq!(r.out.lines().count(), 2);
}

#[test]
fn caps_without_survivors_exit_two() {
    let dir = TempDir::new().unwrap();
    let o = family(&dir, "2");
    let r = eldef(&["define", "--ontology", &o, "--concept", "A_0", "--signature", "r,s,D_1,D_2", "--max-concept-size", "3"]);
    assert_eq!(r.code, 2, "{}{}", r.out, r.err);
}

#[test]
fn semantic_dedup_keeps_one() {
    let dir = TempDir::new().unwrap();
    let o = family(&dir, "1");
    let r = eldef(&["define", "--ontology", &o, "--concept", "A_0", "--signature", "r,s,D_1,D_2", "--semantic-dedup"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.out.lines().count(), 1);
}

#[test]
fn define_with_explanations() {
    let dir = TempDir::new().unwrap();
    let o = write(&dir, "cuisine.ofn", CUISINE);
    let r =
        eldef(&["define", "--ontology", &o, "--concept", "ObjectIntersectionOf(Dumplings Entree)", "--signature", "Gnocci", "--explain"]);
    assert_eq!(r.code, 0);
    assert!(r.out.starts_with("Gnocci\n"), "{}", r.out);
    assert!(r.out.contains("proof of"));
    let j = eldef(&["define", "--ontology", &o, "--concept", "Dumplings", "--signature", "Gnocci", "--explain", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&j.out).unwrap();
    assert_eq!(v["explanations"].as_array().unwrap().len(), 1);
}

#[test]
fn unknown_symbols_warn() {
    let dir = TempDir::new().unwrap();
    let o = write(&dir, "cuisine.ofn", CUISINE);
    let r = eldef(&["define", "--ontology", &o, "--concept", "Dumplings", "--signature", "Gnocci,Pasta,role:serves"]);
    assert_eq!(r.code, 0);
    assert!(r.err.contains("`Pasta` does not occur"), "{}", r.err);
    assert!(!r.err.contains("serves"), "{}", r.err);
}

#[test]
fn entailment_verdicts() {
    let dir = TempDir::new().unwrap();
    let o = write(&dir, "cuisine.ofn", CUISINE);
    let empty = write(&dir, "empty.ofn", "Ontology()");
    assert_eq!(eldef(&["entails", "--ontology", &o, "EquivalentClasses(Dumplings Gnocci)"]).code, 0);
    assert_eq!(eldef(&["entails", "--ontology", &o, "SubClassOf(Entree Dumplings)"]).code, 3);
    assert_eq!(eldef(&["entails", "--ontology", &empty, "SubClassOf(A A)"]).code, 0);
    for system in ["a", "b"] {
        assert_eq!(eldef(&["entails", "--ontology", &o, "--system", system, "SubClassOf(Gnocci Entree)"]).code, 0);
    }
}

#[test]
fn entailment_explanations_name_rules_and_axioms() {
    let dir = TempDir::new().unwrap();
    let o = write(&dir, "cuisine.ofn", CUISINE);
    let r = eldef(&["entails", "--ontology", &o, "--explain", "SubClassOf(Dumplings Gnocci)"]);
    assert_eq!(r.code, 0);
    let lines: Vec<&str> = r.out.lines().collect();
    assert_eq!(lines[0], "entailed");
    assert!(lines[1].ends_with("SubClassOf(Dumplings Gnocci)  [SubClassOf(ObjectIntersectionOf(Dumplings Entree) Gnocci)]"), "{}", r.out);
    assert!(lines[2..].iter().all(|l| l.starts_with("  ")));
}

#[test]
fn explain_cites_the_axiom() {
    let dir = TempDir::new().unwrap();
    let o = write(&dir, "cuisine.ofn", CUISINE);
    let r = eldef(&[
        "explain",
        "--ontology",
        &o,
        "--concept",
        "ObjectIntersectionOf(Dumplings Entree)",
        "--signature",
        "Gnocci",
        "--index",
        "1",
    ]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.starts_with("definition 1: Gnocci\n"), "{}", r.out);
    assert!(r.out.contains("[SubClassOf(ObjectIntersectionOf(Dumplings Entree) Gnocci)]"), "{}", r.out);
}

#[test]
fn explain_self_definition_is_reflexivity() {
    let dir = TempDir::new().unwrap();
    let o = write(&dir, "cuisine.ofn", CUISINE);
    let r = eldef(&["explain", "--ontology", &o, "--concept", "Entree", "--signature", "Entree"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let steps: Vec<&str> = r.out.lines().filter(|l| l.starts_with("  ")).collect();
    assert_eq!(steps.len(), 2, "{}", r.out);
    assert!(steps.iter().all(|l| l.trim() == "R_0: SubClassOf(Entree Entree)"), "{}", r.out);
}

#[test]
fn explain_family_definition() {
    let dir = TempDir::new().unwrap();
    let o = family(&dir, "1");
    let r = eldef(&["explain", "--ontology", &o, "--concept", "A_0", "--signature", "r,s,D_1,D_2", "--index", "1"]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.contains("R_∃"), "{}", r.out);
    assert!(r.out.contains("R_⊓+"), "{}", r.out);
}

#[test]
fn explain_index_out_of_range() {
    let dir = TempDir::new().unwrap();
    let o = family(&dir, "1");
    for index in ["0", "5"] {
        let r = eldef(&["explain", "--ontology", &o, "--concept", "A_0", "--signature", "r,s,D_1,D_2", "--index", index]);
        assert_eq!(r.code, 1);
        assert!(r.err.contains("out of range"), "{}", r.err);
    }
}

#[test]
fn generate_family_files() {
    let one = eldef(&["generate", "1"]);
    assert_eq!(one.code, 0);
    assert_eq!(one.out.matches("EquivalentClasses").count(), 3);
    assert_eq!(eldef(&["generate", "2"]).out.matches("EquivalentClasses").count(), 4);
    assert_eq!(eldef(&["generate", "0"]).code, 1);
}

#[test]
fn classification() {
    let dir = TempDir::new().unwrap();
    let o = write(&dir, "cuisine.ofn", CUISINE);
    let r = eldef(&["classify", "--ontology", &o]);
    assert_eq!(r.code, 0);
    assert_eq!(
        r.out.lines().collect::<Vec<_>>(),
        ["SubClassOf(Dumplings Entree)", "SubClassOf(Dumplings Gnocci)", "SubClassOf(Gnocci Dumplings)", "SubClassOf(Gnocci Entree)"]
    );
}

#[test]
fn input_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.ofn", "Ontology(SubClassOf(A)");
    let r = eldef(&["classify", "--ontology", &bad]);
    assert_eq!(r.code, 1);
    assert!(r.err.contains("bad.ofn"), "{}", r.err);
    assert_eq!(eldef(&["classify", "--ontology", "/nonexistent/x.ofn"]).code, 1);
    let o = write(&dir, "cuisine.ofn", CUISINE);
    assert_eq!(eldef(&["define", "--ontology", &o, "--concept", "ObjectIntersectionOf(", "--signature", "A"]).code, 1);
    assert_eq!(eldef(&["define", "--ontology", &o, "--concept", "A", "--signature", "a b"]).code, 1);
    assert_eq!(eldef(&["frobnicate"]).code, 1);
    assert_eq!(eldef(&["--help"]).code, 0);
}
