use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn corpus(name: &str) -> String {
    root().join("corpus").join(name).display().to_string()
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_defmorph"))
        .args(args)
        .env_remove("DEFMORPH_MAX_CAP")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("defmorph-{}-{name}", std::process::id()))
}

#[test]
fn validate_accepts_the_null_algebra() {
    let out = run(&["validate", &corpus("null.json"), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["files"][0]["violations"], Value::Array(Vec::new()));
    assert_eq!(v["convention"].as_str().unwrap().len(), 16);
}

#[test]
fn exit_codes_separate_bad_input_from_invalid_input() {
    let invalid = run(&["validate", &fixture("nonassociative.json"), "--format", "json"]);
    assert_eq!(invalid.status.code(), Some(3));
    let v = json(&invalid);
    assert_eq!(v["result"]["files"][0]["violations"][0]["kind"], "associativity");

    assert_eq!(
        run(&["validate", &fixture("malformed.json")]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["verify-linfty"]).status.code(),
        Some(2),
        "seed is mandatory"
    );
    assert_eq!(
        run(&["--arity-cap", "9", "validate", &corpus("null.json")])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn max_cap_is_raised_by_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_defmorph"))
        .args(["--arity-cap", "6", "validate", &corpus("null.json")])
        .env("DEFMORPH_MAX_CAP", "6")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_linfty_on_the_corpus_counts_word_families() {
    let files: Vec<String> = [
        "null_identity.json",
        "null_zero.json",
        "nilpotent_identity.json",
        "nilpotent_zero.json",
        "nilpotent_projection.json",
    ]
    .iter()
    .map(|f| corpus(f))
    .collect();
    let mut args = vec![
        "verify-linfty",
        "--trials",
        "100",
        "--seed",
        "42",
        "--word-cap",
        "4",
        "--format",
        "json",
    ];
    args.extend(files.iter().map(String::as_str));
    let out = run(&args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let v = json(&out);
    for r in v["result"]["runs"].as_array().unwrap() {
        let families = r["report"]["words_checked"].as_object().unwrap();
        assert!(families.keys().any(|k| k.starts_with("morphism:")));
        assert!(r["report"]["failures"].as_array().unwrap().is_empty());
    }
}

#[test]
fn randomized_output_is_deterministic() {
    let args = [
        "verify-linfty",
        "--trials",
        "8",
        "--seed",
        "7",
        "--format",
        "json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = run(&[
        "oracle-ainfty",
        "--trials",
        "6",
        "--seed",
        "7",
        "--format",
        "json",
    ]);
    let d = run(&[
        "oracle-ainfty",
        "--trials",
        "6",
        "--seed",
        "7",
        "--format",
        "json",
    ]);
    assert_eq!(c.status.code(), Some(0));
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn deform_round_trip() {
    let out = run(&[
        "deform",
        &corpus("null_identity.json"),
        "--order",
        "3",
        "--first-order",
        &corpus("first_order/null_flat.json"),
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["verified_order"], 3);
    let path = scratch("flat.json");
    std::fs::write(&path, serde_json::to_string(&v["result"]).unwrap()).unwrap();
    let p = path.display().to_string();

    let again = run(&[
        "deform",
        &corpus("null_identity.json"),
        "--solution",
        &p,
        "--format",
        "json",
    ]);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(json(&again)["result"], v["result"]);

    let oracle = run(&["oracle-ainfty", &p, "--format", "json"]);
    assert_eq!(oracle.status.code(), Some(0));
    assert_eq!(json(&oracle)["result"]["files"][0]["agree"], true);

    let same = run(&["gauge-equiv", &p, &p, "--format", "json"]);
    assert_eq!(same.status.code(), Some(0));
    assert_eq!(json(&same)["result"]["equivalent"], true);
    std::fs::remove_file(path).ok();
}

#[test]
fn deform_reports_an_obstruction() {
    let out = run(&[
        "deform",
        &corpus("nilpotent_zero.json"),
        "--order",
        "2",
        "--basis-index",
        "3,8",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let o = &v["result"]["obstruction"];
    assert_eq!(o["order"], 2);
    assert_eq!(o["cone_degree"], 3);
    assert!(o["class"].as_array().unwrap().iter().any(|c| c != "0"));
}

#[test]
fn deform_rejects_a_non_cocycle() {
    let path = scratch("not-a-cocycle.json");
    // μ₁(u, u) = u is not a Hochschild cocycle for u·u = v
    std::fs::write(
        &path,
        r#"{"alpha": {"2": [[["1", "0"], ["0", "0"]], [["0", "0"], ["0", "0"]]]}}"#,
    )
    .unwrap();
    let out = run(&[
        "deform",
        &corpus("nilpotent_identity.json"),
        "--first-order",
        &path.display().to_string(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_file(path).ok();
}

#[test]
fn cohomology_table_in_text() {
    let out = run(&["cohomology", &corpus("nilpotent_identity.json")]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text
        .lines()
        .filter(|l| l.trim_start().starts_with(char::is_numeric))
        .collect();
    assert_eq!(rows.len(), 3);
    for r in rows {
        let cols: Vec<&str> = r.split_whitespace().collect();
        assert_eq!(cols[1], cols[2]);
        assert_eq!(cols[3], "true");
    }
}
