use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn laxmat(ws: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_laxmat")).arg("--workspace").arg(ws).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("json on stderr")
}

fn put(ws: &Path, file: &str, v: Value) {
    std::fs::write(ws.join(file), serde_json::to_string_pretty(&v).unwrap()).unwrap();
}

/// ℤ in degree 0, ×2 on it, the two halves of the gluing example, a
/// constant diagram over `0 → 1` and a one-term bicomplex.
fn fixture() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    let ws = dir.path();
    put(ws, "z.complex.json", json!({ "window": [0, 0], "ranks": { "0": 1 } }));
    put(ws, "two.chainmap.json", json!({ "source": "z", "target": "z", "components": { "0": [[2]] } }));
    put(ws, "one.chainmap.json", json!({ "source": "z", "target": "z", "components": { "0": [[1]] } }));
    put(
        ws,
        "contra.profunctor.json",
        json!({
            "source": "std:interval", "target": "std:terminal",
            "elements": { "(*,0)": ["x0"], "(*,1)": ["x1"] },
            "right_action": { "u": { "x1": "x0" } }
        }),
    );
    put(
        ws,
        "co.profunctor.json",
        json!({
            "source": "std:terminal", "target": "std:interval",
            "elements": { "(0,*)": ["y0"], "(1,*)": ["y1"] },
            "left_action": { "u": { "y0": "y1" } }
        }),
    );
    put(
        ws,
        "point.diagram.json",
        json!({
            "shape": "std:interval",
            "fibers": { "0": "std:terminal", "1": "std:terminal" },
            "transitions": { "u": { "obmap": { "*": "*" }, "mormap": { "id_*": "id_*" } } }
        }),
    );
    put(ws, "single.bicomplex.json", json!({ "terms": ["z"], "maps": [] }));
    put(ws, "m.matrix.json", json!({ "rows": 2, "cols": 2, "entries": [[2, 4], [6, 8]] }));
    dir
}

#[test]
fn cone_of_doubling_has_z_mod_2_in_degree_zero() {
    let dir = fixture();
    let ws = dir.path();
    let out = laxmat(ws, &["cone", "two", "--out", ws.join("k.complex.json").to_str().unwrap()]);
    assert!(out.status.success());
    let h = stdout_json(&laxmat(ws, &["homology", "k"]));
    assert_eq!(h["0"], json!({ "free": 0, "torsion": [2] }));
    assert_eq!(h["1"], json!({ "free": 0, "torsion": [] }));
    let q = stdout_json(&laxmat(ws, &["quasi-iso", "two"]));
    assert_eq!(q, json!({ "quasi_iso": false, "cone_acyclic": false }));
    let q = stdout_json(&laxmat(ws, &["quasi-iso", "one"]));
    assert_eq!(q, json!({ "quasi_iso": true, "cone_acyclic": true }));
}

#[test]
fn gluing_composite_has_one_element() {
    let dir = fixture();
    let p = stdout_json(&laxmat(dir.path(), &["compose", "contra", "co"]));
    let elements = p["elements"].as_object().unwrap();
    let total: usize = elements.values().map(|v| v.as_array().unwrap().len()).sum();
    assert_eq!(total, 1);
    // the discrete matrix product would count two
    let out = laxmat(dir.path(), &["check", "discrete-multiplication", "contra", "co"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn grothendieck_of_constant_point_is_the_arrow() {
    let dir = fixture();
    let g = stdout_json(&laxmat(dir.path(), &["grothendieck", "point"]));
    assert_eq!(g["total"]["objects"].as_array().unwrap().len(), 2);
    assert_eq!(g["total"]["morphisms"].as_array().unwrap().len(), 3);
    let out = laxmat(dir.path(), &["check", "bilimit-roundtrip", "point"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let out = laxmat(dir.path(), &["check", "semiorthogonal", "co"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn tot_of_one_term_is_the_term() {
    let dir = fixture();
    let t = stdout_json(&laxmat(dir.path(), &["tot", "single"]));
    assert_eq!(t["window"], json!([0, 0]));
    assert_eq!(t["ranks"]["0"], json!(1));
}

#[test]
fn snf_and_hom_complex() {
    let dir = fixture();
    let s = stdout_json(&laxmat(dir.path(), &["snf", "m"]));
    assert_eq!(s["rank"], json!(2));
    assert_eq!(s["invariant_factors"], json!([2, 4]));
    let h = stdout_json(&laxmat(dir.path(), &["hom-complex", "z", "z"]));
    assert_eq!(h["ranks"]["0"], json!(1));
}

#[test]
fn unknown_name_is_a_validation_error() {
    let dir = fixture();
    let out = laxmat(dir.path(), &["compose", "contra", "nothing"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_json(&out);
    assert_eq!(err["error"]["code"], json!(2));
    assert!(err["error"]["message"].as_str().unwrap().contains("nothing"));
}

#[test]
fn corrupted_action_is_rejected_at_load() {
    let dir = fixture();
    put(
        dir.path(),
        "bad.profunctor.json",
        json!({
            "source": "std:terminal", "target": "std:interval",
            "elements": { "(0,*)": ["y0"], "(1,*)": ["y1"] },
            "left_action": { "u": { "y0": "nowhere" } }
        }),
    );
    let out = laxmat(dir.path(), &["collage", "co"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_json(&out)["error"]["invariant"].is_string());
}

#[test]
fn malformed_json_and_usage_errors_exit_2() {
    let dir = fixture();
    std::fs::write(dir.path().join("junk.complex.json"), "{ not json").unwrap();
    assert_eq!(laxmat(dir.path(), &["homology", "z"]).status.code(), Some(2));
    let clean = fixture();
    assert_eq!(laxmat(clean.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(laxmat(clean.path(), &["check", "no-such-property", "--randomized", "3"]).status.code(), Some(2));
    assert_eq!(laxmat(clean.path(), &["cone", "two", "--randomized", "3"]).status.code(), Some(2));
    assert_eq!(laxmat(clean.path(), &["check", "snf"]).status.code(), Some(2));
}

#[test]
fn caps_exit_3() {
    let dir = fixture();
    let out = laxmat(dir.path(), &["--max-objects", "1", "grothendieck", "point"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stderr_json(&out)["error"]["code"], json!(3));
    let out = laxmat(dir.path(), &["--max-rank", "0", "homology", "z"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = fixture();
    let runs: [&[&str]; 5] = [
        &["check", "monoid-laws", "--randomized", "15", "--seed", "7"],
        &["check", "cone-bijection", "--randomized", "10", "--seed", "3"],
        &["check", "block-multiply", "--randomized", "6", "--seed", "11"],
        &["compose", "co", "contra"],
        &["cone", "two"],
    ];
    for args in runs {
        let a = laxmat(dir.path(), args);
        let b = laxmat(dir.path(), args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!a.stdout.is_empty());
    }
    let a = laxmat(dir.path(), &["check", "snf", "--randomized", "5", "--seed", "1"]);
    let b = laxmat(dir.path(), &["check", "snf", "--randomized", "5", "--seed", "2"]);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = fixture();
    let target = dir.path().join("result.json");
    let printed = laxmat(dir.path(), &["compose", "co", "contra"]);
    let written = laxmat(dir.path(), &["compose", "co", "contra", "--out", target.to_str().unwrap()]);
    assert!(written.status.success());
    assert!(written.stdout.is_empty());
    assert_eq!(std::fs::read(target).unwrap(), printed.stdout);
}
