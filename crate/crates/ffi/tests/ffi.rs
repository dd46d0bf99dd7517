use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use laxmat_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    laxmat_string_free(s);
    out
}

fn last_error() -> String {
    let p = laxmat_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

const CONTRA: &str = r#"{"source":"std:interval","target":"std:terminal",
  "elements":{"(*,0)":["x0"],"(*,1)":["x1"]},"right_action":{"u":{"x1":"x0"}}}"#;
const CO: &str = r#"{"source":"std:terminal","target":"std:interval",
  "elements":{"(0,*)":["y0"],"(1,*)":["y1"]},"left_action":{"u":{"y0":"y1"}}}"#;
const DOUBLING: &str = r#"{"source":{"window":[0,0],"ranks":{"0":1}},"target":{"window":[0,0],"ranks":{"0":1}},"components":{"0":[[2]]}}"#;

#[test]
fn gluing_composite_through_handles() {
    unsafe {
        let (mut n, mut m, mut p) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
        assert_eq!(laxmat_profunctor_from_json(cstr(CONTRA).as_ptr(), &mut n), LaxStatus::Ok);
        assert_eq!(laxmat_profunctor_from_json(cstr(CO).as_ptr(), &mut m), LaxStatus::Ok);
        assert_eq!(laxmat_profunctor_compose(n, m, &mut p), LaxStatus::Ok);
        let mut count = 0usize;
        assert_eq!(laxmat_profunctor_element_count(p, &mut count), LaxStatus::Ok);
        assert_eq!(count, 1);
        let mut json = ptr::null_mut();
        assert_eq!(laxmat_profunctor_to_json(p, &mut json), LaxStatus::Ok);
        let doc: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
        assert_eq!(doc["elements"].as_object().unwrap().len(), 1);
        // collage of one factor
        assert_eq!(laxmat_profunctor_collage_json(m, &mut json), LaxStatus::Ok);
        assert!(take(json).contains("\"total\""));
        // composing in an order that does not match is a mismatch
        let mut q = ptr::null_mut();
        assert_eq!(laxmat_profunctor_compose(n, n, &mut q), LaxStatus::Mismatch);
        assert!(q.is_null());
        assert!(!last_error().is_empty());
        laxmat_profunctor_free(p);
        laxmat_profunctor_free(m);
        laxmat_profunctor_free(n);
    }
}

#[test]
fn cone_and_homology() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(laxmat_chain_map_from_json(cstr(DOUBLING).as_ptr(), &mut f), LaxStatus::Ok);
        let mut iso = true;
        assert_eq!(laxmat_chain_map_is_quasi_iso(f, &mut iso), LaxStatus::Ok);
        assert!(!iso);
        let mut k = ptr::null_mut();
        assert_eq!(laxmat_chain_map_cone(f, &mut k), LaxStatus::Ok);
        let mut chi = 99;
        assert_eq!(laxmat_complex_euler_char(k, &mut chi), LaxStatus::Ok);
        assert_eq!(chi, 0);
        let mut json = ptr::null_mut();
        assert_eq!(laxmat_complex_homology_json(k, &mut json), LaxStatus::Ok);
        let h: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
        assert_eq!(h["0"], serde_json::json!({ "free": 0, "torsion": [2] }));
        assert_eq!(h["1"], serde_json::json!({ "free": 0, "torsion": [] }));
        // round trip the cone through its document
        assert_eq!(laxmat_complex_to_json(k, &mut json), LaxStatus::Ok);
        let text = take(json);
        let mut k2 = ptr::null_mut();
        assert_eq!(laxmat_complex_from_json(cstr(&text).as_ptr(), &mut k2), LaxStatus::Ok);
        laxmat_complex_free(k2);
        laxmat_complex_free(k);
        laxmat_chain_map_free(f);
    }
}

#[test]
fn snf_and_checks() {
    unsafe {
        let mut json = ptr::null_mut();
        let m = cstr(r#"{"rows":2,"cols":2,"entries":[[2,4],[6,8]]}"#);
        assert_eq!(laxmat_snf_json(m.as_ptr(), &mut json), LaxStatus::Ok);
        let s: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
        assert_eq!(s["invariant_factors"], serde_json::json!([2, 4]));
        let mut passed = false;
        assert_eq!(laxmat_check_randomized(cstr("snf").as_ptr(), 20, 5, &mut passed, &mut json), LaxStatus::Ok);
        assert!(passed);
        let first = take(json);
        assert_eq!(laxmat_check_randomized(cstr("snf").as_ptr(), 20, 5, &mut passed, &mut json), LaxStatus::Ok);
        assert_eq!(take(json), first);
        assert_eq!(laxmat_check_randomized(cstr("nope").as_ptr(), 1, 0, &mut passed, &mut json), LaxStatus::UnknownProperty);
    }
}

#[test]
fn error_statuses() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(laxmat_profunctor_from_json(ptr::null(), &mut p), LaxStatus::NullPointer);
        assert_eq!(laxmat_profunctor_from_json(cstr("{").as_ptr(), &mut p), LaxStatus::Parse);
        let bad = CO.replace("\"y1\"}}", "\"nowhere\"}}");
        assert_eq!(laxmat_profunctor_from_json(cstr(&bad).as_ptr(), &mut p), LaxStatus::Validation);
        assert!(last_error().contains("`u`"), "{}", last_error());
        assert_eq!(laxmat_profunctor_from_json(cstr(CO).as_ptr(), ptr::null_mut()), LaxStatus::NullPointer);
        let invalid = [0xffu8, 0];
        assert_eq!(laxmat_profunctor_from_json(invalid.as_ptr() as *const c_char, &mut p), LaxStatus::InvalidUtf8);
        let mut count = 0;
        assert_eq!(laxmat_profunctor_element_count(ptr::null(), &mut count), LaxStatus::NullPointer);
        let mut c = ptr::null_mut();
        let not_square = r#"{"window":[0,2],"ranks":{"0":1,"1":1,"2":1},"differentials":{"1":[[1]],"2":[[1]]}}"#;
        assert_eq!(laxmat_complex_from_json(cstr(not_square).as_ptr(), &mut c), LaxStatus::Validation);
        assert!(p.is_null() && c.is_null());
        laxmat_string_free(ptr::null_mut());
        laxmat_profunctor_free(ptr::null_mut());
    }
}

/// Compiles a C program against the generated header and the shared
/// library and runs it.
#[test]
fn c_program_links_and_runs() {
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let lib_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    assert!(lib_dir.join("liblaxmat_ffi.so").exists() || lib_dir.join("liblaxmat_ffi.dylib").exists(), "shared library in {lib_dir:?}");
    let out_dir = tempfile::tempdir().unwrap();
    let exe = out_dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(crate_dir.join("tests/smoke.c"))
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg("-L")
        .arg(&lib_dir)
        .arg("-llaxmat_ffi")
        .arg("-o")
        .arg(&exe)
        .status()
        .expect("a C compiler");
    assert!(status.success());
    let out = Command::new(&exe).env("LD_LIBRARY_PATH", &lib_dir).env("DYLD_LIBRARY_PATH", &lib_dir).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "composite elements: 1");
}
