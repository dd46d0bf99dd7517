//! C ABI over `laxmat`.
//!
//! Objects cross the boundary as opaque handles created by `*_from_json`
//! or by an operation and released with the matching `*_free`. Every entry
//! point returns a [`LaxStatus`]; on failure a message is available from
//! [`laxmat_last_error`] until the next failing call on the same thread.
//! Strings handed out by the library must be released with
//! [`laxmat_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use laxmat::cli::{run_randomized, Limits, MatrixDoc};
use laxmat::collage::collage_of_profunctor;
use laxmat::fincat::NoCategories;
use laxmat::k0chain::snf::smith_normal_form;
use laxmat::k0chain::{cone, homology_all, is_quasi_iso, ChainComplex, ChainMap, ChainMapDoc, ComplexDoc, ComplexError, IntMatrix, JsonInt, NoComplexes};
use laxmat::profunctor::{compose_profunctors, Profunctor, ProfunctorDoc, ProfunctorError};

/// Result of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LaxStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed JSON or a document of the wrong layout.
    Parse = 3,
    /// Well-formed input that breaks an invariant.
    Validation = 4,
    /// Inputs that do not fit together, such as non-composable profunctors.
    Mismatch = 5,
    UnknownProperty = 6,
    Panic = 7,
}

pub struct LaxProfunctor {
    inner: Profunctor,
}

pub struct LaxComplex {
    inner: ChainComplex,
}

pub struct LaxChainMap {
    inner: ChainMap,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

type Failure = (LaxStatus, String);

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> LaxStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LaxStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("internal panic: {msg}"));
            LaxStatus::Panic
        }
    }
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err((LaxStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(s).to_str().map_err(|e| (LaxStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| (LaxStatus::NullPointer, format!("{what} is null")))
}

fn out_ptr<T>(out: *mut T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        Err((LaxStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

fn parse<T: serde::de::DeserializeOwned>(json: &str) -> Result<T, Failure> {
    serde_json::from_str(json).map_err(|e| (LaxStatus::Parse, e.to_string()))
}

fn json_string(v: &impl serde::Serialize) -> Result<*mut c_char, Failure> {
    let s = serde_json::to_string(v).map_err(|e| (LaxStatus::Panic, e.to_string()))?;
    Ok(CString::new(s).expect("json has no nul").into_raw())
}

fn profunctor_failure(e: ProfunctorError) -> Failure {
    let status = match e {
        ProfunctorError::ShapeMismatch(_) | ProfunctorError::CompositionMismatch(_) => LaxStatus::Mismatch,
        _ => LaxStatus::Validation,
    };
    (status, e.to_string())
}

fn complex_failure(e: ComplexError) -> Failure {
    let status = match e {
        ComplexError::Parse(_) => LaxStatus::Parse,
        ComplexError::Mismatch(_) | ComplexError::BlockMismatch(_) => LaxStatus::Mismatch,
        _ => LaxStatus::Validation,
    };
    (status, e.to_string())
}

/// The message of the last failure on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn laxmat_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn laxmat_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ----- profunctors -----

/// Parses a profunctor document. Categories may be inline or `std:` names.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn laxmat_profunctor_from_json(json: *const c_char, out: *mut *mut LaxProfunctor) -> LaxStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let doc: ProfunctorDoc = parse(text(json, "json")?)?;
        let p = Profunctor::from_doc(&doc, &NoCategories).map_err(profunctor_failure)?;
        *out = Box::into_raw(Box::new(LaxProfunctor { inner: p }));
        Ok(())
    })
}

/// # Safety
/// `p` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn laxmat_profunctor_free(p: *mut LaxProfunctor) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// The document of `p` with inline categories.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn laxmat_profunctor_to_json(p: *const LaxProfunctor, out: *mut *mut c_char) -> LaxStatus {
    guard(|| {
        out_ptr(out, "out")?;
        *out = json_string(&handle(p, "profunctor")?.inner.to_doc(true))?;
        Ok(())
    })
}

/// Total number of elements over all pairs of objects.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn laxmat_profunctor_element_count(p: *const LaxProfunctor, out: *mut usize) -> LaxStatus {
    guard(|| {
        out_ptr(out, "out")?;
        *out = handle(p, "profunctor")?.inner.total_elements();
        Ok(())
    })
}

/// The coend composite `n ∘ m`.
///
/// # Safety
/// `n` and `m` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn laxmat_profunctor_compose(
    n: *const LaxProfunctor,
    m: *const LaxProfunctor,
    out: *mut *mut LaxProfunctor,
) -> LaxStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let p = compose_profunctors(&handle(n, "n")?.inner, &handle(m, "m")?.inner).map_err(profunctor_failure)?;
        *out = Box::into_raw(Box::new(LaxProfunctor { inner: p }));
        Ok(())
    })
}

/// The collage of `p` as a JSON document.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn laxmat_profunctor_collage_json(p: *const LaxProfunctor, out: *mut *mut c_char) -> LaxStatus {
    guard(|| {
        out_ptr(out, "out")?;
        *out = json_string(&collage_of_profunctor(&handle(p, "profunctor")?.inner).to_doc())?;
        Ok(())
    })
}

// ----- chain complexes -----

/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn laxmat_complex_from_json(json: *const c_char, out: *mut *mut LaxComplex) -> LaxStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let doc: ComplexDoc = parse(text(json, "json")?)?;
        let c = ChainComplex::from_doc(&doc).map_err(complex_failure)?;
        *out = Box::into_raw(Box::new(LaxComplex { inner: c }));
        Ok(())
    })
}

/// # Safety
/// `c` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn laxmat_complex_free(c: *mut LaxComplex) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn laxmat_complex_to_json(c: *const LaxComplex, out: *mut *mut c_char) -> LaxStatus {
    guard(|| {
        out_ptr(out, "out")?;
        *out = json_string(&handle(c, "complex")?.inner.to_doc())?;
        Ok(())
    })
}

/// Homology in every degree of the window, keyed by degree.
///
/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn laxmat_complex_homology_json(c: *const LaxComplex, out: *mut *mut c_char) -> LaxStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let groups: std::collections::BTreeMap<String, _> =
            homology_all(&handle(c, "complex")?.inner).into_iter().map(|(n, g)| (n.to_string(), g)).collect();
        *out = json_string(&groups)?;
        Ok(())
    })
}

/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn laxmat_complex_euler_char(c: *const LaxComplex, out: *mut i64) -> LaxStatus {
    guard(|| {
        out_ptr(out, "out")?;
        *out = handle(c, "complex")?.inner.euler_char();
        Ok(())
    })
}

/// Parses a chain map whose source and target are given inline.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn laxmat_chain_map_from_json(json: *const c_char, out: *mut *mut LaxChainMap) -> LaxStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let doc: ChainMapDoc = parse(text(json, "json")?)?;
        let f = ChainMap::from_doc(&doc, &NoComplexes, None).map_err(complex_failure)?;
        *out = Box::into_raw(Box::new(LaxChainMap { inner: f }));
        Ok(())
    })
}

/// # Safety
/// `f` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn laxmat_chain_map_free(f: *mut LaxChainMap) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// The mapping cone of `f`.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn laxmat_chain_map_cone(f: *const LaxChainMap, out: *mut *mut LaxComplex) -> LaxStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let c = cone(&handle(f, "chain map")?.inner).complex;
        *out = Box::into_raw(Box::new(LaxComplex { inner: c }));
        Ok(())
    })
}

/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn laxmat_chain_map_is_quasi_iso(f: *const LaxChainMap, out: *mut bool) -> LaxStatus {
    guard(|| {
        out_ptr(out, "out")?;
        *out = is_quasi_iso(&handle(f, "chain map")?.inner);
        Ok(())
    })
}

// ----- matrices and checks -----

/// Smith normal form of a `{rows, cols, entries}` matrix document. The
/// result holds `rank`, `invariant_factors`, `s`, `u` and `v`.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn laxmat_snf_json(json: *const c_char, out: *mut *mut c_char) -> LaxStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let doc: MatrixDoc = parse(text(json, "json")?)?;
        let m = IntMatrix::from_json_rows(doc.rows, doc.cols, &doc.entries).map_err(|e| (LaxStatus::Validation, e))?;
        let snf = smith_normal_form(&m);
        let factors: Vec<JsonInt> = snf.invariant_factors().iter().map(JsonInt::from).collect();
        *out = json_string(&serde_json::json!({
            "rank": snf.rank(),
            "invariant_factors": factors,
            "s": MatrixDoc::of(&snf.s),
            "u": MatrixDoc::of(&snf.u),
            "v": MatrixDoc::of(&snf.v),
        }))?;
        Ok(())
    })
}

/// Runs a named check on `n` seeded random instances. `passed` receives the
/// verdict and `out` the full report.
///
/// # Safety
/// `property` must be a nul-terminated string; `passed` and `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn laxmat_check_randomized(
    property: *const c_char,
    n: usize,
    seed: u64,
    passed: *mut bool,
    out: *mut *mut c_char,
) -> LaxStatus {
    guard(|| {
        out_ptr(passed, "passed")?;
        out_ptr(out, "out")?;
        let property = text(property, "property")?;
        let limits = Limits { objects: 6, elements: 8, rank: 32 };
        let report = run_randomized(property, n, seed, limits).map_err(|e| (LaxStatus::UnknownProperty, e.message))?;
        *passed = report.passed();
        *out = json_string(&report)?;
        Ok(())
    })
}
