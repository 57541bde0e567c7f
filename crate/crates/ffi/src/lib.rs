//! C ABI over the dualbent workbench. Handles are opaque and owned by the
//! caller; every call returns a [`DualbentStatus`], with a message for the
//! last failure on the calling thread available from
//! [`dualbent_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use dualbent::analysis::{self, Budget};
use dualbent::constructions::{
    self, BuildOptions, CodeKind, CodeRecipe, LinearCode, PredictedDistribution,
};
use dualbent::zoo::{build_family, instances};
use dualbent::{sss, Elem, Error, Field};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualbentStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    BudgetExceeded = 3,
    HypothesisViolated = 4,
    Mismatch = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// GF(p^n) with its Conway modulus.
pub struct DualbentField(Arc<Field>);

/// A linear code, with its predicted weights when it came from a build.
pub struct DualbentCode {
    code: LinearCode,
    predicted: Option<PredictedDistribution>,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> DualbentStatus {
    match e {
        Error::BudgetExceeded { .. } => DualbentStatus::BudgetExceeded,
        Error::HypothesisViolated(_)
        | Error::ConditionAViolated(_)
        | Error::NonDivisor(_)
        | Error::ZeroLambda
        | Error::NotOrbitClosed
        | Error::DegenerateG0 => DualbentStatus::HypothesisViolated,
        _ => DualbentStatus::InvalidArgument,
    }
}

fn fail(e: Error) -> DualbentStatus {
    set_error(e.to_string());
    status_of(&e)
}

fn guard(f: impl FnOnce() -> DualbentStatus) -> DualbentStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic".into());
            DualbentStatus::Panic
        }
    }
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, DualbentStatus> {
    if s.is_null() {
        set_error("null string".into());
        return Err(DualbentStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("string is not UTF-8".into());
        DualbentStatus::InvalidArgument
    })
}

macro_rules! nonnull {
    ($($p:expr),+) => {
        if $($p.is_null())||+ {
            set_error("null pointer argument".into());
            return DualbentStatus::NullPointer;
        }
    };
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return fail(e),
        }
    };
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn dualbent_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the last error message into `buf` (NUL-terminated, truncated to
/// `len`). Returns the full message length excluding the terminator.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn dualbent_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dualbent_field_new(
    p: u32,
    n: u32,
    out: *mut *mut DualbentField,
) -> DualbentStatus {
    guard(|| {
        nonnull!(out);
        let f = tri!(Field::conway(p, n));
        *out = Box::into_raw(Box::new(DualbentField(f)));
        DualbentStatus::Ok
    })
}

/// # Safety
/// `field` must come from [`dualbent_field_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn dualbent_field_free(field: *mut DualbentField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// # Safety
/// `field` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn dualbent_field_order(field: *const DualbentField) -> u32 {
    if field.is_null() {
        return 0;
    }
    (*field).0.order()
}

#[derive(Clone, Copy)]
enum Op {
    Add,
    Mul,
    Div,
}

unsafe fn field_op(
    field: *const DualbentField,
    a: u32,
    b: u32,
    out: *mut u32,
    op: Op,
) -> DualbentStatus {
    guard(|| {
        nonnull!(field, out);
        let f = &(*field).0;
        let x = tri!(f.elem(a as u64));
        let y = tri!(f.elem(b as u64));
        let z = match op {
            Op::Add => f.add(x, y),
            Op::Mul => f.mul(x, y),
            Op::Div => tri!(f.div(x, y)),
        };
        *out = z.0;
        DualbentStatus::Ok
    })
}

/// # Safety
/// `field` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn dualbent_field_add(
    field: *const DualbentField,
    a: u32,
    b: u32,
    out: *mut u32,
) -> DualbentStatus {
    field_op(field, a, b, out, Op::Add)
}

/// # Safety
/// `field` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn dualbent_field_mul(
    field: *const DualbentField,
    a: u32,
    b: u32,
    out: *mut u32,
) -> DualbentStatus {
    field_op(field, a, b, out, Op::Mul)
}

/// # Safety
/// `field` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn dualbent_field_div(
    field: *const DualbentField,
    a: u32,
    b: u32,
    out: *mut u32,
) -> DualbentStatus {
    field_op(field, a, b, out, Op::Div)
}

/// Builds a code from a bundled instance. `kind` is one of theorem1,
/// theorem2, corollary1, theorem3_S, theorem3_N, corollary2_S, corollary2_N;
/// theorem1 reads its subfield degree from `s1`.
///
/// # Safety
/// `instance` and `kind` must be NUL-terminated strings, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn dualbent_code_build(
    instance: *const c_char,
    kind: *const c_char,
    s1: u32,
    s2: u32,
    lambda: u32,
    out: *mut *mut DualbentCode,
) -> DualbentStatus {
    guard(|| {
        nonnull!(out);
        let name = match text(instance) {
            Ok(s) => s,
            Err(st) => return st,
        };
        let kind = match text(kind) {
            Ok(s) => tri!(s.parse::<CodeKind>()),
            Err(st) => return st,
        };
        let recipe = if kind == CodeKind::Theorem1 {
            CodeRecipe::theorem1(s1)
        } else {
            CodeRecipe::new(kind, s1, s2, lambda)
        };
        let f = tri!(instances::instance(name).and_then(|spec| build_family(&spec)));
        let c = tri!(constructions::build(&f, &recipe, &BuildOptions::default()));
        *out = Box::into_raw(Box::new(DualbentCode {
            code: c.code,
            predicted: Some(c.predicted),
        }));
        DualbentStatus::Ok
    })
}

/// Parses a generator matrix in the "q n k" text format.
///
/// # Safety
/// `matrix` must be a NUL-terminated string, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn dualbent_code_from_matrix(
    matrix: *const c_char,
    out: *mut *mut DualbentCode,
) -> DualbentStatus {
    guard(|| {
        nonnull!(out);
        let s = match text(matrix) {
            Ok(s) => s,
            Err(st) => return st,
        };
        let code = tri!(LinearCode::from_matrix_str(s));
        *out = Box::into_raw(Box::new(DualbentCode {
            code,
            predicted: None,
        }));
        DualbentStatus::Ok
    })
}

/// # Safety
/// `code` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn dualbent_code_free(code: *mut DualbentCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn dualbent_code_params(
    code: *const DualbentCode,
    q: *mut u64,
    n: *mut u64,
    k: *mut u32,
) -> DualbentStatus {
    guard(|| {
        nonnull!(code, q, n, k);
        let c = &(*code).code;
        *q = c.q();
        *n = c.n() as u64;
        *k = c.k() as u32;
        DualbentStatus::Ok
    })
}

/// Enumerates every codeword. Writes the distinct weights (zero included)
/// and their counts in ascending order, and their number to `len`. When
/// `capacity` is short only `len` is written. A zero `codeword_budget`
/// selects the default budget.
///
/// # Safety
/// `weights` and `counts` must hold `capacity` entries; `code`, `len` valid.
#[no_mangle]
pub unsafe extern "C" fn dualbent_code_weight_distribution(
    code: *const DualbentCode,
    codeword_budget: u64,
    weights: *mut u64,
    counts: *mut u64,
    capacity: usize,
    len: *mut usize,
) -> DualbentStatus {
    guard(|| {
        nonnull!(code, len);
        let dist = tri!(analysis::weight_distribution_with(
            &(*code).code,
            budget(codeword_budget),
            None
        ));
        *len = dist.counts.len();
        if capacity < dist.counts.len() || weights.is_null() || counts.is_null() {
            set_error(format!("{} entries needed", dist.counts.len()));
            return DualbentStatus::BufferTooSmall;
        }
        for (i, (&w, &c)) in dist.counts.iter().enumerate() {
            *weights.add(i) = w;
            *counts.add(i) = c;
        }
        DualbentStatus::Ok
    })
}

fn budget(codewords: u64) -> Budget {
    if codewords == 0 {
        Budget::default()
    } else {
        Budget {
            codewords,
            work: u64::MAX,
        }
    }
}

/// Full analysis as a JSON string, to be released with
/// [`dualbent_string_free`].
///
/// # Safety
/// `code` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dualbent_code_report_json(
    code: *const DualbentCode,
    codeword_budget: u64,
    out: *mut *mut c_char,
) -> DualbentStatus {
    guard(|| {
        nonnull!(code, out);
        let h = &*code;
        let report = tri!(analysis::analyze(
            &h.code,
            h.predicted.as_ref(),
            budget(codeword_budget)
        ));
        let js = serde_json::to_string(&report).expect("serializable");
        *out = CString::new(js).expect("no interior NUL").into_raw();
        DualbentStatus::Ok
    })
}

/// Ok when the enumerated distribution equals the prediction, Mismatch
/// otherwise. Codes without a prediction are an invalid argument.
///
/// # Safety
/// `code` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dualbent_code_verify(
    code: *const DualbentCode,
    codeword_budget: u64,
) -> DualbentStatus {
    guard(|| {
        nonnull!(code);
        let h = &*code;
        let Some(pred) = &h.predicted else {
            set_error("code has no predicted distribution".into());
            return DualbentStatus::InvalidArgument;
        };
        let dist = tri!(analysis::weight_distribution_with(
            &h.code,
            budget(codeword_budget),
            None
        ));
        let check = analysis::verify_against_prediction(&dist, pred);
        if check.matches {
            DualbentStatus::Ok
        } else {
            set_error(format!("{} weights differ", check.diff.len()));
            DualbentStatus::Mismatch
        }
    })
}

/// Number of minimal access sets of the scheme on the dual code.
///
/// # Safety
/// `code` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dualbent_sss_minimal_access_sets(
    code: *const DualbentCode,
    out: *mut u64,
) -> DualbentStatus {
    guard(|| {
        nonnull!(code, out);
        *out = tri!(sss::minimal_access_sets(&(*code).code)).len() as u64;
        DualbentStatus::Ok
    })
}

/// Deals `secret` with the given seed and recovers it from all shares.
///
/// # Safety
/// `code` and `recovered` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dualbent_sss_round_trip(
    code: *const DualbentCode,
    secret: u32,
    seed: u64,
    recovered: *mut u32,
) -> DualbentStatus {
    guard(|| {
        nonnull!(code, recovered);
        let scheme = tri!(sss::MasseyScheme::new((*code).code.clone()));
        let d = tri!(scheme.deal(Elem(secret), seed));
        let shares: Vec<(usize, Elem)> = d
            .shares
            .iter()
            .enumerate()
            .map(|(i, &v)| (i + 1, Elem(v)))
            .collect();
        match tri!(scheme.reconstruct(&shares)) {
            sss::Recovery::Secret(s) => {
                *recovered = s.0;
                DualbentStatus::Ok
            }
            sss::Recovery::Unqualified => {
                set_error("shares do not determine the secret".into());
                DualbentStatus::HypothesisViolated
            }
        }
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn dualbent_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
