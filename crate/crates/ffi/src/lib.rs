//! C interface. Inputs and outputs are JSON strings in the same formats as
//! the command line; expansions are held behind an opaque handle.
//!
//! Every function returns an [`HcfStatus`]. Strings handed out through
//! `char **` parameters are owned by the caller and released with
//! [`hcf_string_free`]. After a failure, [`hcf_last_error`] describes it.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hypercf::cfrac::Expansion;
use hypercf::io::{self, CurveFile, LineRecord};
use hypercf::moments::{glue_tau, moments_backward, moments_forward, HankelTable};
use hypercf::somos::{somos_k_find, FindOptions, Sequence, SomosRelation};
use hypercf::{repro, verify, Error};

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HcfStatus {
    Ok = 0,
    NullArgument = 1,
    /// Malformed JSON or text that is not UTF-8.
    Parse = 2,
    /// Well-formed input that does not describe a valid object.
    InvalidInput = 3,
    /// The expansion or orbit hits a vanishing denominator.
    Singular = 4,
    /// A check ran and failed.
    VerificationFailed = 5,
    /// Not enough terms for the request.
    InsufficientData = 6,
    /// A search finished without a result.
    NotFound = 7,
    Internal = 8,
}

/// Opaque continued-fraction expansion.
pub struct HcfExpansion {
    inner: Expansion,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn status_of(e: &Error) -> HcfStatus {
    match e {
        Error::Parse(_) | Error::Json(_) => HcfStatus::Parse,
        Error::InvalidCurve(_)
        | Error::InvalidSeed(_)
        | Error::InvalidArgument(_)
        | Error::Io(_) => HcfStatus::InvalidInput,
        Error::Singular { .. }
        | Error::SingularOrbit { .. }
        | Error::DivisionByZero
        | Error::Pole { .. } => HcfStatus::Singular,
        Error::Degenerate(_) => HcfStatus::Singular,
        Error::InsufficientData { .. } => HcfStatus::InsufficientData,
        Error::VerificationFailed(_) => HcfStatus::VerificationFailed,
    }
}

struct Fail(HcfStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> HcfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HcfStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal error (panic)");
            HcfStatus::Internal
        }
    }
}

fn input<'a>(s: *const c_char) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(Fail(HcfStatus::NullArgument, "null string argument".into()));
    }
    // SAFETY: the caller passes a NUL-terminated string that outlives the call.
    unsafe { CStr::from_ptr(s) }
        .to_str()
        .map_err(|_| Fail(HcfStatus::Parse, "argument is not UTF-8".into()))
}

fn output(out: *mut *mut c_char, text: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(HcfStatus::NullArgument, "null output pointer".into()));
    }
    let c =
        CString::new(text).map_err(|_| Fail(HcfStatus::Internal, "output contains NUL".into()))?;
    // SAFETY: checked non-null; the caller provides a writable pointer slot.
    unsafe { *out = c.into_raw() };
    Ok(())
}

fn expansion<'a>(h: *const HcfExpansion) -> Result<&'a Expansion, Fail> {
    if h.is_null() {
        return Err(Fail(
            HcfStatus::NullArgument,
            "null expansion handle".into(),
        ));
    }
    // SAFETY: non-null handles come from `hcf_expansion_new` and are live
    // until `hcf_expansion_free`.
    Ok(unsafe { &(*h).inner })
}

/// Message for the last failure on this thread, or NULL. Valid until the
/// next failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn hcf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn hcf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must be NULL or a string returned through an output parameter of
/// this library that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn hcf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds an expansion from a curve document
/// `{"genus", "A", "R", "P0", "Q0"}`.
///
/// # Safety
/// `curve_json` must be NULL or NUL-terminated; `out` must be NULL or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn hcf_expansion_new(
    curve_json: *const c_char,
    out: *mut *mut HcfExpansion,
) -> HcfStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail(HcfStatus::NullArgument, "null output pointer".into()));
        }
        let file: CurveFile = io::parse_json(input(curve_json)?)?;
        let inner = file.expansion()?;
        *out = Box::into_raw(Box::new(HcfExpansion { inner }));
        Ok(())
    })
}

/// Releases an expansion. NULL is ignored.
///
/// # Safety
/// `h` must be NULL or a live handle from [`hcf_expansion_new`].
#[no_mangle]
pub unsafe extern "C" fn hcf_expansion_free(h: *mut HcfExpansion) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Genus of the curve, or 0 for NULL.
///
/// # Safety
/// `h` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hcf_expansion_genus(h: *const HcfExpansion) -> usize {
    expansion(h).map_or(0, |e| e.curve().genus())
}

/// Lines `-backward ..= forward` as a JSON array of `{n, u, v, d, P, Q}`.
/// On a singular line the status is `Singular` and `out` still receives
/// the lines computed before it.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hcf_expansion_lines(
    h: *const HcfExpansion,
    forward: usize,
    backward: usize,
    out: *mut *mut c_char,
) -> HcfStatus {
    guard(|| {
        let exp = expansion(h)?;
        let (back, e1) = exp.backward_partial(backward);
        let (fwd, e2) = exp.forward_partial(forward);
        let records: Vec<LineRecord> = back
            .iter()
            .skip(1)
            .rev()
            .chain(fwd.iter())
            .map(LineRecord::from)
            .collect();
        output(out, io::to_json(&records))?;
        match e1.or(e2) {
            Some(e) => Err(e.into()),
            None => Ok(()),
        }
    })
}

/// First `count` moments at the first (`backward == 0`) or second point at
/// infinity, as a JSON array of rational strings.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hcf_expansion_moments(
    h: *const HcfExpansion,
    count: usize,
    backward: i32,
    out: *mut *mut c_char,
) -> HcfStatus {
    guard(|| {
        let exp = expansion(h)?;
        let m = if backward != 0 {
            moments_backward(exp, count)?
        } else {
            moments_forward(exp, count)?
        };
        output(out, io::to_json(&m.s))
    })
}

/// Hankel determinants up to `size` as `{"delta": [...], "delta_star": [...]}`.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hcf_expansion_hankel(
    h: *const HcfExpansion,
    size: usize,
    backward: i32,
    out: *mut *mut c_char,
) -> HcfStatus {
    guard(|| {
        let exp = expansion(h)?;
        let m = if backward != 0 {
            moments_backward(exp, 2 * size)?
        } else {
            moments_forward(exp, 2 * size)?
        };
        output(out, io::to_json(&HankelTable::from_moments(&m.s, size)?))
    })
}

/// Two-sided tau sequence as `{"start": n, "terms": [...]}`.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hcf_expansion_tau(
    h: *const HcfExpansion,
    forward: usize,
    backward: usize,
    out: *mut *mut c_char,
) -> HcfStatus {
    guard(|| {
        let exp = expansion(h)?;
        let t = glue_tau(exp, forward, backward)?;
        output(out, io::to_json(&Sequence::from(&t)))
    })
}

/// Smallest Somos relation of order at most `k_max` for a sequence
/// `{"start", "terms"}`; `NotFound` if there is none.
///
/// # Safety
/// `sequence_json` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hcf_somos_find(
    sequence_json: *const c_char,
    k_max: usize,
    out: *mut *mut c_char,
) -> HcfStatus {
    guard(|| {
        let seq: Sequence = io::parse_json(input(sequence_json)?)?;
        match somos_k_find(&seq, &FindOptions::up_to(k_max))? {
            Some(rel) => output(out, io::to_json(&rel)),
            None => Err(Fail(
                HcfStatus::NotFound,
                format!("no Somos relation with k <= {k_max}"),
            )),
        }
    })
}

/// Checks a relation `{"k", "coefficients"}` on every window of a sequence.
///
/// # Safety
/// Both strings must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn hcf_somos_verify(
    relation_json: *const c_char,
    sequence_json: *const c_char,
) -> HcfStatus {
    guard(|| {
        let rel: SomosRelation = io::parse_json(input(relation_json)?)?;
        let seq: Sequence = io::parse_json(input(sequence_json)?)?;
        SomosRelation::new(rel.k, rel.coefficients)?.verify_all(&seq)?;
        Ok(())
    })
}

/// Runs a reproduction bundle and writes its JSON report. The status is
/// `VerificationFailed` if any value differs.
///
/// # Safety
/// `bundle` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hcf_repro(bundle: *const c_char, out: *mut *mut c_char) -> HcfStatus {
    guard(|| {
        let report = repro::run(input(bundle)?)?;
        output(out, io::to_json(&report))?;
        if report.passed {
            Ok(())
        } else {
            Err(Fail(
                HcfStatus::VerificationFailed,
                format!("bundle {} differs", report.id),
            ))
        }
    })
}

/// Runs a randomized suite (`theorem2`, `identities`, `poisson`, `qrt`,
/// `somos8`) and writes its JSON report.
///
/// # Safety
/// `suite` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hcf_verify(
    suite: *const c_char,
    genus: usize,
    samples: usize,
    seed: u64,
    out: *mut *mut c_char,
) -> HcfStatus {
    guard(|| {
        if genus == 0 {
            return Err(Fail(
                HcfStatus::InvalidInput,
                "genus must be at least 1".into(),
            ));
        }
        let report = match input(suite)? {
            "theorem2" => verify::theorem2(genus, samples, seed, 6)?,
            "identities" => verify::identities(genus, samples, seed, 6)?,
            "poisson" => verify::poisson_suite(genus, samples, seed)?,
            "qrt" => verify::qrt_suite(samples, seed, 30)?,
            "somos8" => verify::somos8_suite(samples, seed, 14)?,
            other => {
                return Err(Fail(
                    HcfStatus::InvalidInput,
                    format!("unknown suite {other:?}"),
                ))
            }
        };
        output(out, io::to_json(&report))?;
        if report.passed {
            Ok(())
        } else {
            Err(Fail(
                HcfStatus::VerificationFailed,
                format!("suite {} failed", report.suite),
            ))
        }
    })
}
