//! C interface to the `sapp` decision procedures.
//!
//! Formulas are opaque handles created by [`sapp_formula_parse`] or
//! [`sapp_axiom`] and released with [`sapp_formula_free`]. Every function
//! returns a [`SappStatus`]; on failure a description is available from
//! [`sapp_last_error_message`] on the same thread. Strings handed out by the
//! library must be released with [`sapp_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use sapp::decider::{DecideError, DirectDecider, TranslationDecider, Verdict};
use sapp::formula::{axiom, canonicalize, parse, print, AxiomName, Formula};
use sapp::translate::translate;

/// Opaque parsed sentence.
pub struct SappFormula {
    inner: Formula,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SappStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    NotSentence = 4,
    QuantifierCap = 5,
    Axiom = 6,
    Internal = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SappVerdict {
    Invalid = 0,
    Valid = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SappEngine {
    Direct = 0,
    Translation = 1,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    let c = CString::new(text).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Error(SappStatus, String);

fn guard(body: impl FnOnce() -> Result<(), Error>) -> SappStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            SappStatus::Ok
        }
        Ok(Err(Error(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal error");
            SappStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(text: *const c_char) -> Result<&'a str, Error> {
    if text.is_null() {
        return Err(Error(SappStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(text)
        .to_str()
        .map_err(|e| Error(SappStatus::InvalidUtf8, e.to_string()))
}

unsafe fn formula_ref<'a>(f: *const SappFormula) -> Result<&'a Formula, Error> {
    f.as_ref()
        .map(|f| &f.inner)
        .ok_or_else(|| Error(SappStatus::NullPointer, "null formula".into()))
}

fn hand_out_string(text: String, out: *mut *mut c_char) -> Result<(), Error> {
    let c = CString::new(text).map_err(|e| Error(SappStatus::Internal, e.to_string()))?;
    unsafe { *out = c.into_raw() };
    Ok(())
}

fn check_out<T>(out: *mut T) -> Result<(), Error> {
    if out.is_null() {
        Err(Error(SappStatus::NullPointer, "null output pointer".into()))
    } else {
        Ok(())
    }
}

fn decide_error(e: DecideError) -> Error {
    let status = match e {
        DecideError::QuantifierCap { .. } => SappStatus::QuantifierCap,
        DecideError::Canon(_) => SappStatus::NotSentence,
        _ => SappStatus::Internal,
    };
    Error(status, e.to_string())
}

/// Parse a sentence. On success `*out` owns a new handle.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sapp_formula_parse(
    text: *const c_char,
    out: *mut *mut SappFormula,
) -> SappStatus {
    guard(|| {
        check_out(out)?;
        let text = read_str(text)?;
        let f = parse(text).map_err(|e| Error(SappStatus::Parse, e.to_string()))?;
        canonicalize(&f).map_err(|e| Error(SappStatus::NotSentence, e.to_string()))?;
        *out = Box::into_raw(Box::new(SappFormula { inner: f }));
        Ok(())
    })
}

/// Build an axiom instance by name (`lambda1` .. `lambda6`). `n` is the
/// schema parameter for `lambda1` and `lambda2`, and must be negative for
/// the others.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sapp_axiom(
    name: *const c_char,
    n: i32,
    out: *mut *mut SappFormula,
) -> SappStatus {
    guard(|| {
        check_out(out)?;
        let name: AxiomName = read_str(name)?
            .parse()
            .map_err(|e: sapp::formula::AxiomError| Error(SappStatus::Axiom, e.to_string()))?;
        let n = usize::try_from(n).ok();
        let f = axiom(name, n).map_err(|e| Error(SappStatus::Axiom, e.to_string()))?;
        *out = Box::into_raw(Box::new(SappFormula { inner: f }));
        Ok(())
    })
}

/// Release a handle. Null is ignored.
///
/// # Safety
/// `f` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sapp_formula_free(f: *mut SappFormula) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Decide validity with one engine. `cap` is the quantifier cap, or 0 for
/// the engine default.
///
/// # Safety
/// `f` must be a live handle and `verdict` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sapp_decide(
    f: *const SappFormula,
    engine: SappEngine,
    cap: u32,
    verdict: *mut SappVerdict,
) -> SappStatus {
    guard(|| {
        check_out(verdict)?;
        let f = formula_ref(f)?;
        let result = match engine {
            SappEngine::Direct => {
                let mut d = DirectDecider::default();
                if cap > 0 {
                    d.quantifier_cap = cap as usize;
                }
                d.decide(f)
            }
            SappEngine::Translation => {
                let mut t = TranslationDecider::default();
                if cap > 0 {
                    t.quantifier_cap = cap as usize;
                }
                t.decide(f)
            }
        };
        *verdict = match result.map_err(decide_error)? {
            Verdict::Valid => SappVerdict::Valid,
            Verdict::Invalid => SappVerdict::Invalid,
        };
        Ok(())
    })
}

/// Print the pure-equality translation. `*out` must be released with
/// [`sapp_string_free`].
///
/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sapp_translate(
    f: *const SappFormula,
    out: *mut *mut c_char,
) -> SappStatus {
    guard(|| {
        check_out(out)?;
        let f = formula_ref(f)?;
        let canonical =
            canonicalize(f).map_err(|e| Error(SappStatus::NotSentence, e.to_string()))?;
        let t = translate(&canonical).map_err(|e| Error(SappStatus::Internal, e.to_string()))?;
        hand_out_string(print(&t), out)
    })
}

/// Print a formula in the concrete syntax.
///
/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sapp_formula_print(
    f: *const SappFormula,
    out: *mut *mut c_char,
) -> SappStatus {
    guard(|| {
        check_out(out)?;
        let f = formula_ref(f)?;
        hand_out_string(print(f), out)
    })
}

/// Number of quantifiers in the formula, or -1 for a null handle.
///
/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sapp_formula_quantifiers(f: *const SappFormula) -> i64 {
    match f.as_ref() {
        Some(f) => f.inner.quantifier_count() as i64,
        None => -1,
    }
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sapp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the most recent failed call on this thread; empty after a
/// success. Valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn sapp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Stable name of a status code.
#[no_mangle]
pub extern "C" fn sapp_status_name(status: SappStatus) -> *const c_char {
    let s: &'static CStr = match status {
        SappStatus::Ok => c"ok",
        SappStatus::NullPointer => c"null-pointer",
        SappStatus::InvalidUtf8 => c"invalid-utf8",
        SappStatus::Parse => c"parse",
        SappStatus::NotSentence => c"not-a-sentence",
        SappStatus::QuantifierCap => c"quantifier-cap",
        SappStatus::Axiom => c"axiom",
        SappStatus::Internal => c"internal",
    };
    s.as_ptr()
}

#[cfg(test)]
mod tests {
    use std::ptr;

    use super::*;

    #[test]
    fn status_names_are_distinct() {
        let all = [
            SappStatus::Ok,
            SappStatus::NullPointer,
            SappStatus::InvalidUtf8,
            SappStatus::Parse,
            SappStatus::NotSentence,
            SappStatus::QuantifierCap,
            SappStatus::Axiom,
            SappStatus::Internal,
        ];
        let names: std::collections::BTreeSet<_> = all
            .iter()
            .map(|s| unsafe { CStr::from_ptr(sapp_status_name(*s)) }.to_owned())
            .collect();
        assert_eq!(names.len(), all.len());
    }

    #[test]
    fn null_handles() {
        let mut v = SappVerdict::Invalid;
        let s = unsafe { sapp_decide(ptr::null(), SappEngine::Direct, 0, &mut v) };
        assert_eq!(s, SappStatus::NullPointer);
        assert_eq!(unsafe { sapp_formula_quantifiers(ptr::null()) }, -1);
        unsafe { sapp_formula_free(ptr::null_mut()) };
        unsafe { sapp_string_free(ptr::null_mut()) };
    }
}
