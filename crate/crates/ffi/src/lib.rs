//! C ABI over the certpipe library.
//!
//! Every fallible function returns a [`CertpipeStatus`] and writes its result
//! through an out-pointer. On failure a message is kept per thread and can be
//! read with [`certpipe_last_error`]. Strings returned through `char **` are
//! owned by the caller and must be released with [`certpipe_string_free`].
//! Panics never cross the boundary; they surface as `CERTPIPE_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use certpipe::document::{HtrDocument, LayoutConfig};
use certpipe::eval::cer;
use certpipe::extract::{extract_record, RuleBackend, Tables};
use certpipe::inventory::ScanId;
use certpipe::lexicon::{levenshtein, post_correct_name, quality_gate, Lexicon, Verdict};
use certpipe::linking::birth_interval;
use certpipe::text::name_tokens;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertpipeStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    Io = 4,
    Panic = 5,
}

/// Opaque handle to an immutable name lexicon.
pub struct CertpipeLexicon {
    inner: Lexicon,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(CertpipeStatus, String);

impl Failure {
    fn invalid(e: impl std::fmt::Display) -> Self {
        Failure(CertpipeStatus::InvalidInput, e.to_string())
    }
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("NUL bytes removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CertpipeStatus {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CertpipeStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(format!("internal panic: {message}"));
            CertpipeStatus::Panic
        }
    }
}

/// # Safety
/// `p` must be null or a NUL-terminated string valid for the call.
unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(CertpipeStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(CertpipeStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

/// # Safety
/// `out` must be null or valid for a write of `T`.
unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(CertpipeStatus::NullArgument, format!("{what} is null")));
    }
    out.write(value);
    Ok(())
}

fn owned(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s).map(CString::into_raw).map_err(|_| Failure::invalid("result contains a NUL byte"))
}

/// # Safety
/// `out` must be null or valid for a write of a pointer.
unsafe fn write_string(out: *mut *mut c_char, s: String, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(CertpipeStatus::NullArgument, format!("{what} is null")));
    }
    out.write(owned(s)?);
    Ok(())
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string(value).map_err(Failure::invalid)
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn certpipe_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next certpipe call on the same thread.
#[no_mangle]
pub extern "C" fn certpipe_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a pointer returned through a `char **` out-parameter
/// of this library that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn certpipe_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Edit distance between two strings, counted in Unicode scalar values.
///
/// # Safety
/// `a` and `b` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn certpipe_levenshtein(a: *const c_char, b: *const c_char, out: *mut usize) -> CertpipeStatus {
    guard(|| {
        let d = levenshtein(read_str(a, "a")?, read_str(b, "b")?);
        write_out(out, d, "out")
    })
}

/// Character error rate of `hypothesis` against a non-empty `reference`.
///
/// # Safety
/// Both strings must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn certpipe_cer(
    reference: *const c_char,
    hypothesis: *const c_char,
    out: *mut f64,
) -> CertpipeStatus {
    guard(|| {
        let rate = cer(read_str(reference, "reference")?, read_str(hypothesis, "hypothesis")?)
            .map_err(Failure::invalid)?;
        write_out(out, rate, "out")
    })
}

/// Parse a scan file name. Writes a JSON object with `year`, `district`,
/// `number`, `note_suffix`, `stem`, `file_name` and `key`.
///
/// # Safety
/// `name` must be NUL-terminated; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn certpipe_scan_parse(name: *const c_char, out_json: *mut *mut c_char) -> CertpipeStatus {
    guard(|| {
        let id = ScanId::parse(read_str(name, "name")?).map_err(Failure::invalid)?;
        let json = serde_json::json!({
            "year": id.year,
            "district": id.district.to_string(),
            "number": id.number,
            "note_suffix": id.note_suffix.map(String::from),
            "stem": id.stem(),
            "file_name": id.file_name(),
            "key": id.key(),
        });
        write_string(out_json, json.to_string(), "out_json")
    })
}

/// Canonical spelling of a scan file name.
///
/// # Safety
/// `name` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn certpipe_scan_canonical(name: *const c_char, out: *mut *mut c_char) -> CertpipeStatus {
    guard(|| {
        let id = ScanId::parse(read_str(name, "name")?).map_err(Failure::invalid)?;
        write_string(out, id.file_name(), "out")
    })
}

/// Two-year birth window `[cert_year - age - 1, cert_year - age]`.
///
/// # Safety
/// `low` and `high` must be writable.
#[no_mangle]
pub unsafe extern "C" fn certpipe_birth_interval(
    cert_year: i32,
    age: i64,
    low: *mut i32,
    high: *mut i32,
) -> CertpipeStatus {
    guard(|| {
        if low.is_null() || high.is_null() {
            return Err(Failure(CertpipeStatus::NullArgument, "low or high is null".into()));
        }
        let iv = birth_interval(cert_year, age).map_err(Failure::invalid)?;
        write_out(low, iv.low, "low")?;
        write_out(high, iv.high, "high")
    })
}

/// Build a lexicon from `name[,count]` CSV text. Malformed rows are skipped.
///
/// # Safety
/// `csv` must be NUL-terminated; `out` must be writable. The handle must be
/// released with [`certpipe_lexicon_free`].
#[no_mangle]
pub unsafe extern "C" fn certpipe_lexicon_from_csv(
    csv: *const c_char,
    out: *mut *mut CertpipeLexicon,
) -> CertpipeStatus {
    guard(|| {
        let loaded = Lexicon::from_csv_reader(read_str(csv, "csv")?.as_bytes(), "ffi").map_err(Failure::invalid)?;
        write_out(out, Box::into_raw(Box::new(CertpipeLexicon { inner: loaded.lexicon })), "out")
    })
}

/// Load a lexicon CSV file.
///
/// # Safety
/// `path` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn certpipe_lexicon_load(
    path: *const c_char,
    out: *mut *mut CertpipeLexicon,
) -> CertpipeStatus {
    guard(|| {
        let path = read_str(path, "path")?;
        let loaded = certpipe::lexicon::load_lexicon(std::path::Path::new(path)).map_err(|e| match e {
            certpipe::lexicon::LexiconError::Io { .. } => Failure(CertpipeStatus::Io, e.to_string()),
            other => Failure::invalid(other),
        })?;
        write_out(out, Box::into_raw(Box::new(CertpipeLexicon { inner: loaded.lexicon })), "out")
    })
}

/// Release a lexicon handle. Null is ignored.
///
/// # Safety
/// `lexicon` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn certpipe_lexicon_free(lexicon: *mut CertpipeLexicon) {
    if !lexicon.is_null() {
        drop(Box::from_raw(lexicon));
    }
}

/// # Safety
/// `lexicon` must be null or a live handle.
unsafe fn lexicon_ref<'a>(lexicon: *const CertpipeLexicon) -> Result<&'a Lexicon, Failure> {
    lexicon
        .as_ref()
        .map(|l| &l.inner)
        .ok_or_else(|| Failure(CertpipeStatus::NullArgument, "lexicon is null".into()))
}

/// Number of distinct entries.
///
/// # Safety
/// `lexicon` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn certpipe_lexicon_len(lexicon: *const CertpipeLexicon, out: *mut usize) -> CertpipeStatus {
    guard(|| write_out(out, lexicon_ref(lexicon)?.len(), "out"))
}

/// Frequency of a token, 0 when absent. Matching ignores case and Unicode
/// composition.
///
/// # Safety
/// `lexicon` must be a live handle; `token` NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn certpipe_lexicon_frequency(
    lexicon: *const CertpipeLexicon,
    token: *const c_char,
    out: *mut u64,
) -> CertpipeStatus {
    guard(|| {
        let f = lexicon_ref(lexicon)?.frequency(read_str(token, "token")?).unwrap_or(0);
        write_out(out, f, "out")
    })
}

/// 1 when every token of the whitespace-separated `name` is known, else 0.
///
/// # Safety
/// `lexicon` must be a live handle; `name` NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn certpipe_lexicon_accepts(
    lexicon: *const CertpipeLexicon,
    name: *const c_char,
    out: *mut i32,
) -> CertpipeStatus {
    guard(|| {
        let tokens = name_tokens(read_str(name, "name")?);
        let verdict = quality_gate(&tokens, lexicon_ref(lexicon)?);
        write_out(out, i32::from(verdict == Verdict::Accept), "out")
    })
}

/// Correct each unknown token of `name` to its closest entry with frequency
/// at least `min_freq`. Writes the correction result as JSON.
///
/// # Safety
/// `lexicon` must be a live handle; `name` NUL-terminated; `out_json`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn certpipe_lexicon_correct_name(
    lexicon: *const CertpipeLexicon,
    name: *const c_char,
    min_freq: u64,
    out_json: *mut *mut c_char,
) -> CertpipeStatus {
    guard(|| {
        let tokens = name_tokens(read_str(name, "name")?);
        let result = post_correct_name(&tokens, lexicon_ref(lexicon)?, min_freq).map_err(Failure::invalid)?;
        write_string(out_json, to_json(&result)?, "out_json")
    })
}

/// Extract a record from one document (canonical JSON or page XML) with the
/// rule backend and default layout thresholds. `scan_name` may be null when
/// the document names its scan itself.
///
/// # Safety
/// `document` must be NUL-terminated; `scan_name` null or NUL-terminated;
/// `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn certpipe_extract_document(
    document: *const c_char,
    scan_name: *const c_char,
    out_json: *mut *mut c_char,
) -> CertpipeStatus {
    guard(|| {
        let text = read_str(document, "document")?;
        let fallback = if scan_name.is_null() {
            None
        } else {
            Some(ScanId::parse(read_str(scan_name, "scan_name")?).map_err(Failure::invalid)?)
        };
        let parsed = HtrDocument::from_str_auto(text, fallback.as_ref()).map_err(Failure::invalid)?;
        let backend = RuleBackend::new(Tables::builtin());
        let record = extract_record(&parsed.document, &LayoutConfig::default(), &backend);
        write_string(out_json, to_json(&record)?, "out_json")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn panics_become_status() {
        let status = guard(|| panic!("boom"));
        assert_eq!(status, CertpipeStatus::Panic);
        let msg = unsafe { CStr::from_ptr(certpipe_last_error()) }.to_str().unwrap();
        assert!(msg.contains("boom"));
    }

    #[test]
    fn success_clears_last_error() {
        set_last_error("old".into());
        assert_eq!(guard(|| Ok(())), CertpipeStatus::Ok);
        assert!(certpipe_last_error().is_null());
    }
}
