//! C ABI for the fault-localization library.
//!
//! Every function returns an [`SflmStatus`]; out-parameters are written
//! only on `SFLM_STATUS_OK`. Spectrum and report handles are opaque and
//! must be released with their matching `_free` function; strings returned
//! through `char **` out-parameters must be released with
//! [`sflm_string_free`]. After any failing call, a thread-local message is
//! available through [`sflm_last_error_message`].
//!
//! The generated header lives at `include/sflm.h`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::num::NonZeroU64;

use sflm::localizer::{evaluate_rank, localize, SuspiciousnessReport};
use sflm::minilang::{build_cfg, parse, parse_suite, run_suite};
use sflm::spectrum::{BinaryVector, SpectrumMatrix};

/// Status code returned by every function in this API.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SflmStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    LengthMismatch = 4,
    InvalidArgument = 5,
    OutOfRange = 6,
}

/// Opaque handle to a runs × blocks coverage spectrum.
pub struct SflmSpectrum(SpectrumMatrix);

/// Opaque handle to a ranked suspiciousness report.
pub struct SflmReport(SuspiciousnessReport);

/// One ranked report row, in ranking order (most suspicious first).
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SflmReportEntry {
    /// 0-based block id.
    pub block_id: usize,
    /// 1-based competition rank; tied blocks share the smallest rank.
    pub rank: usize,
    /// Kernel similarity of the block column to the decision vector.
    pub score: f64,
    /// True when the pair carried no evidence (score pinned to 0.5).
    pub no_evidence: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn fail(status: SflmStatus, message: &str) -> SflmStatus {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
    status
}

/// Message for the most recent failing call on this thread. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sflm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static string; never freed.
#[no_mangle]
pub extern "C" fn sflm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Frees a string returned by this API. Null is ignored.
///
/// # Safety
/// `s` must be a pointer previously returned through a `char **`
/// out-parameter of this API and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sflm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn read_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, SflmStatus> {
    if ptr.is_null() {
        return Err(fail(
            SflmStatus::NullArgument,
            &format!("{what} must not be null"),
        ));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| fail(SflmStatus::InvalidUtf8, &format!("{what} is not UTF-8")))
}

fn write_out<T>(out: *mut T, value: T, what: &str) -> SflmStatus {
    if out.is_null() {
        return fail(
            SflmStatus::NullArgument,
            &format!("{what} out-pointer must not be null"),
        );
    }
    unsafe { out.write(value) };
    SflmStatus::Ok
}

fn export_string(text: String, out: *mut *mut c_char) -> SflmStatus {
    match CString::new(text) {
        Ok(s) => write_out(out, s.into_raw(), "string"),
        Err(_) => fail(
            SflmStatus::InvalidArgument,
            "rendered text contains an interior NUL byte",
        ),
    }
}

/// Parses a spectrum from its CSV interchange format.
///
/// # Safety
/// `csv` must be a valid NUL-terminated string; `out` must be a valid
/// pointer. On `SFLM_STATUS_OK` the caller owns the handle written to
/// `out` and must free it with [`sflm_spectrum_free`].
#[no_mangle]
pub unsafe extern "C" fn sflm_spectrum_parse_csv(
    csv: *const c_char,
    out: *mut *mut SflmSpectrum,
) -> SflmStatus {
    let text = match read_str(csv, "csv") {
        Ok(t) => t,
        Err(status) => return status,
    };
    match SpectrumMatrix::from_csv(text) {
        Ok(matrix) => write_out(
            out,
            Box::into_raw(Box::new(SflmSpectrum(matrix))),
            "spectrum",
        ),
        Err(e) => fail(SflmStatus::ParseError, &e.to_string()),
    }
}

/// Builds a spectrum from raw bits: `rows` is a row-major runs × blocks
/// array of 0/1 bytes and `decisions` holds one 0/1 byte per run. Blocks
/// are labeled by their index.
///
/// # Safety
/// `rows` must point to `runs * blocks` readable bytes, `decisions` to
/// `runs` readable bytes, and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sflm_spectrum_from_bits(
    rows: *const u8,
    runs: usize,
    blocks: usize,
    decisions: *const u8,
    out: *mut *mut SflmSpectrum,
) -> SflmStatus {
    if rows.is_null() || decisions.is_null() {
        return fail(
            SflmStatus::NullArgument,
            "rows and decisions must not be null",
        );
    }
    if runs == 0 || blocks == 0 {
        return fail(
            SflmStatus::InvalidArgument,
            "need at least one run and one block",
        );
    }
    let row_bytes = std::slice::from_raw_parts(rows, runs * blocks);
    let decision_bytes = std::slice::from_raw_parts(decisions, runs);

    let mut row_vectors = Vec::with_capacity(runs);
    for chunk in row_bytes.chunks_exact(blocks) {
        match BinaryVector::from_bits(chunk) {
            Ok(v) => row_vectors.push(v),
            Err(e) => return fail(SflmStatus::InvalidArgument, &e.to_string()),
        }
    }
    let decision_vector = match BinaryVector::from_bits(decision_bytes) {
        Ok(v) => v,
        Err(e) => return fail(SflmStatus::InvalidArgument, &e.to_string()),
    };
    let labels = (0..blocks).map(|k| k.to_string()).collect();
    match SpectrumMatrix::new(row_vectors, decision_vector, labels) {
        Ok(matrix) => write_out(
            out,
            Box::into_raw(Box::new(SflmSpectrum(matrix))),
            "spectrum",
        ),
        Err(e) => fail(SflmStatus::InvalidArgument, &e.to_string()),
    }
}

/// Parses and runs a program over a test suite, producing its spectrum.
/// `fuel` is the per-run step budget and must be nonzero; runs that
/// exhaust it count as failing.
///
/// # Safety
/// `program_src` and `suite_src` must be valid NUL-terminated strings and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sflm_run_suite(
    program_src: *const c_char,
    suite_src: *const c_char,
    fuel: u64,
    out: *mut *mut SflmSpectrum,
) -> SflmStatus {
    let program_text = match read_str(program_src, "program source") {
        Ok(t) => t,
        Err(status) => return status,
    };
    let suite_text = match read_str(suite_src, "suite source") {
        Ok(t) => t,
        Err(status) => return status,
    };
    let Some(fuel) = NonZeroU64::new(fuel) else {
        return fail(SflmStatus::InvalidArgument, "fuel must be nonzero");
    };
    let program = match parse(program_text) {
        Ok(p) => p,
        Err(e) => return fail(SflmStatus::ParseError, &e.to_string()),
    };
    let cfg = build_cfg(&program);
    let cases = match parse_suite(suite_text) {
        Ok(c) => c,
        Err(e) => return fail(SflmStatus::ParseError, &e.to_string()),
    };
    match run_suite(&program, &cfg, &cases, fuel) {
        Ok((spectrum, _warnings)) => write_out(
            out,
            Box::into_raw(Box::new(SflmSpectrum(spectrum))),
            "spectrum",
        ),
        Err(e) => fail(SflmStatus::InvalidArgument, &e.to_string()),
    }
}

/// Number of runs, or 0 for a null handle.
///
/// # Safety
/// `spectrum` must be null or a live handle from this API.
#[no_mangle]
pub unsafe extern "C" fn sflm_spectrum_run_count(spectrum: *const SflmSpectrum) -> usize {
    spectrum.as_ref().map_or(0, |s| s.0.run_count())
}

/// Number of blocks, or 0 for a null handle.
///
/// # Safety
/// `spectrum` must be null or a live handle from this API.
#[no_mangle]
pub unsafe extern "C" fn sflm_spectrum_block_count(spectrum: *const SflmSpectrum) -> usize {
    spectrum.as_ref().map_or(0, |s| s.0.block_count())
}

/// Renders the spectrum in its CSV interchange format.
///
/// # Safety
/// `spectrum` must be a live handle; the string written to `out` must be
/// freed with [`sflm_string_free`].
#[no_mangle]
pub unsafe extern "C" fn sflm_spectrum_to_csv(
    spectrum: *const SflmSpectrum,
    out: *mut *mut c_char,
) -> SflmStatus {
    let Some(spectrum) = spectrum.as_ref() else {
        return fail(SflmStatus::NullArgument, "spectrum must not be null");
    };
    export_string(spectrum.0.to_csv(), out)
}

/// Releases a spectrum handle. Null is ignored.
///
/// # Safety
/// `spectrum` must have come from this API and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sflm_spectrum_free(spectrum: *mut SflmSpectrum) {
    if !spectrum.is_null() {
        drop(Box::from_raw(spectrum));
    }
}

/// Kernel similarity of two equal-length bit vectors given as 0/1 byte
/// arrays. Writes the score and whether the pair carried no evidence.
///
/// # Safety
/// `u` and `v` must point to `len` readable bytes each; the out-pointers
/// must be valid.
#[no_mangle]
pub unsafe extern "C" fn sflm_kernel_score(
    u: *const u8,
    v: *const u8,
    len: usize,
    out_value: *mut f64,
    out_no_evidence: *mut bool,
) -> SflmStatus {
    if u.is_null() || v.is_null() {
        return fail(SflmStatus::NullArgument, "u and v must not be null");
    }
    if len == 0 {
        return fail(SflmStatus::InvalidArgument, "vectors must be non-empty");
    }
    let make = |bytes: *const u8| BinaryVector::from_bits(std::slice::from_raw_parts(bytes, len));
    let (u, v) = match (make(u), make(v)) {
        (Ok(u), Ok(v)) => (u, v),
        (Err(e), _) | (_, Err(e)) => return fail(SflmStatus::InvalidArgument, &e.to_string()),
    };
    let score = sflm::kernel::sflm(&u, &v).expect("lengths are equal by construction");
    let status = write_out(out_value, score.value(), "score");
    if status != SflmStatus::Ok {
        return status;
    }
    write_out(out_no_evidence, score.no_evidence(), "no_evidence flag")
}

/// Ranks every block of the spectrum against its decision vector.
///
/// # Safety
/// `spectrum` must be a live handle; on `SFLM_STATUS_OK` the caller owns
/// the report handle and must free it with [`sflm_report_free`].
#[no_mangle]
pub unsafe extern "C" fn sflm_localize(
    spectrum: *const SflmSpectrum,
    with_baselines: bool,
    out: *mut *mut SflmReport,
) -> SflmStatus {
    let Some(spectrum) = spectrum.as_ref() else {
        return fail(SflmStatus::NullArgument, "spectrum must not be null");
    };
    let report = localize(&spectrum.0, with_baselines);
    write_out(out, Box::into_raw(Box::new(SflmReport(report))), "report")
}

/// Number of ranked blocks, or 0 for a null handle.
///
/// # Safety
/// `report` must be null or a live handle from this API.
#[no_mangle]
pub unsafe extern "C" fn sflm_report_block_count(report: *const SflmReport) -> usize {
    report.as_ref().map_or(0, |r| r.0.entries.len())
}

/// Copies the entry at ranked position `index` (0 = most suspicious).
///
/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sflm_report_entry(
    report: *const SflmReport,
    index: usize,
    out: *mut SflmReportEntry,
) -> SflmStatus {
    let Some(report) = report.as_ref() else {
        return fail(SflmStatus::NullArgument, "report must not be null");
    };
    let Some(entry) = report.0.entries.get(index) else {
        return fail(
            SflmStatus::OutOfRange,
            &format!(
                "entry index {index} out of range for {} blocks",
                report.0.entries.len()
            ),
        );
    };
    write_out(
        out,
        SflmReportEntry {
            block_id: entry.id,
            rank: entry.rank,
            score: entry.sflm,
            no_evidence: entry.no_evidence,
        },
        "entry",
    )
}

/// Copies up to `capacity` verdict block ids into `buf` and writes the
/// total verdict size to `count`. Call with `capacity` 0 to query the
/// size first.
///
/// # Safety
/// `report` must be a live handle; `buf` must point to `capacity`
/// writable elements when `capacity` is nonzero; `count` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sflm_report_verdict(
    report: *const SflmReport,
    buf: *mut usize,
    capacity: usize,
    count: *mut usize,
) -> SflmStatus {
    let Some(report) = report.as_ref() else {
        return fail(SflmStatus::NullArgument, "report must not be null");
    };
    if capacity > 0 && buf.is_null() {
        return fail(
            SflmStatus::NullArgument,
            "buf must not be null when capacity is nonzero",
        );
    }
    let verdict = &report.0.verdict;
    for (i, &id) in verdict.iter().take(capacity).enumerate() {
        buf.add(i).write(id);
    }
    write_out(count, verdict.len(), "count")
}

/// Renders the report as JSON (stable key order, full precision).
///
/// # Safety
/// `report` must be a live handle; the string written to `out` must be
/// freed with [`sflm_string_free`].
#[no_mangle]
pub unsafe extern "C" fn sflm_report_to_json(
    report: *const SflmReport,
    out: *mut *mut c_char,
) -> SflmStatus {
    let Some(report) = report.as_ref() else {
        return fail(SflmStatus::NullArgument, "report must not be null");
    };
    export_string(report.0.to_json(), out)
}

/// Fraction of blocks ranked at or above the given block (competition
/// rank over block count); lower is better.
///
/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sflm_evaluate_rank(
    report: *const SflmReport,
    block_id: usize,
    out: *mut f64,
) -> SflmStatus {
    let Some(report) = report.as_ref() else {
        return fail(SflmStatus::NullArgument, "report must not be null");
    };
    match evaluate_rank(&report.0, block_id) {
        Ok(fraction) => write_out(out, fraction, "rank fraction"),
        Err(e) => fail(SflmStatus::OutOfRange, &e.to_string()),
    }
}

/// Releases a report handle. Null is ignored.
///
/// # Safety
/// `report` must have come from this API and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sflm_report_free(report: *mut SflmReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
