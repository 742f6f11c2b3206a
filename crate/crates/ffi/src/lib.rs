//! C ABI over `coverhom`.
//!
//! Covers are opaque handles created by `coverhom_cover_from_json` or
//! `coverhom_cover_mod_ell` and released with `coverhom_cover_free`. Every
//! fallible call returns a `CoverhomStatus`; on failure the message is
//! available from `coverhom_last_error` on the same thread. Strings
//! returned through out-parameters are owned by the caller and must be
//! released with `coverhom_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use coverhom::cli::{run_check_with, CheckArgs, CheckName};
use coverhom::covering::{config, lift_class, Cover, PermutationRep};
use coverhom::surface::Word;
use coverhom::Error;

/// Opaque built cover.
pub struct CoverhomCover {
    inner: Cover,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoverhomStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    Disconnected = 4,
    BufferTooSmall = 5,
    Internal = 6,
    Panic = 7,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(err: &Error) -> CoverhomStatus {
    match err {
        Error::Disconnected => CoverhomStatus::Disconnected,
        Error::Internal(_) => CoverhomStatus::Internal,
        _ => CoverhomStatus::InvalidInput,
    }
}

fn guard(f: impl FnOnce() -> Result<(), CoverhomStatus>) -> CoverhomStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CoverhomStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside coverhom");
            CoverhomStatus::Panic
        }
    }
}

fn fail(err: Error) -> CoverhomStatus {
    let s = status_of(&err);
    set_error(err.to_string());
    s
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, CoverhomStatus> {
    if p.is_null() {
        set_error("null string argument");
        return Err(CoverhomStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("string argument is not UTF-8");
        CoverhomStatus::InvalidUtf8
    })
}

unsafe fn handle<'a>(h: *const CoverhomCover) -> Result<&'a Cover, CoverhomStatus> {
    if h.is_null() {
        set_error("null cover handle");
        return Err(CoverhomStatus::NullPointer);
    }
    Ok(&(*h).inner)
}

fn non_null<T>(p: *mut T) -> Result<(), CoverhomStatus> {
    if p.is_null() {
        set_error("null output pointer");
        Err(CoverhomStatus::NullPointer)
    } else {
        Ok(())
    }
}

fn publish(out: *mut *mut CoverhomCover, cover: Cover) {
    let b = Box::new(CoverhomCover { inner: cover });
    unsafe { *out = Box::into_raw(b) };
}

/// Builds a cover from a JSON description (same format as the CLI `--cover`).
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn coverhom_cover_from_json(
    json: *const c_char,
    out: *mut *mut CoverhomCover,
) -> CoverhomStatus {
    guard(|| {
        non_null(out)?;
        let text = read_str(json)?;
        let cover = config::rep_from_json_str(text)
            .and_then(Cover::new)
            .map_err(fail)?;
        publish(out, cover);
        Ok(())
    })
}

/// Builds the mod-`ell` homology cover of the closed genus `genus` surface.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn coverhom_cover_mod_ell(
    genus: u32,
    ell: u64,
    out: *mut *mut CoverhomCover,
) -> CoverhomStatus {
    guard(|| {
        non_null(out)?;
        let cover = PermutationRep::mod_ell(genus as usize, ell)
            .and_then(Cover::new)
            .map_err(fail)?;
        publish(out, cover);
        Ok(())
    })
}

/// # Safety
/// `cover` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn coverhom_cover_free(cover: *mut CoverhomCover) {
    if !cover.is_null() {
        drop(Box::from_raw(cover));
    }
}

/// Number of sheets.
///
/// # Safety
/// `cover` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn coverhom_cover_degree(
    cover: *const CoverhomCover,
    out: *mut usize,
) -> CoverhomStatus {
    guard(|| {
        non_null(out)?;
        *out = handle(cover)?.complex.degree();
        Ok(())
    })
}

/// Rank of the first homology of the closed covering surface.
///
/// # Safety
/// `cover` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn coverhom_cover_rank(
    cover: *const CoverhomCover,
    out: *mut usize,
) -> CoverhomStatus {
    guard(|| {
        non_null(out)?;
        *out = handle(cover)?.lattice.rank();
        Ok(())
    })
}

/// Genus of the covering surface.
///
/// # Safety
/// `cover` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn coverhom_cover_genus(
    cover: *const CoverhomCover,
    out: *mut i64,
) -> CoverhomStatus {
    guard(|| {
        non_null(out)?;
        *out = handle(cover)?.complex.genus();
        Ok(())
    })
}

/// Euler characteristic of the covering surface.
///
/// # Safety
/// `cover` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn coverhom_cover_euler_characteristic(
    cover: *const CoverhomCover,
    out: *mut i64,
) -> CoverhomStatus {
    guard(|| {
        non_null(out)?;
        *out = handle(cover)?.complex.euler_characteristic();
        Ok(())
    })
}

/// Copies the intersection form, row-major, into `buf` of length `len`.
/// `written` receives `rank * rank`; if `len` is smaller nothing is copied
/// and `BufferTooSmall` is returned.
///
/// # Safety
/// `buf` must hold `len` elements; `written` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn coverhom_cover_gram(
    cover: *const CoverhomCover,
    buf: *mut i64,
    len: usize,
    written: *mut usize,
) -> CoverhomStatus {
    guard(|| {
        non_null(written)?;
        let c = handle(cover)?;
        let r = c.lattice.rank();
        *written = r * r;
        if len < r * r {
            set_error(format!("gram needs {} entries, buffer has {len}", r * r));
            return Err(CoverhomStatus::BufferTooSmall);
        }
        if r > 0 {
            non_null(buf)?;
        }
        let g = c.lattice.gram();
        for i in 0..r {
            for j in 0..r {
                *buf.add(i * r + j) = g.get(i, j);
            }
        }
        Ok(())
    })
}

/// Lifts the word from `sheet` (0-based) until it closes. `passes` receives
/// the number of passes; `buf` (length `len`, at least the rank) receives
/// the homology class.
///
/// # Safety
/// `word` must be NUL-terminated, `buf` must hold `len` elements and
/// `passes` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn coverhom_lift_class(
    cover: *const CoverhomCover,
    word: *const c_char,
    sheet: usize,
    buf: *mut i64,
    len: usize,
    passes: *mut usize,
) -> CoverhomStatus {
    guard(|| {
        non_null(passes)?;
        let c = handle(cover)?;
        let w: Word = read_str(word)?.parse().map_err(fail)?;
        let r = c.lattice.rank();
        if len < r {
            set_error(format!("class needs {r} entries, buffer has {len}"));
            return Err(CoverhomStatus::BufferTooSmall);
        }
        let (m, class) = lift_class(&c.complex, &c.lattice, &w, sheet).map_err(fail)?;
        if r > 0 {
            non_null(buf)?;
            ptr::copy_nonoverlapping(class.0.as_ptr(), buf, r);
        }
        *passes = m;
        Ok(())
    })
}

/// Runs a named check (`fullness`, `symplectic`, `twistfixed`, `pants`,
/// `gap`, `orbit`, `powerlemma`) with parameters given as a JSON object
/// keyed like the CLI flags (null or empty for defaults). `cover` may be
/// null for `gap` and `powerlemma`. On success `report` receives the JSON
/// report and `exit_code` the CLI exit code of its verdict.
///
/// # Safety
/// String arguments must be NUL-terminated or null where allowed;
/// `report` and `exit_code` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn coverhom_run_check(
    cover: *const CoverhomCover,
    name: *const c_char,
    params_json: *const c_char,
    report: *mut *mut c_char,
    exit_code: *mut i32,
) -> CoverhomStatus {
    guard(|| {
        non_null(report)?;
        non_null(exit_code)?;
        let name: CheckName = read_str(name)?.parse().map_err(fail)?;
        let params = if params_json.is_null() {
            CheckArgs::default()
        } else {
            CheckArgs::from_json(read_str(params_json)?).map_err(fail)?
        };
        let c = if cover.is_null() {
            None
        } else {
            Some(handle(cover)?)
        };
        if name.needs_cover() && c.is_none() {
            set_error(format!("check {} needs a cover", name.as_str()));
            return Err(CoverhomStatus::NullPointer);
        }
        let out = run_check_with(name, c, &params).map_err(fail)?;
        let s = CString::new(out.text).map_err(|_| {
            set_error("report contains NUL");
            CoverhomStatus::Internal
        })?;
        *report = s.into_raw();
        *exit_code = out.verdict.exit_code();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn coverhom_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failure on this thread, or null. Valid until the
/// next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn coverhom_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn coverhom_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
