//! C interface to the synchronizer.
//!
//! Objects cross the boundary as opaque handles created by `es_*_new`,
//! `es_*_load` or `es_synchronize` and released by the matching `es_*_free`.
//! Every fallible call returns an [`EsStatus`]; on failure a description is
//! kept per thread and read with [`es_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use elastic_sync::config::SchemaConfig;
use elastic_sync::error::Error;
use elastic_sync::ingest::{load_match, MatchData};
use elastic_sync::model::{Fps, Receiver, SyncResult};
use elastic_sync::sync::{synchronize, write_results};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EsStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Io = 3,
    Parse = 4,
    Validation = 5,
    Config = 6,
    Sync = 7,
    OutOfRange = 8,
    Internal = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EsReceiverKind {
    None = 0,
    Player = 1,
    Out = 2,
    Goal = 3,
}

/// One synchronized event. Frames are -1 when absent.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EsResultRow {
    pub period: u8,
    pub start_frame: i64,
    pub end_frame: i64,
    pub receiver_kind: EsReceiverKind,
    pub score: f64,
}

/// Schema and tuning parameters.
pub struct EsConfig(SchemaConfig);

/// A loaded match.
pub struct EsMatch(MatchData);

/// Synchronization output. Strings handed out stay valid until the handle
/// is freed.
pub struct EsResults {
    rows: Vec<SyncResult>,
    ids: Vec<CString>,
    receivers: Vec<Option<CString>>,
    fps: Fps,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(EsStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Io { .. } => EsStatus::Io,
            Error::Parse { .. } => EsStatus::Parse,
            Error::Schema(_) | Error::Config(_) => EsStatus::Config,
            Error::Validation(_) | Error::DuplicateFrame { .. } | Error::Orientation { .. } => EsStatus::Validation,
            Error::KickoffNotFound(_) | Error::Filter(_) | Error::Parameter(_) | Error::MissingFeature(_) => {
                EsStatus::Sync
            }
            Error::Generation(_) | Error::Report(_) => EsStatus::Internal,
        };
        Failure(status, e.to_string())
    }
}

fn set_last_error(message: &str) {
    // Interior NULs cannot cross into C; drop them rather than the message.
    let c = CString::new(message.replace('\0', "")).expect("NULs removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

/// Runs `f`, records any failure or panic, and returns its status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> EsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EsStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("panic: {message}"));
            EsStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(EsStatus::NullArgument, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(EsStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn es_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub extern "C" fn es_clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn es_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn es_config_new(out: *mut *mut EsConfig) -> EsStatus {
    guard(|| put(out, EsConfig(SchemaConfig::default())))
}

/// Reads a TOML schema file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` as for [`es_config_new`].
#[no_mangle]
pub unsafe extern "C" fn es_config_load(path: *const c_char, out: *mut *mut EsConfig) -> EsStatus {
    guard(|| {
        let path = PathBuf::from(str_arg(path, "path")?);
        put(out, EsConfig(SchemaConfig::load(&path)?))
    })
}

/// Overrides one dotted key, e.g. `sync.window_half_s` = `4`.
///
/// # Safety
/// `config` must be a live handle; `key` and `value` NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn es_config_set(config: *mut EsConfig, key: *const c_char, value: *const c_char) -> EsStatus {
    guard(|| {
        let cfg = config.as_mut().ok_or_else(|| null("config"))?;
        cfg.0.set_override(str_arg(key, "key")?, str_arg(value, "value")?)?;
        Ok(())
    })
}

/// # Safety
/// `config` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn es_config_free(config: *mut EsConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// Loads tracking and event files with the given schema.
///
/// # Safety
/// Paths must be NUL-terminated strings, `config` a live handle and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn es_match_load(
    tracking: *const c_char,
    events: *const c_char,
    config: *const EsConfig,
    out: *mut *mut EsMatch,
) -> EsStatus {
    guard(|| {
        let tracking = PathBuf::from(str_arg(tracking, "tracking path")?);
        let events = PathBuf::from(str_arg(events, "events path")?);
        let cfg = handle(config, "config")?;
        put(out, EsMatch(load_match(&tracking, &events, &cfg.0)?))
    })
}

/// Number of events in the match, 0 for NULL.
///
/// # Safety
/// `m` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn es_match_event_count(m: *const EsMatch) -> usize {
    m.as_ref().map_or(0, |m| m.0.events.len())
}

/// # Safety
/// `m` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn es_match_free(m: *mut EsMatch) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Runs the full pipeline with the sync section of `config`.
///
/// # Safety
/// `m` and `config` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn es_synchronize(
    m: *const EsMatch,
    config: *const EsConfig,
    out: *mut *mut EsResults,
) -> EsStatus {
    guard(|| {
        let data = &handle(m, "match")?.0;
        let cfg = handle(config, "config")?;
        let rows = synchronize(data, &cfg.0.sync)?;
        let text = |s: &str| CString::new(s.replace('\0', "")).expect("NULs removed");
        let ids = rows.iter().map(|r| text(&r.event_id)).collect();
        let receivers = rows
            .iter()
            .map(|r| r.receiver.as_ref().map(|x| text(&x.to_string())))
            .collect();
        put(
            out,
            EsResults {
                rows,
                ids,
                receivers,
                fps: data.metadata.fps,
            },
        )
    })
}

/// Number of result rows, 0 for NULL.
///
/// # Safety
/// `results` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn es_results_len(results: *const EsResults) -> usize {
    results.as_ref().map_or(0, |r| r.rows.len())
}

/// Copies row `index` into `out`.
///
/// # Safety
/// `results` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn es_results_row(results: *const EsResults, index: usize, out: *mut EsResultRow) -> EsStatus {
    guard(|| {
        let r = handle(results, "results")?;
        let row = r
            .rows
            .get(index)
            .ok_or_else(|| Failure(EsStatus::OutOfRange, format!("row {index} of {}", r.rows.len())))?;
        let out = out.as_mut().ok_or_else(|| null("output row"))?;
        *out = EsResultRow {
            period: row.period.number(),
            start_frame: row.start_frame.map_or(-1, i64::from),
            end_frame: row.end_frame.map_or(-1, i64::from),
            receiver_kind: match row.receiver {
                None => EsReceiverKind::None,
                Some(Receiver::Player(_)) => EsReceiverKind::Player,
                Some(Receiver::Out) => EsReceiverKind::Out,
                Some(Receiver::Goal) => EsReceiverKind::Goal,
            },
            score: row.score,
        };
        Ok(())
    })
}

/// Event id of row `index`, or NULL when out of range. Owned by `results`.
///
/// # Safety
/// `results` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn es_results_event_id(results: *const EsResults, index: usize) -> *const c_char {
    results
        .as_ref()
        .and_then(|r| r.ids.get(index))
        .map_or(ptr::null(), |c| c.as_ptr())
}

/// Receiver of row `index` (a player id, `OUT` or `GOAL`), or NULL. Owned
/// by `results`.
///
/// # Safety
/// `results` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn es_results_receiver(results: *const EsResults, index: usize) -> *const c_char {
    results
        .as_ref()
        .and_then(|r| r.receivers.get(index))
        .and_then(Option::as_ref)
        .map_or(ptr::null(), |c| c.as_ptr())
}

/// Writes the results file, in the same format as the command-line tool.
///
/// # Safety
/// `results` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn es_results_write_csv(results: *const EsResults, path: *const c_char) -> EsStatus {
    guard(|| {
        let r = handle(results, "results")?;
        let path = PathBuf::from(str_arg(path, "path")?);
        write_results(&path, &r.rows, r.fps)?;
        Ok(())
    })
}

/// # Safety
/// `results` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn es_results_free(results: *mut EsResults) {
    if !results.is_null() {
        drop(Box::from_raw(results));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn message() -> String {
        let p = es_last_error_message();
        assert!(!p.is_null());
        unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
    }

    #[test]
    fn null_arguments_are_reported() {
        unsafe {
            assert_eq!(es_config_new(ptr::null_mut()), EsStatus::NullArgument);
            assert!(message().contains("output pointer"));
            let mut m = ptr::null_mut();
            assert_eq!(
                es_match_load(ptr::null(), ptr::null(), ptr::null(), &mut m),
                EsStatus::NullArgument
            );
            assert!(m.is_null());
            assert_eq!(es_results_len(ptr::null()), 0);
            assert!(es_results_event_id(ptr::null(), 0).is_null());
            es_config_free(ptr::null_mut());
        }
    }

    #[test]
    fn invalid_utf8_is_rejected() {
        let bad = [0xffu8, 0xfe, 0];
        let mut cfg = ptr::null_mut();
        unsafe {
            assert_eq!(es_config_load(bad.as_ptr().cast(), &mut cfg), EsStatus::InvalidUtf8);
        }
        assert!(cfg.is_null());
    }

    #[test]
    fn errors_are_per_thread() {
        unsafe { es_config_new(ptr::null_mut()) };
        assert!(!es_last_error_message().is_null());
        std::thread::spawn(|| assert!(es_last_error_message().is_null()))
            .join()
            .unwrap();
        es_clear_last_error();
        assert!(es_last_error_message().is_null());
    }

    #[test]
    fn panics_do_not_cross_the_boundary() {
        assert_eq!(guard(|| panic!("boom")), EsStatus::Panic);
        assert_eq!(message(), "panic: boom");
    }

    #[test]
    fn version_is_the_crate_version() {
        let v = unsafe { CStr::from_ptr(es_version()) };
        assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }
}
