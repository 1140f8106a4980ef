//! C ABI over the simulator.
//!
//! Every call returns a [`SwapsimStatus`]. Results that are documents come
//! back as NUL-terminated JSON through an out pointer and must be released
//! with [`swapsim_string_free`]. After a failing call,
//! [`swapsim_last_error`] describes the failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use chrono::NaiveDateTime;
use swapsim::fmi::ConsentDecision;
use swapsim::model::{PartyId, Trade, TradeId};
use swapsim::{ErrorCode, SimError, Simulator, SimulatorConfig, StorageBackend};

/// Opaque simulator handle.
pub struct SwapsimHandle {
    sim: Simulator,
}

/// Result of every call. Positive values mirror the simulator's error codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwapsimStatus {
    Ok = 0,
    InvalidRequest = 1,
    InvalidTrade = 2,
    InvalidTransition = 3,
    InvalidSchedule = 4,
    InvalidInterval = 5,
    UnknownParty = 6,
    UnroutableCommand = 7,
    ResetMissing = 8,
    ClockRegression = 9,
    NoClock = 10,
    NotFound = 11,
    DuplicateTrade = 12,
    DuplicateLei = 13,
    PartyInUse = 14,
    ConcurrencyConflict = 15,
    AlreadyReset = 16,
    AlreadyPaid = 17,
    AlreadyExists = 18,
    NothingScheduled = 19,
    Storage = 20,
    Internal = 21,
    NullArgument = -1,
    InvalidUtf8 = -2,
    InvalidJson = -3,
    Panic = -4,
}

impl From<ErrorCode> for SwapsimStatus {
    fn from(code: ErrorCode) -> Self {
        match code {
            ErrorCode::InvalidRequest => Self::InvalidRequest,
            ErrorCode::InvalidTrade => Self::InvalidTrade,
            ErrorCode::InvalidTransition => Self::InvalidTransition,
            ErrorCode::InvalidSchedule => Self::InvalidSchedule,
            ErrorCode::InvalidInterval => Self::InvalidInterval,
            ErrorCode::UnknownParty => Self::UnknownParty,
            ErrorCode::UnroutableCommand => Self::UnroutableCommand,
            ErrorCode::ResetMissing => Self::ResetMissing,
            ErrorCode::ClockRegression => Self::ClockRegression,
            ErrorCode::NoClock => Self::NoClock,
            ErrorCode::NotFound => Self::NotFound,
            ErrorCode::DuplicateTrade => Self::DuplicateTrade,
            ErrorCode::DuplicateLei => Self::DuplicateLei,
            ErrorCode::PartyInUse => Self::PartyInUse,
            ErrorCode::ConcurrencyConflict => Self::ConcurrencyConflict,
            ErrorCode::AlreadyReset => Self::AlreadyReset,
            ErrorCode::AlreadyPaid => Self::AlreadyPaid,
            ErrorCode::AlreadyExists => Self::AlreadyExists,
            ErrorCode::NothingScheduled => Self::NothingScheduled,
            ErrorCode::Storage => Self::Storage,
            ErrorCode::Internal => Self::Internal,
        }
    }
}

struct Failure(SwapsimStatus, String);

impl From<SimError> for Failure {
    fn from(e: SimError) -> Self {
        Failure(e.code().into(), e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure(SwapsimStatus::InvalidJson, e.to_string())
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SwapsimStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            SwapsimStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(_) => {
            set_last_error("panic inside swapsim");
            SwapsimStatus::Panic
        }
    }
}

unsafe fn handle<'a>(h: *mut SwapsimHandle) -> Result<&'a mut Simulator, Failure> {
    h.as_mut().map(|h| &mut h.sim).ok_or_else(|| Failure(SwapsimStatus::NullArgument, "null simulator handle".into()))
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure(SwapsimStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(s).to_str().map_err(|_| Failure(SwapsimStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn time(s: *const c_char) -> Result<NaiveDateTime, Failure> {
    let raw = text(s, "time")?;
    raw.parse().map_err(|e| Failure(SwapsimStatus::InvalidRequest, format!("bad time {raw:?}: {e}")))
}

unsafe fn emit(out: *mut *mut c_char, value: &impl serde::Serialize) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(SwapsimStatus::NullArgument, "output pointer is null".into()));
    }
    let json = serde_json::to_string(value)?;
    let c = CString::new(json).map_err(|e| Failure(SwapsimStatus::Internal, e.to_string()))?;
    *out = c.into_raw();
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn swapsim_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failing call on this thread, or NULL. The pointer
/// stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn swapsim_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Release a string returned through an out pointer. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn swapsim_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Create an in-memory simulator.
///
/// # Safety
/// `out` must be a valid pointer to write the handle to.
#[no_mangle]
pub unsafe extern "C" fn swapsim_new(seed: u64, out: *mut *mut SwapsimHandle) -> SwapsimStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure(SwapsimStatus::NullArgument, "output pointer is null".into()));
        }
        *out = Box::into_raw(Box::new(SwapsimHandle { sim: Simulator::with_seed(seed) }));
        Ok(())
    })
}

/// Open a simulator backed by files in `data_dir`, resuming any run stored there.
///
/// # Safety
/// `data_dir` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn swapsim_open(
    data_dir: *const c_char,
    seed: u64,
    out: *mut *mut SwapsimHandle,
) -> SwapsimStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure(SwapsimStatus::NullArgument, "output pointer is null".into()));
        }
        let dir = text(data_dir, "data_dir")?;
        let config = SimulatorConfig { seed, storage: StorageBackend::File, data_dir: Some(dir.into()) };
        *out = Box::into_raw(Box::new(SwapsimHandle { sim: Simulator::open(config)? }));
        Ok(())
    })
}

/// Destroy a handle. NULL is ignored.
///
/// # Safety
/// `h` must come from `swapsim_new` or `swapsim_open` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn swapsim_free(h: *mut SwapsimHandle) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Start a new run with `seed`. Registered parties are kept.
///
/// # Safety
/// `h` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn swapsim_reset(h: *mut SwapsimHandle, seed: u64) -> SwapsimStatus {
    guard(|| Ok(handle(h)?.reset(Some(seed))?))
}

/// Register a party; the new party is written to `out_json`.
///
/// # Safety
/// `h` must be a live handle, the strings NUL-terminated, `out_json` valid.
#[no_mangle]
pub unsafe extern "C" fn swapsim_create_party(
    h: *mut SwapsimHandle,
    name: *const c_char,
    legal_entity_id: *const c_char,
    out_json: *mut *mut c_char,
) -> SwapsimStatus {
    guard(|| {
        let sim = handle(h)?;
        let party = sim.create_party(text(name, "name")?, text(legal_entity_id, "legal_entity_id")?)?;
        emit(out_json, &party)
    })
}

/// Remove a party that no live trade references.
///
/// # Safety
/// `h` must be a live handle and `party_id` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn swapsim_delete_party(h: *mut SwapsimHandle, party_id: *const c_char) -> SwapsimStatus {
    guard(|| Ok(handle(h)?.delete_party(&PartyId::new(text(party_id, "party_id")?))?))
}

/// Create the clock at `initial_time` (`YYYY-MM-DDTHH:MM:SS`).
///
/// # Safety
/// `h` must be a live handle and `initial_time` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn swapsim_create_clock(h: *mut SwapsimHandle, initial_time: *const c_char) -> SwapsimStatus {
    guard(|| {
        handle(h)?.create_clock(time(initial_time)?)?;
        Ok(())
    })
}

/// Current simulation time as a JSON clock document.
///
/// # Safety
/// `h` must be a live handle and `out_json` valid.
#[no_mangle]
pub unsafe extern "C" fn swapsim_clock(h: *mut SwapsimHandle, out_json: *mut *mut c_char) -> SwapsimStatus {
    guard(|| emit(out_json, &handle(h)?.clock()?))
}

/// Submit an executed trade given as JSON.
///
/// # Safety
/// `h` must be a live handle and `trade_json` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn swapsim_submit_trade(h: *mut SwapsimHandle, trade_json: *const c_char) -> SwapsimStatus {
    guard(|| {
        let trade: Trade = serde_json::from_str(text(trade_json, "trade_json")?)
            .map_err(|e| Failure(SwapsimStatus::InvalidTrade, e.to_string()))?;
        handle(h)?.submit_trade(trade)?;
        Ok(())
    })
}

/// Confirm (`confirm` true) or reject an executed trade.
///
/// # Safety
/// `h` must be a live handle and `trade_id` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn swapsim_consent(
    h: *mut SwapsimHandle,
    trade_id: *const c_char,
    confirm: bool,
) -> SwapsimStatus {
    guard(|| {
        let decision = if confirm { ConsentDecision::Confirm } else { ConsentDecision::Reject };
        handle(h)?.consent(&TradeId::new(text(trade_id, "trade_id")?), decision)?;
        Ok(())
    })
}

/// Advance the clock to `to`; the trigger report is written to `out_json`.
///
/// # Safety
/// `h` must be a live handle, `to` NUL-terminated, `out_json` valid.
#[no_mangle]
pub unsafe extern "C" fn swapsim_advance_to(
    h: *mut SwapsimHandle,
    to: *const c_char,
    out_json: *mut *mut c_char,
) -> SwapsimStatus {
    guard(|| {
        let sim = handle(h)?;
        let report = sim.advance_to(time(to)?)?;
        emit(out_json, &report)
    })
}

/// Advance to the next open deadline.
///
/// # Safety
/// `h` must be a live handle and `out_json` valid.
#[no_mangle]
pub unsafe extern "C" fn swapsim_forward(h: *mut SwapsimHandle, out_json: *mut *mut c_char) -> SwapsimStatus {
    guard(|| {
        let sim = handle(h)?;
        let report = sim.advance_to_next_deadline()?;
        emit(out_json, &report)
    })
}

/// Advance until no open deadlines remain.
///
/// # Safety
/// `h` must be a live handle and `out_json` valid.
#[no_mangle]
pub unsafe extern "C" fn swapsim_play(h: *mut SwapsimHandle, out_json: *mut *mut c_char) -> SwapsimStatus {
    guard(|| {
        let sim = handle(h)?;
        let report = sim.play()?;
        emit(out_json, &report)
    })
}

/// Every blotter row as a JSON array.
///
/// # Safety
/// `h` must be a live handle and `out_json` valid.
#[no_mangle]
pub unsafe extern "C" fn swapsim_blotter(h: *mut SwapsimHandle, out_json: *mut *mut c_char) -> SwapsimStatus {
    guard(|| emit(out_json, &handle(h)?.blotter()))
}

/// One blotter row.
///
/// # Safety
/// `h` must be a live handle, `trade_id` NUL-terminated, `out_json` valid.
#[no_mangle]
pub unsafe extern "C" fn swapsim_trade(
    h: *mut SwapsimHandle,
    trade_id: *const c_char,
    out_json: *mut *mut c_char,
) -> SwapsimStatus {
    guard(|| {
        let sim = handle(h)?;
        let row = sim.trade(&TradeId::new(text(trade_id, "trade_id")?))?;
        emit(out_json, &row)
    })
}

/// The `limit` most recent events, newest first.
///
/// # Safety
/// `h` must be a live handle and `out_json` valid.
#[no_mangle]
pub unsafe extern "C" fn swapsim_event_stream(
    h: *mut SwapsimHandle,
    limit: usize,
    cdm_only: bool,
    out_json: *mut *mut c_char,
) -> SwapsimStatus {
    guard(|| {
        if limit == 0 {
            return Err(Failure(SwapsimStatus::InvalidRequest, "limit must be at least 1".into()));
        }
        emit(out_json, &handle(h)?.event_stream(limit, cdm_only))
    })
}

/// The earliest open deadline, if any.
///
/// # Safety
/// `h` must be a live handle and `out_json` valid.
#[no_mangle]
pub unsafe extern "C" fn swapsim_next_deadline(h: *mut SwapsimHandle, out_json: *mut *mut c_char) -> SwapsimStatus {
    guard(|| emit(out_json, &handle(h)?.next_deadline()))
}
