//! C ABI over the isobot engine.
//!
//! Handles are opaque and owned by the caller, who releases them with the
//! matching `*_free`. Fallible calls return an [`IsoStatus`]; on failure
//! [`iso_last_error`] describes the problem. Strings handed out by the
//! library are NUL-terminated UTF-8 and released with [`iso_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use isobot::grid::{grid_to_screen, projection_angle, GridCoord, TileDims};
use isobot::level::{parse_level, Level};
use isobot::program::{parse_program, run};
use isobot::protocol::ProtocolServer;
use isobot::session::{Session, SessionError};
use isobot::uat::{score_uat, UatTable};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsoStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    InvalidDims = 3,
    LevelError = 4,
    ParseError = 5,
    SlotLimit = 6,
    InvalidTransition = 7,
    UatError = 8,
    Panic = 9,
}

/// A validated level.
pub struct IsoLevel(Level);

/// One playable episode on a copy of a level.
pub struct IsoSession(Session);

/// A protocol endpoint answering JSON request lines.
pub struct IsoProtocol(ProtocolServer);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(IsoStatus, String);

type FfiResult<T> = Result<T, Failure>;

fn set_last_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).expect("NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn guard(f: impl FnOnce() -> FfiResult<()>) -> IsoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            IsoStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            IsoStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> FfiResult<&'a str> {
    if p.is_null() {
        return Err(Failure(IsoStatus::NullArgument, "null string".into()));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(IsoStatus::InvalidUtf8, e.to_string()))
}

unsafe fn deref<'a, T>(p: *const T) -> FfiResult<&'a T> {
    p.as_ref()
        .ok_or_else(|| Failure(IsoStatus::NullArgument, "null handle".into()))
}

unsafe fn deref_mut<'a, T>(p: *mut T) -> FfiResult<&'a mut T> {
    p.as_mut()
        .ok_or_else(|| Failure(IsoStatus::NullArgument, "null handle".into()))
}

unsafe fn put<T>(out: *mut T, value: T) -> FfiResult<()> {
    if out.is_null() {
        return Err(Failure(
            IsoStatus::NullArgument,
            "null output pointer".into(),
        ));
    }
    out.write(value);
    Ok(())
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s)
        .expect("engine output has no NUL")
        .into_raw()
}

fn session_failure(e: SessionError) -> Failure {
    match e {
        SessionError::SlotLimit(_) => Failure(IsoStatus::SlotLimit, e.to_string()),
        SessionError::InvalidTransition(_) => Failure(IsoStatus::InvalidTransition, e.to_string()),
    }
}

fn json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("engine values serialize")
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn iso_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn iso_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses level JSON into a new handle written to `out`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn iso_level_parse(
    json: *const c_char,
    out: *mut *mut IsoLevel,
) -> IsoStatus {
    guard(|| {
        let level =
            parse_level(text(json)?).map_err(|e| Failure(IsoStatus::LevelError, e.to_string()))?;
        put(out, Box::into_raw(Box::new(IsoLevel(level))))
    })
}

/// # Safety
/// `level` must come from [`iso_level_parse`] and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn iso_level_free(level: *mut IsoLevel) {
    if !level.is_null() {
        drop(Box::from_raw(level));
    }
}

/// Rows of the height matrix; 0 for a null handle.
///
/// # Safety
/// `level` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn iso_level_rows(level: *const IsoLevel) -> u32 {
    level.as_ref().map_or(0, |l| l.0.rows() as u32)
}

/// Columns of the height matrix; 0 for a null handle.
///
/// # Safety
/// `level` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn iso_level_cols(level: *const IsoLevel) -> u32 {
    level.as_ref().map_or(0, |l| l.0.cols() as u32)
}

/// Stack height at a cell; 0 off the grid or for a null handle.
///
/// # Safety
/// `level` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn iso_level_height(level: *const IsoLevel, row: u32, col: u32) -> u32 {
    level.as_ref().map_or(0, |l| l.0.height_at(row, col))
}

/// Number of tile placements, the sum of all heights.
///
/// # Safety
/// `level` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn iso_level_tile_count(level: *const IsoLevel) -> u64 {
    level.as_ref().map_or(0, |l| l.0.total_tiles())
}

/// Draw-order dump of the level's tiles, one `order kind row col stack` line each.
///
/// # Safety
/// `level` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn iso_level_draw_order(
    level: *const IsoLevel,
    out: *mut *mut c_char,
) -> IsoStatus {
    guard(|| {
        let level = deref(level)?;
        let dump = isobot::depth::dump(&isobot::depth::draw_order(&level.0, &[]));
        put(out, owned_string(dump))
    })
}

fn dims(diamond_width: f64, sprite_height: f64, space_height: f64) -> FfiResult<TileDims> {
    TileDims::new(diamond_width, sprite_height, space_height)
        .map_err(|e| Failure(IsoStatus::InvalidDims, e.to_string()))
}

/// Screen position of a grid cell at a stack level, y up.
///
/// # Safety
/// `out_x` and `out_y` must be writable.
#[no_mangle]
pub unsafe extern "C" fn iso_grid_to_screen(
    row: u32,
    col: u32,
    stack: u32,
    diamond_width: f64,
    sprite_height: f64,
    space_height: f64,
    out_x: *mut f64,
    out_y: *mut f64,
) -> IsoStatus {
    guard(|| {
        let p = grid_to_screen(
            GridCoord::new(row, col, stack),
            &dims(diamond_width, sprite_height, space_height)?,
        );
        put(out_x, p.x)?;
        put(out_y, p.y)
    })
}

/// Angle in degrees between a row step on screen and the horizontal.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn iso_projection_angle(
    diamond_width: f64,
    sprite_height: f64,
    space_height: f64,
    out: *mut f64,
) -> IsoStatus {
    guard(|| {
        put(
            out,
            projection_angle(&dims(diamond_width, sprite_height, space_height)?),
        )
    })
}

/// Runs a program on a level and writes the trace as JSON.
///
/// # Safety
/// `level` must be a live handle, `program` a NUL-terminated string and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn iso_run(
    level: *const IsoLevel,
    program: *const c_char,
    out: *mut *mut c_char,
) -> IsoStatus {
    guard(|| {
        let level = deref(level)?;
        let program = parse_program(text(program)?)
            .map_err(|e| Failure(IsoStatus::ParseError, e.to_string()))?;
        program
            .check_limits(level.0.limits())
            .map_err(|e| Failure(IsoStatus::SlotLimit, e.to_string()))?;
        put(out, owned_string(json(&run(&program, &level.0))))
    })
}

/// Starts a session on a copy of `level`; null if `level` is null.
///
/// # Safety
/// `level` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn iso_session_new(level: *const IsoLevel) -> *mut IsoSession {
    match level.as_ref() {
        Some(l) => Box::into_raw(Box::new(IsoSession(Session::load(l.0.clone())))),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `session` must come from [`iso_session_new`] and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn iso_session_free(session: *mut IsoSession) {
    if !session.is_null() {
        drop(Box::from_raw(session));
    }
}

/// Parses and installs a program, resetting the episode.
///
/// # Safety
/// `session` must be a live handle and `program` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn iso_session_set_program(
    session: *mut IsoSession,
    program: *const c_char,
) -> IsoStatus {
    guard(|| {
        let session = deref_mut(session)?;
        let program = parse_program(text(program)?)
            .map_err(|e| Failure(IsoStatus::ParseError, e.to_string()))?;
        session.0.set_program(program).map_err(session_failure)
    })
}

/// Executes one primitive and writes the step report as JSON.
///
/// # Safety
/// `session` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn iso_session_step(
    session: *mut IsoSession,
    out: *mut *mut c_char,
) -> IsoStatus {
    guard(|| {
        let session = deref_mut(session)?;
        let report = session.0.step().map_err(session_failure)?;
        put(out, owned_string(json(&report)))
    })
}

/// Back to editing with the same program.
///
/// # Safety
/// `session` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn iso_session_reset(session: *mut IsoSession) -> IsoStatus {
    guard(|| {
        deref_mut(session)?.0.reset();
        Ok(())
    })
}

/// Writes the session snapshot as JSON.
///
/// # Safety
/// `session` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn iso_session_snapshot(
    session: *const IsoSession,
    out: *mut *mut c_char,
) -> IsoStatus {
    guard(|| {
        let session = deref(session)?;
        put(out, owned_string(json(&session.0.snapshot())))
    })
}

#[no_mangle]
pub extern "C" fn iso_protocol_new() -> *mut IsoProtocol {
    Box::into_raw(Box::new(IsoProtocol(ProtocolServer::new())))
}

/// # Safety
/// `protocol` must come from [`iso_protocol_new`] and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn iso_protocol_free(protocol: *mut IsoProtocol) {
    if !protocol.is_null() {
        drop(Box::from_raw(protocol));
    }
}

/// Answers one request line. Protocol-level failures are reported inside
/// the JSON response; the status only covers bad arguments.
///
/// # Safety
/// `protocol` must be a live handle, `request` a NUL-terminated string and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn iso_protocol_request(
    protocol: *mut IsoProtocol,
    request: *const c_char,
    out: *mut *mut c_char,
) -> IsoStatus {
    guard(|| {
        let protocol = deref_mut(protocol)?;
        let response = protocol.0.handle_line(text(request)?);
        put(out, owned_string(response))
    })
}

/// Scores questionnaire CSV text and writes the JSON report.
///
/// # Safety
/// `csv` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn iso_score_uat(csv: *const c_char, out: *mut *mut c_char) -> IsoStatus {
    guard(|| {
        let table = UatTable::from_csv(text(csv)?.as_bytes())
            .map_err(|e| Failure(IsoStatus::UatError, e.to_string()))?;
        put(out, owned_string(score_uat(&table).to_json()))
    })
}
