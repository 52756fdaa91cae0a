//! C API for the ramseylab game engine, strategy verifier and solver.
//!
//! Every entry point returns an [`RlStatus`]. When it is not `RL_STATUS_OK`
//! the message can be read with [`rl_last_error`] on the same thread.
//! Strings handed out through out-parameters belong to the caller and must be
//! released with [`rl_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ramseylab::adversaries::{verify_instance, VerifyOptions};
use ramseylab::game::{
    transcript_lines, BlueTarget, Color, Edge, GameError, GameState, RedTarget, TargetSpec, Terminal,
};
use ramseylab::solver::{solve, SolveLimits, SolverError};
use ramseylab::strategies::{instantiate, StrategyParams};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    IllegalMove = 4,
    GameOver = 5,
    LimitExceeded = 6,
    StrategyError = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RlOutcome {
    Ongoing = 0,
    RedWin = 1,
    BlueWin = 2,
}

pub const RL_RED: u32 = 0;
pub const RL_BLUE: u32 = 1;

/// Opaque game handle.
pub struct RlGame {
    state: GameState,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

type Failure = (RlStatus, String);

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> RlStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RlStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            RlStatus::Panic
        }
    }
}

fn null() -> Failure {
    (RlStatus::NullPointer, "null pointer argument".into())
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (RlStatus::InvalidUtf8, "string is not UTF-8".into()))
}

unsafe fn write_out<T>(out: *mut T, v: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(v);
    Ok(())
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("no interior nul").into_raw()
}

fn game_err(e: GameError) -> Failure {
    let status = match e {
        GameError::GameOver => RlStatus::GameOver,
        GameError::SelfLoop(_) => RlStatus::IllegalMove,
        _ => RlStatus::InvalidArgument,
    };
    (status, e.to_string())
}

unsafe fn parse_target(red: *const c_char, blue: *const c_char) -> Result<TargetSpec, Failure> {
    let bad = |e: GameError| (RlStatus::InvalidArgument, e.to_string());
    let red: RedTarget = read_str(red)?.parse().map_err(bad)?;
    let blue: BlueTarget = read_str(blue)?.parse().map_err(bad)?;
    TargetSpec::new(red, blue).map_err(bad)
}

fn outcome(state: &GameState) -> RlOutcome {
    match state.terminal() {
        None => RlOutcome::Ongoing,
        Some(Terminal::RedWin(_)) => RlOutcome::RedWin,
        Some(Terminal::BlueWin(_)) => RlOutcome::BlueWin,
    }
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn rl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Starts a game. Targets use the `kind:size` form, e.g. `"path:3"`,
/// `"star:4"`, `"cycle:5"`.
///
/// # Safety
/// `red` and `blue` must be nul-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_game_new(
    red: *const c_char,
    blue: *const c_char,
    out: *mut *mut RlGame,
) -> RlStatus {
    guard(|| {
        let target = parse_target(red, blue)?;
        let game = Box::new(RlGame {
            state: GameState::new(target),
        });
        write_out(out, Box::into_raw(game))
    })
}

/// # Safety
/// `game` must be null or a handle from [`rl_game_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rl_game_free(game: *mut RlGame) {
    if !game.is_null() {
        drop(Box::from_raw(game));
    }
}

/// Places a blue path on `n` fresh vertices before the first round.
///
/// # Safety
/// `game` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn rl_game_seed_blue_path(game: *mut RlGame, n: usize) -> RlStatus {
    guard(|| {
        let game = game.as_mut().ok_or_else(null)?;
        game.state.seed_blue_path(n).map_err(game_err)?;
        Ok(())
    })
}

/// Plays edge `{u, v}` with Painter's choice `color` (`RL_RED` or
/// `RL_BLUE`). A repeated edge keeps its old color. `outcome_out` may be null.
///
/// # Safety
/// `game` must be a live handle; `outcome_out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn rl_game_play(
    game: *mut RlGame,
    u: u32,
    v: u32,
    color: u32,
    outcome_out: *mut RlOutcome,
) -> RlStatus {
    guard(|| {
        let game = game.as_mut().ok_or_else(null)?;
        let color = match color {
            RL_RED => Color::Red,
            RL_BLUE => Color::Blue,
            c => return Err((RlStatus::InvalidArgument, format!("unknown color {c}"))),
        };
        let edge = Edge::new(u, v).map_err(game_err)?;
        game.state.play_edge(edge, color).map_err(game_err)?;
        if !outcome_out.is_null() {
            outcome_out.write(outcome(&game.state));
        }
        Ok(())
    })
}

/// Rounds played so far.
///
/// # Safety
/// `game` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rl_game_round(game: *const RlGame, out: *mut usize) -> RlStatus {
    guard(|| {
        let game = game.as_ref().ok_or_else(null)?;
        write_out(out, game.state.round())
    })
}

/// # Safety
/// `game` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rl_game_outcome(game: *const RlGame, out: *mut RlOutcome) -> RlStatus {
    guard(|| {
        let game = game.as_ref().ok_or_else(null)?;
        write_out(out, outcome(&game.state))
    })
}

/// Transcript as JSON lines: a header, then one object per round.
///
/// # Safety
/// `game` must be a live handle; `out` writable. Free the result with
/// [`rl_string_free`].
#[no_mangle]
pub unsafe extern "C" fn rl_game_transcript(game: *const RlGame, out: *mut *mut c_char) -> RlStatus {
    guard(|| {
        let game = game.as_ref().ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        out.write(to_c_string(transcript_lines(&game.state)));
        Ok(())
    })
}

/// Exact online Ramsey number for the target pair, searched up to
/// `max_rounds`. Writes -1 when Builder needs more rounds than that.
///
/// # Safety
/// `red` and `blue` must be nul-terminated strings; `out_value` writable.
#[no_mangle]
pub unsafe extern "C" fn rl_solve(
    red: *const c_char,
    blue: *const c_char,
    max_rounds: u32,
    out_value: *mut i64,
) -> RlStatus {
    guard(|| {
        let target = parse_target(red, blue)?;
        if out_value.is_null() {
            return Err(null());
        }
        let result = solve(target, SolveLimits::new(max_rounds as usize)).map_err(|e| match e {
            SolverError::SizeCapExceeded { .. } => (RlStatus::InvalidArgument, e.to_string()),
            SolverError::MemoCapExceeded { .. } => (RlStatus::LimitExceeded, e.to_string()),
        })?;
        out_value.write(result.value.map_or(-1, |v| v as i64));
        Ok(())
    })
}

/// Runs a registered Builder strategy against every Painter. `params_json`
/// holds the strategy parameters, e.g. `{"k":3,"n":4}`. `budget` 0 means the
/// strategy's declared budget. `out_report` may be null; otherwise it
/// receives the report as JSON.
///
/// # Safety
/// String arguments must be nul-terminated; `out_pass` writable; `out_report`
/// null or writable.
#[no_mangle]
pub unsafe extern "C" fn rl_verify(
    strategy: *const c_char,
    params_json: *const c_char,
    budget: usize,
    out_pass: *mut bool,
    out_report: *mut *mut c_char,
) -> RlStatus {
    guard(|| {
        let id = read_str(strategy)?;
        let params: StrategyParams = serde_json::from_str(read_str(params_json)?)
            .map_err(|e| (RlStatus::InvalidArgument, e.to_string()))?;
        if out_pass.is_null() {
            return Err(null());
        }
        let inst = instantiate(id, &params).map_err(|e| (RlStatus::StrategyError, e.to_string()))?;
        let budget = (budget > 0).then_some(budget);
        let report = verify_instance(&inst, budget, VerifyOptions::default())
            .map_err(|e| (RlStatus::LimitExceeded, e.to_string()))?;
        out_pass.write(report.pass);
        if !out_report.is_null() {
            let json = serde_json::to_string(&report).expect("report serializes");
            out_report.write(to_c_string(json));
        }
        Ok(())
    })
}
