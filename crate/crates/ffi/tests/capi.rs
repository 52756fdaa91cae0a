use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use ramseylab_ffi::*;

fn cs(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = rl_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

fn new_game(red: &str, blue: &str) -> *mut RlGame {
    let mut g = ptr::null_mut();
    let status = unsafe { rl_game_new(cs(red).as_ptr(), cs(blue).as_ptr(), &mut g) };
    assert_eq!(status, RlStatus::Ok);
    assert!(!g.is_null());
    g
}

#[test]
fn game_lifecycle() {
    let g = new_game("path:3", "path:3");
    let mut o = RlOutcome::RedWin;
    unsafe {
        assert_eq!(rl_game_play(g, 0, 1, RL_RED, &mut o), RlStatus::Ok);
        assert_eq!(o, RlOutcome::Ongoing);
        // Repeat keeps red even when blue is asked for.
        assert_eq!(rl_game_play(g, 1, 0, RL_BLUE, ptr::null_mut()), RlStatus::Ok);
        assert_eq!(rl_game_play(g, 1, 2, RL_RED, &mut o), RlStatus::Ok);
        assert_eq!(o, RlOutcome::RedWin);

        let mut rounds = 0;
        assert_eq!(rl_game_round(g, &mut rounds), RlStatus::Ok);
        assert_eq!(rounds, 3);

        let mut t = ptr::null_mut();
        assert_eq!(rl_game_transcript(g, &mut t), RlStatus::Ok);
        let text = CStr::from_ptr(t).to_str().unwrap().to_owned();
        rl_string_free(t);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        let second: serde_json::Value = serde_json::from_str(lines[2]).unwrap();
        assert_eq!(second["color"], "red");
        assert_eq!(second["repeat"], true);

        assert_eq!(rl_game_play(g, 5, 6, RL_RED, &mut o), RlStatus::GameOver);
        rl_game_free(g);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(
            rl_game_new(cs("triangle:3").as_ptr(), cs("path:3").as_ptr(), &mut g),
            RlStatus::InvalidArgument
        );
        assert!(last_error().contains("path or star"));
        assert_eq!(rl_game_new(ptr::null(), cs("path:3").as_ptr(), &mut g), RlStatus::NullPointer);
        let bad = [0xffu8, 0];
        assert_eq!(
            rl_game_new(bad.as_ptr().cast(), cs("path:3").as_ptr(), &mut g),
            RlStatus::InvalidUtf8
        );

        let g = new_game("star:2", "cycle:3");
        assert_eq!(rl_game_play(g, 4, 4, RL_RED, ptr::null_mut()), RlStatus::IllegalMove);
        assert_eq!(rl_game_play(g, 0, 1, 7, ptr::null_mut()), RlStatus::InvalidArgument);
        assert_eq!(rl_game_play(g, 0, 1, RL_RED, ptr::null_mut()), RlStatus::Ok);
        assert!(rl_last_error().is_null());
        assert_eq!(rl_game_seed_blue_path(g, 3), RlStatus::InvalidArgument);
        assert_eq!(rl_game_round(g, ptr::null_mut()), RlStatus::NullPointer);
        rl_game_free(g);
        rl_game_free(ptr::null_mut());
        rl_string_free(ptr::null_mut());
    }
}

#[test]
fn seeded_game_counts_only_played_rounds() {
    let g = new_game("path:2", "path:4");
    let mut o = RlOutcome::Ongoing;
    unsafe {
        assert_eq!(rl_game_seed_blue_path(g, 3), RlStatus::Ok);
        assert_eq!(rl_game_play(g, 2, 3, RL_BLUE, &mut o), RlStatus::Ok);
        assert_eq!(o, RlOutcome::BlueWin);
        let mut rounds = 9;
        rl_game_round(g, &mut rounds);
        assert_eq!(rounds, 1);
        rl_game_free(g);
    }
}

#[test]
fn solve_values() {
    let mut v = 0i64;
    unsafe {
        assert_eq!(rl_solve(cs("path:2").as_ptr(), cs("path:5").as_ptr(), 10, &mut v), RlStatus::Ok);
        assert_eq!(v, 4);
        assert_eq!(rl_solve(cs("path:3").as_ptr(), cs("path:3").as_ptr(), 2, &mut v), RlStatus::Ok);
        assert_eq!(v, -1);
        assert_eq!(
            rl_solve(cs("path:3").as_ptr(), cs("path:3").as_ptr(), 5, ptr::null_mut()),
            RlStatus::NullPointer
        );
    }
}

#[test]
fn verify_reports() {
    let mut pass = false;
    let mut report = ptr::null_mut();
    unsafe {
        let status = rl_verify(
            cs("join-paths").as_ptr(),
            cs(r#"{"k":3,"m":4,"n":4}"#).as_ptr(),
            0,
            &mut pass,
            &mut report,
        );
        assert_eq!(status, RlStatus::Ok, "{}", last_error());
        assert!(pass);
        let json: serde_json::Value =
            serde_json::from_str(CStr::from_ptr(report).to_str().unwrap()).unwrap();
        rl_string_free(report);
        assert_eq!(json["strategy"], "join-paths");
        assert_eq!(json["pass"], true);

        // One round short of the declared budget.
        let status = rl_verify(cs("join-paths").as_ptr(), cs(r#"{"k":3,"m":4,"n":4}"#).as_ptr(), 1, &mut pass, ptr::null_mut());
        assert_eq!(status, RlStatus::Ok);
        assert!(!pass);

        let status = rl_verify(cs("no-such").as_ptr(), cs("{}").as_ptr(), 0, &mut pass, ptr::null_mut());
        assert_eq!(status, RlStatus::StrategyError);
        let status = rl_verify(cs("join-paths").as_ptr(), cs("{k:").as_ptr(), 0, &mut pass, ptr::null_mut());
        assert_eq!(status, RlStatus::InvalidArgument);
    }
}

#[test]
fn header_declares_api() {
    let header = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/ramseylab.h");
    let text = std::fs::read_to_string(header).unwrap();
    for name in [
        "rl_last_error",
        "rl_string_free",
        "rl_game_new",
        "rl_game_free",
        "rl_game_seed_blue_path",
        "rl_game_play",
        "rl_game_round",
        "rl_game_outcome",
        "rl_game_transcript",
        "rl_solve",
        "rl_verify",
        "typedef struct RlGame RlGame",
        "RL_STATUS_GAME_OVER = 5",
    ] {
        assert!(text.contains(name), "missing {name}");
    }
}

/// Builds `tests/c/smoke.c` against the static library when a C compiler is
/// on the path.
#[test]
fn c_program_links_and_runs() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("no C compiler found, skipping");
        return;
    }
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libramseylab_ffi.a");
    assert!(lib.exists(), "static library not found at {}", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("smoke");
    let build = Command::new(&cc)
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .output()
        .unwrap();
    assert!(build.status.success(), "{}", String::from_utf8_lossy(&build.stderr));
    let run = Command::new(&out).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}
