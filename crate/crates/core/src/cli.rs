//! The `ramseylab` command line.
//!
//! Exit codes: 0 success or pass, 1 usage or precondition error, 2 cap
//! exceeded or failed check.

use std::ffi::OsString;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::adversaries::{verify_instance, AdversaryError, VerifyOptions, DEFAULT_ENUM_CAP};
use crate::game::{BlueTarget, RedTarget, TargetSpec};
use crate::sequences::{
    check_almost_subadditive, check_eventually_almost_subadditive, check_subadditive,
    limit_estimate, parse_rational, parse_sequence, SequenceError, SequenceWindow,
};
use crate::solver::{solve, SolveLimits, SolverError, DEFAULT_MEMO_CAP};
use crate::strategies::{instantiate, StrategyError, StrategyParams};

pub const OUT_ENV: &str = "RAMSEYLAB_OUT";

#[derive(Parser, Debug, Serialize)]
#[command(name = "ramseylab", version, about = "Builder/Painter online Ramsey game lab")]
pub struct Cli {
    /// Output directory; the RAMSEYLAB_OUT environment variable takes precedence.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for parallel verification.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, default_value_t = DEFAULT_ENUM_CAP)]
    enum_cap: u64,
    #[arg(long, global = true, default_value_t = DEFAULT_MEMO_CAP)]
    memo_cap: usize,
    #[arg(long, global = true)]
    vertex_cap: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
enum Command {
    /// Exact online Ramsey number of a target pair.
    Solve {
        #[arg(long)]
        red: RedTarget,
        #[arg(long)]
        blue: BlueTarget,
        #[arg(long, default_value_t = 8)]
        max_rounds: usize,
    },
    /// Check a strategy's round bound against every Painter.
    Verify(VerifyArgs),
    /// Solve a range of blue sizes, e.g. `--blue path:3..5`.
    Table {
        #[arg(long)]
        red: RedTarget,
        #[arg(long)]
        blue: String,
        #[arg(long, default_value_t = 10)]
        max_rounds: usize,
    },
    /// Subadditivity checks and limit estimate for a sequence file.
    Limit {
        /// CSV `n,value` rows or a JSON array; `-` reads stdin.
        #[arg(long)]
        input: PathBuf,
        /// Additive slack C.
        #[arg(long, default_value = "0")]
        c: String,
        /// Threshold N for the eventual check.
        #[arg(long, default_value_t = 0)]
        threshold: usize,
    },
    /// Run the session server.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: String,
    },
}

#[derive(Args, Debug, Serialize)]
struct VerifyArgs {
    #[arg(long)]
    lemma: String,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    seed_blue_path: Option<usize>,
    #[arg(long)]
    budget: Option<usize>,
}

struct Outcome {
    code: i32,
    summary: String,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Check(String),
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn write_json(dir: &Path, name: &str, value: &impl Serialize) -> std::io::Result<()> {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    fs::write(dir.join(name), s)
}

const TABLE_HEADER: &str = "red_kind,k,blue_kind,n,value,nodes,seconds,status";

fn append_rows(dir: &Path, rows: &[String]) -> std::io::Result<()> {
    let path = dir.join("table.csv");
    let fresh = !path.exists();
    let mut f = fs::OpenOptions::new().create(true).append(true).open(path)?;
    if fresh {
        writeln!(f, "{TABLE_HEADER}")?;
    }
    for r in rows {
        writeln!(f, "{r}")?;
    }
    Ok(())
}

fn kind_and_size(s: String) -> (String, String) {
    match s.split_once(':') {
        Some((k, n)) => (k.to_string(), n.to_string()),
        None => (s, String::new()),
    }
}

fn limits(cli: &Cli, max_rounds: usize) -> SolveLimits {
    let mut l = SolveLimits::new(max_rounds);
    l.memo_cap = cli.memo_cap;
    if let Some(v) = cli.vertex_cap {
        l.vertex_cap = v;
    }
    l
}

/// One table row; the status column marks rows that did not finish.
fn solve_row(red: RedTarget, blue: BlueTarget, l: SolveLimits) -> (String, Result<serde_json::Value, SolverError>) {
    let (rk, k) = kind_and_size(red.to_string());
    let (bk, n) = kind_and_size(blue.to_string());
    let started = Instant::now();
    let target = match TargetSpec::new(red, blue) {
        Ok(t) => t,
        Err(e) => return (format!("{rk},{k},{bk},{n},,0,0,invalid"), Ok(json!({ "error": e.to_string() }))),
    };
    match solve(target, l) {
        Ok(r) => {
            let secs = started.elapsed().as_secs_f64();
            let (value, status) = match r.value {
                Some(v) => (v.to_string(), "ok"),
                None => (format!(">{}", l.max_rounds), "above_max"),
            };
            let row = format!("{rk},{k},{bk},{n},{value},{},{secs:.3},{status}", r.stats.nodes);
            (row, Ok(serde_json::to_value(&r).expect("serializable")))
        }
        Err(e) => {
            let secs = started.elapsed().as_secs_f64();
            (format!("{rk},{k},{bk},{n},,0,{secs:.3},memo_cap"), Err(e))
        }
    }
}

fn parse_blue_range(s: &str) -> Result<(String, usize, usize), Failure> {
    let bad = || Failure::Usage(format!("expected kind:size or kind:from..to, got {s:?}"));
    let (kind, range) = s.split_once(':').ok_or_else(bad)?;
    let (a, b) = match range.split_once("..") {
        Some((a, b)) => (a.parse().map_err(|_| bad())?, b.trim_start_matches('=').parse().map_err(|_| bad())?),
        None => {
            let v = range.parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if a > b {
        return Err(bad());
    }
    Ok((kind.to_string(), a, b))
}

fn run_command(cli: &Cli, dir: &Path) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Solve { red, blue, max_rounds } => {
            TargetSpec::new(*red, *blue).map_err(|e| Failure::Usage(e.to_string()))?;
            let (row, result) = solve_row(*red, *blue, limits(cli, *max_rounds));
            append_rows(dir, &[row])?;
            match result {
                Ok(v) => {
                    write_json(dir, "result.json", &v)?;
                    let value = v["value"].clone();
                    Ok(Outcome {
                        code: 0,
                        summary: format!("value {value}"),
                    })
                }
                Err(e) => {
                    write_json(dir, "result.json", &json!({ "error": e.to_string() }))?;
                    Err(Failure::Check(e.to_string()))
                }
            }
        }
        Command::Verify(a) => {
            let params = StrategyParams {
                k: a.k,
                n: a.n,
                m: a.m,
                t: a.t,
                seed_blue_path: a.seed_blue_path,
            };
            let inst = instantiate(&a.lemma, &params).map_err(|e| match e {
                StrategyError::PreconditionViolation(_)
                | StrategyError::MissingParam(_)
                | StrategyError::UnknownStrategy(_) => Failure::Usage(e.to_string()),
                other => Failure::Check(other.to_string()),
            })?;
            let opts = VerifyOptions {
                enum_cap: cli.enum_cap,
                ..Default::default()
            };
            let report = verify_instance(&inst, a.budget, opts).map_err(|e| match e {
                AdversaryError::EnumerationCapExceeded { .. } => Failure::Check(e.to_string()),
                other => Failure::Usage(other.to_string()),
            })?;
            write_json(dir, "report.json", &report)?;
            if report.pass {
                Ok(Outcome {
                    code: 0,
                    summary: format!(
                        "pass: {} within {} rounds, worst {}, {} leaves",
                        report.strategy, report.budget, report.worst_rounds, report.leaves
                    ),
                })
            } else {
                Ok(Outcome {
                    code: 2,
                    summary: format!(
                        "fail: {} counterexample {}",
                        report.strategy,
                        report.counterexample.as_deref().unwrap_or("")
                    ),
                })
            }
        }
        Command::Table { red, blue, max_rounds } => {
            let (kind, from, to) = parse_blue_range(blue)?;
            let mut rows = Vec::new();
            let mut results = Vec::new();
            for n in from..=to {
                let b: BlueTarget = format!("{kind}:{n}").parse().map_err(|e: crate::game::GameError| Failure::Usage(e.to_string()))?;
                let (row, r) = solve_row(*red, b, limits(cli, *max_rounds));
                rows.push(row);
                results.push(r.unwrap_or_else(|e| json!({ "blue": b, "error": e.to_string() })));
            }
            append_rows(dir, &rows)?;
            write_json(dir, "result.json", &results)?;
            Ok(Outcome {
                code: 0,
                summary: rows.join("\n"),
            })
        }
        Command::Limit { input, c, threshold } => {
            let text = if input.as_os_str() == "-" {
                std::io::read_to_string(std::io::stdin())?
            } else {
                fs::read_to_string(input)?
            };
            let slack = parse_rational(c).map_err(|e| Failure::Usage(e.to_string()))?;
            let values = parse_sequence(&text).map_err(|e| Failure::Usage(e.to_string()))?;
            let w = SequenceWindow::new(values)
                .map_err(|e| Failure::Usage(e.to_string()))?
                .with_slack(slack)
                .with_threshold(*threshold);
            let estimate = limit_estimate(&w);
            let report = json!({
                "window": w.len(),
                "slack": slack.to_string(),
                "threshold": threshold,
                "subadditive": check_subadditive(&w),
                "almost_subadditive": check_almost_subadditive(&w),
                "eventually_almost_subadditive": check_eventually_almost_subadditive(&w),
                "estimate": estimate.as_ref().ok(),
            });
            write_json(dir, "report.json", &report)?;
            match estimate {
                Ok(e) => Ok(Outcome {
                    code: 0,
                    summary: format!("estimate {} (window of {}, at n = {})", e.upper, e.window, e.upper_at),
                }),
                Err(SequenceError::PrerequisiteFailed { m, n }) => Err(Failure::Check(format!(
                    "almost subadditivity fails at (m, n) = ({m}, {n})"
                ))),
                Err(e) => Err(Failure::Usage(e.to_string())),
            }
        }
        Command::Serve { addr } => serve(addr),
    }
}

#[cfg(feature = "server")]
fn serve(addr: &str) -> Result<Outcome, Failure> {
    let addr: std::net::SocketAddr = addr.parse().map_err(|e| Failure::Usage(format!("{addr}: {e}")))?;
    let rt = tokio::runtime::Runtime::new()?;
    eprintln!("listening on {addr}");
    rt.block_on(crate::service::server::serve(addr, crate::service::SessionManager::new()))?;
    Ok(Outcome {
        code: 0,
        summary: "server stopped".into(),
    })
}

#[cfg(not(feature = "server"))]
fn serve(_addr: &str) -> Result<Outcome, Failure> {
    Err(Failure::Usage("built without the server feature".into()))
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Some(j) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global();
    }
    let dir = std::env::var_os(OUT_ENV)
        .map(PathBuf::from)
        .or_else(|| cli.out.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    if let Err(e) = fs::create_dir_all(&dir) {
        eprintln!("error: cannot create {}: {e}", dir.display());
        return 1;
    }
    let started = Instant::now();
    let outcome = run_command(&cli, &dir);
    let (code, summary) = match &outcome {
        Ok(o) => (o.code, o.summary.clone()),
        Err(Failure::Usage(m)) => (1, format!("error: {m}")),
        Err(Failure::Check(m)) => (2, format!("error: {m}")),
    };
    let manifest = json!({
        "tool": "ramseylab",
        "version": env!("CARGO_PKG_VERSION"),
        "argv": argv.iter().map(|a| a.to_string_lossy().into_owned()).collect::<Vec<_>>(),
        "config": &cli,
        "exit_code": code,
        "started_unix": SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
        "seconds": started.elapsed().as_secs_f64(),
    });
    if let Err(e) = write_json(&dir, "manifest.json", &manifest) {
        eprintln!("error: cannot write manifest: {e}");
        return 1;
    }
    if code == 0 {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    code
}
