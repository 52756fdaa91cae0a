//! Subadditivity checks and finite-window limit estimates.
//!
//! All arithmetic is exact. A window holds `a_1..a_M`; pairs `(m, n)` are
//! only checked when `m + n <= M`.

use num_rational::Ratio;
use serde::{Serialize, Serializer};
use thiserror::Error;

pub type Q = Ratio<i128>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error("window is empty")]
    Empty,
    #[error("cannot parse {0:?} as a rational")]
    BadValue(String),
    #[error("line {line}: expected index {expected}")]
    BadIndex { line: usize, expected: usize },
    #[error("almost subadditivity fails at m={m}, n={n}")]
    PrerequisiteFailed { m: usize, n: usize },
}

fn ser_q<S: Serializer>(q: &Q, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

fn ser_q_opt<S: Serializer>(q: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_str(&q.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceWindow {
    values: Vec<Q>,
    pub slack: Q,
    pub threshold: usize,
}

impl SequenceWindow {
    pub fn new(values: Vec<Q>) -> Result<Self, SequenceError> {
        if values.is_empty() {
            return Err(SequenceError::Empty);
        }
        Ok(SequenceWindow {
            values,
            slack: Q::from_integer(0),
            threshold: 0,
        })
    }

    pub fn from_fn(len: usize, f: impl Fn(usize) -> Q) -> Result<Self, SequenceError> {
        Self::new((1..=len).map(f).collect())
    }

    pub fn from_integers(values: &[i64]) -> Result<Self, SequenceError> {
        Self::new(values.iter().map(|&v| Q::from_integer(v as i128)).collect())
    }

    pub fn with_slack(mut self, c: Q) -> Self {
        self.slack = c;
        self
    }

    pub fn with_threshold(mut self, n: usize) -> Self {
        self.threshold = n;
        self
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `a_n`, 1-based.
    pub fn a(&self, n: usize) -> Q {
        self.values[n - 1]
    }

    pub fn truncated(&self, len: usize) -> Self {
        SequenceWindow {
            values: self.values[..len.clamp(1, self.len())].to_vec(),
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub m: usize,
    pub n: usize,
    #[serde(serialize_with = "ser_q")]
    pub lhs: Q,
    #[serde(serialize_with = "ser_q")]
    pub rhs: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub pass: bool,
    /// No pair fell inside the checked range, so the pass certifies nothing.
    pub vacuous: bool,
    pub pairs_checked: u64,
    pub violation: Option<Violation>,
}

fn check(w: &SequenceWindow, slack: Q, keep: impl Fn(usize, usize) -> bool) -> CheckReport {
    let big_m = w.len();
    let mut pairs = 0;
    for m in 1..big_m {
        for n in 1..=big_m - m {
            if !keep(m, n) {
                continue;
            }
            pairs += 1;
            let lhs = w.a(m + n);
            let rhs = w.a(m) + w.a(n) + slack;
            if lhs > rhs {
                return CheckReport {
                    pass: false,
                    vacuous: false,
                    pairs_checked: pairs,
                    violation: Some(Violation { m, n, lhs, rhs }),
                };
            }
        }
    }
    CheckReport {
        pass: true,
        vacuous: pairs == 0,
        pairs_checked: pairs,
        violation: None,
    }
}

fn in_band(m: usize, n: usize) -> bool {
    n <= 2 * m && m <= 2 * n
}

/// `a_{m+n} <= a_m + a_n` for all `m, n >= 1`.
pub fn check_subadditive(w: &SequenceWindow) -> CheckReport {
    check(w, Q::from_integer(0), |_, _| true)
}

/// `a_{m+n} <= a_m + a_n + C` for `n/2 <= m <= 2n`.
pub fn check_almost_subadditive(w: &SequenceWindow) -> CheckReport {
    check(w, w.slack, in_band)
}

/// As [`check_almost_subadditive`], only for `min(m, n) > N`.
pub fn check_eventually_almost_subadditive(w: &SequenceWindow) -> CheckReport {
    let t = w.threshold;
    check(w, w.slack, move |m, n| in_band(m, n) && m.min(n) > t)
}

/// Upper estimate of `lim a_n / n` from the window: the least
/// `(a_n + C) / n`. The true infimum may lie beyond the window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LimitEstimate {
    #[serde(serialize_with = "ser_q")]
    pub upper: Q,
    pub upper_at: usize,
    #[serde(serialize_with = "ser_q")]
    pub best_ratio: Q,
    pub best_ratio_at: usize,
    pub window: usize,
    #[serde(serialize_with = "ser_q_opt")]
    pub approx: Option<Q>,
    pub finite_window: bool,
    pub vacuous: bool,
}

pub fn limit_estimate(w: &SequenceWindow) -> Result<LimitEstimate, SequenceError> {
    let report = check_almost_subadditive(w);
    if let Some(v) = report.violation {
        return Err(SequenceError::PrerequisiteFailed { m: v.m, n: v.n });
    }
    let ratio = |n: usize, c: Q| (w.a(n) + c) / Q::from_integer(n as i128);
    let zero = Q::from_integer(0);
    // Ties keep the smallest n.
    let argmin = |c: Q| {
        (1..=w.len()).fold(1, |best, n| if ratio(n, c) < ratio(best, c) { n } else { best })
    };
    let upper_at = argmin(w.slack);
    let best_ratio_at = argmin(zero);
    Ok(LimitEstimate {
        upper: ratio(upper_at, w.slack),
        upper_at,
        best_ratio: ratio(best_ratio_at, zero),
        best_ratio_at,
        window: w.len(),
        approx: None,
        finite_window: true,
        vacuous: report.vacuous,
    })
}

pub fn parse_rational(s: &str) -> Result<Q, SequenceError> {
    let s = s.trim();
    let bad = || SequenceError::BadValue(s.to_string());
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i128 = p.trim().parse().map_err(|_| bad())?;
            let q: i128 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Q::new(p, q))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Reads a sequence from a JSON array of numbers or `"p/q"` strings, or
/// from CSV rows `n,value` with `n = 1, 2, ...` and an optional header.
pub fn parse_sequence(text: &str) -> Result<Vec<Q>, SequenceError> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') {
        let items: Vec<serde_json::Value> =
            serde_json::from_str(trimmed).map_err(|e| SequenceError::BadValue(e.to_string()))?;
        return items
            .iter()
            .map(|v| match v {
                serde_json::Value::String(s) => parse_rational(s),
                serde_json::Value::Number(n) => parse_rational(&n.to_string()),
                other => Err(SequenceError::BadValue(other.to_string())),
            })
            .collect();
    }
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (idx, val) = line
            .split_once(',')
            .ok_or_else(|| SequenceError::BadValue(line.to_string()))?;
        let Ok(idx) = idx.trim().parse::<usize>() else {
            if out.is_empty() && i == 0 {
                continue;
            }
            return Err(SequenceError::BadValue(line.to_string()));
        };
        if idx != out.len() + 1 {
            return Err(SequenceError::BadIndex {
                line: i + 1,
                expected: out.len() + 1,
            });
        }
        out.push(parse_rational(val)?);
    }
    if out.is_empty() {
        return Err(SequenceError::Empty);
    }
    Ok(out)
}
