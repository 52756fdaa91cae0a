//! Named strategy instances with their seeded boards and targets.
//!
//! This is the single place where a strategy id plus parameters turns into
//! something playable; the CLI, the session service and the C API all go
//! through [`instantiate`].

use serde::{Deserialize, Serialize};

use super::{
    BuilderStrategy, CloseCycleChord, Composite, ExtendPair, JoinPaths, Part, StarCycle,
    StarExtend, StarExtendBy, StarJoin, StrategyError,
};
use crate::game::{BlueTarget, ColoredGraph, GameState, RedTarget, TargetSpec, Vertex};

pub const STRATEGY_IDS: &[&str] = &[
    "extend-pair",
    "join-paths",
    "close-cycle-chord",
    "star-extend",
    "star-extend-by",
    "star-join",
    "star-cycle",
    "composite:path-join",
    "composite:cycle-join",
    "composite:path-cycle-sandwich",
    "composite:star-join",
    "composite:star-cycle-join",
    "composite:star-cycle-sandwich",
];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed_blue_path: Option<usize>,
}

impl StrategyParams {
    pub fn k(k: usize) -> Self {
        StrategyParams {
            k: Some(k),
            ..Default::default()
        }
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = Some(n);
        self
    }

    pub fn with_m(mut self, m: usize) -> Self {
        self.m = Some(m);
        self
    }

    pub fn with_t(mut self, t: usize) -> Self {
        self.t = Some(t);
        self
    }

    pub fn with_seed(mut self, s: usize) -> Self {
        self.seed_blue_path = Some(s);
        self
    }

    fn need(v: Option<usize>, name: &'static str) -> Result<usize, StrategyError> {
        v.ok_or(StrategyError::MissingParam(name))
    }
}

/// A strategy ready to play: its board, its target and its declared budget.
pub struct Instance {
    pub id: String,
    pub params: StrategyParams,
    pub target: TargetSpec,
    pub seed: GameState,
    pub strategy: Box<dyn BuilderStrategy>,
    pub budget: usize,
}

impl std::fmt::Debug for Instance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Instance")
            .field("id", &self.id)
            .field("params", &self.params)
            .field("target", &self.target)
            .field("budget", &self.budget)
            .finish()
    }
}

fn target(red: RedTarget, blue: BlueTarget) -> Result<TargetSpec, StrategyError> {
    TargetSpec::new(red, blue)
        .map_err(|e| StrategyError::PreconditionViolation(e.to_string()))
}

fn prefix(ws: &[Vec<Vertex>], i: usize, len: usize) -> Result<Vec<Vertex>, StrategyError> {
    let w = ws
        .get(i)
        .ok_or_else(|| StrategyError::AdapterMismatch(format!("no witness from stage {i}")))?;
    if w.len() < len {
        return Err(StrategyError::AdapterMismatch(format!(
            "stage {i} produced a blue path on {} vertices, need {len}",
            w.len()
        )));
    }
    Ok(w[..len].to_vec())
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<(), StrategyError> {
    if cond {
        Ok(())
    } else {
        Err(StrategyError::PreconditionViolation(msg()))
    }
}

fn boxed<S: BuilderStrategy + 'static>(s: S) -> Box<dyn BuilderStrategy> {
    Box::new(s)
}

pub fn instantiate(id: &str, params: &StrategyParams) -> Result<Instance, StrategyError> {
    let p = *params;
    let need = StrategyParams::need;
    let k = need(p.k, "k")?;
    require(k >= 1, || "k must be at least 1".into())?;
    let mut board = ColoredGraph::new();

    let (tgt, strategy): (TargetSpec, Box<dyn BuilderStrategy>) = match id {
        "extend-pair" => match p.seed_blue_path {
            Some(s) => {
                let t = need(p.t, "t")?;
                let base = board.add_blue_path(s.max(1));
                (
                    target(RedTarget::Path(k), BlueTarget::Path(s.max(1) + t))?,
                    boxed(ExtendPair::new(k, t, base)),
                )
            }
            None => {
                let n = need(p.n, "n")?;
                (
                    target(RedTarget::Path(k), BlueTarget::Path(n))?,
                    boxed(ExtendPair::from_scratch(k, n)),
                )
            }
        },
        "join-paths" => {
            let (m, n) = (need(p.m, "m")?, need(p.n, "n")?);
            require(2 * m.min(n) > k, || {
                format!("join-paths needs min(m, n) > k/2, got m={m}, n={n}, k={k}")
            })?;
            let left = board.add_blue_path(m);
            let right = board.add_blue_path(n);
            (
                target(RedTarget::Path(k), BlueTarget::Path(m + n - k))?,
                boxed(JoinPaths::new(k, left, right)?),
            )
        }
        "close-cycle-chord" => {
            let n = need(p.n, "n")?;
            require(k >= 2 && n >= k * k + k && n >= k + 3, || {
                format!("close-cycle-chord needs k >= 2 and n >= k^2 + k, got n={n}, k={k}")
            })?;
            let path = board.add_blue_path(n);
            (
                target(RedTarget::Path(k), BlueTarget::Cycle(n - k))?,
                boxed(CloseCycleChord::new(k, path)?),
            )
        }
        "star-extend" => {
            let n = need(p.seed_blue_path.or(p.n), "n")?.max(1);
            let path = board.add_blue_path(n);
            (
                target(RedTarget::Star(k), BlueTarget::Path(n + 1))?,
                boxed(StarExtend::new(k, path)),
            )
        }
        "star-extend-by" => {
            let t = need(p.t, "t")?;
            let n = p.seed_blue_path.or(p.n).unwrap_or(1).max(1);
            let path = board.add_blue_path(n);
            (
                target(RedTarget::Star(k), BlueTarget::Path(n + t))?,
                boxed(StarExtendBy::new(k, t, path)),
            )
        }
        "star-join" => {
            let (m, n) = (need(p.m, "m")?, need(p.n, "n")?);
            require(m >= k && n >= 1, || {
                format!("star-join needs m >= k, got m={m}, k={k}")
            })?;
            let left = board.add_blue_path(m);
            let right = board.add_blue_path(n);
            (
                target(RedTarget::Star(k), BlueTarget::Path(m + n - k))?,
                boxed(StarJoin::new(k, left, right)?),
            )
        }
        "star-cycle" => {
            let n = need(p.n, "n")?;
            require(n >= 3 * k + 2, || {
                format!("star-cycle needs n >= 3k + 2, got n={n}, k={k}")
            })?;
            let path = board.add_blue_path(n);
            (
                target(RedTarget::Star(k), BlueTarget::Cycle(n - 2 * k))?,
                boxed(StarCycle::new(k, path)?),
            )
        }
        "composite:path-join" => {
            let (m, n) = (need(p.m, "m")?, need(p.n, "n")?);
            require(2 * n > k && n >= 2 && m >= 1, || {
                format!("path-join needs n > k/2 and n >= 2, got n={n}, k={k}")
            })?;
            let parts = vec![
                Part::new("base m+k", 2 * (k + m + k), move |_| {
                    Ok(boxed(ExtendPair::from_scratch(k, m + k)))
                }),
                Part::new("base n", 2 * (k + n), move |_| Ok(boxed(ExtendPair::from_scratch(k, n)))),
                Part::new("join", k - 1, move |ws| {
                    Ok(boxed(JoinPaths::new(k, prefix(ws, 0, m + k)?, prefix(ws, 1, n)?)?))
                }),
            ];
            (
                target(RedTarget::Path(k), BlueTarget::Path(m + n))?,
                boxed(Composite::new(id, parts)),
            )
        }
        "composite:cycle-join" => {
            let (m, n) = (need(p.m, "m")?, need(p.n, "n")?);
            require(k >= 2 && 2 * n > k && n >= 2 && m + n >= k * k && m + n >= 3, || {
                format!("cycle-join needs k >= 2, n > k/2 and m + n >= k^2, got m={m}, n={n}, k={k}")
            })?;
            let long = m + n + k;
            let parts = vec![
                Part::new("base m+2k", 2 * (k + m + 2 * k), move |_| {
                    Ok(boxed(ExtendPair::from_scratch(k, m + 2 * k)))
                }),
                Part::new("base n", 2 * (k + n), move |_| Ok(boxed(ExtendPair::from_scratch(k, n)))),
                Part::new("join", k - 1, move |ws| {
                    Ok(boxed(JoinPaths::new(k, prefix(ws, 0, m + 2 * k)?, prefix(ws, 1, n)?)?))
                }),
                Part::new("close", 2 * k, move |ws| {
                    Ok(boxed(CloseCycleChord::new(k, prefix(ws, 2, long)?)?))
                }),
            ];
            (
                target(RedTarget::Path(k), BlueTarget::Cycle(m + n))?,
                boxed(Composite::new(id, parts)),
            )
        }
        "composite:path-cycle-sandwich" => {
            let n = need(p.n, "n")?;
            require(k >= 2 && n >= k * k && n >= 3, || {
                format!("path-cycle-sandwich needs k >= 2 and n >= k^2, got n={n}, k={k}")
            })?;
            let seed = board.add_blue_path(n);
            let parts = vec![
                Part::new("extend by k", 4 * k, move |_| {
                    Ok(boxed(ExtendPair::new(k, k, seed.clone())))
                }),
                Part::new("close", 2 * k, move |ws| {
                    Ok(boxed(CloseCycleChord::new(k, prefix(ws, 0, n + k)?)?))
                }),
            ];
            (
                target(RedTarget::Path(k), BlueTarget::Cycle(n))?,
                boxed(Composite::new(id, parts)),
            )
        }
        "composite:star-join" => {
            let (m, n) = (need(p.m, "m")?, need(p.n, "n")?);
            require(m >= 1 && n >= 2, || format!("star-join composite needs m >= 1, n >= 2, got m={m}, n={n}"))?;
            let parts = vec![
                Part::new("base m+k", (m + k - 1) * k, move |_| {
                    Ok(boxed(StarExtendBy::from_scratch(k, m + k)))
                }),
                Part::new("base n", (n - 1) * k, move |_| Ok(boxed(StarExtendBy::from_scratch(k, n)))),
                Part::new("join", k, move |ws| {
                    Ok(boxed(StarJoin::new(k, prefix(ws, 0, m + k)?, prefix(ws, 1, n)?)?))
                }),
            ];
            (
                target(RedTarget::Star(k), BlueTarget::Path(m + n))?,
                boxed(Composite::new(id, parts)),
            )
        }
        "composite:star-cycle-join" => {
            let (m, n) = (need(p.m, "m")?, need(p.n, "n")?);
            require(m >= 1 && n >= 2 && m + n >= k + 2 && m + n >= 3, || {
                format!("star-cycle-join needs m + n >= k + 2, got m={m}, n={n}, k={k}")
            })?;
            let long = m + n + 2 * k;
            let parts = vec![
                Part::new("base m+3k", (m + 3 * k - 1) * k, move |_| {
                    Ok(boxed(StarExtendBy::from_scratch(k, m + 3 * k)))
                }),
                Part::new("base n", (n - 1) * k, move |_| Ok(boxed(StarExtendBy::from_scratch(k, n)))),
                Part::new("join", k, move |ws| {
                    Ok(boxed(StarJoin::new(k, prefix(ws, 0, m + 3 * k)?, prefix(ws, 1, n)?)?))
                }),
                Part::new("close", 3 * k, move |ws| {
                    Ok(boxed(StarCycle::new(k, prefix(ws, 2, long)?)?))
                }),
            ];
            (
                target(RedTarget::Star(k), BlueTarget::Cycle(m + n))?,
                boxed(Composite::new(id, parts)),
            )
        }
        "composite:star-cycle-sandwich" => {
            let n = need(p.n, "n")?;
            require(n >= k + 2 && n >= 3, || {
                format!("star-cycle-sandwich needs n >= k + 2, got n={n}, k={k}")
            })?;
            let seed = board.add_blue_path(n);
            let parts = vec![
                Part::new("extend by 2k", 2 * k * k, move |_| {
                    Ok(boxed(StarExtendBy::new(k, 2 * k, seed.clone())))
                }),
                Part::new("close", 3 * k, move |ws| {
                    Ok(boxed(StarCycle::new(k, prefix(ws, 0, n + 2 * k)?)?))
                }),
            ];
            (
                target(RedTarget::Star(k), BlueTarget::Cycle(n))?,
                boxed(Composite::new(id, parts)),
            )
        }
        other => return Err(StrategyError::UnknownStrategy(other.to_string())),
    };

    let budget = strategy.budget();
    Ok(Instance {
        id: id.to_string(),
        params: p,
        target: tgt,
        seed: GameState::seeded(tgt, board),
        strategy,
        budget,
    })
}
