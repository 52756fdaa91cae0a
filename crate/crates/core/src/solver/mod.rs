//! Exact online Ramsey numbers for tiny targets.
//!
//! The game value is the least `t` such that Builder can force a target
//! within `t` rounds. Positions are memoized on their canonical form, with
//! the best known lower and upper bound on the rounds Builder needs from
//! there, and `t` is found by iterative deepening.
//!
//! Builder never replays an edge (a wasted round cannot help when
//! minimizing rounds) and only ever needs one representative of each kind
//! of new vertex, since untouched vertices are interchangeable.

mod board;
mod canon;

use std::collections::HashMap;
use std::sync::Arc;
use std::time::Instant;

use parking_lot::Mutex;
use serde::Serialize;
use thiserror::Error;

use board::{has_red, has_blue, has_target, Board, MAX_VERTICES};
use canon::canonical;

use crate::game::{Color, ColoredGraph, Edge, GameState, Move, TargetSpec, Terminal};
use crate::strategies::{BuilderStrategy, Progress, StrategyError};

pub const DEFAULT_MEMO_CAP: usize = 20_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("{vertices} vertices exceed the cap of {cap}")]
    SizeCapExceeded { vertices: usize, cap: usize },
    #[error("memo reached {entries} entries (cap {cap}); value is at least {lower}")]
    MemoCapExceeded { entries: usize, cap: usize, lower: usize },
}

/// Byte string that identifies a colored graph up to color-preserving
/// isomorphism. Isolated vertices are ignored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(pub Vec<u8>);

impl CanonicalForm {
    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

pub fn canonicalize(g: &ColoredGraph) -> Result<CanonicalForm, SolverError> {
    let (b, _) = Board::from_graph(g).ok_or(SolverError::SizeCapExceeded {
        vertices: g.touched_count(),
        cap: MAX_VERTICES,
    })?;
    Ok(CanonicalForm(canonical(&b).key))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SolveLimits {
    pub max_rounds: usize,
    pub memo_cap: usize,
    /// Largest board the search may create; at most 32.
    pub vertex_cap: usize,
    pub memoize: bool,
    /// Skip Builder moves that an automorphism maps onto an earlier move.
    pub orbit_pruning: bool,
}

impl SolveLimits {
    pub fn new(max_rounds: usize) -> Self {
        SolveLimits {
            max_rounds,
            memo_cap: DEFAULT_MEMO_CAP,
            vertex_cap: (2 * max_rounds).min(MAX_VERTICES),
            memoize: true,
            orbit_pruning: true,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    pub nodes: u64,
    pub memo_hits: u64,
    pub peak_memo: usize,
}

#[derive(Clone, Copy, Debug)]
struct Bounds {
    /// Builder wins from here with this many rounds.
    win: u32,
    /// Builder cannot win from here with this many rounds.
    lose: i32,
}

struct Search {
    target: TargetSpec,
    limits: SolveLimits,
    memo: HashMap<Vec<u8>, Bounds>,
    stats: SolveStats,
}

/// Moves on a board with `n` touched vertices: uncolored pairs, then each
/// vertex to the fresh vertex `n`, then the fresh pair `(n, n + 1)`.
fn moves(b: &Board, cap: usize, gens: Option<&[Vec<usize>]>) -> Vec<(usize, usize)> {
    let n = b.n;
    let mut out = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if b.color(u, v).is_none() {
                out.push((u, v));
            }
        }
    }
    if n < cap {
        out.extend((0..n).map(|u| (u, n)));
    }
    if n + 2 <= cap {
        out.push((n, n + 1));
    }
    let Some(gens) = gens.filter(|g| !g.is_empty()) else {
        return out;
    };
    let index: HashMap<(usize, usize), usize> = out.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let mut parent: Vec<usize> = (0..out.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for g in gens {
        let img = |x: usize| if x < n { g[x] } else { x };
        for (i, &(u, v)) in out.iter().enumerate() {
            let (a, b) = (img(u), img(v));
            let j = index[&(a.min(b), a.max(b))];
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    (0..out.len())
        .filter(|&i| find(&mut parent, i) == i)
        .map(|i| out[i])
        .collect()
}

fn completes(b: &Board, c: Color, t: &TargetSpec) -> bool {
    match c {
        Color::Red => has_red(b, t),
        Color::Blue => has_blue(b, t),
    }
}

impl Search {
    fn new(target: TargetSpec, limits: SolveLimits) -> Self {
        Search {
            target,
            limits,
            memo: HashMap::new(),
            stats: SolveStats::default(),
        }
    }

    fn cap(&self) -> usize {
        self.limits.vertex_cap.min(MAX_VERTICES)
    }

    /// Whether Builder forces a target within `r` rounds from the canonical,
    /// non-terminal board `b`.
    fn wins(&mut self, b: &Board, gens: &[Vec<usize>], key: &[u8], r: usize) -> Result<bool, SolverError> {
        if r == 0 {
            return Ok(false);
        }
        if self.limits.memoize {
            if let Some(e) = self.memo.get(key) {
                if r as u32 >= e.win || r as i32 <= e.lose {
                    self.stats.memo_hits += 1;
                    return Ok(r as u32 >= e.win);
                }
            }
        }
        self.stats.nodes += 1;
        let gens = self.limits.orbit_pruning.then_some(gens);
        let mut result = false;
        for (u, v) in moves(b, self.cap(), gens) {
            if self.forced(b, u, v, r)? {
                result = true;
                break;
            }
        }
        if self.limits.memoize {
            let e = self.memo.entry(key.to_vec()).or_insert(Bounds { win: u32::MAX, lose: -1 });
            if result {
                e.win = e.win.min(r as u32);
            } else {
                e.lose = e.lose.max(r as i32);
            }
            self.stats.peak_memo = self.stats.peak_memo.max(self.memo.len());
            if self.memo.len() > self.limits.memo_cap {
                return Err(SolverError::MemoCapExceeded {
                    entries: self.memo.len(),
                    cap: self.limits.memo_cap,
                    lower: 0,
                });
            }
        }
        Ok(result)
    }

    /// Whether playing `(u, v)` wins within `r` rounds whatever the color.
    fn forced(&mut self, b: &Board, u: usize, v: usize, r: usize) -> Result<bool, SolverError> {
        for c in [Color::Blue, Color::Red] {
            let child = b.with_edge(u, v, c);
            if completes(&child, c, &self.target) {
                continue;
            }
            if r == 1 {
                return Ok(false);
            }
            let canon = canonical(&child);
            let cb = canon.board(&child);
            if !self.wins(&cb, &canon.canonical_generators(), &canon.key, r - 1)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn root_wins(&mut self, r: usize) -> Result<bool, SolverError> {
        let root = Board::empty(0);
        if has_target(&root, &self.target) {
            return Ok(true);
        }
        self.wins(&root, &[], &[0], r)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveResult {
    pub target: TargetSpec,
    pub max_rounds: usize,
    /// `None` when Builder needs more than `max_rounds`.
    pub value: Option<usize>,
    pub stats: SolveStats,
    /// Wall time; left out of the JSON so repeated runs compare equal.
    #[serde(skip)]
    pub seconds: f64,
    #[serde(skip)]
    policy: Option<SolverStrategy>,
}

impl SolveResult {
    /// A Builder strategy that wins within `value` rounds, reusing the
    /// solver's memo to choose moves.
    pub fn optimal_strategy(&self) -> Option<SolverStrategy> {
        self.policy.clone()
    }
}

pub fn solve(target: TargetSpec, limits: SolveLimits) -> Result<SolveResult, SolverError> {
    let started = Instant::now();
    let mut search = Search::new(target, limits);
    let mut value = None;
    for t in 0..=limits.max_rounds {
        match search.root_wins(t) {
            Ok(true) => {
                value = Some(t);
                break;
            }
            Ok(false) => {}
            Err(SolverError::MemoCapExceeded { entries, cap, .. }) => {
                return Err(SolverError::MemoCapExceeded { entries, cap, lower: t });
            }
            Err(e) => return Err(e),
        }
    }
    let stats = search.stats;
    let policy = value.map(|v| SolverStrategy {
        budget: v,
        search: Arc::new(Mutex::new(search)),
        progress: Progress::Running,
    });
    Ok(SolveResult {
        target,
        max_rounds: limits.max_rounds,
        value,
        stats,
        seconds: started.elapsed().as_secs_f64(),
        policy,
    })
}

/// Whether Painter can avoid both targets for `rounds` rounds against every
/// Builder. Searched independently of [`solve`]: its own memo, Painter to
/// move at the top of the recursion, and no move pruning by symmetry.
pub fn lower_bound_via_painter(
    target: TargetSpec,
    rounds: usize,
    limits: SolveLimits,
) -> Result<bool, SolverError> {
    struct Dual {
        target: TargetSpec,
        cap: usize,
        memo_cap: usize,
        memo: HashMap<(Vec<u8>, usize), bool>,
    }
    impl Dual {
        fn survives(&mut self, b: &Board, r: usize) -> Result<bool, SolverError> {
            if r == 0 {
                return Ok(true);
            }
            let key = canonical(b).key;
            if let Some(&s) = self.memo.get(&(key.clone(), r)) {
                return Ok(s);
            }
            let mut all = true;
            for (u, v) in moves(b, self.cap, None) {
                let mut escape = false;
                for c in Color::BOTH {
                    let child = b.with_edge(u, v, c);
                    if !completes(&child, c, &self.target) && self.survives(&child, r - 1)? {
                        escape = true;
                        break;
                    }
                }
                if !escape {
                    all = false;
                    break;
                }
            }
            self.memo.insert((key, r), all);
            if self.memo.len() > self.memo_cap {
                return Err(SolverError::MemoCapExceeded {
                    entries: self.memo.len(),
                    cap: self.memo_cap,
                    lower: 0,
                });
            }
            Ok(all)
        }
    }
    let root = Board::empty(0);
    if has_target(&root, &target) {
        return Ok(false);
    }
    let mut d = Dual {
        target,
        cap: (2 * rounds).min(MAX_VERTICES),
        memo_cap: limits.memo_cap,
        memo: HashMap::new(),
    };
    d.survives(&root, rounds)
}

impl std::fmt::Debug for SolverStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SolverStrategy").field("budget", &self.budget).finish()
    }
}

/// Builder policy backed by the solver: from every position it plays a move
/// that still wins within the rounds left, found through the shared memo.
#[derive(Clone)]
pub struct SolverStrategy {
    budget: usize,
    search: Arc<Mutex<Search>>,
    progress: Progress,
}

impl SolverStrategy {
    /// Same policy under a different declared budget. With fewer rounds than
    /// the game value it still plays, and loses against a good Painter.
    pub fn with_budget(&self, budget: usize) -> Self {
        SolverStrategy {
            budget,
            ..self.clone()
        }
    }
}

impl BuilderStrategy for SolverStrategy {
    fn name(&self) -> &str {
        "solver"
    }

    fn budget(&self) -> usize {
        self.budget
    }

    fn propose(&mut self, game: &mut GameState) -> Result<Edge, StrategyError> {
        let internal = |e: SolverError| StrategyError::InternalError(e.to_string());
        let (board, verts) = Board::from_graph(game.board()).ok_or_else(|| {
            internal(SolverError::SizeCapExceeded {
                vertices: game.board().touched_count(),
                cap: MAX_VERTICES,
            })
        })?;
        let canon = canonical(&board);
        let cb = canon.board(&board);
        let left = self.budget.saturating_sub(game.round());
        let mut search = self.search.lock();
        let cap = search.cap().max(cb.n + 2).min(MAX_VERTICES);
        let options = moves(&cb, cap, None);
        let mut chosen = *options.first().ok_or_else(|| internal(SolverError::SizeCapExceeded {
            vertices: cb.n,
            cap,
        }))?;
        for &(u, v) in options.iter().filter(|_| left > 0) {
            if search.forced(&cb, u, v, left).map_err(internal)? {
                chosen = (u, v);
                break;
            }
        }
        drop(search);
        let n = cb.n;
        let mut fresh = Vec::new();
        let mut label = |i: usize, game: &mut GameState| {
            if i < n {
                verts[canon.order[i]]
            } else {
                while fresh.len() <= i - n {
                    fresh.push(game.fresh_vertex());
                }
                fresh[i - n]
            }
        };
        let a = label(chosen.0, game);
        let b = label(chosen.1, game);
        Ok(Edge::new(a, b)?)
    }

    fn observe(&mut self, game: &GameState, _mv: Move) -> Result<(), StrategyError> {
        self.progress = match game.terminal() {
            None => Progress::Running,
            Some(Terminal::RedWin(_)) => Progress::Red,
            Some(Terminal::BlueWin(w)) => Progress::Blue(w.vertices.clone()),
        };
        Ok(())
    }

    fn progress(&self) -> Progress {
        self.progress.clone()
    }

    fn clone_box(&self) -> Box<dyn BuilderStrategy> {
        Box::new(self.clone())
    }
}
