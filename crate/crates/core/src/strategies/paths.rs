//! Strategies against a red path target.

use super::{exhausted, expect_edge, BuilderStrategy, Progress, StrategyError};
use crate::game::{Color, Edge, GameState, Move, Vertex};

fn edge(u: Vertex, v: Vertex) -> Result<Edge, StrategyError> {
    Edge::new(u, v).map_err(|e| StrategyError::InternalError(e.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Block {
    /// Next proposal is the joining edge `v_a u_b`.
    Idle,
    /// The joining edge is out.
    Joined { edge: Edge },
    /// The joining edge came back `c1`; the second edge is next.
    AfterJoin { c1: Color },
    /// The second edge `u_b w` or `v_a w` is out.
    Second { edge: Edge, c1: Color, w: Vertex },
}

/// Grows a blue path `B` and a disjoint red path `R` two rounds at a time.
///
/// Each block plays `v_a u_b` (the two path ends); if it comes back blue the
/// second edge is `u_b w`, otherwise `v_a w`, with `w` fresh. Whatever the
/// painter does, `|B| + |R|` grows by at least one per block, so after
/// `k + t` blocks either `|R| >= k` or `|B| >= |B_0| + t`.
#[derive(Clone, Debug)]
pub struct ExtendPair {
    k: usize,
    goal: usize,
    budget: usize,
    blue: Vec<Vertex>,
    red: Vec<Vertex>,
    block: Block,
    blocks_done: usize,
}

impl ExtendPair {
    /// Starts from the blue path `base` already on the board.
    pub fn new(k: usize, t: usize, base: Vec<Vertex>) -> Self {
        let goal = base.len().max(1) + t;
        ExtendPair {
            k,
            goal,
            budget: 2 * (k + t),
            blue: base,
            red: Vec::new(),
            block: Block::Idle,
            blocks_done: 0,
        }
    }

    /// Starts from two isolated vertices and aims for a blue path on `n`
    /// vertices; the declared budget is `2(k + n)`.
    pub fn from_scratch(k: usize, n: usize) -> Self {
        let mut s = ExtendPair::new(k, n.saturating_sub(1), Vec::new());
        s.goal = n.max(1);
        s.budget = 2 * (k + n);
        s
    }

    pub fn blue_path(&self) -> &[Vertex] {
        &self.blue
    }

    pub fn red_path(&self) -> &[Vertex] {
        &self.red
    }

    fn total(&self) -> usize {
        self.blue.len().max(1) + self.red.len().max(1)
    }

    fn finish_block(&mut self, c1: Color, c2: Color, w: Vertex) -> Result<(), StrategyError> {
        let before = self.total();
        match (c1, c2) {
            (Color::Red, Color::Red) => {
                let v_a = self.blue.pop().expect("blue path allocated");
                self.red.push(v_a);
                self.red.push(w);
                // An emptied path restarts from an isolated vertex.
            }
            (Color::Blue, Color::Blue) => {
                let u_b = self.red.pop().expect("red path allocated");
                self.blue.push(u_b);
                self.blue.push(w);
            }
            (Color::Red, Color::Blue) => self.blue.push(w),
            (Color::Blue, Color::Red) => self.red.push(w),
        }
        self.blocks_done += 1;
        if self.total() <= before {
            return Err(StrategyError::InternalError(format!(
                "extend-pair made no progress in block {} ({c1}, {c2})",
                self.blocks_done
            )));
        }
        Ok(())
    }
}

impl BuilderStrategy for ExtendPair {
    fn name(&self) -> &str {
        "extend-pair"
    }

    fn budget(&self) -> usize {
        self.budget
    }

    fn propose(&mut self, game: &mut GameState) -> Result<Edge, StrategyError> {
        match self.block {
            Block::Idle => {
                let progress = self.progress();
                if progress != Progress::Running {
                    return Err(exhausted(self.name(), &progress));
                }
                if self.blue.is_empty() {
                    self.blue.push(game.fresh_vertex());
                }
                if self.red.is_empty() {
                    self.red.push(game.fresh_vertex());
                }
                let e = edge(*self.blue.last().unwrap(), *self.red.last().unwrap())?;
                self.block = Block::Joined { edge: e };
                Ok(e)
            }
            Block::AfterJoin { c1 } => {
                let w = game.fresh_vertex();
                let anchor = match c1 {
                    Color::Blue => *self.red.last().unwrap(),
                    Color::Red => *self.blue.last().unwrap(),
                };
                let e = edge(anchor, w)?;
                self.block = Block::Second { edge: e, c1, w };
                Ok(e)
            }
            Block::Joined { .. } | Block::Second { .. } => Err(StrategyError::InternalError(
                "extend-pair asked to propose before observing".into(),
            )),
        }
    }

    fn observe(&mut self, _game: &GameState, mv: Move) -> Result<(), StrategyError> {
        match self.block {
            Block::Joined { edge: e } => {
                expect_edge(self.name(), Some(e), mv)?;
                self.block = Block::AfterJoin { c1: mv.color };
                Ok(())
            }
            Block::Second { edge: e, c1, w } => {
                expect_edge(self.name(), Some(e), mv)?;
                self.block = Block::Idle;
                self.finish_block(c1, mv.color, w)
            }
            _ => Err(StrategyError::InternalError(
                "extend-pair observed a move it did not propose".into(),
            )),
        }
    }

    fn progress(&self) -> Progress {
        if self.red.len() >= self.k {
            Progress::Red
        } else if self.blue.len() >= self.goal {
            Progress::Blue(self.blue[..self.goal].to_vec())
        } else {
            Progress::Running
        }
    }

    fn clone_box(&self) -> Box<dyn BuilderStrategy> {
        Box::new(self.clone())
    }
}

/// Joins two disjoint blue paths `v_1..v_m` and `u_1..u_n` by the zig-zag
/// `v_1 u_1 v_2 u_2 ...`: the first blue zig-zag edge links them, `k - 1`
/// red ones form a red path on `k` vertices.
#[derive(Clone, Debug)]
pub struct JoinPaths {
    k: usize,
    left: Vec<Vertex>,
    right: Vec<Vertex>,
    zigzag: Vec<Vertex>,
    step: usize,
    pending: Option<Edge>,
    joined: Option<Vec<Vertex>>,
}

impl JoinPaths {
    pub fn new(k: usize, left: Vec<Vertex>, right: Vec<Vertex>) -> Result<Self, StrategyError> {
        let (m, n) = (left.len(), right.len());
        if 2 * m.min(n) <= k {
            return Err(StrategyError::PreconditionViolation(format!(
                "join-paths needs min(m, n) > k/2, got m={m}, n={n}, k={k}"
            )));
        }
        let zigzag = (0..k)
            .map(|i| if i % 2 == 0 { left[i / 2] } else { right[i / 2] })
            .collect();
        Ok(JoinPaths {
            k,
            left,
            right,
            zigzag,
            step: 0,
            pending: None,
            joined: None,
        })
    }

    /// `v_m .. v_a u_b .. u_n` for a blue zig-zag edge `v_a u_b`.
    fn joined_path(&self, i: usize) -> Vec<Vertex> {
        let (a, b) = if i % 2 == 0 {
            (i / 2, i / 2)
        } else {
            ((i + 1) / 2, i / 2)
        };
        let mut p: Vec<Vertex> = self.left[a..].iter().rev().copied().collect();
        p.extend_from_slice(&self.right[b..]);
        p
    }

    pub fn blue_goal(&self) -> usize {
        (self.left.len() + self.right.len()).saturating_sub(self.k)
    }
}

impl BuilderStrategy for JoinPaths {
    fn name(&self) -> &str {
        "join-paths"
    }

    fn budget(&self) -> usize {
        self.k.saturating_sub(1)
    }

    fn propose(&mut self, _game: &mut GameState) -> Result<Edge, StrategyError> {
        let progress = self.progress();
        if progress != Progress::Running {
            return Err(exhausted(self.name(), &progress));
        }
        let e = edge(self.zigzag[self.step], self.zigzag[self.step + 1])?;
        self.pending = Some(e);
        Ok(e)
    }

    fn observe(&mut self, _game: &GameState, mv: Move) -> Result<(), StrategyError> {
        let pending = self.pending.take();
        expect_edge(self.name(), pending, mv)?;
        if mv.color == Color::Blue {
            let path = self.joined_path(self.step);
            if path.len() < self.blue_goal() {
                return Err(StrategyError::InternalError(format!(
                    "joined path has {} vertices, expected at least {}",
                    path.len(),
                    self.blue_goal()
                )));
            }
            self.joined = Some(path);
        }
        self.step += 1;
        Ok(())
    }

    fn progress(&self) -> Progress {
        match &self.joined {
            Some(p) => Progress::Blue(p.clone()),
            None if self.step + 1 >= self.k => Progress::Red,
            None => Progress::Running,
        }
    }

    fn clone_box(&self) -> Box<dyn BuilderStrategy> {
        Box::new(self.clone())
    }
}

#[derive(Clone, Debug)]
enum CyclePhase {
    /// Closing the path on itself along `v_1 v_n v_2 v_{n-1} ...`.
    Close { step: usize },
    /// Chord path `u_a u_{2a} ... u_{ka}` on the blue cycle `u_1..u_N`.
    Chord { cycle: Vec<Vertex>, alpha: usize, step: usize },
    Red,
    Blue(Vec<Vertex>),
}

/// From a blue path on `n` vertices, forces a red path on `k` vertices or a
/// blue cycle on exactly `n - k` vertices.
///
/// The closing phase makes a blue cycle `C_N` with `n - k < N <= n`. Chords
/// spaced `alpha = N + k - n + 1` apart then each cut off exactly
/// `alpha - 1` cycle vertices.
#[derive(Clone, Debug)]
pub struct CloseCycleChord {
    k: usize,
    n: usize,
    path: Vec<Vertex>,
    order: Vec<Vertex>,
    phase: CyclePhase,
    pending: Option<Edge>,
}

impl CloseCycleChord {
    pub fn new(k: usize, path: Vec<Vertex>) -> Result<Self, StrategyError> {
        let n = path.len();
        if k < 2 || n < k * k + k || n - k < 3 {
            return Err(StrategyError::PreconditionViolation(format!(
                "close-cycle-chord needs k >= 2, n >= k^2 + k and n - k >= 3, got n={n}, k={k}"
            )));
        }
        // v_1, v_n, v_2, v_{n-1}, ...
        let order = (0..k)
            .map(|i| if i % 2 == 0 { path[i / 2] } else { path[n - 1 - i / 2] })
            .collect();
        Ok(CloseCycleChord {
            k,
            n,
            path,
            order,
            phase: CyclePhase::Close { step: 0 },
            pending: None,
        })
    }

    pub fn alpha(&self) -> Option<usize> {
        match self.phase {
            CyclePhase::Chord { alpha, .. } => Some(alpha),
            _ => None,
        }
    }

    /// Spacing that makes every chord close a cycle on `n - k` vertices.
    pub fn chord_offset(n: usize, k: usize, cycle_len: usize) -> usize {
        cycle_len + k - n + 1
    }

    fn position(&self, v: Vertex) -> usize {
        self.path.iter().position(|&x| x == v).expect("vertex on path")
    }

    fn start_chords(&mut self, closing: Edge) -> Result<(), StrategyError> {
        let (i, j) = (self.position(closing.lo()), self.position(closing.hi()));
        let (lo, hi) = (i.min(j), i.max(j));
        let cycle = self.path[lo..=hi].to_vec();
        let big_n = cycle.len();
        if big_n <= self.n - self.k || big_n > self.n {
            return Err(StrategyError::InternalError(format!(
                "closing edge made C_{big_n}, outside ({}, {}]",
                self.n - self.k,
                self.n
            )));
        }
        let alpha = Self::chord_offset(self.n, self.k, big_n);
        if self.k * alpha > big_n {
            return Err(StrategyError::InternalError(format!(
                "chord u_{} overflows C_{big_n}",
                self.k * alpha
            )));
        }
        if big_n - alpha + 1 != self.n - self.k {
            return Err(StrategyError::InternalError(format!(
                "chord offset {alpha} on C_{big_n} gives C_{}",
                big_n - alpha + 1
            )));
        }
        self.phase = CyclePhase::Chord { cycle, alpha, step: 0 };
        Ok(())
    }
}

/// `u_{(i-1)a} u_{ia} .. u_N u_1 .. u_{(i-1)a - 1}` with 1-based cycle labels.
fn chord_cycle(cycle: &[Vertex], from: usize, to: usize) -> Vec<Vertex> {
    let mut c = vec![cycle[from - 1]];
    c.extend_from_slice(&cycle[to - 1..]);
    c.extend_from_slice(&cycle[..from - 1]);
    c
}

impl BuilderStrategy for CloseCycleChord {
    fn name(&self) -> &str {
        "close-cycle-chord"
    }

    fn budget(&self) -> usize {
        2 * self.k
    }

    fn propose(&mut self, _game: &mut GameState) -> Result<Edge, StrategyError> {
        let e = match &self.phase {
            CyclePhase::Close { step } if step + 1 < self.k => {
                edge(self.order[*step], self.order[step + 1])?
            }
            CyclePhase::Chord { cycle, alpha, step } if step + 1 < self.k => {
                let a = (step + 1) * alpha;
                let b = (step + 2) * alpha;
                edge(cycle[a - 1], cycle[b - 1])?
            }
            _ => return Err(exhausted(self.name(), &self.progress())),
        };
        self.pending = Some(e);
        Ok(e)
    }

    fn observe(&mut self, _game: &GameState, mv: Move) -> Result<(), StrategyError> {
        let pending = self.pending.take();
        expect_edge(self.name(), pending, mv)?;
        match &mut self.phase {
            CyclePhase::Close { step } => {
                *step += 1;
                let step = *step;
                if mv.color == Color::Blue {
                    self.start_chords(mv.edge)?;
                } else if step + 1 >= self.k {
                    self.phase = CyclePhase::Red;
                }
            }
            CyclePhase::Chord { cycle, alpha, step } => {
                *step += 1;
                if mv.color == Color::Blue {
                    let c = chord_cycle(cycle, *step * *alpha, (*step + 1) * *alpha);
                    if c.len() != self.n - self.k {
                        return Err(StrategyError::InternalError(format!(
                            "chord closed C_{} instead of C_{}",
                            c.len(),
                            self.n - self.k
                        )));
                    }
                    self.phase = CyclePhase::Blue(c);
                } else if *step + 1 >= self.k {
                    self.phase = CyclePhase::Red;
                }
            }
            CyclePhase::Red | CyclePhase::Blue(_) => {
                return Err(StrategyError::InternalError("observe after finish".into()))
            }
        }
        Ok(())
    }

    fn progress(&self) -> Progress {
        match &self.phase {
            CyclePhase::Red => Progress::Red,
            CyclePhase::Blue(c) => Progress::Blue(c.clone()),
            _ => Progress::Running,
        }
    }

    fn clone_box(&self) -> Box<dyn BuilderStrategy> {
        Box::new(self.clone())
    }
}
