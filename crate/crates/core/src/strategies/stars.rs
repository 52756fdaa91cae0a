//! Strategies against a red star target.

use super::{exhausted, expect_edge, BuilderStrategy, Progress, StrategyError};
use crate::game::{Color, Edge, GameState, Move, Vertex};

fn edge(u: Vertex, v: Vertex) -> Result<Edge, StrategyError> {
    Edge::new(u, v).map_err(|e| StrategyError::InternalError(e.to_string()))
}

/// Probes the end `v_n` of a blue path with edges to `k` fresh vertices. A
/// blue probe extends the path by one; `k` red probes are a red star.
#[derive(Clone, Debug)]
pub struct StarExtend {
    k: usize,
    path: Vec<Vertex>,
    probes: usize,
    pending: Option<(Edge, Vertex)>,
    extended: bool,
}

impl StarExtend {
    /// `path` may be empty, in which case an isolated vertex is taken as the
    /// one-vertex blue path at the first proposal.
    pub fn new(k: usize, path: Vec<Vertex>) -> Self {
        StarExtend {
            k,
            path,
            probes: 0,
            pending: None,
            extended: false,
        }
    }
}

impl BuilderStrategy for StarExtend {
    fn name(&self) -> &str {
        "star-extend"
    }

    fn budget(&self) -> usize {
        self.k
    }

    fn propose(&mut self, game: &mut GameState) -> Result<Edge, StrategyError> {
        let progress = self.progress();
        if progress != Progress::Running {
            return Err(exhausted(self.name(), &progress));
        }
        if self.path.is_empty() {
            self.path.push(game.fresh_vertex());
        }
        let u = game.fresh_vertex();
        let e = edge(*self.path.last().unwrap(), u)?;
        self.pending = Some((e, u));
        Ok(e)
    }

    fn observe(&mut self, _game: &GameState, mv: Move) -> Result<(), StrategyError> {
        let (e, u) = self.pending.take().unzip();
        expect_edge(self.name(), e, mv)?;
        self.probes += 1;
        if mv.color == Color::Blue {
            self.path.push(u.expect("pending probe"));
            self.extended = true;
        }
        Ok(())
    }

    fn progress(&self) -> Progress {
        if self.extended {
            Progress::Blue(self.path.clone())
        } else if self.probes >= self.k {
            Progress::Red
        } else {
            Progress::Running
        }
    }

    fn clone_box(&self) -> Box<dyn BuilderStrategy> {
        Box::new(self.clone())
    }
}

/// `t` rounds of [`StarExtend`], each starting from the previous extension.
#[derive(Clone, Debug)]
pub struct StarExtendBy {
    k: usize,
    t: usize,
    done: usize,
    current: StarExtend,
    budget: usize,
}

impl StarExtendBy {
    pub fn new(k: usize, t: usize, path: Vec<Vertex>) -> Self {
        StarExtendBy {
            k,
            t,
            done: 0,
            current: StarExtend::new(k, path),
            budget: t * k,
        }
    }

    /// From an isolated vertex to a blue path on `n` vertices.
    pub fn from_scratch(k: usize, n: usize) -> Self {
        StarExtendBy::new(k, n.saturating_sub(1), Vec::new())
    }

    fn advance(&mut self) {
        while self.done < self.t {
            match self.current.progress() {
                Progress::Blue(path) => {
                    self.done += 1;
                    if self.done < self.t {
                        self.current = StarExtend::new(self.k, path);
                    }
                }
                _ => break,
            }
        }
    }
}

impl BuilderStrategy for StarExtendBy {
    fn name(&self) -> &str {
        "star-extend-by"
    }

    fn budget(&self) -> usize {
        self.budget
    }

    fn propose(&mut self, game: &mut GameState) -> Result<Edge, StrategyError> {
        self.advance();
        if self.done >= self.t {
            return Err(exhausted(self.name(), &self.progress()));
        }
        self.current.propose(game)
    }

    fn observe(&mut self, game: &GameState, mv: Move) -> Result<(), StrategyError> {
        self.current.observe(game, mv)?;
        self.advance();
        Ok(())
    }

    fn progress(&self) -> Progress {
        if self.done >= self.t {
            // With t = 0 nothing is played and the seed path is the result.
            return match self.current.progress() {
                Progress::Blue(p) => Progress::Blue(p),
                _ => Progress::Blue(self.current.path.clone()),
            };
        }
        match self.current.progress() {
            Progress::Red => Progress::Red,
            _ => Progress::Running,
        }
    }

    fn clone_box(&self) -> Box<dyn BuilderStrategy> {
        Box::new(self.clone())
    }
}

/// Joins blue paths `v_1..v_m` and `u_1..u_n` by probing `u_1 v_i` for
/// `i = 1..k`. A blue `u_1 v_j` gives `u_n..u_1 v_j..v_m`; `k` red probes are
/// a red star at `u_1`.
#[derive(Clone, Debug)]
pub struct StarJoin {
    k: usize,
    left: Vec<Vertex>,
    right: Vec<Vertex>,
    probes: usize,
    pending: Option<Edge>,
    joined: Option<Vec<Vertex>>,
}

impl StarJoin {
    pub fn new(k: usize, left: Vec<Vertex>, right: Vec<Vertex>) -> Result<Self, StrategyError> {
        if left.len() < k || right.is_empty() {
            return Err(StrategyError::PreconditionViolation(format!(
                "star-join needs m >= k and n >= 1, got m={}, n={}, k={k}",
                left.len(),
                right.len()
            )));
        }
        Ok(StarJoin {
            k,
            left,
            right,
            probes: 0,
            pending: None,
            joined: None,
        })
    }
}

impl BuilderStrategy for StarJoin {
    fn name(&self) -> &str {
        "star-join"
    }

    fn budget(&self) -> usize {
        self.k
    }

    fn propose(&mut self, _game: &mut GameState) -> Result<Edge, StrategyError> {
        let progress = self.progress();
        if progress != Progress::Running {
            return Err(exhausted(self.name(), &progress));
        }
        let e = edge(self.right[0], self.left[self.probes])?;
        self.pending = Some(e);
        Ok(e)
    }

    fn observe(&mut self, _game: &GameState, mv: Move) -> Result<(), StrategyError> {
        let pending = self.pending.take();
        expect_edge(self.name(), pending, mv)?;
        if mv.color == Color::Blue {
            let j = self.probes;
            let mut p: Vec<Vertex> = self.right.iter().rev().copied().collect();
            p.extend_from_slice(&self.left[j..]);
            self.joined = Some(p);
        }
        self.probes += 1;
        Ok(())
    }

    fn progress(&self) -> Progress {
        match &self.joined {
            Some(p) => Progress::Blue(p.clone()),
            None if self.probes >= self.k => Progress::Red,
            None => Progress::Running,
        }
    }

    fn clone_box(&self) -> Box<dyn BuilderStrategy> {
        Box::new(self.clone())
    }
}

#[derive(Clone, Debug)]
enum StarCyclePhase {
    /// Probing `v_i v_n` for `i = 1..k`.
    Close { probes: usize },
    /// Pairs `u_1 u_{i+2}`, `u_1 u_{n-2k+i}` on the blue cycle `u_1..u_N`.
    Pairs {
        cycle: Vec<Vertex>,
        pair: usize,
        first_blue: bool,
        second: bool,
    },
    Red,
    Blue(Vec<Vertex>),
}

/// From a blue path on `n >= 3k + 2` vertices, forces a red star with `k`
/// leaves or a blue cycle on exactly `n - 2k` vertices.
#[derive(Clone, Debug)]
pub struct StarCycle {
    k: usize,
    n: usize,
    path: Vec<Vertex>,
    phase: StarCyclePhase,
    pending: Option<Edge>,
}

impl StarCycle {
    pub fn new(k: usize, path: Vec<Vertex>) -> Result<Self, StrategyError> {
        let n = path.len();
        if k == 0 || n < 3 * k + 2 {
            return Err(StrategyError::PreconditionViolation(format!(
                "star-cycle needs k >= 1 and n >= 3k + 2, got n={n}, k={k}"
            )));
        }
        Ok(StarCycle {
            k,
            n,
            path,
            phase: StarCyclePhase::Close { probes: 0 },
            pending: None,
        })
    }

    /// Cycle closed by a blue `u_1 u_{j+2}` and `u_1 u_{n-2k+j}` (1-based).
    pub fn pair_cycle(cycle: &[Vertex], n: usize, k: usize, j: usize) -> Vec<Vertex> {
        let mut c = vec![cycle[0]];
        c.extend_from_slice(&cycle[j + 1..n - 2 * k + j]);
        c
    }

    fn pair_edge(&self, cycle: &[Vertex], pair: usize, second: bool) -> Result<Edge, StrategyError> {
        let i = pair + 1;
        let idx = if second { self.n - 2 * self.k + i } else { i + 2 };
        edge(cycle[0], cycle[idx - 1])
    }
}

impl BuilderStrategy for StarCycle {
    fn name(&self) -> &str {
        "star-cycle"
    }

    fn budget(&self) -> usize {
        3 * self.k
    }

    fn propose(&mut self, _game: &mut GameState) -> Result<Edge, StrategyError> {
        let e = match &self.phase {
            StarCyclePhase::Close { probes } => edge(self.path[*probes], self.path[self.n - 1])?,
            StarCyclePhase::Pairs { cycle, pair, second, .. } => {
                self.pair_edge(cycle, *pair, *second)?
            }
            _ => return Err(exhausted(self.name(), &self.progress())),
        };
        self.pending = Some(e);
        Ok(e)
    }

    fn observe(&mut self, _game: &GameState, mv: Move) -> Result<(), StrategyError> {
        let pending = self.pending.take();
        expect_edge(self.name(), pending, mv)?;
        let (k, n) = (self.k, self.n);
        match &mut self.phase {
            StarCyclePhase::Close { probes } => {
                if mv.color == Color::Blue {
                    // u_1..u_N = v_i..v_n
                    let cycle = self.path[*probes..].to_vec();
                    if cycle.len() < n - k + 1 {
                        return Err(StrategyError::InternalError(format!(
                            "closing probe made C_{}",
                            cycle.len()
                        )));
                    }
                    self.phase = StarCyclePhase::Pairs {
                        cycle,
                        pair: 0,
                        first_blue: false,
                        second: false,
                    };
                } else {
                    *probes += 1;
                    if *probes >= k {
                        self.phase = StarCyclePhase::Red;
                    }
                }
            }
            StarCyclePhase::Pairs {
                cycle,
                pair,
                first_blue,
                second,
            } => {
                if !*second {
                    *first_blue = mv.color == Color::Blue;
                    *second = true;
                } else {
                    if *first_blue && mv.color == Color::Blue {
                        let c = StarCycle::pair_cycle(cycle, n, k, *pair + 1);
                        if c.len() != n - 2 * k {
                            return Err(StrategyError::InternalError(format!(
                                "pair {} closed C_{} instead of C_{}",
                                *pair + 1,
                                c.len(),
                                n - 2 * k
                            )));
                        }
                        self.phase = StarCyclePhase::Blue(c);
                        return Ok(());
                    }
                    *pair += 1;
                    *second = false;
                    *first_blue = false;
                    if *pair >= k {
                        self.phase = StarCyclePhase::Red;
                    }
                }
            }
            StarCyclePhase::Red | StarCyclePhase::Blue(_) => {
                return Err(StrategyError::InternalError("observe after finish".into()))
            }
        }
        Ok(())
    }

    fn progress(&self) -> Progress {
        match &self.phase {
            StarCyclePhase::Red => Progress::Red,
            StarCyclePhase::Blue(c) => Progress::Blue(c.clone()),
            _ => Progress::Running,
        }
    }

    fn clone_box(&self) -> Box<dyn BuilderStrategy> {
        Box::new(self.clone())
    }
}
