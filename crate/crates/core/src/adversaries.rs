//! Painter policies and the exhaustive verifier.
//!
//! [`verify_guarantee`] plays a deterministic Builder strategy against every
//! possible sequence of Painter colors. A pass is a complete proof of the
//! strategy's round bound at those parameters.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{color_script, Color, Edge, GameState, TargetSpec, Terminal, Vertex};
use crate::strategies::BuilderStrategy;

pub const DEFAULT_ENUM_CAP: u64 = 1 << 22;
pub const MAX_GREEDY_DEPTH: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdversaryError {
    #[error("painter script has no color for round {round}")]
    ScriptExhausted { round: usize },
    #[error("the exhaustive painter has no single response; use verify_guarantee")]
    NotAPolicy,
    #[error("enumeration needs 2^{budget} painter sequences, cap is {cap}")]
    EnumerationCapExceeded { budget: usize, cap: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "policy", content = "arg", rename_all = "snake_case")]
pub enum PainterPolicy {
    AllRed,
    AllBlue,
    /// Starts with the given color and alternates every round.
    Alternating(Color),
    RandomSeeded(u64),
    /// Colors indexed by round; running past the end is an error.
    Scripted(Vec<Color>),
    /// Avoids completing a target; lookahead is capped at [`MAX_GREEDY_DEPTH`].
    GreedyAvoid(usize),
    Exhaustive,
}

impl PainterPolicy {
    pub fn color_response(&self, game: &GameState, proposed: Edge) -> Result<Color, AdversaryError> {
        let round = game.round();
        Ok(match self {
            PainterPolicy::AllRed => Color::Red,
            PainterPolicy::AllBlue => Color::Blue,
            PainterPolicy::Alternating(start) => {
                if round % 2 == 0 {
                    *start
                } else {
                    start.flip()
                }
            }
            PainterPolicy::RandomSeeded(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(
                    seed.wrapping_add((round as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)),
                );
                if rng.gen::<bool>() {
                    Color::Red
                } else {
                    Color::Blue
                }
            }
            PainterPolicy::Scripted(script) => *script
                .get(round)
                .ok_or(AdversaryError::ScriptExhausted { round: round + 1 })?,
            PainterPolicy::GreedyAvoid(depth) => greedy(game, proposed, (*depth).min(MAX_GREEDY_DEPTH)),
            PainterPolicy::Exhaustive => return Err(AdversaryError::NotAPolicy),
        })
    }
}

fn greedy(game: &GameState, e: Edge, depth: usize) -> Color {
    if let Some(c) = game.board().color_of(e) {
        return c;
    }
    let score = |c: Color| {
        let mut g = game.clone();
        g.play_edge(e, c).expect("legal edge");
        let lost = g.is_over();
        let forced = !lost && builder_forces(&g, depth);
        (lost, forced)
    };
    if score(Color::Blue) < score(Color::Red) {
        Color::Blue
    } else {
        Color::Red
    }
}

/// Builder moves worth trying from `game`: every uncolored pair among touched
/// vertices, each touched vertex to one fresh vertex, and one fresh pair.
fn candidate_edges(game: &GameState) -> Vec<Edge> {
    let touched: Vec<Vertex> = game.board().touched_vertices().collect();
    let fresh = game.board().next_fresh();
    let mut out = Vec::new();
    for (i, &u) in touched.iter().enumerate() {
        for &v in &touched[i + 1..] {
            let e = Edge::new(u, v).expect("distinct");
            if game.board().color_of(e).is_none() {
                out.push(e);
            }
        }
        out.push(Edge::new(u, fresh).expect("distinct"));
    }
    out.push(Edge::new(fresh, fresh + 1).expect("distinct"));
    out
}

fn builder_forces(game: &GameState, depth: usize) -> bool {
    if depth == 0 {
        return false;
    }
    candidate_edges(game).into_iter().any(|e| {
        Color::BOTH.iter().all(|&c| {
            let mut g = game.clone();
            g.play_edge(e, c).expect("legal edge");
            g.is_over() || builder_forces(&g, depth - 1)
        })
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub enum_cap: u64,
    /// Walk the Red and Blue subtrees of the first branching round on two
    /// threads. The report is identical to the sequential walk.
    pub parallel: bool,
    /// Keep the branching depth of every leaf in the report.
    pub record_leaves: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            enum_cap: DEFAULT_ENUM_CAP,
            parallel: true,
            record_leaves: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub strategy: String,
    pub params: serde_json::Value,
    pub budget: usize,
    pub pass: bool,
    pub worst_rounds: usize,
    pub leaves: u64,
    pub counterexample: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
    #[serde(skip)]
    pub leaf_depths: Option<Vec<u32>>,
}

/// Result of walking one subtree, in depth-first order. A failure stops the
/// walk, so merging a left subtree with a right one keeps the left failure
/// and ignores everything to its right.
#[derive(Clone, Debug, Default)]
struct Walk {
    leaves: u64,
    worst: usize,
    failure: Option<(Vec<Color>, String)>,
    depths: Option<Vec<u32>>,
}

impl Walk {
    fn merge(mut self, right: Walk) -> Walk {
        if self.failure.is_some() {
            return self;
        }
        self.leaves += right.leaves;
        self.worst = self.worst.max(right.worst);
        self.failure = right.failure;
        if let (Some(a), Some(b)) = (self.depths.as_mut(), right.depths) {
            a.extend(b);
        }
        self
    }
}

struct Walker {
    budget: usize,
    start: usize,
    record: bool,
}

impl Walker {
    fn leaf(&self, rounds: usize, branch_depth: u32, failure: Option<(Vec<Color>, String)>) -> Walk {
        Walk {
            leaves: 1,
            worst: if failure.is_none() { rounds } else { 0 },
            failure,
            depths: self.record.then(|| vec![branch_depth]),
        }
    }

    /// Walks from a node whose strategy has not yet proposed. `script` holds
    /// one color per round played so far.
    fn walk(
        &self,
        mut game: GameState,
        mut strategy: Box<dyn BuilderStrategy>,
        script: &mut Vec<Color>,
        branch_depth: u32,
        split: bool,
    ) -> Walk {
        loop {
            let rounds = game.round() - self.start;
            if let Some(t) = game.terminal() {
                let failure = check_terminal(t, &game).err().map(|m| (script.clone(), m));
                return self.leaf(rounds, branch_depth, failure);
            }
            if rounds >= self.budget {
                let msg = format!("no target after {} rounds", self.budget);
                return self.leaf(rounds, branch_depth, Some((script.clone(), msg)));
            }
            let e = match strategy.propose(&mut game) {
                Ok(e) => e,
                Err(err) => return self.leaf(rounds, branch_depth, Some((script.clone(), err.to_string()))),
            };
            if let Some(c) = game.board().color_of(e) {
                // Repeated edge: the round is spent but Painter has no choice.
                if let Err(f) = self.play(&mut game, strategy.as_mut(), e, c, script) {
                    return self.leaf(rounds, branch_depth, Some(f));
                }
                continue;
            }
            let mut red_game = game.clone();
            let mut red_strategy = strategy.clone();
            let mut red_script = script.clone();
            let red_side = |w: &Walker| {
                match w.play(&mut red_game, red_strategy.as_mut(), e, Color::Red, &mut red_script) {
                    Ok(()) => w.walk(red_game, red_strategy, &mut red_script, branch_depth + 1, false),
                    Err(f) => w.leaf(rounds + 1, branch_depth + 1, Some(f)),
                }
            };
            let mut blue_script = script.clone();
            let blue_side = |w: &Walker| {
                match w.play(&mut game, strategy.as_mut(), e, Color::Blue, &mut blue_script) {
                    Ok(()) => w.walk(game, strategy, &mut blue_script, branch_depth + 1, false),
                    Err(f) => w.leaf(rounds + 1, branch_depth + 1, Some(f)),
                }
            };
            return if split {
                let (r, b) = rayon::join(|| red_side(self), || blue_side(self));
                r.merge(b)
            } else {
                let r = red_side(self);
                if r.failure.is_some() {
                    return r;
                }
                r.merge(blue_side(self))
            };
        }
    }

    fn play(
        &self,
        game: &mut GameState,
        strategy: &mut dyn BuilderStrategy,
        e: Edge,
        c: Color,
        script: &mut Vec<Color>,
    ) -> Result<(), (Vec<Color>, String)> {
        script.push(c);
        let mv = game.play_edge(e, c).map_err(|err| (script.clone(), err.to_string()))?;
        strategy.observe(game, mv).map_err(|err| (script.clone(), err.to_string()))
    }
}

fn check_terminal(t: &Terminal, game: &GameState) -> Result<(), String> {
    let w = t.witness();
    w.validate(game.board()).map_err(|e| format!("invalid witness: {e}"))?;
    let target = game.target();
    let want = match t {
        Terminal::RedWin(_) => target.red.size(),
        Terminal::BlueWin(_) => target.blue.size(),
    };
    if w.size() != want {
        return Err(format!("witness has size {}, target size is {want}", w.size()));
    }
    Ok(())
}

/// Checks that `strategy`, started from `seed` with its target replaced by
/// `expect`, reaches a target within `budget` rounds against every Painter.
pub fn verify_guarantee(
    seed: &GameState,
    strategy: &dyn BuilderStrategy,
    budget: usize,
    expect: TargetSpec,
    opts: VerifyOptions,
) -> Result<VerificationReport, AdversaryError> {
    let fits = budget < 64 && (1u64 << budget) <= opts.enum_cap;
    if !fits {
        return Err(AdversaryError::EnumerationCapExceeded {
            budget,
            cap: opts.enum_cap,
        });
    }
    let game = GameState::seeded(expect, seed.board().clone());
    let walker = Walker {
        budget,
        start: game.round(),
        record: opts.record_leaves,
    };
    let walk = walker.walk(game, strategy.clone_box(), &mut Vec::new(), 0, opts.parallel);
    let (counterexample, failure) = match walk.failure {
        Some((script, msg)) => (Some(color_script(&script)), Some(msg)),
        None => (None, None),
    };
    Ok(VerificationReport {
        strategy: strategy.name().to_string(),
        params: serde_json::Value::Null,
        budget,
        pass: counterexample.is_none(),
        worst_rounds: walk.worst,
        leaves: walk.leaves,
        counterexample,
        failure,
        leaf_depths: walk.depths,
    })
}

/// [`verify_guarantee`] on a registry instance, at its declared budget unless
/// `budget` overrides it.
pub fn verify_instance(
    inst: &crate::strategies::Instance,
    budget: Option<usize>,
    opts: VerifyOptions,
) -> Result<VerificationReport, AdversaryError> {
    let budget = budget.unwrap_or(inst.budget);
    let mut report = verify_guarantee(&inst.seed, inst.strategy.as_ref(), budget, inst.target, opts)?;
    report.strategy = inst.id.clone();
    report.params = serde_json::to_value(inst.params).expect("params serialize");
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{parse_color_script, seed_blue_path, BlueTarget, RedTarget};
    use crate::strategies::{
        instantiate, run_strategy, ExtendPair, JoinPaths, SkipMove, StrategyParams,
    };

    fn target(red: RedTarget, blue: BlueTarget) -> TargetSpec {
        TargetSpec::new(red, blue).unwrap()
    }

    #[test]
    fn simple_policies() {
        let g = GameState::new(target(RedTarget::Path(3), BlueTarget::Path(3)));
        let e = Edge::new(0, 1).unwrap();
        assert_eq!(PainterPolicy::AllBlue.color_response(&g, e), Ok(Color::Blue));
        assert_eq!(PainterPolicy::AllRed.color_response(&g, e), Ok(Color::Red));
        assert_eq!(
            PainterPolicy::Alternating(Color::Blue).color_response(&g, e),
            Ok(Color::Blue)
        );
        assert_eq!(
            PainterPolicy::Exhaustive.color_response(&g, e),
            Err(AdversaryError::NotAPolicy)
        );
    }

    #[test]
    fn script_runs_out_on_round_three() {
        let mut g = GameState::new(target(RedTarget::Path(9), BlueTarget::Path(9)));
        let p = PainterPolicy::Scripted(vec![Color::Red, Color::Blue]);
        for v in 0..2 {
            let e = Edge::new(v, v + 1).unwrap();
            let c = p.color_response(&g, e).unwrap();
            g.play_edge(e, c).unwrap();
        }
        let e = Edge::new(5, 6).unwrap();
        assert_eq!(p.color_response(&g, e), Err(AdversaryError::ScriptExhausted { round: 3 }));
    }

    #[test]
    fn random_is_reproducible() {
        let mut g = GameState::new(target(RedTarget::Path(30), BlueTarget::Path(30)));
        let p = PainterPolicy::RandomSeeded(7);
        let mut a = Vec::new();
        for v in 0..20 {
            let e = Edge::new(v, v + 1).unwrap();
            let c = p.color_response(&g, e).unwrap();
            a.push(c);
            assert_eq!(p.color_response(&g, e).unwrap(), c);
            g.play_edge(e, c).unwrap();
        }
        assert!(a.contains(&Color::Red) && a.contains(&Color::Blue));
    }

    #[test]
    fn greedy_avoids_completing_blue() {
        let g = GameState::seeded(target(RedTarget::Path(3), BlueTarget::Path(4)), seed_blue_path(3));
        let e = Edge::new(2, 3).unwrap();
        assert_eq!(PainterPolicy::GreedyAvoid(0).color_response(&g, e), Ok(Color::Red));
        // Both colors lose immediately: ties go to Red.
        let mut g = GameState::seeded(target(RedTarget::Path(2), BlueTarget::Path(3)), seed_blue_path(2));
        g.fresh_vertex();
        assert_eq!(
            PainterPolicy::GreedyAvoid(1).color_response(&g, Edge::new(1, 2).unwrap()),
            Ok(Color::Red)
        );
    }

    #[test]
    fn greedy_avoids_completing_red() {
        let mut g = GameState::new(target(RedTarget::Path(3), BlueTarget::Path(5)));
        g.play_edge(Edge::new(0, 1).unwrap(), Color::Red).unwrap();
        let e = Edge::new(1, 2).unwrap();
        assert_eq!(PainterPolicy::GreedyAvoid(2).color_response(&g, e), Ok(Color::Blue));
    }

    #[test]
    fn extend_pair_passes() {
        let inst = instantiate("extend-pair", &StrategyParams::k(3).with_t(2).with_seed(2)).unwrap();
        let r = verify_instance(&inst, None, VerifyOptions::default()).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.worst_rounds <= 10);
        assert!(r.leaves <= 1 << 10);
    }

    #[test]
    fn join_paths_has_four_leaves() {
        let mut board = seed_blue_path(4);
        board.add_blue_path(4);
        let t = target(RedTarget::Path(3), BlueTarget::Path(5));
        let s = JoinPaths::new(3, vec![0, 1, 2, 3], vec![4, 5, 6, 7]).unwrap();
        let r = verify_guarantee(&GameState::seeded(t, board), &s, 2, t, VerifyOptions::default()).unwrap();
        assert!(r.pass);
        // Blue on the first edge ends the game; red then either color ends it.
        assert_eq!(r.leaves, 3);
        assert_eq!(r.worst_rounds, 2);
    }

    #[test]
    fn cap_is_enforced() {
        let t = target(RedTarget::Path(3), BlueTarget::Path(6));
        let s = ExtendPair::from_scratch(3, 6);
        let opts = VerifyOptions {
            enum_cap: 1 << 10,
            ..Default::default()
        };
        let err = verify_guarantee(&GameState::new(t), &s, 18, t, opts).unwrap_err();
        assert_eq!(err, AdversaryError::EnumerationCapExceeded { budget: 18, cap: 1024 });
    }

    #[test]
    fn skipped_move_is_caught_and_replays() {
        let t = target(RedTarget::Path(3), BlueTarget::Path(4));
        let seed = GameState::seeded(t, seed_blue_path(2));
        let broken = SkipMove::new(Box::new(ExtendPair::new(3, 2, vec![0, 1])), 1, Color::Blue);
        let r = verify_guarantee(&seed, &broken, 10, t, VerifyOptions::default()).unwrap();
        assert!(!r.pass);
        let script = parse_color_script(r.counterexample.as_deref().unwrap()).unwrap();
        let mut again = broken.clone();
        let replay = run_strategy(seed, &mut again, &PainterPolicy::Scripted(script), 10);
        match replay {
            Err(_) => {}
            Ok(out) => panic!("replay succeeded with {:?}", out.result),
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let inst = instantiate("star-cycle", &StrategyParams::k(2).with_n(8)).unwrap();
        let seq = VerifyOptions {
            parallel: false,
            ..Default::default()
        };
        let a = verify_instance(&inst, None, seq).unwrap();
        let b = verify_instance(&inst, None, VerifyOptions::default()).unwrap();
        assert_eq!(a, b);
        assert!(a.pass);
    }
}
