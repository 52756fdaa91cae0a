//! Builder strategies as resumable state machines.
//!
//! A strategy is asked for an edge, the engine plays it, and the strategy is
//! told the resulting color. Strategies never look ahead and are
//! deterministic in the sequence of observed colors, which is what lets the
//! exhaustive verifier treat them as fixed Builder policies.

mod composite;
mod mutation;
mod paths;
mod registry;
mod stars;

pub use composite::{Composite, Part};
pub use mutation::SkipMove;
pub use paths::{CloseCycleChord, ExtendPair, JoinPaths};
pub use registry::{instantiate, Instance, StrategyParams, STRATEGY_IDS};
pub use stars::{StarCycle, StarExtend, StarExtendBy, StarJoin};

use serde::Serialize;
use thiserror::Error;

use crate::adversaries::{AdversaryError, PainterPolicy};
use crate::game::{Edge, GameError, GameState, Move, Terminal, Vertex, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrategyError {
    #[error("no target reached within {budget} rounds")]
    BudgetExceeded { budget: usize },
    #[error("guarantee failed: {0}")]
    FailedGuarantee(String),
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error("internal error: {0}")]
    InternalError(String),
    #[error("adapter mismatch: {0}")]
    AdapterMismatch(String),
    #[error("unknown strategy {0:?}")]
    UnknownStrategy(String),
    #[error("missing parameter {0}")]
    MissingParam(&'static str),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Painter(#[from] AdversaryError),
}

/// What a strategy believes it has achieved so far.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Progress {
    Running,
    /// The red goal is on the board.
    Red,
    /// The blue goal is on the board: a path in order, or a cycle.
    Blue(Vec<Vertex>),
}

pub trait BuilderStrategy: Send + Sync {
    fn name(&self) -> &str;

    /// Declared maximum number of rounds.
    fn budget(&self) -> usize;

    /// Next edge to play. Fresh vertices are allocated from `game`.
    fn propose(&mut self, game: &mut GameState) -> Result<Edge, StrategyError>;

    /// The round that was just played for the last proposal.
    fn observe(&mut self, game: &GameState, mv: Move) -> Result<(), StrategyError>;

    fn progress(&self) -> Progress;

    fn clone_box(&self) -> Box<dyn BuilderStrategy>;
}

impl Clone for Box<dyn BuilderStrategy> {
    fn clone(&self) -> Self {
        self.clone_box()
    }
}

pub(crate) fn exhausted(name: &str, progress: &Progress) -> StrategyError {
    StrategyError::FailedGuarantee(format!(
        "{name} has no move left ({progress:?}) but no target is on the board"
    ))
}

pub(crate) fn expect_edge(name: &str, expected: Option<Edge>, mv: Move) -> Result<(), StrategyError> {
    match expected {
        Some(e) if e == mv.edge => Ok(()),
        _ => Err(StrategyError::InternalError(format!(
            "{name} observed {} but proposed {expected:?}",
            mv.edge
        ))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutcomeKind {
    RedWin,
    BlueWin,
}

#[derive(Clone, Debug, Serialize)]
pub struct StrategyOutcome {
    pub result: OutcomeKind,
    pub witness: Witness,
    pub rounds_used: usize,
    #[serde(skip)]
    pub final_state: GameState,
}

/// Plays `strategy` against `painter` from `seed` until a target appears or
/// `budget` rounds have been played.
pub fn run_strategy(
    seed: GameState,
    strategy: &mut dyn BuilderStrategy,
    painter: &PainterPolicy,
    budget: usize,
) -> Result<StrategyOutcome, StrategyError> {
    let mut game = seed;
    let start = game.round();
    loop {
        if let Some(t) = game.terminal() {
            let (result, witness) = match t {
                Terminal::RedWin(w) => (OutcomeKind::RedWin, w.clone()),
                Terminal::BlueWin(w) => (OutcomeKind::BlueWin, w.clone()),
            };
            return Ok(StrategyOutcome {
                result,
                witness,
                rounds_used: game.round() - start,
                final_state: game,
            });
        }
        if game.round() - start >= budget {
            return Err(StrategyError::BudgetExceeded { budget });
        }
        let e = strategy.propose(&mut game)?;
        let c = painter.color_response(&game, e)?;
        let mv = game.play_edge(e, c)?;
        strategy.observe(&game, mv)?;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{seed_blue_path, BlueTarget, Color, RedTarget, TargetSpec, WitnessKind};

    fn game(red: RedTarget, blue: BlueTarget, seed: usize) -> GameState {
        GameState::seeded(TargetSpec::new(red, blue).unwrap(), seed_blue_path(seed))
    }

    #[test]
    fn star_extend_all_blue_wins_in_one_round() {
        let seed = game(RedTarget::Star(2), BlueTarget::Path(4), 3);
        let mut s = StarExtend::new(2, vec![0, 1, 2]);
        let out = run_strategy(seed, &mut s, &PainterPolicy::AllBlue, 2).unwrap();
        assert_eq!(out.result, OutcomeKind::BlueWin);
        assert_eq!(out.rounds_used, 1);
        assert_eq!(out.witness.kind, WitnessKind::BluePath);
        assert_eq!(out.witness.vertices.len(), 4);
    }

    #[test]
    fn join_paths_all_red_is_zigzag() {
        let mut board = seed_blue_path(4);
        board.add_blue_path(4);
        let target = TargetSpec::new(RedTarget::Path(3), BlueTarget::Path(5)).unwrap();
        let mut s = JoinPaths::new(3, vec![0, 1, 2, 3], vec![4, 5, 6, 7]).unwrap();
        let out =
            run_strategy(GameState::seeded(target, board), &mut s, &PainterPolicy::AllRed, 2).unwrap();
        assert_eq!(out.result, OutcomeKind::RedWin);
        assert_eq!(out.witness.vertices, vec![0, 4, 1]);
        assert_eq!(out.rounds_used, 2);
    }

    #[test]
    fn budget_is_enforced() {
        let seed = game(RedTarget::Star(3), BlueTarget::Path(4), 3);
        let mut s = StarExtend::new(3, vec![0, 1, 2]);
        let err = run_strategy(seed, &mut s, &PainterPolicy::AllRed, 2).unwrap_err();
        assert_eq!(err, StrategyError::BudgetExceeded { budget: 2 });
    }

    #[test]
    fn identical_scripts_give_identical_transcripts() {
        let script = PainterPolicy::Scripted(vec![
            Color::Red,
            Color::Blue,
            Color::Blue,
            Color::Red,
            Color::Red,
            Color::Red,
            Color::Blue,
            Color::Blue,
            Color::Red,
            Color::Blue,
        ]);
        let run = || {
            let seed = game(RedTarget::Path(3), BlueTarget::Path(4), 2);
            let mut s = ExtendPair::new(3, 2, vec![0, 1]);
            run_strategy(seed, &mut s, &script, 10).unwrap().final_state.transcript().to_vec()
        };
        assert_eq!(run(), run());
    }
}
