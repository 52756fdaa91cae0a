use super::{BuilderStrategy, Progress, StrategyError};
use crate::game::{Color, Edge, GameState, Move};

/// A deliberately broken strategy: the `skip`-th proposal (0-based) of the
/// wrapped strategy is never played, and the wrapped strategy is told it came
/// back `assumed`. Used to check that the verifier rejects faulty play.
#[derive(Clone)]
pub struct SkipMove {
    inner: Box<dyn BuilderStrategy>,
    skip: usize,
    assumed: Color,
    proposals: usize,
    name: String,
}

impl SkipMove {
    pub fn new(inner: Box<dyn BuilderStrategy>, skip: usize, assumed: Color) -> Self {
        let name = format!("{}/skip{skip}", inner.name());
        SkipMove {
            inner,
            skip,
            assumed,
            proposals: 0,
            name,
        }
    }
}

impl BuilderStrategy for SkipMove {
    fn name(&self) -> &str {
        &self.name
    }

    fn budget(&self) -> usize {
        self.inner.budget()
    }

    fn propose(&mut self, game: &mut GameState) -> Result<Edge, StrategyError> {
        loop {
            let e = self.inner.propose(game)?;
            let index = self.proposals;
            self.proposals += 1;
            if index != self.skip {
                return Ok(e);
            }
            let phantom = Move {
                edge: e,
                color: self.assumed,
                repeated: false,
            };
            self.inner.observe(game, phantom)?;
        }
    }

    fn observe(&mut self, game: &GameState, mv: Move) -> Result<(), StrategyError> {
        self.inner.observe(game, mv)
    }

    fn progress(&self) -> Progress {
        self.inner.progress()
    }

    fn clone_box(&self) -> Box<dyn BuilderStrategy> {
        Box::new(self.clone())
    }
}
