//! Sequential composition of strategies.
//!
//! Each part ends with a blue witness that the next part is built from; the
//! first red goal ends the whole game.

use std::sync::Arc;

use super::{exhausted, BuilderStrategy, Progress, StrategyError};
use crate::game::{Color, Edge, GameState, Move, Vertex};

type Builder =
    dyn Fn(&[Vec<Vertex>]) -> Result<Box<dyn BuilderStrategy>, StrategyError> + Send + Sync;

/// One stage of a composite: a declared budget and an adapter that turns the
/// blue witnesses of all earlier stages into the stage's strategy.
#[derive(Clone)]
pub struct Part {
    pub label: String,
    pub budget: usize,
    build: Arc<Builder>,
}

impl Part {
    pub fn new<F>(label: impl Into<String>, budget: usize, build: F) -> Self
    where
        F: Fn(&[Vec<Vertex>]) -> Result<Box<dyn BuilderStrategy>, StrategyError>
            + Send
            + Sync
            + 'static,
    {
        Part {
            label: label.into(),
            budget,
            build: Arc::new(build),
        }
    }
}

impl std::fmt::Debug for Part {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Part")
            .field("label", &self.label)
            .field("budget", &self.budget)
            .finish()
    }
}

#[derive(Clone)]
pub struct Composite {
    name: String,
    parts: Vec<Part>,
    index: usize,
    current: Option<Box<dyn BuilderStrategy>>,
    witnesses: Vec<Vec<Vertex>>,
    red: bool,
}

impl Composite {
    pub fn new(name: impl Into<String>, parts: Vec<Part>) -> Self {
        Composite {
            name: name.into(),
            parts,
            index: 0,
            current: None,
            witnesses: Vec::new(),
            red: false,
        }
    }

    pub fn parts(&self) -> &[Part] {
        &self.parts
    }

    pub fn witnesses(&self) -> &[Vec<Vertex>] {
        &self.witnesses
    }

    /// Moves past finished parts. Each blue witness is checked against the
    /// board before the next part is built from it.
    fn settle(&mut self, game: &GameState) -> Result<(), StrategyError> {
        loop {
            if self.red {
                return Ok(());
            }
            if self.current.is_none() {
                if self.index >= self.parts.len() {
                    return Ok(());
                }
                let part = &self.parts[self.index];
                self.current = Some((part.build)(&self.witnesses)?);
            }
            let current = self.current.as_ref().expect("part built");
            match current.progress() {
                Progress::Running => return Ok(()),
                Progress::Red => {
                    self.red = true;
                    return Ok(());
                }
                Progress::Blue(w) => {
                    check_blue(game, &w, &self.parts[self.index].label)?;
                    self.witnesses.push(w);
                    self.current = None;
                    self.index += 1;
                }
            }
        }
    }
}

fn check_blue(game: &GameState, w: &[Vertex], label: &str) -> Result<(), StrategyError> {
    let ok = w.windows(2).all(|p| game.board().has(p[0], p[1], Color::Blue));
    if ok {
        Ok(())
    } else {
        Err(StrategyError::AdapterMismatch(format!(
            "{label} reported blue witness {w:?} that is not a blue path on the board"
        )))
    }
}

impl BuilderStrategy for Composite {
    fn name(&self) -> &str {
        &self.name
    }

    fn budget(&self) -> usize {
        self.parts.iter().map(|p| p.budget).sum()
    }

    fn propose(&mut self, game: &mut GameState) -> Result<Edge, StrategyError> {
        self.settle(game)?;
        match self.current.as_mut() {
            Some(s) if !self.red => s.propose(game),
            _ => Err(exhausted(&self.name, &self.progress())),
        }
    }

    fn observe(&mut self, game: &GameState, mv: Move) -> Result<(), StrategyError> {
        let current = self
            .current
            .as_mut()
            .ok_or_else(|| StrategyError::InternalError("composite observed without a part".into()))?;
        current.observe(game, mv)?;
        self.settle(game)
    }

    fn progress(&self) -> Progress {
        if self.red {
            return Progress::Red;
        }
        if let Some(s) = &self.current {
            return match s.progress() {
                Progress::Blue(w) if self.index + 1 == self.parts.len() => Progress::Blue(w),
                Progress::Red => Progress::Red,
                _ => Progress::Running,
            };
        }
        if self.index >= self.parts.len() {
            return Progress::Blue(self.witnesses.last().cloned().unwrap_or_default());
        }
        Progress::Running
    }

    fn clone_box(&self) -> Box<dyn BuilderStrategy> {
        Box::new(self.clone())
    }
}
