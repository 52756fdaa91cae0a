//! Builder/Painter online Ramsey game lab.

pub mod adversaries;
pub mod game;
pub mod strategies;
pub mod solver;
pub mod sequences;
pub mod service;
#[cfg(feature = "cli")]
pub mod cli;
