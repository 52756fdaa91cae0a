//! JSON-lines transcript: one header object, then one object per round.

use serde::{Deserialize, Serialize};

use super::{Color, Edge, GameState, TargetSpec, Vertex};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameHeader {
    pub target: TargetSpec,
    /// Edges present before round 1, as `[u, v, color]`.
    pub seeded: Vec<(Vertex, Vertex, Color)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: usize,
    pub edge: Edge,
    pub color: Color,
    pub repeat: bool,
}

impl GameState {
    pub fn header(&self) -> GameHeader {
        GameHeader {
            target: self.target(),
            seeded: self
                .seeded_edges()
                .iter()
                .map(|&(e, c)| (e.lo(), e.hi(), c))
                .collect(),
        }
    }

    pub fn round_records(&self) -> Vec<RoundRecord> {
        self.transcript()
            .iter()
            .enumerate()
            .map(|(i, m)| RoundRecord {
                round: i + 1,
                edge: m.edge,
                color: m.color,
                repeat: m.repeated,
            })
            .collect()
    }
}

/// Serializes a game as JSON lines, header first.
pub fn transcript_lines(state: &GameState) -> String {
    let mut out = serde_json::to_string(&state.header()).expect("header serializes");
    out.push('\n');
    for rec in state.round_records() {
        out.push_str(&serde_json::to_string(&rec).expect("round serializes"));
        out.push('\n');
    }
    out
}
