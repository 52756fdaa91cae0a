//! The game board, targets and the round loop.
//!
//! Vertices are allocation-ordered naturals. The infinite host graph is never
//! materialized: a vertex exists once it has been handed out by
//! [`GameState::fresh_vertex`] or touched by an edge.

mod detect;
mod transcript;

pub use detect::{
    detect_blue_cycle, detect_blue_path, detect_cycle, detect_path, detect_red_path,
    detect_red_star, detect_star,
};
pub use transcript::{transcript_lines, GameHeader, RoundRecord};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vertex = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Blue,
}

impl Color {
    pub const BOTH: [Color; 2] = [Color::Red, Color::Blue];

    pub fn flip(self) -> Color {
        match self {
            Color::Red => Color::Blue,
            Color::Blue => Color::Red,
        }
    }

    /// Single-letter code used in painter scripts.
    pub fn code(self) -> char {
        match self {
            Color::Red => 'R',
            Color::Blue => 'B',
        }
    }

    pub fn from_code(c: char) -> Option<Color> {
        match c {
            'R' | 'r' => Some(Color::Red),
            'B' | 'b' => Some(Color::Blue),
            _ => None,
        }
    }

    pub(crate) fn index(self) -> usize {
        match self {
            Color::Red => 0,
            Color::Blue => 1,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Red => "red",
            Color::Blue => "blue",
        })
    }
}

impl FromStr for Color {
    type Err = GameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "red" | "R" => Ok(Color::Red),
            "blue" | "B" => Ok(Color::Blue),
            other => Err(GameError::BadColor(other.to_string())),
        }
    }
}

/// Encodes a color sequence as `"RBRB..."`.
pub fn color_script(colors: &[Color]) -> String {
    colors.iter().map(|c| c.code()).collect()
}

pub fn parse_color_script(s: &str) -> Result<Vec<Color>, GameError> {
    s.chars()
        .map(|c| Color::from_code(c).ok_or_else(|| GameError::BadColor(c.to_string())))
        .collect()
}

/// An unordered pair of distinct vertices, stored with `lo < hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    lo: Vertex,
    hi: Vertex,
}

impl Edge {
    pub fn new(u: Vertex, v: Vertex) -> Result<Edge, GameError> {
        match u.cmp(&v) {
            std::cmp::Ordering::Less => Ok(Edge { lo: u, hi: v }),
            std::cmp::Ordering::Greater => Ok(Edge { lo: v, hi: u }),
            std::cmp::Ordering::Equal => Err(GameError::SelfLoop(u)),
        }
    }

    pub fn lo(self) -> Vertex {
        self.lo
    }

    pub fn hi(self) -> Vertex {
        self.hi
    }

    pub fn endpoints(self) -> [Vertex; 2] {
        [self.lo, self.hi]
    }

    pub fn contains(self, v: Vertex) -> bool {
        self.lo == v || self.hi == v
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.lo, self.hi)
    }
}

impl Serialize for Edge {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.lo, self.hi].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Edge {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [u, v] = <[Vertex; 2]>::deserialize(d)?;
        Edge::new(u, v).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("the game is already over")]
    GameOver,
    #[error("seeding is only allowed before the first round")]
    SeedAfterStart,
    #[error("invalid target: {0}")]
    BadTarget(String),
    #[error("invalid color {0:?}")]
    BadColor(String),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Neighbors {
    by_color: [BTreeSet<Vertex>; 2],
}

/// A 2-edge-colored graph on a lazily allocated vertex pool.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ColoredGraph {
    edges: BTreeMap<Edge, Color>,
    adj: BTreeMap<Vertex, Neighbors>,
    next_fresh: Vertex,
}

impl ColoredGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a board from colored edges. Later duplicates do not override
    /// earlier ones.
    pub fn from_edges<I>(edges: I) -> Result<Self, GameError>
    where
        I: IntoIterator<Item = (Vertex, Vertex, Color)>,
    {
        let mut g = ColoredGraph::new();
        for (u, v, c) in edges {
            g.insert(Edge::new(u, v)?, c);
        }
        Ok(g)
    }

    pub fn fresh_vertex(&mut self) -> Vertex {
        let v = self.next_fresh;
        self.next_fresh += 1;
        v
    }

    pub fn next_fresh(&self) -> Vertex {
        self.next_fresh
    }

    /// Colors `e` unless it is already colored. Returns the color the edge
    /// carries afterwards and whether it was already present.
    pub fn insert(&mut self, e: Edge, c: Color) -> (Color, bool) {
        if let Some(&existing) = self.edges.get(&e) {
            return (existing, true);
        }
        self.edges.insert(e, c);
        let [u, v] = e.endpoints();
        self.adj.entry(u).or_default().by_color[c.index()].insert(v);
        self.adj.entry(v).or_default().by_color[c.index()].insert(u);
        self.next_fresh = self.next_fresh.max(e.hi + 1);
        (c, false)
    }

    pub fn color_of(&self, e: Edge) -> Option<Color> {
        self.edges.get(&e).copied()
    }

    pub fn has(&self, u: Vertex, v: Vertex, c: Color) -> bool {
        Edge::new(u, v)
            .ok()
            .and_then(|e| self.color_of(e))
            .is_some_and(|x| x == c)
    }

    pub fn edges(&self) -> impl Iterator<Item = (Edge, Color)> + '_ {
        self.edges.iter().map(|(&e, &c)| (e, c))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn touched_vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.adj.keys().copied()
    }

    pub fn touched_count(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: Vertex, c: Color) -> impl Iterator<Item = Vertex> + '_ {
        self.adj
            .get(&v)
            .into_iter()
            .flat_map(move |n| n.by_color[c.index()].iter().copied())
    }

    pub fn degree(&self, v: Vertex, c: Color) -> usize {
        self.adj
            .get(&v)
            .map_or(0, |n| n.by_color[c.index()].len())
    }

    /// Appends a blue path on `n` freshly allocated vertices and returns them
    /// in path order.
    pub fn add_blue_path(&mut self, n: usize) -> Vec<Vertex> {
        let vs: Vec<Vertex> = (0..n).map(|_| self.fresh_vertex()).collect();
        for w in vs.windows(2) {
            self.insert(Edge { lo: w[0], hi: w[1] }, Color::Blue);
        }
        vs
    }
}

/// A board containing exactly a blue path on `n` vertices.
pub fn seed_blue_path(n: usize) -> ColoredGraph {
    let mut g = ColoredGraph::new();
    g.add_blue_path(n.max(1));
    g
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "size", rename_all = "lowercase")]
pub enum RedTarget {
    /// Red path on `k` vertices.
    Path(usize),
    /// Red star with `k` leaves.
    Star(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "size", rename_all = "lowercase")]
pub enum BlueTarget {
    Path(usize),
    Cycle(usize),
}

impl RedTarget {
    pub fn size(self) -> usize {
        match self {
            RedTarget::Path(k) | RedTarget::Star(k) => k,
        }
    }

    pub fn validate(self) -> Result<Self, GameError> {
        if self.size() == 0 {
            return Err(GameError::BadTarget(format!("{self} needs size >= 1")));
        }
        Ok(self)
    }
}

impl BlueTarget {
    pub fn size(self) -> usize {
        match self {
            BlueTarget::Path(n) | BlueTarget::Cycle(n) => n,
        }
    }

    pub fn validate(self) -> Result<Self, GameError> {
        match self {
            BlueTarget::Path(0) => Err(GameError::BadTarget("path needs size >= 1".into())),
            BlueTarget::Cycle(n) if n < 3 => {
                Err(GameError::BadTarget(format!("cycle needs size >= 3, got {n}")))
            }
            ok => Ok(ok),
        }
    }
}

impl fmt::Display for RedTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RedTarget::Path(k) => write!(f, "path:{k}"),
            RedTarget::Star(k) => write!(f, "star:{k}"),
        }
    }
}

impl fmt::Display for BlueTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlueTarget::Path(n) => write!(f, "path:{n}"),
            BlueTarget::Cycle(n) => write!(f, "cycle:{n}"),
        }
    }
}

fn split_target(s: &str) -> Result<(&str, usize), GameError> {
    let (kind, size) = s
        .split_once(':')
        .ok_or_else(|| GameError::BadTarget(format!("expected kind:size, got {s:?}")))?;
    let size = size
        .trim()
        .parse()
        .map_err(|_| GameError::BadTarget(format!("bad size in {s:?}")))?;
    Ok((kind.trim(), size))
}

impl FromStr for RedTarget {
    type Err = GameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, size) = split_target(s)?;
        match kind {
            "path" => RedTarget::Path(size).validate(),
            "star" => RedTarget::Star(size).validate(),
            _ => Err(GameError::BadTarget(format!("red target must be path or star, got {kind:?}"))),
        }
    }
}

impl FromStr for BlueTarget {
    type Err = GameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, size) = split_target(s)?;
        match kind {
            "path" => BlueTarget::Path(size).validate(),
            "cycle" => BlueTarget::Cycle(size).validate(),
            _ => Err(GameError::BadTarget(format!("blue target must be path or cycle, got {kind:?}"))),
        }
    }
}

/// The pair (red target, blue target) that ends the game.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TargetSpec {
    pub red: RedTarget,
    pub blue: BlueTarget,
}

impl TargetSpec {
    pub fn new(red: RedTarget, blue: BlueTarget) -> Result<Self, GameError> {
        Ok(TargetSpec {
            red: red.validate()?,
            blue: blue.validate()?,
        })
    }

    pub fn detect_red(&self, g: &ColoredGraph) -> Option<Witness> {
        match self.red {
            RedTarget::Path(k) => detect_path(g, Color::Red, k),
            RedTarget::Star(k) => detect_star(g, Color::Red, k),
        }
    }

    pub fn detect_blue(&self, g: &ColoredGraph) -> Option<Witness> {
        match self.blue {
            BlueTarget::Path(n) => detect_path(g, Color::Blue, n),
            BlueTarget::Cycle(n) => detect_cycle(g, Color::Blue, n),
        }
    }

    /// Red is checked first.
    pub fn detect(&self, g: &ColoredGraph) -> Option<Terminal> {
        if let Some(w) = self.detect_red(g) {
            return Some(Terminal::RedWin(w));
        }
        self.detect_blue(g).map(Terminal::BlueWin)
    }
}

impl fmt::Display for TargetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "red {} / blue {}", self.red, self.blue)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    RedPath,
    RedStar,
    BluePath,
    BlueCycle,
}

impl WitnessKind {
    pub fn color(self) -> Color {
        match self {
            WitnessKind::RedPath | WitnessKind::RedStar => Color::Red,
            WitnessKind::BluePath | WitnessKind::BlueCycle => Color::Blue,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("witness edge {0} missing or wrongly colored")]
    MissingEdge(Edge),
    #[error("witness is malformed: {0}")]
    Malformed(&'static str),
}

/// An explicit copy of a target in the board. Paths and cycles list their
/// vertices in order; a star lists its center followed by its leaves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: WitnessKind,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

impl Witness {
    pub(crate) fn path(kind: WitnessKind, vertices: Vec<Vertex>) -> Witness {
        let mut edges: Vec<Edge> = vertices
            .windows(2)
            .map(|w| Edge::new(w[0], w[1]).expect("path vertices are distinct"))
            .collect();
        if kind == WitnessKind::BlueCycle {
            edges.push(
                Edge::new(vertices[vertices.len() - 1], vertices[0])
                    .expect("cycle vertices are distinct"),
            );
        }
        Witness { kind, vertices, edges }
    }

    pub(crate) fn star(center: Vertex, leaves: Vec<Vertex>) -> Witness {
        let edges = leaves
            .iter()
            .map(|&l| Edge::new(center, l).expect("leaf differs from center"))
            .collect();
        let mut vertices = Vec::with_capacity(leaves.len() + 1);
        vertices.push(center);
        vertices.extend(leaves);
        Witness { kind: WitnessKind::RedStar, vertices, edges }
    }

    /// Number of vertices for paths and cycles, number of leaves for stars.
    pub fn size(&self) -> usize {
        match self.kind {
            WitnessKind::RedStar => self.vertices.len() - 1,
            _ => self.vertices.len(),
        }
    }

    /// Checks the structural claim and that every edge is on the board with
    /// the witness color.
    pub fn validate(&self, g: &ColoredGraph) -> Result<(), WitnessError> {
        let distinct: BTreeSet<_> = self.vertices.iter().collect();
        if distinct.len() != self.vertices.len() || self.vertices.is_empty() {
            return Err(WitnessError::Malformed("vertices must be distinct and non-empty"));
        }
        let expected = match self.kind {
            WitnessKind::RedStar => Witness::star(self.vertices[0], self.vertices[1..].to_vec()),
            kind => {
                if kind == WitnessKind::BlueCycle && self.vertices.len() < 3 {
                    return Err(WitnessError::Malformed("cycle needs at least 3 vertices"));
                }
                Witness::path(kind, self.vertices.clone())
            }
        };
        if expected.edges != self.edges {
            return Err(WitnessError::Malformed("edge list does not match vertex list"));
        }
        let color = self.kind.color();
        for &e in &self.edges {
            if g.color_of(e) != Some(color) {
                return Err(WitnessError::MissingEdge(e));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", content = "witness", rename_all = "snake_case")]
pub enum Terminal {
    RedWin(Witness),
    BlueWin(Witness),
}

impl Terminal {
    pub fn witness(&self) -> &Witness {
        match self {
            Terminal::RedWin(w) | Terminal::BlueWin(w) => w,
        }
    }

    pub fn color(&self) -> Color {
        match self {
            Terminal::RedWin(_) => Color::Red,
            Terminal::BlueWin(_) => Color::Blue,
        }
    }
}

/// One played round.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Move {
    pub edge: Edge,
    pub color: Color,
    pub repeated: bool,
}

/// Board, target, round counter, transcript and terminal status.
#[derive(Clone, Debug)]
pub struct GameState {
    board: ColoredGraph,
    target: TargetSpec,
    transcript: Vec<Move>,
    seeded: Vec<(Edge, Color)>,
    terminal: Option<Terminal>,
}

impl GameState {
    pub fn new(target: TargetSpec) -> Self {
        let mut state = GameState {
            board: ColoredGraph::new(),
            target,
            transcript: Vec::new(),
            seeded: Vec::new(),
            terminal: None,
        };
        state.terminal = target.detect(&state.board);
        state
    }

    /// Starts a game on a fabricated board. Seeded edges are not charged as
    /// rounds and are reported separately in the transcript header.
    pub fn seeded(target: TargetSpec, board: ColoredGraph) -> Self {
        let seeded = board.edges().collect();
        let terminal = target.detect(&board);
        GameState {
            board,
            target,
            transcript: Vec::new(),
            seeded,
            terminal,
        }
    }

    /// Adds a blue path on fresh vertices to a game that has not started yet.
    pub fn seed_blue_path(&mut self, n: usize) -> Result<Vec<Vertex>, GameError> {
        if !self.transcript.is_empty() {
            return Err(GameError::SeedAfterStart);
        }
        let before = self.board.edge_count();
        let vs = self.board.add_blue_path(n.max(1));
        if self.board.edge_count() > before {
            self.seeded = self.board.edges().collect();
        }
        if self.terminal.is_none() {
            self.terminal = self.target.detect(&self.board);
        }
        Ok(vs)
    }

    pub fn fresh_vertex(&mut self) -> Vertex {
        self.board.fresh_vertex()
    }

    /// Plays one round. A previously colored edge keeps its color and the
    /// round is still charged.
    pub fn play_edge(&mut self, e: Edge, painter_choice: Color) -> Result<Move, GameError> {
        if self.terminal.is_some() {
            return Err(GameError::GameOver);
        }
        let (color, repeated) = self.board.insert(e, painter_choice);
        let mv = Move { edge: e, color, repeated };
        self.transcript.push(mv);
        if !repeated {
            // Only a target of the new edge's color can have appeared.
            self.terminal = match color {
                Color::Red => self.target.detect_red(&self.board).map(Terminal::RedWin),
                Color::Blue => self.target.detect_blue(&self.board).map(Terminal::BlueWin),
            };
        }
        Ok(mv)
    }

    pub fn board(&self) -> &ColoredGraph {
        &self.board
    }

    pub fn target(&self) -> TargetSpec {
        self.target
    }

    pub fn round(&self) -> usize {
        self.transcript.len()
    }

    pub fn transcript(&self) -> &[Move] {
        &self.transcript
    }

    pub fn seeded_edges(&self) -> &[(Edge, Color)] {
        &self.seeded
    }

    pub fn terminal(&self) -> Option<&Terminal> {
        self.terminal.as_ref()
    }

    pub fn is_over(&self) -> bool {
        self.terminal.is_some()
    }

    /// Painter colors in round order (repeated rounds carry the edge's
    /// existing color).
    pub fn color_history(&self) -> Vec<Color> {
        self.transcript.iter().map(|m| m.color).collect()
    }
}
