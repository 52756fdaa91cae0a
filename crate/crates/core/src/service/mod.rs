//! Live game sessions: a human plays one side, the engine the other.
//!
//! The session layer is synchronous and transport-free; [`server`] puts it
//! behind HTTP and a WebSocket.

#[cfg(feature = "server")]
pub mod server;

use std::collections::HashMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use parking_lot::Mutex;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adversaries::PainterPolicy;
use crate::game::{
    transcript_lines, Color, Edge, GameError, GameState, TargetSpec, Terminal, Vertex, Witness,
};
use crate::strategies::{instantiate, BuilderStrategy, StrategyError, StrategyParams};

pub const DEFAULT_IDLE: Duration = Duration::from_secs(30 * 60);
pub const DEFAULT_BUILDER_BUDGET: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    /// The human colors, the engine builds.
    Painter,
    /// The human builds, the engine colors.
    Builder,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CreateRequest {
    pub role: Role,
    #[serde(default)]
    pub target: Option<TargetSpec>,
    /// Strategy id for a human Painter, painter policy for a human Builder.
    #[serde(default)]
    pub engine: Option<String>,
    #[serde(default)]
    pub params: StrategyParams,
    #[serde(default)]
    pub budget: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ClientMessage {
    Create(CreateRequest),
    Color { session: String, color: Color },
    Edge { session: String, edge: [Vertex; 2] },
    /// Resend the board and any pending proposal.
    Attach { session: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GameResult {
    RedWin,
    BlueWin,
    BudgetExceeded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ServerMessage {
    Created {
        session: String,
    },
    Propose {
        round: usize,
        edge: Edge,
    },
    State {
        round: usize,
        edges: Vec<(Vertex, Vertex, Color)>,
    },
    Terminal {
        result: GameResult,
        witness: Option<Witness>,
        rounds: usize,
    },
    Error {
        code: String,
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SessionError {
    #[error("no session {0:?}")]
    UnknownSession(String),
    #[error("not your turn")]
    OutOfTurn,
    #[error("illegal edge: {0}")]
    IllegalEdge(String),
    #[error("session has ended")]
    SessionTerminated,
    #[error("unknown engine {0:?}")]
    UnknownEngine(String),
    #[error("invalid target: {0}")]
    InvalidTarget(String),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
}

impl SessionError {
    pub fn code(&self) -> &'static str {
        match self {
            SessionError::UnknownSession(_) => "unknown_session",
            SessionError::OutOfTurn => "out_of_turn",
            SessionError::IllegalEdge(_) => "illegal_edge",
            SessionError::SessionTerminated => "session_terminated",
            SessionError::UnknownEngine(_) => "unknown_engine",
            SessionError::InvalidTarget(_) => "invalid_target",
            SessionError::Strategy(StrategyError::UnknownStrategy(_)) => "unknown_engine",
            SessionError::Strategy(_) => "strategy_error",
        }
    }

    pub fn to_message(&self) -> ServerMessage {
        ServerMessage::Error {
            code: self.code().to_string(),
            message: self.to_string(),
        }
    }
}

impl From<GameError> for SessionError {
    fn from(e: GameError) -> Self {
        SessionError::IllegalEdge(e.to_string())
    }
}

/// Parses a painter engine name: `all-red`, `all-blue`, `alternating[:red]`,
/// `random[:seed]`, `greedy-avoid[:depth]`.
pub fn parse_painter(name: &str) -> Result<PainterPolicy, SessionError> {
    let unknown = || SessionError::UnknownEngine(name.to_string());
    let (head, arg) = match name.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (name, None),
    };
    Ok(match (head, arg) {
        ("all-red", None) => PainterPolicy::AllRed,
        ("all-blue", None) => PainterPolicy::AllBlue,
        ("alternating", a) => {
            PainterPolicy::Alternating(a.map_or(Ok(Color::Red), |c| c.parse()).map_err(|_| unknown())?)
        }
        ("random", a) => PainterPolicy::RandomSeeded(a.map_or(Ok(0), |s| s.parse()).map_err(|_| unknown())?),
        ("greedy-avoid", a) => PainterPolicy::GreedyAvoid(a.map_or(Ok(1), |d| d.parse()).map_err(|_| unknown())?),
        _ => return Err(unknown()),
    })
}

enum Engine {
    Builder(Box<dyn BuilderStrategy>),
    Painter(PainterPolicy),
}

pub struct Session {
    id: String,
    role: Role,
    engine: Engine,
    state: GameState,
    budget: usize,
    pending: Option<Edge>,
    finished: bool,
    last_active: Instant,
}

impl Session {
    fn create(id: String, req: &CreateRequest) -> Result<(Session, Vec<ServerMessage>), SessionError> {
        let mut session = match req.role {
            Role::Painter => {
                let name = req.engine.as_deref().unwrap_or("extend-pair");
                let inst = instantiate(name, &req.params)?;
                if let Some(t) = req.target {
                    if t != inst.target {
                        return Err(SessionError::InvalidTarget(format!(
                            "{name} with these parameters plays for {}, not {t}",
                            inst.target
                        )));
                    }
                }
                Session {
                    id,
                    role: req.role,
                    budget: req.budget.unwrap_or(inst.budget),
                    engine: Engine::Builder(inst.strategy),
                    state: inst.seed,
                    pending: None,
                    finished: false,
                    last_active: Instant::now(),
                }
            }
            Role::Builder => {
                let target = req
                    .target
                    .ok_or_else(|| SessionError::InvalidTarget("a target is required".into()))?;
                let target = TargetSpec::new(target.red, target.blue)
                    .map_err(|e| SessionError::InvalidTarget(e.to_string()))?;
                let policy = parse_painter(req.engine.as_deref().unwrap_or("greedy-avoid:1"))?;
                let mut state = GameState::new(target);
                if let Some(n) = req.params.seed_blue_path {
                    state.seed_blue_path(n)?;
                }
                Session {
                    id,
                    role: req.role,
                    budget: req.budget.unwrap_or(DEFAULT_BUILDER_BUDGET),
                    engine: Engine::Painter(policy),
                    state,
                    pending: None,
                    finished: false,
                    last_active: Instant::now(),
                }
            }
        };
        let mut out = vec![ServerMessage::Created {
            session: session.id.clone(),
        }];
        out.push(session.state_message());
        session.advance(&mut out)?;
        Ok((session, out))
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn state(&self) -> &GameState {
        &self.state
    }

    pub fn is_finished(&self) -> bool {
        self.finished
    }

    pub fn transcript(&self) -> String {
        transcript_lines(&self.state)
    }

    fn state_message(&self) -> ServerMessage {
        ServerMessage::State {
            round: self.state.round(),
            edges: self
                .state
                .board()
                .edges()
                .map(|(e, c)| (e.lo(), e.hi(), c))
                .collect(),
        }
    }

    /// Ends the game if it is over, otherwise lets the engine builder propose.
    fn advance(&mut self, out: &mut Vec<ServerMessage>) -> Result<(), SessionError> {
        let rounds = self.state.round();
        if let Some(t) = self.state.terminal() {
            let result = match t {
                Terminal::RedWin(_) => GameResult::RedWin,
                Terminal::BlueWin(_) => GameResult::BlueWin,
            };
            self.finished = true;
            out.push(ServerMessage::Terminal {
                result,
                witness: Some(t.witness().clone()),
                rounds,
            });
            return Ok(());
        }
        if rounds >= self.budget {
            self.finished = true;
            out.push(ServerMessage::Terminal {
                result: GameResult::BudgetExceeded,
                witness: None,
                rounds,
            });
            return Ok(());
        }
        if let Engine::Builder(s) = &mut self.engine {
            match s.propose(&mut self.state) {
                Ok(e) => {
                    self.pending = Some(e);
                    out.push(ServerMessage::Propose {
                        round: rounds + 1,
                        edge: e,
                    });
                }
                Err(err) => {
                    self.finished = true;
                    return Err(err.into());
                }
            }
        }
        Ok(())
    }

    pub fn submit_color(&mut self, color: Color) -> Result<Vec<ServerMessage>, SessionError> {
        self.last_active = Instant::now();
        if self.finished {
            return Err(SessionError::SessionTerminated);
        }
        if self.role != Role::Painter {
            return Err(SessionError::OutOfTurn);
        }
        let e = self.pending.take().ok_or(SessionError::OutOfTurn)?;
        let mv = self.state.play_edge(e, color)?;
        if let Engine::Builder(s) = &mut self.engine {
            if let Err(err) = s.observe(&self.state, mv) {
                self.finished = true;
                return Err(err.into());
            }
        }
        let mut out = vec![self.state_message()];
        self.advance(&mut out)?;
        Ok(out)
    }

    pub fn submit_edge(&mut self, u: Vertex, v: Vertex) -> Result<Vec<ServerMessage>, SessionError> {
        self.last_active = Instant::now();
        if self.finished {
            return Err(SessionError::SessionTerminated);
        }
        let Engine::Painter(policy) = &self.engine else {
            return Err(SessionError::OutOfTurn);
        };
        let e = Edge::new(u, v)?;
        let c = policy
            .color_response(&self.state, e)
            .map_err(|err| SessionError::Strategy(err.into()))?;
        self.state.play_edge(e, c)?;
        let mut out = vec![self.state_message()];
        self.advance(&mut out)?;
        Ok(out)
    }

    pub fn attach(&mut self) -> Vec<ServerMessage> {
        self.last_active = Instant::now();
        let mut out = vec![self.state_message()];
        if let Some(e) = self.pending {
            out.push(ServerMessage::Propose {
                round: self.state.round() + 1,
                edge: e,
            });
        }
        out
    }
}

/// All live sessions. Each session has its own lock, so messages for one
/// session are handled in order while different sessions run in parallel.
#[derive(Clone, Default)]
pub struct SessionManager {
    sessions: Arc<Mutex<HashMap<String, Arc<Mutex<Session>>>>>,
}

impl SessionManager {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn create(&self, req: &CreateRequest) -> Result<Vec<ServerMessage>, SessionError> {
        let id = format!("{:016x}", rand::thread_rng().gen::<u64>());
        let (session, out) = Session::create(id.clone(), req)?;
        self.sessions.lock().insert(id, Arc::new(Mutex::new(session)));
        Ok(out)
    }

    pub fn get(&self, id: &str) -> Result<Arc<Mutex<Session>>, SessionError> {
        self.sessions
            .lock()
            .get(id)
            .cloned()
            .ok_or_else(|| SessionError::UnknownSession(id.to_string()))
    }

    pub fn len(&self) -> usize {
        self.sessions.lock().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Drops sessions idle for longer than `idle`. Returns how many.
    pub fn evict_idle(&self, idle: Duration) -> usize {
        let now = Instant::now();
        let mut map = self.sessions.lock();
        let before = map.len();
        map.retain(|_, s| now.duration_since(s.lock().last_active) < idle);
        before - map.len()
    }

    pub fn transcript(&self, id: &str) -> Result<String, SessionError> {
        Ok(self.get(id)?.lock().transcript())
    }

    /// Handles one client message. Errors come back as an `error` message.
    pub fn handle(&self, msg: ClientMessage) -> Vec<ServerMessage> {
        let result = match msg {
            ClientMessage::Create(req) => self.create(&req),
            ClientMessage::Color { session, color } => {
                self.get(&session).and_then(|s| s.lock().submit_color(color))
            }
            ClientMessage::Edge { session, edge } => {
                self.get(&session).and_then(|s| s.lock().submit_edge(edge[0], edge[1]))
            }
            ClientMessage::Attach { session } => self.get(&session).map(|s| s.lock().attach()),
        };
        result.unwrap_or_else(|e| vec![e.to_message()])
    }

    /// Parses and handles one JSON text frame.
    pub fn handle_text(&self, text: &str) -> Vec<ServerMessage> {
        match serde_json::from_str::<ClientMessage>(text) {
            Ok(msg) => self.handle(msg),
            Err(e) => vec![ServerMessage::Error {
                code: "bad_message".into(),
                message: e.to_string(),
            }],
        }
    }
}
