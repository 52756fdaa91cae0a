//! HTTP and WebSocket front end for [`SessionManager`].
//!
//! - `POST /sessions` takes a create request and answers with the list of
//!   initial messages, `created` first.
//! - `GET /sessions/:id/transcript` returns the game as JSON lines.
//! - `GET /ws` upgrades to a socket carrying one JSON message per text frame.

use std::net::SocketAddr;
use std::time::Duration;

use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use futures::{SinkExt, StreamExt};

use super::{CreateRequest, ServerMessage, SessionError, SessionManager, DEFAULT_IDLE};

pub fn router(manager: SessionManager) -> Router {
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/:id/transcript", get(transcript))
        .route("/ws", get(upgrade))
        .with_state(manager)
}

fn status(e: &SessionError) -> StatusCode {
    match e {
        SessionError::UnknownSession(_) => StatusCode::NOT_FOUND,
        _ => StatusCode::BAD_REQUEST,
    }
}

async fn create(State(m): State<SessionManager>, Json(req): Json<CreateRequest>) -> Response {
    match m.create(&req) {
        Ok(msgs) => (StatusCode::CREATED, Json(msgs)).into_response(),
        Err(e) => (status(&e), Json(e.to_message())).into_response(),
    }
}

async fn transcript(State(m): State<SessionManager>, Path(id): Path<String>) -> Response {
    match m.transcript(&id) {
        Ok(body) => ([(header::CONTENT_TYPE, "application/x-ndjson")], body).into_response(),
        Err(e) => (status(&e), Json(e.to_message())).into_response(),
    }
}

async fn upgrade(State(m): State<SessionManager>, ws: WebSocketUpgrade) -> Response {
    ws.on_upgrade(move |socket| play(socket, m))
}

async fn play(socket: WebSocket, m: SessionManager) {
    let (mut tx, mut rx) = socket.split();
    while let Some(Ok(frame)) = rx.next().await {
        let text = match frame {
            Message::Text(t) => t,
            Message::Close(_) => break,
            _ => continue,
        };
        let manager = m.clone();
        let replies: Vec<ServerMessage> =
            match tokio::task::spawn_blocking(move || manager.handle_text(&text)).await {
                Ok(r) => r,
                Err(e) => vec![ServerMessage::Error {
                    code: "internal".into(),
                    message: e.to_string(),
                }],
            };
        for r in replies {
            let json = serde_json::to_string(&r).expect("server messages serialize");
            if tx.send(Message::Text(json)).await.is_err() {
                return;
            }
        }
    }
}

/// Serves until the process is stopped, evicting idle sessions once a minute.
pub async fn serve(addr: SocketAddr, manager: SessionManager) -> std::io::Result<()> {
    let evictor = manager.clone();
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(Duration::from_secs(60));
        loop {
            tick.tick().await;
            evictor.evict_idle(DEFAULT_IDLE);
        }
    });
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(manager)).await
}
