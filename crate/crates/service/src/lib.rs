//! HTTP server for interactive play.
//!
//! | method | path                          | body / reply                         |
//! |--------|-------------------------------|--------------------------------------|
//! | GET    | `/api/catalog`                | conjectures, games, reward types     |
//! | POST   | `/api/sessions`               | [`SessionRequest`] → [`Created`]     |
//! | GET    | `/api/sessions/{id}`          | [`StateView`]                        |
//! | DELETE | `/api/sessions/{id}`          | 204                                  |
//! | POST   | `/api/sessions/{id}/actions`  | `{"action": k}` → [`ActionReply`]    |
//! | POST   | `/api/sessions/{id}/undo`     | [`StateView`]                        |
//! | GET    | `/api/sessions/{id}/events`   | server-sent `state` events           |
//!
//! Sessions live in memory and expire after an idle timeout. Actions on one
//! session are serialized by its lock; different sessions run independently.

mod error;
mod session;

pub use error::{ApiError, ErrorBody};
pub use session::{ActionReply, ActionSpace, Session, SessionRequest, StateView, MAX_SESSION_NODES};

use std::collections::HashMap;
use std::convert::Infallible;
use std::net::SocketAddr;
use std::sync::{Arc, Mutex, MutexGuard};
use std::time::{Duration, Instant};

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::sse::{Event, KeepAlive, Sse};
use axum::response::IntoResponse;
use axum::routing::{get, post};
use axum::{Json, Router};
use futures::stream::{self, Stream, StreamExt};
use graphgames_core::rewards::Registry;
use graphgames_core::Game;
use serde::{Deserialize, Serialize};
use tokio::sync::broadcast::error::RecvError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ServiceConfig {
    pub idle_timeout: Duration,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self { idle_timeout: Duration::from_secs(3600) }
    }
}

type SessionHandle = Arc<Mutex<Session>>;

/// Shared server state: the session table and the conjecture registry.
#[derive(Clone)]
pub struct AppState {
    sessions: Arc<Mutex<HashMap<String, SessionHandle>>>,
    registry: Arc<Registry>,
    config: ServiceConfig,
}

fn lock<T>(m: &Mutex<T>) -> MutexGuard<'_, T> {
    m.lock().unwrap_or_else(|poisoned| poisoned.into_inner())
}

impl AppState {
    pub fn new(config: ServiceConfig) -> Self {
        Self::with_registry(config, Registry::builtin())
    }

    pub fn with_registry(config: ServiceConfig, registry: Registry) -> Self {
        Self { sessions: Arc::default(), registry: Arc::new(registry), config }
    }

    pub fn session_count(&self) -> usize {
        lock(&self.sessions).len()
    }

    /// Drops sessions idle for longer than the timeout; returns how many went.
    pub fn purge_expired(&self) -> usize {
        let now = Instant::now();
        let timeout = self.config.idle_timeout;
        let mut sessions = lock(&self.sessions);
        let before = sessions.len();
        sessions.retain(|_, s| now.duration_since(lock(s).last_active) <= timeout);
        before - sessions.len()
    }

    pub fn create(&self, request: SessionRequest) -> Result<StateView, ApiError> {
        self.purge_expired();
        let id = uuid::Uuid::new_v4().simple().to_string();
        let session = Session::new(id.clone(), request, &self.registry)?;
        let view = session.view();
        lock(&self.sessions).insert(id, Arc::new(Mutex::new(session)));
        Ok(view)
    }

    pub fn session(&self, id: &str) -> Result<SessionHandle, ApiError> {
        let handle = lock(&self.sessions).get(id).cloned().ok_or_else(|| ApiError::unknown_session(id))?;
        let idle = Instant::now().duration_since(lock(&handle).last_active);
        if idle > self.config.idle_timeout {
            lock(&self.sessions).remove(id);
            return Err(ApiError::unknown_session(id));
        }
        Ok(handle)
    }

    pub fn remove(&self, id: &str) -> Result<(), ApiError> {
        lock(&self.sessions).remove(id).map(|_| ()).ok_or_else(|| ApiError::unknown_session(id))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Created {
    pub session_id: String,
    pub view: StateView,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionRequest {
    pub action: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjectureInfo {
    pub name: String,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameInfo {
    pub name: String,
    pub action_space: String,
    pub default_horizon: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Catalog {
    pub conjectures: Vec<ConjectureInfo>,
    pub games: Vec<GameInfo>,
    pub reward_modes: Vec<String>,
    pub initial_graphs: Vec<String>,
    pub max_nodes: usize,
}

fn catalog(registry: &Registry) -> Catalog {
    let games = Game::ALL
        .into_iter()
        .map(|g| {
            let (action_space, default_horizon) = match g {
                Game::Linear => ("2", "m (one pass over the edge slots)"),
                Game::Local => ("2n", "m"),
                Game::Global => ("2m", "m"),
                Game::Flip => ("m", "m"),
            };
            GameInfo { name: g.name().into(), action_space: action_space.into(), default_horizon: default_horizon.into() }
        })
        .collect();
    Catalog {
        conjectures: registry
            .list()
            .map(|(name, description)| ConjectureInfo { name: name.into(), description: description.into() })
            .collect(),
        games,
        reward_modes: vec!["sparse".into(), "incremental".into()],
        initial_graphs: vec!["complete".into(), "empty".into(), "g6:<text>".into()],
        max_nodes: MAX_SESSION_NODES,
    }
}

fn parse_body<T: serde::de::DeserializeOwned>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "bad_request", e.to_string()))
}

async fn get_catalog(State(app): State<AppState>) -> Json<Catalog> {
    Json(catalog(&app.registry))
}

async fn create_session(State(app): State<AppState>, body: Bytes) -> Result<impl IntoResponse, ApiError> {
    let view = app.create(parse_body(&body)?)?;
    Ok((StatusCode::CREATED, Json(Created { session_id: view.session_id.clone(), view })))
}

async fn get_session(State(app): State<AppState>, Path(id): Path<String>) -> Result<Json<StateView>, ApiError> {
    let handle = app.session(&id)?;
    let mut s = lock(&handle);
    s.touch();
    Ok(Json(s.view()))
}

async fn delete_session(State(app): State<AppState>, Path(id): Path<String>) -> Result<StatusCode, ApiError> {
    app.remove(&id)?;
    Ok(StatusCode::NO_CONTENT)
}

async fn submit_action(
    State(app): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Json<ActionReply>, ApiError> {
    let request: ActionRequest = parse_body(&body)?;
    let handle = app.session(&id)?;
    let reply = lock(&handle).act(request.action)?;
    Ok(Json(reply))
}

async fn undo(State(app): State<AppState>, Path(id): Path<String>) -> Result<Json<StateView>, ApiError> {
    let handle = app.session(&id)?;
    let view = lock(&handle).undo()?;
    Ok(Json(view))
}

async fn events(
    State(app): State<AppState>,
    Path(id): Path<String>,
) -> Result<Sse<impl Stream<Item = Result<Event, Infallible>>>, ApiError> {
    let handle = app.session(&id)?;
    let (current, rx) = {
        let s = lock(&handle);
        (serde_json::to_string(&s.view()).unwrap_or_default(), s.events.subscribe())
    };
    let first = stream::once(async move { Ok(Event::default().event("state").data(current)) });
    let updates = stream::unfold(rx, |mut rx| async move {
        loop {
            match rx.recv().await {
                Ok(text) => return Some((Ok(Event::default().event("state").data(text)), rx)),
                Err(RecvError::Lagged(_)) => continue,
                Err(RecvError::Closed) => return None,
            }
        }
    });
    Ok(Sse::new(first.chain(updates)).keep_alive(KeepAlive::default()))
}

pub fn router(app: AppState) -> Router {
    Router::new()
        .route("/api/catalog", get(get_catalog))
        .route("/api/sessions", post(create_session))
        .route("/api/sessions/{id}", get(get_session).delete(delete_session))
        .route("/api/sessions/{id}/actions", post(submit_action))
        .route("/api/sessions/{id}/undo", post(undo))
        .route("/api/sessions/{id}/events", get(events))
        .with_state(app)
}

/// Binds `addr` and serves until the process ends, sweeping idle sessions periodically.
pub async fn serve(addr: SocketAddr, config: ServiceConfig) -> std::io::Result<()> {
    let app = AppState::new(config);
    let sweeper = app.clone();
    let period = (config.idle_timeout / 4).clamp(Duration::from_secs(1), Duration::from_secs(60));
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(period);
        loop {
            tick.tick().await;
            sweeper.purge_expired();
        }
    });
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(app)).await
}
