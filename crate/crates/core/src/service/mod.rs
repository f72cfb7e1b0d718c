//! HTTP+JSON session service for human-vs-engine play.
//!
//! | method | path | body | reply |
//! |---|---|---|---|
//! | POST | `/games` | [`GameSetup`] | [`GameView`] (201) |
//! | GET | `/games/{id}` | | [`GameView`] |
//! | GET | `/games/{id}/moves` | | [`LegalMoves`] |
//! | POST | `/games/{id}/moves` | move text, `"move"` or `{"move": ..}` | [`GameView`] |
//! | POST | `/games/{id}/engine-move` | | [`EngineReply`] |
//! | GET | `/games/{id}/audit` | | [`AuditReport`] |
//!
//! Errors are `{code, message, clause?}`. The engine never moves on its
//! own; clients ask for each reply.
//!
//! With a journal, every event is appended as one JSON line and sessions
//! are rebuilt from it on start-up.

mod journal;
mod session;

use std::collections::HashMap;
use std::path::Path;
use std::sync::{Arc, Mutex, RwLock};

use axum::body::Bytes;
use axum::extract::{Path as UrlPath, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codec::CodecError;
use crate::game::IllegalMove;
use crate::solver::{Solver, SolverError};
use crate::strategy::{StrategyDecision, StrategyError};

pub use journal::{Journal, JournalEvent};
pub use session::{
    solver_choice, Actor, AuditReport, EngineMode, GameSetup, GameView, HistoryEntry, Session,
    StateView, Status, API_VERSION,
};

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("invalid game configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Bound(#[from] SolverError),
    #[error("malformed request body: {0}")]
    BadRequest(String),
    #[error("no game with id {0:?}")]
    UnknownSession(String),
    #[error("cannot read move: {0}")]
    BadMove(#[from] CodecError),
    #[error("illegal move: {0}")]
    IllegalMove(#[from] IllegalMove),
    #[error("it is the engine's turn")]
    NotYourTurn,
    #[error("it is the human's turn")]
    NotEngineTurn,
    #[error("the game is over")]
    GameFinished,
    #[error("strategy failure: {0}")]
    Strategy(StrategyError),
    #[error("journal: {0}")]
    Journal(#[from] std::io::Error),
}

impl From<StrategyError> for ServiceError {
    fn from(e: StrategyError) -> Self {
        match e {
            StrategyError::Solver(s) => ServiceError::Bound(s),
            StrategyError::Illegal(m) => ServiceError::IllegalMove(m),
            other => ServiceError::Strategy(other),
        }
    }
}

impl ServiceError {
    pub fn code(&self) -> &'static str {
        match self {
            ServiceError::InvalidConfig(_) => "invalid-config",
            ServiceError::Bound(_) => "bound-exceeded",
            ServiceError::BadRequest(_) => "bad-request",
            ServiceError::UnknownSession(_) => "unknown-session",
            ServiceError::BadMove(_) => "bad-move",
            ServiceError::IllegalMove(_) => "illegal-move",
            ServiceError::NotYourTurn => "not-your-turn",
            ServiceError::NotEngineTurn => "not-engine-turn",
            ServiceError::GameFinished => "game-finished",
            ServiceError::Strategy(_) => "strategy-error",
            ServiceError::Journal(_) => "journal-error",
        }
    }

    pub fn status(&self) -> StatusCode {
        match self {
            ServiceError::InvalidConfig(_)
            | ServiceError::Bound(_)
            | ServiceError::BadRequest(_)
            | ServiceError::BadMove(_) => StatusCode::BAD_REQUEST,
            ServiceError::UnknownSession(_) => StatusCode::NOT_FOUND,
            ServiceError::IllegalMove(_) => StatusCode::UNPROCESSABLE_ENTITY,
            ServiceError::NotYourTurn | ServiceError::NotEngineTurn | ServiceError::GameFinished => {
                StatusCode::CONFLICT
            }
            ServiceError::Strategy(_) | ServiceError::Journal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }

    pub fn body(&self) -> ErrorBody {
        ErrorBody {
            code: self.code().to_string(),
            message: self.to_string(),
            clause: match self {
                ServiceError::IllegalMove(m) => Some(m.clause().to_string()),
                _ => None,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
    /// The violated legality clause, for illegal moves.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clause: Option<String>,
}

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        (self.status(), Json(self.body())).into_response()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegalMoves {
    pub version: u32,
    pub id: String,
    pub moves: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineReply {
    pub decision: StrategyDecision,
    /// Human-readable gloss of the rule tag.
    pub description: String,
    pub game: GameView,
}

type Shared = Arc<Mutex<Session>>;

/// Shared state behind the router: the solver, the sessions and the journal.
#[derive(Clone)]
pub struct AppState {
    solver: Arc<Solver>,
    sessions: Arc<RwLock<HashMap<String, Shared>>>,
    journal: Option<Arc<Journal>>,
}

impl AppState {
    pub fn new(solver: Arc<Solver>) -> Self {
        AppState {
            solver,
            sessions: Arc::default(),
            journal: None,
        }
    }

    /// Opens (or creates) a journal file and restores the sessions it records.
    pub fn with_journal(solver: Arc<Solver>, path: &Path) -> Result<Self, ServiceError> {
        let (journal, restored) = Journal::open(path, &solver)?;
        let sessions = restored
            .into_iter()
            .map(|s| (s.id.clone(), Arc::new(Mutex::new(s))))
            .collect();
        Ok(AppState {
            solver,
            sessions: Arc::new(RwLock::new(sessions)),
            journal: Some(Arc::new(journal)),
        })
    }

    pub fn solver(&self) -> &Solver {
        &self.solver
    }

    pub fn session_count(&self) -> usize {
        self.sessions.read().expect("session map poisoned").len()
    }

    fn session(&self, id: &str) -> Result<Shared, ServiceError> {
        self.sessions
            .read()
            .expect("session map poisoned")
            .get(id)
            .cloned()
            .ok_or_else(|| ServiceError::UnknownSession(id.to_string()))
    }

    fn record(&self, event: JournalEvent) -> Result<(), ServiceError> {
        match &self.journal {
            Some(j) => Ok(j.append(&event)?),
            None => Ok(()),
        }
    }

    pub fn create(&self, setup: GameSetup) -> Result<GameView, ServiceError> {
        let id = uuid::Uuid::new_v4().simple().to_string();
        let session = Session::create(id.clone(), setup.clone(), &self.solver)?;
        let view = session.view();
        self.record(JournalEvent::created(&id, setup))?;
        self.sessions
            .write()
            .expect("session map poisoned")
            .insert(id, Arc::new(Mutex::new(session)));
        Ok(view)
    }

    pub fn view(&self, id: &str) -> Result<GameView, ServiceError> {
        Ok(lock(&self.session(id)?).view())
    }

    pub fn legal_moves(&self, id: &str) -> Result<LegalMoves, ServiceError> {
        Ok(LegalMoves {
            version: API_VERSION,
            id: id.to_string(),
            moves: lock(&self.session(id)?).legal_moves(),
        })
    }

    pub fn submit(&self, id: &str, text: &str) -> Result<GameView, ServiceError> {
        let shared = self.session(id)?;
        let mut session = lock(&shared);
        let entry = session.submit(text)?.clone();
        self.record(JournalEvent::moved(id, &entry))?;
        Ok(session.view())
    }

    pub fn engine_move(&self, id: &str) -> Result<EngineReply, ServiceError> {
        let shared = self.session(id)?;
        let mut session = lock(&shared);
        let decision = session.engine_move(&self.solver)?;
        let entry = session.history().last().expect("engine just moved").clone();
        self.record(JournalEvent::moved(id, &entry))?;
        Ok(EngineReply {
            description: decision.rule_tag.description().to_string(),
            decision,
            game: session.view(),
        })
    }

    pub fn audit(&self, id: &str) -> Result<AuditReport, ServiceError> {
        Ok(lock(&self.session(id)?).audit())
    }
}

fn lock(shared: &Shared) -> std::sync::MutexGuard<'_, Session> {
    // a panic mid-request leaves the session as it was before the mutation
    shared.lock().unwrap_or_else(|e| e.into_inner())
}

/// Engine work can take a while on large positions, so it leaves the async
/// workers alone.
async fn blocking<T, F>(f: F) -> Result<T, ServiceError>
where
    F: FnOnce() -> Result<T, ServiceError> + Send + 'static,
    T: Send + 'static,
{
    tokio::task::spawn_blocking(f)
        .await
        .unwrap_or_else(|e| std::panic::resume_unwind(e.into_panic()))
}

/// Move text from a plain body, a JSON string, or `{"move": "..."}`.
fn move_text(body: &[u8]) -> Result<String, ServiceError> {
    let text = std::str::from_utf8(body)
        .map_err(|_| ServiceError::BadRequest("body is not UTF-8".into()))?
        .trim();
    if text.starts_with('{') || text.starts_with('"') {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Body {
            Text(String),
            Object {
                #[serde(rename = "move")]
                mv: String,
            },
        }
        let body: Body =
            serde_json::from_str(text).map_err(|e| ServiceError::BadRequest(e.to_string()))?;
        Ok(match body {
            Body::Text(t) | Body::Object { mv: t } => t,
        })
    } else {
        Ok(text.to_string())
    }
}

async fn create_game(State(app): State<AppState>, body: Bytes) -> Result<Response, ServiceError> {
    let setup: GameSetup = if body.iter().all(u8::is_ascii_whitespace) {
        return Err(ServiceError::BadRequest("missing game setup".into()));
    } else {
        serde_json::from_slice(&body).map_err(|e| ServiceError::BadRequest(e.to_string()))?
    };
    let view = blocking(move || app.create(setup)).await?;
    Ok((StatusCode::CREATED, Json(view)).into_response())
}

async fn get_game(State(app): State<AppState>, UrlPath(id): UrlPath<String>) -> Result<Json<GameView>, ServiceError> {
    app.view(&id).map(Json)
}

async fn get_moves(State(app): State<AppState>, UrlPath(id): UrlPath<String>) -> Result<Json<LegalMoves>, ServiceError> {
    app.legal_moves(&id).map(Json)
}

async fn post_move(
    State(app): State<AppState>,
    UrlPath(id): UrlPath<String>,
    body: Bytes,
) -> Result<Json<GameView>, ServiceError> {
    let text = move_text(&body)?;
    blocking(move || app.submit(&id, &text)).await.map(Json)
}

async fn post_engine_move(
    State(app): State<AppState>,
    UrlPath(id): UrlPath<String>,
) -> Result<Json<EngineReply>, ServiceError> {
    blocking(move || app.engine_move(&id)).await.map(Json)
}

async fn get_audit(State(app): State<AppState>, UrlPath(id): UrlPath<String>) -> Result<Json<AuditReport>, ServiceError> {
    app.audit(&id).map(Json)
}

pub fn router(app: AppState) -> Router {
    Router::new()
        .route("/games", post(create_game))
        .route("/games/{id}", get(get_game))
        .route("/games/{id}/moves", get(get_moves).post(post_move))
        .route("/games/{id}/engine-move", post(post_engine_move))
        .route("/games/{id}/audit", get(get_audit))
        .with_state(app)
}

/// Serves until the listener fails.
pub async fn serve(listener: tokio::net::TcpListener, app: AppState) -> std::io::Result<()> {
    axum::serve(listener, router(app)).await
}
