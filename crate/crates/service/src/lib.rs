//! HTTP + JSON service for playing CM-Nim games against the engine.
//!
//! | method | path | body | reply |
//! |---|---|---|---|
//! | POST | `/api/games` | `{preset \| rules, position, convention, first}` | `{id, state}` |
//! | GET | `/api/games/{id}` | | state |
//! | POST | `/api/games/{id}/moves` | `{subset, amount}` | `{state}` |
//! | POST | `/api/games/{id}/engine-move` | | `{move, state}` |
//! | GET | `/api/games/{id}/analysis` | | analysis |
//! | GET | `/api/presets` | | preset list |
//!
//! Errors come back as `{"error": "..."}` with 404 for unknown sessions, 409
//! for moves out of turn or after the game ended, 422 for illegal moves and
//! invalid games, and 400 for malformed bodies.

pub mod journal;
pub mod session;

use std::collections::HashMap;
use std::io;
use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use parking_lot::{Mutex, RwLock};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tower_http::services::ServeDir;

use cmnim::engine::{Limits, Nimber, Solver};
use cmnim::{
    find_preset, legal_moves, presets, resolve_game, JarCount, Move, OutcomeClass, PlayConvention,
    Position, RuleFile, RuleSet,
};

use journal::{Event, Journal};
use session::{GameSession, MoveError, Player, SessionState, TurnMode};

#[derive(Debug, Clone, Default)]
pub struct ServiceConfig {
    /// Budget for every engine call made on behalf of a request.
    pub limits: Limits,
    /// Session log to replay on start and append to.
    pub snapshot: Option<PathBuf>,
    /// Directory served at `/` (the web UI bundle).
    pub static_dir: Option<PathBuf>,
}

type Shared = Arc<Mutex<GameSession>>;

struct Inner {
    sessions: RwLock<HashMap<String, Shared>>,
    limits: Limits,
    journal: Option<Journal>,
}

#[derive(Clone)]
pub struct AppState(Arc<Inner>);

impl AppState {
    /// Builds the state, replaying the session log if one is configured.
    pub fn new(config: &ServiceConfig) -> io::Result<AppState> {
        let (journal, restored) = match &config.snapshot {
            Some(path) => {
                let (j, s) = Journal::open(path)?;
                (Some(j), s)
            }
            None => (None, Vec::new()),
        };
        let sessions = restored
            .into_iter()
            .map(|s| (s.id.clone(), Arc::new(Mutex::new(s))))
            .collect();
        Ok(AppState(Arc::new(Inner {
            sessions: RwLock::new(sessions),
            limits: config.limits,
            journal,
        })))
    }

    pub fn session_count(&self) -> usize {
        self.0.sessions.read().len()
    }

    fn get(&self, id: &str) -> Result<Shared, ApiError> {
        self.0
            .sessions
            .read()
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, format!("no game with id {id}")))
    }

    fn record(&self, event: &Event) -> Result<(), ApiError> {
        match &self.0.journal {
            Some(j) => j.record(event).map_err(|e| {
                ApiError::new(
                    StatusCode::INTERNAL_SERVER_ERROR,
                    format!("session log: {e}"),
                )
            }),
            None => Ok(()),
        }
    }
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError {
            status,
            message: message.into(),
        }
    }

    fn unprocessable(message: impl Into<String>) -> Self {
        ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, message)
    }
}

impl From<cmnim::Error> for ApiError {
    fn from(e: cmnim::Error) -> Self {
        let status = if e.is_resource_limit() {
            StatusCode::SERVICE_UNAVAILABLE
        } else if e.is_invariant() {
            StatusCode::INTERNAL_SERVER_ERROR
        } else {
            StatusCode::UNPROCESSABLE_ENTITY
        };
        ApiError::new(status, e.to_string())
    }
}

impl From<MoveError> for ApiError {
    fn from(e: MoveError) -> Self {
        let status = match e {
            MoveError::Illegal(_) => StatusCode::UNPROCESSABLE_ENTITY,
            MoveError::Finished | MoveError::OutOfTurn { .. } => StatusCode::CONFLICT,
        };
        ApiError::new(status, e.to_string())
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        let status = match e {
            JsonRejection::JsonDataError(_) => StatusCode::UNPROCESSABLE_ENTITY,
            _ => StatusCode::BAD_REQUEST,
        };
        ApiError::new(status, e.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self.message }))).into_response()
    }
}

async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> Result<T, ApiError> + Send + 'static,
) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f).await.map_err(|e| {
        ApiError::new(
            StatusCode::INTERNAL_SERVER_ERROR,
            format!("worker failed: {e}"),
        )
    })?
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateGame {
    /// Preset name, optionally with a `:k` jar-count suffix.
    pub preset: Option<String>,
    pub jars: Option<usize>,
    pub rules: Option<RuleSet>,
    /// Defaults to the preset's starting position when it has one.
    pub position: Option<Position>,
    /// Defaults to the preset's convention, else normal play.
    pub convention: Option<PlayConvention>,
    #[serde(default = "human")]
    pub first: TurnMode,
    /// Include an analysis of the starting position in the reply.
    #[serde(default)]
    pub analysis: bool,
}

fn human() -> TurnMode {
    TurnMode::Human
}

#[derive(Debug, Serialize)]
struct Created {
    id: String,
    state: SessionState,
    #[serde(skip_serializing_if = "Option::is_none")]
    analysis: Option<Analysis>,
}

fn build_session(req: &CreateGame) -> Result<GameSession, ApiError> {
    let (game, rules, default_position, default_convention) = match (&req.preset, &req.rules) {
        (Some(_), Some(_)) => {
            return Err(ApiError::unprocessable(
                "give either preset or rules, not both",
            ))
        }
        (None, None) => return Err(ApiError::unprocessable("give a preset or a rule set")),
        (None, Some(rules)) => (None, rules.clone(), None, PlayConvention::Normal),
        (Some(name), None) => {
            let jars = req.jars.or(req.position.as_ref().map(Position::arity));
            let rules = resolve_game(name, jars)?;
            let p = find_preset(name.split(':').find(|s| *s != "preset").unwrap_or(name))?;
            let start = p
                .default_position()
                .filter(|d| d.arity() == rules.jar_count());
            (Some(p.name.to_string()), rules, start, p.default_convention)
        }
    };
    let position = req
        .position
        .clone()
        .or(default_position)
        .ok_or_else(|| ApiError::unprocessable("a starting position is required"))?;
    let id = uuid::Uuid::new_v4().simple().to_string();
    let convention = req.convention.unwrap_or(default_convention);
    Ok(GameSession::new(
        id, game, rules, convention, position, req.first,
    )?)
}

async fn create_game(
    State(app): State<AppState>,
    body: Result<Json<CreateGame>, JsonRejection>,
) -> Result<(StatusCode, Json<Created>), ApiError> {
    let Json(req) = body?;
    let session = build_session(&req)?;
    app.record(&Event::created(&session))?;
    let state = session.state();
    let id = session.id.clone();
    let analysis = if req.analysis {
        let (rules, pos, conv, limits) = (
            session.rules.clone(),
            session.position.clone(),
            session.convention,
            app.0.limits,
        );
        Some(blocking(move || analyze(&rules, &pos, conv, limits)).await?)
    } else {
        None
    };
    app.0
        .sessions
        .write()
        .insert(id.clone(), Arc::new(Mutex::new(session)));
    Ok((
        StatusCode::CREATED,
        Json(Created {
            id,
            state,
            analysis,
        }),
    ))
}

async fn get_game(
    State(app): State<AppState>,
    Path(id): Path<String>,
) -> Result<Json<SessionState>, ApiError> {
    let s = app.get(&id)?;
    let state = s.lock().state();
    Ok(Json(state))
}

async fn human_move(
    State(app): State<AppState>,
    Path(id): Path<String>,
    body: Result<Json<Move>, JsonRejection>,
) -> Result<Json<Value>, ApiError> {
    let Json(mv) = body?;
    let shared = app.get(&id)?;
    let mut s = shared.lock();
    s.play(Player::Human, mv)?;
    app.record(&Event::Move {
        id,
        player: Player::Human,
        mv,
    })?;
    Ok(Json(json!({ "state": s.state() })))
}

async fn engine_move(
    State(app): State<AppState>,
    Path(id): Path<String>,
) -> Result<Json<Value>, ApiError> {
    let shared = app.get(&id)?;
    let limits = app.0.limits;
    blocking(move || {
        // held for the whole search so moves on one game stay serialized
        let mut s = shared.lock();
        if s.is_finished() {
            return Err(MoveError::Finished.into());
        }
        if s.turn() == TurnMode::Human {
            return Err(MoveError::OutOfTurn {
                expected: Player::Human,
            }
            .into());
        }
        let mv = Solver::new(limits)
            .best_move(&s.position, &s.rules, s.convention)?
            .ok_or_else(|| cmnim::Error::Invariant("no move from a live position".into()))?;
        s.play(Player::Engine, mv)?;
        app.record(&Event::Move {
            id,
            player: Player::Engine,
            mv,
        })?;
        Ok(Json(json!({ "move": mv, "state": s.state() })))
    })
    .await
}

/// Analysis of one position. Serialized flat: `available` tells whether
/// the engine finished within its budget.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct Analysis {
    pub available: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class: Option<OutcomeClass>,
    /// Only offered from N-positions.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub winning_move: Option<Move>,
    /// Normal play only, and only within budget.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nimber: Option<Nimber>,
    pub legal_moves: Vec<Move>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

fn analyze(
    rules: &RuleSet,
    pos: &Position,
    conv: PlayConvention,
    limits: Limits,
) -> Result<Analysis, ApiError> {
    let legal = legal_moves(pos, rules)?;
    let mut solver = Solver::new(limits);
    let class = match solver.outcome(pos, rules, conv) {
        Ok(c) => c,
        Err(e) if e.is_resource_limit() => {
            return Ok(Analysis {
                available: false,
                class: None,
                winning_move: None,
                nimber: None,
                legal_moves: legal,
                reason: Some(e.to_string()),
            })
        }
        Err(e) => return Err(e.into()),
    };
    let winning_move = match class {
        OutcomeClass::N => solver.best_move(pos, rules, conv)?,
        OutcomeClass::P => None,
    };
    let nimber = match conv {
        PlayConvention::Normal => match solver.grundy(pos, rules) {
            Ok(g) => Some(g),
            Err(e) if e.is_resource_limit() => None,
            Err(e) => return Err(e.into()),
        },
        PlayConvention::Misere => None,
    };
    Ok(Analysis {
        available: true,
        class: Some(class),
        winning_move,
        nimber,
        legal_moves: legal,
        reason: None,
    })
}

async fn analysis(
    State(app): State<AppState>,
    Path(id): Path<String>,
) -> Result<Json<Analysis>, ApiError> {
    let (rules, pos, conv) = {
        let s = app.get(&id)?;
        let s = s.lock();
        (s.rules.clone(), s.position.clone(), s.convention)
    };
    let limits = app.0.limits;
    blocking(move || analyze(&rules, &pos, conv, limits).map(Json)).await
}

#[derive(Debug, Serialize)]
struct PresetInfo {
    name: &'static str,
    summary: &'static str,
    min_jars: usize,
    max_jars: usize,
    default_jars: usize,
    default_position: Option<Position>,
    default_convention: PlayConvention,
    /// For the default jar count.
    permissible_sets: Vec<Vec<usize>>,
}

async fn list_presets() -> Json<Vec<PresetInfo>> {
    Json(
        presets()
            .iter()
            .map(|p| {
                let (min_jars, max_jars) = match p.jars {
                    JarCount::Fixed(n) => (n, n),
                    JarCount::AtLeast(n) => (n, cmnim::MAX_JARS),
                };
                PresetInfo {
                    name: p.name,
                    summary: p.summary,
                    min_jars,
                    max_jars,
                    default_jars: p.default_jars,
                    default_position: p.default_position(),
                    default_convention: p.default_convention,
                    permissible_sets: RuleFile::from(p.default_rules()).permissible_sets,
                }
            })
            .collect(),
    )
}

pub fn router(app: AppState, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/games", post(create_game))
        .route("/api/games/{id}", get(get_game))
        .route("/api/games/{id}/moves", post(human_move))
        .route("/api/games/{id}/engine-move", post(engine_move))
        .route("/api/games/{id}/analysis", get(analysis))
        .route("/api/presets", get(list_presets))
        .with_state(app);
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

/// Serves until the listener fails.
pub async fn serve(listener: tokio::net::TcpListener, config: ServiceConfig) -> io::Result<()> {
    let app = AppState::new(&config)?;
    axum::serve(listener, router(app, config.static_dir.clone())).await
}
