//! HTTP JSON API over the solver, the packing oracle and the marking game.
//!
//! Errors are returned as `{"error": code, "message": text}` with codes
//! `BadN`, `ParseOrValidation` (400), `UnknownGame` (404),
//! `NotYourTurnOrOccupied` (409) and `TooLarge` (422).

use std::collections::HashMap;
use std::fs;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path as UrlPath, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::post;
use axum::{Json, Router};
use parking_lot::{Mutex, RwLock};
use serde::{Deserialize, Serialize};
use serde_json::json;
use tower_http::cors::CorsLayer;

use ribbonlab_core::game::{hints, GameState, Hint, Player};
use ribbonlab_core::oracle::{self, PackingSearch, MAX_ORACLE_NODES};
use ribbonlab_core::ribbon::RibbonJson;
use ribbonlab_core::solver::is_gamma_zero;
use ribbonlab_core::{Error, Ribbon, Solver};

pub const DEFAULT_PORT: u16 = 8787;
/// Largest ribbon accepted by `/invariants`.
pub const MAX_INVARIANT_NODES: usize = 12;
/// Largest ribbon accepted by `/oracle`.
pub const MAX_SERVICE_ORACLE_NODES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: &'static str,
    pub message: String,
}

impl ApiError {
    fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> ApiError {
        ApiError { status, code, message: message.into() }
    }

    fn invalid(message: impl Into<String>) -> ApiError {
        ApiError::new(StatusCode::BAD_REQUEST, "ParseOrValidation", message)
    }

    fn too_large(what: &str, max: usize, n: usize) -> ApiError {
        ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "TooLarge", format!("{what} is limited to n <= {max}, got n = {n}"))
    }

    fn unknown_game(id: &str) -> ApiError {
        ApiError::new(StatusCode::NOT_FOUND, "UnknownGame", format!("no game `{id}`"))
    }

    fn conflict(message: impl Into<String>) -> ApiError {
        ApiError::new(StatusCode::CONFLICT, "NotYourTurnOrOccupied", message)
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> ApiError {
        match e {
            Error::LimitExceeded { what, max, n } => ApiError::too_large(what, max, n),
            other => ApiError::invalid(other.to_string()),
        }
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> ApiError {
        ApiError::invalid(e.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({"error": self.code, "message": self.message}))).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

struct Entry {
    game: GameState,
    touched: Instant,
}

/// Shared state: the solver memo and the in-memory game store.
pub struct AppState {
    solver: Arc<Solver>,
    games: RwLock<HashMap<String, Arc<Mutex<Entry>>>>,
    next_id: AtomicU64,
    idle_timeout: Duration,
}

impl AppState {
    pub fn new(solver: Arc<Solver>, idle_timeout: Duration) -> AppState {
        AppState { solver, games: RwLock::new(HashMap::new()), next_id: AtomicU64::new(1), idle_timeout }
    }

    pub fn solver(&self) -> &Arc<Solver> {
        &self.solver
    }

    pub fn game_count(&self) -> usize {
        self.games.read().len()
    }

    fn insert(&self, game: GameState) -> String {
        let k = self.next_id.fetch_add(1, Ordering::Relaxed);
        let id = format!("g{k:06x}");
        self.games.write().insert(id.clone(), Arc::new(Mutex::new(Entry { game, touched: Instant::now() })));
        id
    }

    fn get(&self, id: &str) -> Result<Arc<Mutex<Entry>>, ApiError> {
        self.expire();
        self.games.read().get(id).cloned().ok_or_else(|| ApiError::unknown_game(id))
    }

    fn expire(&self) {
        let now = Instant::now();
        let stale: Vec<String> = self
            .games
            .read()
            .iter()
            .filter(|(_, e)| e.try_lock().is_some_and(|e| now.duration_since(e.touched) > self.idle_timeout))
            .map(|(id, _)| id.clone())
            .collect();
        if !stale.is_empty() {
            let mut games = self.games.write();
            for id in stale {
                games.remove(&id);
            }
        }
    }

    /// Writes every live game to `path` as JSON.
    pub fn save_games(&self, path: &Path) -> std::io::Result<()> {
        let games: HashMap<String, GameState> =
            self.games.read().iter().map(|(id, e)| (id.clone(), e.lock().game.clone())).collect();
        let next = self.next_id.load(Ordering::Relaxed);
        fs::write(path, serde_json::to_vec(&json!({"next_id": next, "games": games}))?)
    }

    /// Restores games written by [`AppState::save_games`]; returns how many.
    pub fn load_games(&self, path: &Path) -> std::io::Result<usize> {
        #[derive(Deserialize)]
        struct Snapshot {
            next_id: u64,
            games: HashMap<String, GameState>,
        }
        let snap: Snapshot = serde_json::from_slice(&fs::read(path)?)?;
        let count = snap.games.len();
        let mut games = self.games.write();
        for (id, game) in snap.games {
            games.insert(id, Arc::new(Mutex::new(Entry { game, touched: Instant::now() })));
        }
        self.next_id.fetch_max(snap.next_id, Ordering::Relaxed);
        Ok(count)
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/game/new", post(new_game))
        .route("/game/:id/move", post(play))
        .route("/game/:id/hint", post(hint))
        .route("/invariants", post(invariants))
        .route("/oracle", post(oracle_summary))
        .route("/iszero", post(iszero))
        .layer(CorsLayer::permissive())
        .with_state(state)
}

/// Serves until the process receives Ctrl-C.
pub async fn serve(state: Arc<AppState>, port: u16) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("0.0.0.0", port)).await?;
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

#[derive(Debug, Deserialize)]
pub struct NewGame {
    pub n: usize,
    pub seed: Option<u64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GameView {
    pub id: String,
    #[serde(flatten)]
    pub state: GameState,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct NewGameView {
    pub id: String,
    pub seed: u64,
    pub permutation: Vec<u32>,
    pub state: GameView,
}

async fn new_game(State(app): State<Arc<AppState>>, body: Result<Json<NewGame>, JsonRejection>) -> ApiResult<NewGameView> {
    let Json(req) = body?;
    if req.n % 2 == 1 || !(4..=12).contains(&req.n) {
        return Err(ApiError::new(StatusCode::BAD_REQUEST, "BadN", format!("n must be even and in 4..=12, got {}", req.n)));
    }
    let seed = req.seed.unwrap_or_else(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_nanos() as u64));
    let game = GameState::random(req.n, seed)?;
    let id = app.insert(game.clone());
    Ok(Json(NewGameView {
        id: id.clone(),
        seed,
        permutation: game.permutation.clone(),
        state: GameView { id, state: game },
    }))
}

#[derive(Debug, Deserialize)]
pub struct MoveRequest {
    pub node: usize,
    /// When present, the move is refused unless it is this player's turn.
    pub player: Option<Player>,
}

async fn play(
    State(app): State<Arc<AppState>>,
    UrlPath(id): UrlPath<String>,
    body: Result<Json<MoveRequest>, JsonRejection>,
) -> ApiResult<GameView> {
    let Json(req) = body?;
    let entry = app.get(&id)?;
    let solver = app.solver.clone();
    let state = tokio::task::spawn_blocking(move || {
        let mut e = entry.lock();
        e.touched = Instant::now();
        if req.node >= e.game.n() {
            return Err(ApiError::invalid(format!("node {} is out of range", req.node)));
        }
        if let Some(p) = req.player {
            if p != e.game.to_move {
                return Err(ApiError::conflict(format!("it is {:?}'s turn", e.game.to_move)));
            }
        }
        e.game.play(req.node, &solver).map_err(|err| match err {
            Error::MoveNotApplicable(m) => ApiError::conflict(m),
            other => ApiError::from(other),
        })?;
        Ok(e.game.clone())
    })
    .await
    .expect("move task")?;
    Ok(Json(GameView { id, state }))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct HintView {
    pub id: String,
    pub hints: Vec<Hint>,
}

async fn hint(State(app): State<Arc<AppState>>, UrlPath(id): UrlPath<String>) -> ApiResult<HintView> {
    let entry = app.get(&id)?;
    let game = {
        let mut e = entry.lock();
        e.touched = Instant::now();
        e.game.clone()
    };
    if game.winner().is_some() {
        return Err(ApiError::conflict("game is finished"));
    }
    let hints = tokio::task::spawn_blocking(move || hints(&game)).await.expect("hint task");
    Ok(Json(HintView { id, hints }))
}

/// A ribbon given either in text notation or as `{values, marks}`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RibbonInput {
    Text(String),
    Object(RibbonJson),
}

impl RibbonInput {
    fn parse(self) -> Result<Ribbon, ApiError> {
        match self {
            RibbonInput::Text(s) => s.parse().map_err(|e: Error| ApiError::invalid(e.to_string())),
            RibbonInput::Object(j) => Ribbon::try_from(j).map_err(|e| ApiError::invalid(e.to_string())),
        }
    }
}

#[derive(Debug, Deserialize)]
pub struct RibbonRequest {
    pub ribbon: RibbonInput,
    /// `/oracle` only: include every packing.
    #[serde(default)]
    pub emit_packings: bool,
}

fn ribbon_within(body: Result<Json<RibbonRequest>, JsonRejection>, what: &str, max: usize) -> Result<(Ribbon, bool), ApiError> {
    let Json(req) = body?;
    let a = req.ribbon.parse()?;
    if a.n() > max {
        return Err(ApiError::too_large(what, max, a.n()));
    }
    Ok((a, req.emit_packings))
}

async fn invariants(State(app): State<Arc<AppState>>, body: Result<Json<RibbonRequest>, JsonRejection>) -> ApiResult<serde_json::Value> {
    let (a, _) = ribbon_within(body, "/invariants", MAX_INVARIANT_NODES)?;
    let solver = app.solver.clone();
    let bundle = tokio::task::spawn_blocking(move || solver.bundle(&a).map(|b| (a, b))).await.expect("solver task")?;
    let mut v = serde_json::to_value(bundle.1).expect("serializable");
    v["ribbon"] = json!(bundle.0.to_string());
    Ok(Json(v))
}

async fn oracle_summary(body: Result<Json<RibbonRequest>, JsonRejection>) -> ApiResult<serde_json::Value> {
    let (a, emit) = ribbon_within(body, "/oracle", MAX_SERVICE_ORACLE_NODES.min(MAX_ORACLE_NODES))?;
    let out = tokio::task::spawn_blocking(move || -> Result<serde_json::Value, Error> {
        let mut v = serde_json::to_value(oracle::summarize(&a)?).expect("serializable");
        v["ribbon"] = json!(a.to_string());
        if emit {
            let packings: Vec<_> = PackingSearch::new(&a)?.collect().iter().map(|q| oracle::packing_json(q)).collect();
            v["packings_list"] = json!(packings);
        }
        Ok(v)
    })
    .await
    .expect("oracle task")?;
    Ok(Json(out))
}

async fn iszero(body: Result<Json<RibbonRequest>, JsonRejection>) -> ApiResult<serde_json::Value> {
    let (a, _) = ribbon_within(body, "/iszero", MAX_INVARIANT_NODES)?;
    let v = tokio::task::spawn_blocking(move || is_gamma_zero(&a)).await.expect("zero task");
    Ok(Json(serde_json::to_value(v).expect("serializable")))
}
