//! HTTP service where a human plays one side against the solver.
//!
//! Endpoints (JSON bodies):
//!
//! * `POST /games` with `{tree, k, variant, human_side}` creates a game;
//!   the engine opens at once if it moves first.
//! * `GET /games/{id}` returns the game.
//! * `POST /games/{id}/moves` with `{"skip": true}` or `{"edge", "color"}`
//!   plays the human move and the engine reply.
//! * `GET /games/{id}/hints` solves every legal human move.
//! * `DELETE /games/{id}` ends the game.
//!
//! Every response carries the game's revision, which grows by one with
//! each change.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use axum::extract::{Path as UrlPath, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use edgegame::tree::parse_tree;
use edgegame::{GameState, GameStatus, LruMemo, Move, Player, SolveError, Solver, Variant};
use parking_lot::Mutex;
use serde::{Deserialize, Serialize};

use crate::io::ToolError;

/// Largest tree the service accepts.
pub const MAX_SERVED_VERTICES: usize = 14;
/// Node budget for each engine move.
pub const ENGINE_BUDGET: u64 = 200_000_000;
/// Node budget for each evaluated hint.
pub const HINT_BUDGET: u64 = 20_000_000;
const SESSION_MEMO: usize = 1 << 20;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct NewGame {
    /// Tree in the edge-list text format.
    pub tree: String,
    pub k: u8,
    pub variant: String,
    pub human_side: String,
}

/// `{"skip": true}` or `{"edge": e, "color": c}`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum MoveBody {
    Place { edge: usize, color: u8 },
    Skip { skip: bool },
}

impl MoveBody {
    fn to_move(self) -> Result<Move, ApiError> {
        match self {
            MoveBody::Place { edge, color } => Ok(Move::Place { edge, color }),
            MoveBody::Skip { skip: true } => Ok(Move::Skip),
            MoveBody::Skip { skip: false } => Err(ApiError::new(
                StatusCode::BAD_REQUEST,
                "`skip` must be true",
            )),
        }
    }
}

impl From<Move> for MoveBody {
    fn from(m: Move) -> Self {
        match m {
            Move::Skip => MoveBody::Skip { skip: true },
            Move::Place { edge, color } => MoveBody::Place { edge, color },
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PlayedMove {
    pub player: String,
    #[serde(rename = "move")]
    pub mv: MoveBody,
    /// Milliseconds since the Unix epoch.
    pub at_ms: u64,
}

/// Everything that determines a game, without timestamps.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GameRecord {
    pub revision: u64,
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    pub k: u8,
    pub variant: String,
    pub human_side: String,
    pub mover: String,
    pub status: String,
    pub colors: Vec<u8>,
    pub moves: Vec<MoveBody>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GameView {
    pub id: u64,
    pub revision: u64,
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    pub k: u8,
    pub variant: String,
    pub human_side: String,
    pub engine_side: String,
    pub mover: String,
    pub status: String,
    pub colors: Vec<u8>,
    pub dead_edges: Vec<usize>,
    /// Moves available to the mover; empty once the game is over.
    pub legal_moves: Vec<MoveBody>,
    pub history: Vec<PlayedMove>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MoveResponse {
    pub revision: u64,
    /// The human move followed by the engine reply, if any.
    pub applied: Vec<PlayedMove>,
    pub status: String,
    pub game: GameView,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Hint {
    #[serde(rename = "move")]
    pub mv: MoveBody,
    /// `win` or `loss` for the human, or `unevaluated` when over budget.
    pub outcome: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct HintsResponse {
    pub id: u64,
    pub revision: u64,
    pub hints: Vec<Hint>,
    /// Some hints could not be evaluated within the budget.
    pub partial: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Deleted {
    pub id: u64,
    pub revision: u64,
    pub deleted: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ErrorBody {
    pub error: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub revision: Option<u64>,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
    revision: Option<u64>,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError {
            status,
            message: message.into(),
            revision: None,
        }
    }

    fn at(mut self, revision: u64) -> Self {
        self.revision = Some(revision);
        self
    }

    pub fn status(&self) -> StatusCode {
        self.status
    }

    pub fn message(&self) -> &str {
        &self.message
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (
            self.status,
            Json(ErrorBody {
                error: self.message,
                revision: self.revision,
            }),
        )
            .into_response()
    }
}

fn now_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

fn status_name(s: GameStatus) -> &'static str {
    match s {
        GameStatus::Ongoing => "Ongoing",
        GameStatus::AliceWins => "AliceWins",
        GameStatus::BobWins => "BobWins",
    }
}

fn solve_failure(e: SolveError) -> ApiError {
    ApiError::new(
        StatusCode::SERVICE_UNAVAILABLE,
        format!("engine could not decide: {e}"),
    )
}

/// One game in progress.
pub struct Session {
    id: u64,
    request: NewGame,
    state: GameState,
    human: Player,
    history: Vec<(Player, Move, u64)>,
    revision: u64,
    solver: Solver<LruMemo>,
}

impl Session {
    pub fn create(id: u64, request: NewGame) -> Result<Session, ApiError> {
        let bad = |m: String| ApiError::new(StatusCode::BAD_REQUEST, m);
        let tree = parse_tree(&request.tree)
            .map_err(|e| bad(format!("tree line {}: {}", e.line, e.reason)))?;
        if tree.vertex_count() > MAX_SERVED_VERTICES {
            return Err(bad(format!(
                "trees are limited to {MAX_SERVED_VERTICES} vertices"
            )));
        }
        let variant: Variant = request
            .variant
            .parse()
            .map_err(|_| bad(format!("unknown variant `{}`", request.variant)))?;
        let human: Player = request
            .human_side
            .parse()
            .map_err(|_| bad(format!("unknown side `{}`", request.human_side)))?;
        let state =
            GameState::new(Arc::new(tree), request.k, variant).map_err(|e| bad(e.to_string()))?;
        let mut session = Session {
            id,
            request,
            state,
            human,
            history: Vec::new(),
            revision: 1,
            solver: Solver::with_memo(LruMemo::new(SESSION_MEMO)).budget(ENGINE_BUDGET),
        };
        if session.state.status() == GameStatus::Ongoing && session.state.mover() != human {
            let reply = session.engine_move(&session.state.clone())?;
            session.state.play(reply).expect("engine moves are legal");
            session.history.push((human.opponent(), reply, now_ms()));
        }
        Ok(session)
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn revision(&self) -> u64 {
        self.revision
    }

    pub fn state(&self) -> &GameState {
        &self.state
    }

    pub fn request(&self) -> &NewGame {
        &self.request
    }

    fn engine_move(&mut self, state: &GameState) -> Result<Move, ApiError> {
        self.solver.best_move(state).map_err(solve_failure)
    }

    /// Applies a human move and the engine reply. On any error the game
    /// is left unchanged.
    pub fn submit(&mut self, body: MoveBody) -> Result<Vec<PlayedMove>, ApiError> {
        let m = body.to_move().map_err(|e| e.at(self.revision))?;
        if self.state.status() != GameStatus::Ongoing {
            return Err(ApiError::new(StatusCode::CONFLICT, "the game is over").at(self.revision));
        }
        if self.state.mover() != self.human {
            return Err(
                ApiError::new(StatusCode::CONFLICT, "it is not your turn").at(self.revision)
            );
        }
        let mut next = self.state.clone();
        next.play(m).map_err(|e| {
            ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e.to_string()).at(self.revision)
        })?;
        let mut played = vec![(self.human, m, now_ms())];
        if next.status() == GameStatus::Ongoing {
            let reply = self.engine_move(&next).map_err(|e| e.at(self.revision))?;
            next.play(reply).expect("engine moves are legal");
            played.push((self.human.opponent(), reply, now_ms()));
        }
        self.state = next;
        self.history.extend(played.iter().copied());
        self.revision += 1;
        Ok(played.into_iter().map(played_move).collect())
    }

    /// Outcome for the human of each legal move.
    pub fn hints(&mut self) -> Result<HintsResponse, ApiError> {
        if self.state.status() != GameStatus::Ongoing {
            return Err(ApiError::new(StatusCode::CONFLICT, "the game is over").at(self.revision));
        }
        if self.state.mover() != self.human {
            return Err(
                ApiError::new(StatusCode::CONFLICT, "it is not your turn").at(self.revision)
            );
        }
        let mut hints = Vec::new();
        let mut partial = false;
        self.solver.set_budget(HINT_BUDGET);
        for m in self.state.legal_moves().expect("ongoing") {
            let child = self.state.apply_move(m).expect("legal");
            let outcome = match self.solver.solve(&child) {
                Ok(r) if r.winner == self.human => "win",
                Ok(_) => "loss",
                Err(_) => {
                    partial = true;
                    "unevaluated"
                }
            };
            hints.push(Hint {
                mv: m.into(),
                outcome: outcome.to_string(),
            });
        }
        self.solver.set_budget(ENGINE_BUDGET);
        Ok(HintsResponse {
            id: self.id,
            revision: self.revision,
            hints,
            partial,
        })
    }

    pub fn record(&self) -> GameRecord {
        let tree = self.state.tree();
        GameRecord {
            revision: self.revision,
            vertices: tree.vertex_count(),
            edges: tree.edges().to_vec(),
            k: self.state.k(),
            variant: self.state.variant().to_string(),
            human_side: self.human.to_string(),
            mover: self.state.mover().to_string(),
            status: status_name(self.state.status()).to_string(),
            colors: self.state.colors().to_vec(),
            moves: self.history.iter().map(|&(_, m, _)| m.into()).collect(),
        }
    }

    pub fn view(&self) -> GameView {
        let tree = self.state.tree();
        let ongoing = self.state.status() == GameStatus::Ongoing;
        GameView {
            id: self.id,
            revision: self.revision,
            vertices: tree.vertex_count(),
            edges: tree.edges().to_vec(),
            k: self.state.k(),
            variant: self.state.variant().to_string(),
            human_side: self.human.to_string(),
            engine_side: self.human.opponent().to_string(),
            mover: self.state.mover().to_string(),
            status: status_name(self.state.status()).to_string(),
            colors: self.state.colors().to_vec(),
            dead_edges: self.state.dead_edges(),
            legal_moves: if ongoing {
                self.state
                    .legal_moves()
                    .expect("ongoing")
                    .into_iter()
                    .map(MoveBody::from)
                    .collect()
            } else {
                Vec::new()
            },
            history: self.history.iter().copied().map(played_move).collect(),
        }
    }
}

fn played_move((player, m, at_ms): (Player, Move, u64)) -> PlayedMove {
    PlayedMove {
        player: player.to_string(),
        mv: m.into(),
        at_ms,
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "lowercase")]
enum JournalEntry {
    Create {
        id: u64,
        game: NewGame,
    },
    Move {
        id: u64,
        #[serde(rename = "move")]
        mv: MoveBody,
    },
    Delete {
        id: u64,
    },
}

/// Shared state of the service.
pub struct AppState {
    sessions: Mutex<HashMap<u64, Arc<Mutex<Session>>>>,
    next_id: AtomicU64,
    journal: Option<Mutex<File>>,
}

impl AppState {
    pub fn new() -> Self {
        AppState {
            sessions: Mutex::new(HashMap::new()),
            next_id: AtomicU64::new(1),
            journal: None,
        }
    }

    /// Replays `path` if it exists, then appends new events to it.
    pub fn with_journal(path: &Path) -> Result<Self, ToolError> {
        let mut app = AppState::new();
        app.replay(path)?;
        let io_err = |source| ToolError::Io {
            path: path.to_path_buf(),
            source,
        };
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(io_err)?;
        app.journal = Some(Mutex::new(file));
        Ok(app)
    }

    fn replay(&mut self, path: &Path) -> Result<(), ToolError> {
        let file = match File::open(path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(()),
            Err(source) => {
                return Err(ToolError::Io {
                    path: path.to_path_buf(),
                    source,
                })
            }
        };
        let mut sessions = HashMap::new();
        let mut max_id = 0;
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|source| ToolError::Io {
                path: path.to_path_buf(),
                source,
            })?;
            if line.trim().is_empty() {
                continue;
            }
            let entry: JournalEntry =
                serde_json::from_str(&line).map_err(|source| ToolError::Record {
                    path: path.to_path_buf(),
                    line: i + 1,
                    source,
                })?;
            let invalid =
                |m: String| ToolError::Invalid(format!("{}:{}: {m}", path.display(), i + 1));
            match entry {
                JournalEntry::Create { id, game } => {
                    max_id = max_id.max(id);
                    let s = Session::create(id, game).map_err(|e| invalid(e.message))?;
                    sessions.insert(id, s);
                }
                JournalEntry::Move { id, mv } => {
                    let s = sessions
                        .get_mut(&id)
                        .ok_or_else(|| invalid(format!("unknown game {id}")))?;
                    s.submit(mv).map_err(|e| invalid(e.message))?;
                }
                JournalEntry::Delete { id } => {
                    sessions.remove(&id);
                }
            }
        }
        self.next_id = AtomicU64::new(max_id + 1);
        self.sessions = Mutex::new(
            sessions
                .into_iter()
                .map(|(id, s)| (id, Arc::new(Mutex::new(s))))
                .collect(),
        );
        Ok(())
    }

    fn log(&self, entry: &JournalEntry) -> Result<(), ApiError> {
        if let Some(journal) = &self.journal {
            let mut line = serde_json::to_string(entry).expect("journal entries serialize");
            line.push('\n');
            journal.lock().write_all(line.as_bytes()).map_err(|e| {
                ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, format!("journal: {e}"))
            })?;
        }
        Ok(())
    }

    fn session(&self, id: u64) -> Result<Arc<Mutex<Session>>, ApiError> {
        self.sessions
            .lock()
            .get(&id)
            .cloned()
            .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, format!("no game {id}")))
    }

    pub fn create(&self, game: NewGame) -> Result<GameView, ApiError> {
        let id = self.next_id.fetch_add(1, Ordering::Relaxed);
        let session = Session::create(id, game.clone())?;
        let view = session.view();
        self.log(&JournalEntry::Create { id, game })?;
        self.sessions
            .lock()
            .insert(id, Arc::new(Mutex::new(session)));
        Ok(view)
    }

    pub fn view(&self, id: u64) -> Result<GameView, ApiError> {
        Ok(self.session(id)?.lock().view())
    }

    pub fn record(&self, id: u64) -> Result<GameRecord, ApiError> {
        Ok(self.session(id)?.lock().record())
    }

    pub fn submit(&self, id: u64, body: MoveBody) -> Result<MoveResponse, ApiError> {
        let session = self.session(id)?;
        let mut s = session.lock();
        let applied = s.submit(body)?;
        self.log(&JournalEntry::Move { id, mv: body })?;
        let game = s.view();
        Ok(MoveResponse {
            revision: s.revision,
            applied,
            status: game.status.clone(),
            game,
        })
    }

    pub fn hints(&self, id: u64) -> Result<HintsResponse, ApiError> {
        self.session(id)?.lock().hints()
    }

    pub fn delete(&self, id: u64) -> Result<Deleted, ApiError> {
        let session = self
            .sessions
            .lock()
            .remove(&id)
            .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, format!("no game {id}")))?;
        let revision = session.lock().revision + 1;
        self.log(&JournalEntry::Delete { id })?;
        Ok(Deleted {
            id,
            revision,
            deleted: true,
        })
    }
}

impl Default for AppState {
    fn default() -> Self {
        AppState::new()
    }
}

async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> Result<T, ApiError> + Send + 'static,
) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f).await.unwrap_or_else(|e| {
        Err(ApiError::new(
            StatusCode::INTERNAL_SERVER_ERROR,
            e.to_string(),
        ))
    })
}

async fn create_game(
    State(app): State<Arc<AppState>>,
    Json(game): Json<NewGame>,
) -> Result<(StatusCode, Json<GameView>), ApiError> {
    let view = blocking(move || app.create(game)).await?;
    Ok((StatusCode::CREATED, Json(view)))
}

async fn get_game(
    State(app): State<Arc<AppState>>,
    UrlPath(id): UrlPath<u64>,
) -> Result<Json<GameView>, ApiError> {
    app.view(id).map(Json)
}

async fn post_move(
    State(app): State<Arc<AppState>>,
    UrlPath(id): UrlPath<u64>,
    Json(body): Json<MoveBody>,
) -> Result<Json<MoveResponse>, ApiError> {
    blocking(move || app.submit(id, body)).await.map(Json)
}

async fn get_hints(
    State(app): State<Arc<AppState>>,
    UrlPath(id): UrlPath<u64>,
) -> Result<Json<HintsResponse>, ApiError> {
    blocking(move || app.hints(id)).await.map(Json)
}

async fn delete_game(
    State(app): State<Arc<AppState>>,
    UrlPath(id): UrlPath<u64>,
) -> Result<Json<Deleted>, ApiError> {
    app.delete(id).map(Json)
}

pub fn router(app: Arc<AppState>) -> Router {
    Router::new()
        .route("/games", post(create_game))
        .route("/games/{id}", get(get_game).delete(delete_game))
        .route("/games/{id}/moves", post(post_move))
        .route("/games/{id}/hints", get(get_hints))
        .with_state(app)
}

#[derive(Clone, Debug)]
pub struct ServeConfig {
    pub addr: SocketAddr,
    pub journal: Option<PathBuf>,
}

/// Serves until interrupted.
pub async fn serve(config: ServeConfig) -> Result<(), ToolError> {
    let app = match &config.journal {
        Some(path) => AppState::with_journal(path)?,
        None => AppState::new(),
    };
    let listener = tokio::net::TcpListener::bind(config.addr)
        .await
        .map_err(|source| ToolError::Io {
            path: PathBuf::from(config.addr.to_string()),
            source,
        })?;
    axum::serve(listener, router(Arc::new(app)))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
        .map_err(|source| ToolError::Io {
            path: PathBuf::from(config.addr.to_string()),
            source,
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn game(tree: &str, k: u8, human: &str) -> NewGame {
        NewGame {
            tree: tree.into(),
            k,
            variant: "BB".into(),
            human_side: human.into(),
        }
    }

    #[test]
    fn human_bob_moves_first_under_bb() {
        let app = AppState::new();
        let view = app
            .create(game("5\n0 1\n0 2\n0 3\n0 4\n", 5, "Bob"))
            .unwrap();
        assert_eq!(view.mover, "Bob");
        assert_eq!(view.revision, 1);
        assert!(view.history.is_empty());
        assert_eq!(view.legal_moves[0], MoveBody::Skip { skip: true });
    }

    #[test]
    fn engine_bob_opens() {
        let app = AppState::new();
        let view = app.create(game("2\n0 1\n", 1, "Alice")).unwrap();
        assert_eq!(view.history.len(), 1);
        assert_eq!(view.history[0].player, "Bob");
    }

    #[test]
    fn rejects_bad_input() {
        let app = AppState::new();
        let err = app.create(game("3\n0 1\n1 0\n", 5, "Bob")).unwrap_err();
        assert_eq!(err.status(), StatusCode::BAD_REQUEST);
        let big = format!(
            "15\n{}",
            (1..15)
                .map(|v| format!("{} {v}\n", v - 1))
                .collect::<String>()
        );
        assert_eq!(
            app.create(game(&big, 5, "Bob")).unwrap_err().status(),
            StatusCode::BAD_REQUEST
        );
        assert_eq!(
            app.create(game("2\n0 1\n", 0, "Bob")).unwrap_err().status(),
            StatusCode::BAD_REQUEST
        );
        assert_eq!(
            app.create(game("2\n0 1\n", 3, "Carol"))
                .unwrap_err()
                .status(),
            StatusCode::BAD_REQUEST
        );
    }

    #[test]
    fn skip_gets_an_engine_placement() {
        let app = AppState::new();
        let id = app
            .create(game("5\n0 1\n0 2\n0 3\n0 4\n", 5, "Bob"))
            .unwrap()
            .id;
        let r = app.submit(id, MoveBody::Skip { skip: true }).unwrap();
        assert_eq!(r.applied.len(), 2);
        assert_eq!(r.applied[1].player, "Alice");
        assert!(matches!(r.applied[1].mv, MoveBody::Place { .. }));
        assert_eq!(r.revision, 2);
    }

    #[test]
    fn illegal_moves_leave_the_game_alone() {
        let app = AppState::new();
        let id = app
            .create(game("5\n0 1\n0 2\n0 3\n0 4\n", 5, "Bob"))
            .unwrap()
            .id;
        app.submit(id, MoveBody::Place { edge: 0, color: 1 })
            .unwrap();
        let before = app.record(id).unwrap();
        let free = before.colors.iter().position(|&c| c == 0).unwrap();
        let taken = before.colors.iter().copied().find(|&c| c != 0).unwrap();
        let err = app.submit(
            id,
            MoveBody::Place {
                edge: free,
                color: taken,
            },
        );
        assert!(
            matches!(err, Err(e) if e.status() == StatusCode::UNPROCESSABLE_ENTITY || e.status() == StatusCode::CONFLICT)
        );
        assert_eq!(app.record(id).unwrap(), before);
    }

    #[test]
    fn completing_the_tree_ends_the_game() {
        let app = AppState::new();
        let id = app.create(game("2\n0 1\n", 1, "Bob")).unwrap().id;
        let r = app
            .submit(id, MoveBody::Place { edge: 0, color: 1 })
            .unwrap();
        assert_eq!(r.status, "AliceWins");
        assert_eq!(r.applied.len(), 1);
        assert_eq!(app.hints(id).unwrap_err().status(), StatusCode::CONFLICT);
        assert_eq!(
            app.submit(id, MoveBody::Skip { skip: true })
                .unwrap_err()
                .status(),
            StatusCode::CONFLICT
        );
    }

    #[test]
    fn hints_at_delta_plus_two_are_losses_for_bob() {
        let app = AppState::new();
        let id = app
            .create(game("6\n0 1\n0 2\n0 3\n3 4\n3 5\n", 5, "Bob"))
            .unwrap()
            .id;
        let hints = app.hints(id).unwrap();
        assert!(!hints.partial);
        assert!(!hints.hints.is_empty());
        assert!(hints.hints.iter().all(|h| h.outcome == "loss"));
    }

    #[test]
    fn delete_bumps_revision() {
        let app = AppState::new();
        let id = app.create(game("2\n0 1\n", 2, "Bob")).unwrap().id;
        let d = app.delete(id).unwrap();
        assert_eq!(d.revision, 2);
        assert_eq!(app.view(id).unwrap_err().status(), StatusCode::NOT_FOUND);
    }

    #[test]
    fn journal_replays_games() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("journal.jsonl");
        let record = {
            let app = AppState::with_journal(&path).unwrap();
            let id = app
                .create(game("5\n0 1\n1 2\n2 3\n3 4\n", 3, "Bob"))
                .unwrap()
                .id;
            app.submit(id, MoveBody::Skip { skip: true }).unwrap();
            let gone = app.create(game("2\n0 1\n", 2, "Bob")).unwrap().id;
            app.delete(gone).unwrap();
            app.record(id).unwrap()
        };
        let app = AppState::with_journal(&path).unwrap();
        assert_eq!(app.record(1).unwrap(), record);
        assert!(app.view(2).is_err());
        assert_eq!(app.create(game("2\n0 1\n", 2, "Bob")).unwrap().id, 3);
    }
}
