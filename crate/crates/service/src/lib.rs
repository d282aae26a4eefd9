//! HTTP/JSON session service over the configuration engine.
//!
//! Endpoints (all responses are JSON):
//!
//! | method | path | body |
//! |---|---|---|
//! | POST | `/sessions` | `{"model": text, "name": string}` |
//! | GET | `/sessions/{id}` | |
//! | POST | `/sessions/{id}/decisions` | `{"var": string, "value": bool}` |
//! | DELETE | `/sessions/{id}/decisions/{var}` | |
//! | POST | `/sessions/{id}/shopping-principle` | |
//! | POST | `/sessions/{id}/complete` | |
//!
//! Successful calls return the full [`SessionDocument`]. Failures return
//! `{"error": code, "message": text}` with status 400 (malformed body or
//! model text, unknown variable), 404 (unknown session), 409 (rejected
//! decision or retraction) or 422 (model without products).

mod document;

pub use document::{render, tree, GroupNode, NodeKind, SessionDocument, TreeNode, VariableState};

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex as StdMutex};

use axum::body::Bytes;
use axum::extract::{Path as UrlPath, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{delete, get, post};
use axum::{Json, Router};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use tokio::sync::Mutex;
use tower_http::services::ServeDir;

use confik_core::feature_model::{parse_model, FeatureModel};
use confik_core::{Session, SessionError};

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ApiError {
    pub error: String,
    pub message: String,
}

pub struct Failure(StatusCode, ApiError);

impl Failure {
    fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Failure {
        Failure(
            status,
            ApiError {
                error: code.to_owned(),
                message: message.into(),
            },
        )
    }
}

impl IntoResponse for Failure {
    fn into_response(self) -> Response {
        (self.0, Json(self.1)).into_response()
    }
}

impl From<SessionError> for Failure {
    fn from(e: SessionError) -> Failure {
        let status = match e {
            SessionError::UnsatModel => StatusCode::UNPROCESSABLE_ENTITY,
            SessionError::UnknownVar(_) => StatusCode::BAD_REQUEST,
            SessionError::AlreadyAssigned(_)
            | SessionError::InconsistentDecision(..)
            | SessionError::NotAUserDecision(_) => StatusCode::CONFLICT,
        };
        Failure::new(status, e.code(), e.to_string())
    }
}

struct Entry {
    model_name: String,
    model_text: String,
    model: FeatureModel,
    session: Session,
}

/// One stored session, enough to rebuild it.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SnapshotEntry {
    pub id: String,
    pub model_name: String,
    pub model: String,
    /// The decision log as a replayable script.
    pub script: String,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct Snapshot {
    pub sessions: Vec<SnapshotEntry>,
}

/// Shared service state: the session table, the id generator and an
/// optional default model used when a create request carries none.
pub struct AppState {
    sessions: StdMutex<HashMap<String, Arc<Mutex<Entry>>>>,
    ids: StdMutex<ChaCha8Rng>,
    default_model: Option<(String, String)>,
}

impl AppState {
    /// Session ids are drawn from a generator seeded with `seed`, or from
    /// OS entropy when `None`.
    pub fn new(seed: Option<u64>) -> AppState {
        let rng = match seed {
            Some(s) => ChaCha8Rng::seed_from_u64(s),
            None => ChaCha8Rng::from_os_rng(),
        };
        AppState {
            sessions: StdMutex::new(HashMap::new()),
            ids: StdMutex::new(rng),
            default_model: None,
        }
    }

    pub fn with_default_model(mut self, name: &str, text: &str) -> AppState {
        self.default_model = Some((name.to_owned(), text.to_owned()));
        self
    }

    fn fresh_id(&self) -> String {
        let n: u128 = self.ids.lock().expect("id lock").random();
        format!("{n:032x}")
    }

    fn get(&self, id: &str) -> Result<Arc<Mutex<Entry>>, Failure> {
        self.sessions
            .lock()
            .expect("session table lock")
            .get(id)
            .cloned()
            .ok_or_else(|| Failure::new(StatusCode::NOT_FOUND, "unknown_session", format!("no session '{id}'")))
    }

    fn build(model_name: &str, model_text: &str) -> Result<Entry, Failure> {
        let model = parse_model(model_text)
            .map_err(|e| Failure::new(StatusCode::BAD_REQUEST, "invalid_model", e.to_string()))?;
        let session = Session::new(model.to_clauses())?;
        Ok(Entry {
            model_name: model_name.to_owned(),
            model_text: model_text.to_owned(),
            model,
            session,
        })
    }

    /// Creates a session and returns its document.
    pub fn create(&self, model_name: &str, model_text: &str) -> Result<SessionDocument, Failure> {
        let mut entry = Self::build(model_name, model_text)?;
        let id = self.fresh_id();
        let doc = render(&id, &entry.model_name, &entry.model, &mut entry.session);
        self.sessions
            .lock()
            .expect("session table lock")
            .insert(id, Arc::new(Mutex::new(entry)));
        Ok(doc)
    }

    pub async fn snapshot(&self) -> Snapshot {
        let entries: Vec<(String, Arc<Mutex<Entry>>)> = {
            let table = self.sessions.lock().expect("session table lock");
            table.iter().map(|(k, v)| (k.clone(), v.clone())).collect()
        };
        let mut sessions = Vec::new();
        for (id, e) in entries {
            let e = e.lock().await;
            sessions.push(SnapshotEntry {
                id,
                model_name: e.model_name.clone(),
                model: e.model_text.clone(),
                script: e.session.to_script(),
            });
        }
        sessions.sort_by(|a, b| a.id.cmp(&b.id));
        Snapshot { sessions }
    }

    /// Rebuilds sessions from a snapshot. Entries that no longer replay
    /// are skipped and reported by id.
    pub fn restore(&self, snapshot: &Snapshot) -> Vec<String> {
        let mut skipped = Vec::new();
        let mut table = self.sessions.lock().expect("session table lock");
        for s in &snapshot.sessions {
            let rebuilt = parse_model(&s.model).ok().and_then(|model| {
                Session::replay(model.to_clauses(), &s.script)
                    .ok()
                    .map(|session| Entry {
                        model_name: s.model_name.clone(),
                        model_text: s.model.clone(),
                        model,
                        session,
                    })
            });
            match rebuilt {
                Some(entry) => {
                    table.insert(s.id.clone(), Arc::new(Mutex::new(entry)));
                }
                None => skipped.push(s.id.clone()),
            }
        }
        skipped
    }

    pub async fn save_snapshot(&self, path: &Path) -> std::io::Result<()> {
        let json = serde_json::to_string_pretty(&self.snapshot().await)?;
        std::fs::write(path, json)
    }

    pub fn load_snapshot(&self, path: &Path) -> std::io::Result<Vec<String>> {
        let text = std::fs::read_to_string(path)?;
        let snapshot: Snapshot = serde_json::from_str(&text)
            .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))?;
        Ok(self.restore(&snapshot))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CreateBody {
    model: Option<String>,
    name: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DecideBody {
    var: String,
    value: bool,
}

fn parse_body<T: for<'de> Deserialize<'de>>(body: &Bytes) -> Result<T, Failure> {
    serde_json::from_slice(body)
        .map_err(|e| Failure::new(StatusCode::BAD_REQUEST, "malformed_body", e.to_string()))
}

type Reply = Result<Json<SessionDocument>, Failure>;

async fn create(State(state): State<Arc<AppState>>, body: Bytes) -> Result<(StatusCode, Json<SessionDocument>), Failure> {
    let body: CreateBody = if body.is_empty() {
        CreateBody {
            model: None,
            name: None,
        }
    } else {
        parse_body(&body)?
    };
    let (name, text) = match (body.model, &state.default_model) {
        (Some(text), _) => (body.name.unwrap_or_else(|| "model".to_owned()), text),
        (None, Some((default_name, text))) => (body.name.unwrap_or_else(|| default_name.clone()), text.clone()),
        (None, None) => {
            return Err(Failure::new(
                StatusCode::BAD_REQUEST,
                "malformed_body",
                "missing field `model`",
            ))
        }
    };
    let doc = state.create(&name, &text)?;
    Ok((StatusCode::CREATED, Json(doc)))
}

async fn with_session<F>(state: &AppState, id: &str, op: F) -> Reply
where
    F: FnOnce(&mut Session) -> Result<(), Failure>,
{
    let entry = state.get(id)?;
    let mut e = entry.lock().await;
    let Entry {
        model_name,
        model,
        session,
        ..
    } = &mut *e;
    op(session)?;
    Ok(Json(render(id, model_name, model, session)))
}

async fn get_state(State(state): State<Arc<AppState>>, UrlPath(id): UrlPath<String>) -> Reply {
    with_session(&state, &id, |_| Ok(())).await
}

async fn decide(State(state): State<Arc<AppState>>, UrlPath(id): UrlPath<String>, body: Bytes) -> Reply {
    // Unknown sessions win over malformed bodies.
    state.get(&id)?;
    let body: DecideBody = parse_body(&body)?;
    with_session(&state, &id, |s| Ok(s.decide_named(&body.var, body.value)?)).await
}

async fn undo(State(state): State<Arc<AppState>>, UrlPath((id, var)): UrlPath<(String, String)>) -> Reply {
    with_session(&state, &id, |s| {
        s.retract_named(&var)?;
        Ok(())
    })
    .await
}

async fn shopping(State(state): State<Arc<AppState>>, UrlPath(id): UrlPath<String>) -> Reply {
    with_session(&state, &id, |s| {
        s.shopping_principle();
        Ok(())
    })
    .await
}

async fn blind_complete(State(state): State<Arc<AppState>>, UrlPath(id): UrlPath<String>) -> Reply {
    with_session(&state, &id, |s| {
        s.complete_blind();
        Ok(())
    })
    .await
}

/// The API routes, plus static files from `static_dir` for every other
/// path when given.
pub fn router(state: Arc<AppState>, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}", get(get_state))
        .route("/sessions/{id}/decisions", post(decide))
        .route("/sessions/{id}/decisions/{var}", delete(undo))
        .route("/sessions/{id}/shopping-principle", post(shopping))
        .route("/sessions/{id}/complete", post(blind_complete))
        .with_state(state);
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}
