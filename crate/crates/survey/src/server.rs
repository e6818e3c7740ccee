//! HTTP API for respondents and the admin aggregate.

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};
use std::time::{SystemTime, UNIX_EPOCH};

use axum::extract::State;
use axum::http::{HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;
use tower_http::services::ServeDir;
use uuid::Uuid;

use crate::aggregate::{aggregate, SurveyAggregate};
use crate::model::{PublicQuestion, SurveyError, SurveyQuestion, SurveyResponse};
use crate::store::ResponseStore;

pub const ADMIN_HEADER: &str = "x-admin-token";

pub struct AppState {
    pub questions: Vec<SurveyQuestion>,
    pub store: Mutex<ResponseStore>,
    pub admin_token: Option<String>,
    pub per_task: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SurveyPayload {
    pub respondent_id: String,
    pub questions: Vec<PublicQuestion>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ResponseBody {
    pub respondent_id: String,
    pub qid: String,
    pub choice: usize,
}

#[derive(Debug, Serialize)]
pub struct AdminPayload<'a> {
    pub aggregate: SurveyAggregate,
    pub questions: &'a [SurveyQuestion],
    pub responses: usize,
}

struct ApiError(StatusCode, String);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(json!({ "error": self.1 }))).into_response()
    }
}

impl From<SurveyError> for ApiError {
    fn from(e: SurveyError) -> Self {
        let status = match e {
            SurveyError::UnknownQuestion(_) => StatusCode::NOT_FOUND,
            SurveyError::IndexOutOfRange { .. } | SurveyError::BadRespondent => {
                StatusCode::UNPROCESSABLE_ENTITY
            }
            _ => StatusCode::INTERNAL_SERVER_ERROR,
        };
        ApiError(status, e.to_string())
    }
}

async fn health() -> &'static str {
    "ok"
}

async fn survey(State(state): State<Arc<AppState>>) -> Json<SurveyPayload> {
    Json(SurveyPayload {
        respondent_id: Uuid::new_v4().to_string(),
        questions: state.questions.iter().map(PublicQuestion::from).collect(),
    })
}

async fn response(
    State(state): State<Arc<AppState>>,
    Json(body): Json<ResponseBody>,
) -> Result<Json<serde_json::Value>, ApiError> {
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs());
    let r = SurveyResponse {
        respondent_id: body.respondent_id,
        qid: body.qid,
        choice: body.choice,
        timestamp,
    };
    let mut store = state
        .store
        .lock()
        .map_err(|_| ApiError(StatusCode::INTERNAL_SERVER_ERROR, "store poisoned".into()))?;
    store.record(r)?;
    Ok(Json(json!({ "stored": true })))
}

async fn admin_aggregate(
    State(state): State<Arc<AppState>>,
    headers: HeaderMap,
) -> Result<Response, ApiError> {
    let given = headers.get(ADMIN_HEADER).and_then(|v| v.to_str().ok());
    match (&state.admin_token, given) {
        (Some(expected), Some(given)) if expected == given => {}
        _ => return Err(ApiError(StatusCode::UNAUTHORIZED, "admin token required".into())),
    }
    let responses = state
        .store
        .lock()
        .map_err(|_| ApiError(StatusCode::INTERNAL_SERVER_ERROR, "store poisoned".into()))?
        .responses();
    let payload = AdminPayload {
        aggregate: aggregate(&state.questions, &responses, state.per_task),
        questions: &state.questions,
        responses: responses.len(),
    };
    Ok(Json(payload).into_response())
}

/// Routes: `GET /survey`, `POST /response`, `GET /aggregate`, `GET /health`,
/// plus static files from `static_dir` for every other path.
pub fn router(state: Arc<AppState>, static_dir: Option<PathBuf>) -> Router {
    let app = Router::new()
        .route("/health", get(health))
        .route("/survey", get(survey))
        .route("/response", post(response))
        .route("/aggregate", get(admin_aggregate))
        .with_state(state);
    match static_dir {
        Some(dir) => app.fallback_service(ServeDir::new(dir)),
        None => app,
    }
}

pub async fn serve(
    addr: SocketAddr,
    state: Arc<AppState>,
    static_dir: Option<PathBuf>,
) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(state, static_dir)).await
}
