//! HTTP API consumed by the explorer UI, plus static asset serving.
//!
//! | Method | Path | Body / query | Response |
//! |---|---|---|---|
//! | GET | `/api/indicators` | | indicator names, abbreviations, node applicability |
//! | GET | `/api/stats` | | statistics of the full and the filtered log, active filter |
//! | GET | `/api/dfg` | `activities`, `paths` (0..1), `metric`, `secondary`, `mode`, `cutoff`, `weight`, `format=json\|dot` | model JSON or DOT |
//! | POST | `/api/filter` | filter spec JSON | filtered stats and re-discovered model |
//! | GET | `/api/observations` | | observations with question texts and current verdicts |
//! | POST | `/api/judgments` | one judgment object or an array | counts |
//! | GET | `/api/report` | | assessment report as JSON and markdown |
//!
//! Errors are `{"code", "message", "detail"?}` with a 4xx or 500 status.

use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use abspm_core::assessment::{
    generate_observations, render_questions, summarize, Judgment, JudgmentStore, Observation, Question,
    Verdict,
};
use abspm_core::discovery::{AbstractionMode, AbstractionSpec, Indicator};
use abspm_core::log::{apply_filters, stats, EventLog, FilterSpec};
use axum::extract::rejection::JsonRejection;
use axum::extract::{Query, State};
use axum::http::{header, StatusCode};
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tower_http::services::ServeDir;

use crate::error::{Error, Result};
use crate::model_json::ModelDto;
use crate::pipeline::{self, discover_log};
use crate::project::{Project, ProjectState, Rendering};
use crate::store;

/// The closed set of error codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    InvalidRequest,
    InvalidFilter,
    InvalidAbstraction,
    UnknownIndicator,
    UnknownObservation,
    InvalidJudgment,
    MissingArtifact,
    Internal,
}

impl ErrorCode {
    fn status(self) -> StatusCode {
        match self {
            ErrorCode::UnknownObservation | ErrorCode::MissingArtifact => StatusCode::NOT_FOUND,
            ErrorCode::Internal => StatusCode::INTERNAL_SERVER_ERROR,
            _ => StatusCode::BAD_REQUEST,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ApiError {
    pub code: ErrorCode,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

impl ApiError {
    fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        ApiError {
            code,
            message: message.into(),
            detail: None,
        }
    }

    fn with_detail(mut self, detail: Value) -> Self {
        self.detail = Some(detail);
        self
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.code.status(), Json(self)).into_response()
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Discovery(abspm_core::discovery::DiscoveryError::InvalidAbstraction(_)) => {
                ErrorCode::InvalidAbstraction
            }
            Error::Assessment(abspm_core::assessment::AssessmentError::UnknownObservation(_)) => {
                ErrorCode::UnknownObservation
            }
            Error::Assessment(_) => ErrorCode::InvalidJudgment,
            _ => ErrorCode::Internal,
        };
        ApiError::new(code, e.to_string())
    }
}

type ApiResult<T> = std::result::Result<T, ApiError>;

struct Active {
    filter: FilterSpec,
    log: EventLog,
}

/// Shared server state. Logs and observations are read-only; the active
/// filter is swapped by `POST /api/filter`; judgment writes are serialised
/// through the store mutex.
pub struct AppState {
    root: PathBuf,
    state: ProjectState,
    log: EventLog,
    active: RwLock<Active>,
    observations: Vec<Observation>,
    store: Mutex<JudgmentStore>,
}

impl AppState {
    pub fn load(root: &Path) -> Result<(AppState, Vec<String>)> {
        let (project, warnings) = Project::open(root)?;
        let log = pipeline::event_log(&project)?;
        let filter = project.state.filter.clone();
        let filtered = apply_filters(&log, &filter);
        let observations = if project.artifact("observations").is_some() {
            pipeline::observations(&project)?
        } else {
            let d = discover_log(&filtered, &project.state.abstraction, &project.state.rendering)?;
            let s = &project.state.assessment;
            generate_observations(&d.model, &s.indicators, s.top_k)
        };
        let store = store::load(root)?;
        Ok((
            AppState {
                root: root.to_path_buf(),
                state: project.state,
                log,
                active: RwLock::new(Active {
                    filter,
                    log: filtered,
                }),
                observations,
                store: Mutex::new(store),
            },
            warnings,
        ))
    }
}

fn indicators() -> Json<Value> {
    let list: Vec<Value> = Indicator::ALL
        .iter()
        .map(|i| {
            json!({
                "name": i.name(),
                "abbreviation": i.abbreviation(),
                "applies_to_nodes": i.applies_to_nodes(),
            })
        })
        .collect();
    Json(Value::Array(list))
}

async fn get_indicators() -> Json<Value> {
    indicators()
}

async fn get_stats(State(app): State<Arc<AppState>>) -> Json<Value> {
    let active = app.active.read().expect("active filter lock");
    Json(json!({
        "log": stats(&app.log),
        "filtered": stats(&active.log),
        "filter": active.filter,
        "empty_after_filter": active.log.metadata.empty_after_filter,
    }))
}

#[derive(Debug, Default, Deserialize)]
pub struct DfgQuery {
    activities: Option<f64>,
    paths: Option<f64>,
    metric: Option<String>,
    secondary: Option<String>,
    mode: Option<String>,
    cutoff: Option<f64>,
    weight: Option<f64>,
    format: Option<String>,
}

fn parse_indicator(name: &str) -> ApiResult<Indicator> {
    name.parse::<Indicator>().map_err(|e| {
        let valid: Vec<&str> = Indicator::ALL.iter().map(|i| i.name()).collect();
        ApiError::new(ErrorCode::UnknownIndicator, e.to_string()).with_detail(json!({ "valid": valid }))
    })
}

fn abstraction_from(q: &DfgQuery, state: &ProjectState) -> ApiResult<(AbstractionSpec, Rendering)> {
    let mut spec = state.abstraction;
    let mut rendering = state.rendering.clone();
    if let Some(a) = q.activities {
        spec.activity_ratio = a;
    }
    if let Some(p) = q.paths {
        spec.path_ratio = p;
    }
    if let Some(c) = q.cutoff {
        spec.cutoff = c;
    }
    if let Some(w) = q.weight {
        spec.utility_weight = w;
    }
    if let Some(m) = &q.mode {
        spec.mode = match m.as_str() {
            "frequency_rank" => AbstractionMode::FrequencyRank,
            "fuzzy" => AbstractionMode::Fuzzy,
            other => {
                return Err(ApiError::new(
                    ErrorCode::InvalidAbstraction,
                    format!("unknown mode `{other}`; valid modes: frequency_rank, fuzzy"),
                ))
            }
        };
    }
    if let Some(m) = &q.metric {
        rendering.primary = parse_indicator(m)?;
    }
    if let Some(m) = &q.secondary {
        rendering.secondary = parse_indicator(m)?;
    }
    spec.validate()
        .map_err(|e| ApiError::new(ErrorCode::InvalidAbstraction, e.to_string()))?;
    Ok((spec, rendering))
}

async fn get_dfg(
    State(app): State<Arc<AppState>>,
    query: std::result::Result<Query<DfgQuery>, axum::extract::rejection::QueryRejection>,
) -> ApiResult<Response> {
    let Query(q) = query.map_err(|e| ApiError::new(ErrorCode::InvalidRequest, e.body_text()))?;
    let (spec, rendering) = abstraction_from(&q, &app.state)?;
    let d = {
        let active = app.active.read().expect("active filter lock");
        discover_log(&active.log, &spec, &rendering)?
    };
    match q.format.as_deref().unwrap_or("json") {
        "json" => Ok(([(header::CONTENT_TYPE, "application/json")], d.json).into_response()),
        "dot" => Ok((
            [(header::CONTENT_TYPE, "text/vnd.graphviz; charset=utf-8")],
            d.dot,
        )
            .into_response()),
        other => Err(ApiError::new(
            ErrorCode::InvalidRequest,
            format!("unknown format `{other}`; valid formats: json, dot"),
        )),
    }
}

async fn post_filter(
    State(app): State<Arc<AppState>>,
    body: std::result::Result<Json<FilterSpec>, JsonRejection>,
) -> ApiResult<Json<Value>> {
    let Json(spec) = body.map_err(|e| ApiError::new(ErrorCode::InvalidFilter, e.body_text()))?;
    spec.validate()
        .map_err(|e| ApiError::new(ErrorCode::InvalidFilter, e.to_string()))?;
    let filtered = apply_filters(&app.log, &spec);
    let d = discover_log(&filtered, &app.state.abstraction, &app.state.rendering)?;
    let body = json!({
        "stats": stats(&filtered),
        "empty_after_filter": filtered.metadata.empty_after_filter,
        "filter": spec,
        "model": ModelDto::from(&d.model),
    });
    *app.active.write().expect("active filter lock") = Active {
        filter: spec,
        log: filtered,
    };
    Ok(Json(body))
}

fn verdicts_of(store: &JudgmentStore, assessor: &str) -> Vec<Judgment> {
    store.current_for(assessor).cloned().collect()
}

async fn get_observations(State(app): State<Arc<AppState>>) -> Json<Value> {
    let store = app.store.lock().expect("judgment store lock");
    let assessor = &app.state.assessment.assessor;
    let population = pipeline::population(&app.state);
    let list: Vec<Value> = app
        .observations
        .iter()
        .map(|o| {
            let (q1, q2) = render_questions(o, population);
            let verdict = |q| store.get(o.obs_id, q, assessor).map(|j| j.verdict.token());
            json!({
                "obs_id": o.obs_id,
                "element": o.element,
                "label": o.element.to_string(),
                "indicator": o.indicator,
                "value": o.value,
                "value_display": o.value_display,
                "question_1": q1,
                "question_2": q2,
                "verdict_1": verdict(Question::Q1),
                "verdict_2": verdict(Question::Q2),
            })
        })
        .collect();
    Json(Value::Array(list))
}

#[derive(Debug, Deserialize)]
struct JudgmentBody {
    obs_id: u32,
    question: String,
    verdict: String,
    #[serde(default)]
    note: Option<String>,
    #[serde(default)]
    assessor: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum JudgmentBatch {
    One(JudgmentBody),
    Many(Vec<JudgmentBody>),
}

async fn post_judgments(
    State(app): State<Arc<AppState>>,
    body: std::result::Result<Json<JudgmentBatch>, JsonRejection>,
) -> ApiResult<Json<Value>> {
    let Json(batch) = body.map_err(|e| ApiError::new(ErrorCode::InvalidJudgment, e.body_text()))?;
    let bodies = match batch {
        JudgmentBatch::One(b) => vec![b],
        JudgmentBatch::Many(v) => v,
    };
    let now = chrono::Utc::now().naive_utc();
    let mut new = Vec::with_capacity(bodies.len());
    for (i, b) in bodies.into_iter().enumerate() {
        let invalid = |e: abspm_core::assessment::AssessmentError| {
            ApiError::new(ErrorCode::InvalidJudgment, e.to_string()).with_detail(json!({ "index": i }))
        };
        let question: Question = b.question.parse().map_err(invalid)?;
        let verdict: Verdict = b.verdict.parse().map_err(invalid)?;
        new.push(Judgment {
            obs_id: b.obs_id,
            question,
            verdict,
            note: b.note.filter(|n| !n.trim().is_empty()),
            assessor: b
                .assessor
                .unwrap_or_else(|| app.state.assessment.assessor.clone()),
            recorded_at: now,
        });
    }
    let mut store = app.store.lock().expect("judgment store lock");
    let mut staged = store.clone();
    for j in &new {
        staged.record(j.clone(), &app.observations).map_err(|e| {
            let id = j.obs_id;
            ApiError::from(Error::from(e)).with_detail(json!({ "obs_id": id }))
        })?;
    }
    store::persist(&app.root, &new, &staged)?;
    *store = staged;
    Ok(Json(json!({ "recorded": new.len(), "current": store.len() })))
}

async fn get_report(State(app): State<Arc<AppState>>) -> Json<Value> {
    let store = app.store.lock().expect("judgment store lock");
    let report = summarize(
        &app.observations,
        &verdicts_of(&store, &app.state.assessment.assessor),
    );
    Json(json!({
        "report": report,
        "markdown": report.to_markdown(),
        "csv": pipeline::report_csv(&report),
    }))
}

const PLACEHOLDER: &str = "<!doctype html>
<html><head><meta charset=\"utf-8\"><title>abspm</title></head>
<body><h1>abspm</h1><p>No UI assets configured. Start the server with <code>--ui-dir</code> or use the JSON API under <code>/api</code>.</p></body></html>
";

async fn placeholder() -> Html<&'static str> {
    Html(PLACEHOLDER)
}

async fn api_not_found() -> ApiError {
    ApiError::new(ErrorCode::InvalidRequest, "unknown endpoint")
}

pub fn router(app: Arc<AppState>, ui_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/indicators", get(get_indicators))
        .route("/stats", get(get_stats))
        .route("/dfg", get(get_dfg))
        .route("/filter", post(post_filter))
        .route("/observations", get(get_observations))
        .route("/judgments", post(post_judgments))
        .route("/report", get(get_report))
        .fallback(api_not_found)
        .with_state(app);
    let router = Router::new().nest("/api", api);
    match ui_dir {
        Some(dir) => router.fallback_service(ServeDir::new(dir)),
        None => router.route("/", get(placeholder)),
    }
}

/// Serves the project at `root` until the process is stopped.
pub async fn serve(root: &Path, addr: SocketAddr, ui_dir: Option<PathBuf>) -> Result<()> {
    let (app, warnings) = AppState::load(root)?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    if let Some(dir) = &ui_dir {
        if !dir.is_dir() {
            return Err(Error::Precondition(format!(
                "UI directory {} does not exist",
                dir.display()
            )));
        }
    }
    let listener = tokio::net::TcpListener::bind(addr)
        .await
        .map_err(|e| Error::Precondition(format!("cannot listen on {addr}: {e}")))?;
    eprintln!("serving {} on http://{addr}", root.display());
    axum::serve(listener, router(Arc::new(app), ui_dir))
        .await
        .map_err(|e| Error::Internal(e.to_string()))
}
