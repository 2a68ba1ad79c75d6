//! HTTP front end: structure checks, paged enumeration jobs, dimensioning
//! and drawn-layout sizing.

mod jobs;

use std::net::SocketAddr;
use std::sync::Arc;
use std::time::Duration;

use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use gplan_core::dimension::{dimension_floorplan, DimError};
use gplan_core::enumerate::EnumError;
use gplan_core::floorplan::Floorplan;
use gplan_core::formats::{check_bounds, BoundsDocument, GraphDocument};
use gplan_core::ifp::{dimension_ifp, parse_layout, IfpError};
use gplan_core::rfp_check;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub use jobs::{JobKind, JobStatus, Limits};
use jobs::{Registry, SubmitError};

/// Minimum overlap of adjacent walls when sizing.
pub const WALL_EPS: f64 = 1.0;

#[derive(Debug, Clone)]
pub struct Config {
    pub port: u16,
    pub limits: Limits,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            port: 8080,
            limits: Limits {
                job_cap: 64,
                layout_cap: 5000,
                deadline: Duration::from_secs(120),
            },
        }
    }
}

impl Config {
    /// Defaults overridden by GPLAN_PORT, GPLAN_JOB_CAP and GPLAN_DEADLINE_S.
    pub fn from_env() -> Result<Config, String> {
        let mut c = Config::default();
        fn var<T: std::str::FromStr>(name: &str) -> Result<Option<T>, String> {
            match std::env::var(name) {
                Ok(v) => v
                    .trim()
                    .parse()
                    .map(Some)
                    .map_err(|_| format!("{name}: cannot parse {v:?}")),
                Err(_) => Ok(None),
            }
        }
        if let Some(p) = var("GPLAN_PORT")? {
            c.port = p;
        }
        if let Some(n) = var::<usize>("GPLAN_JOB_CAP")? {
            c.limits.job_cap = n.max(1);
        }
        if let Some(s) = var::<u64>("GPLAN_DEADLINE_S")? {
            c.limits.deadline = Duration::from_secs(s);
        }
        Ok(c)
    }
}

pub fn app(config: &Config) -> Router {
    let registry = Arc::new(Registry::new(config.limits));
    Router::new()
        .route("/api/check", post(check))
        .route("/api/generate", post(generate))
        .route("/api/jobs/{id}", get(page).delete(cancel))
        .route("/api/dimension", post(dimension))
        .route("/api/ifp", post(ifp))
        .with_state(registry)
}

pub async fn serve(config: Config) -> std::io::Result<()> {
    let addr = SocketAddr::from(([0, 0, 0, 0], config.port));
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, app(&config))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

type Shared = Arc<Registry>;

fn error(status: StatusCode, body: Value) -> Response {
    (status, Json(body)).into_response()
}

fn bad_request(msg: impl ToString) -> Response {
    error(StatusCode::BAD_REQUEST, json!({ "error": msg.to_string() }))
}

/// Parses a JSON body, answering 400 rather than axum's 422 on bad input.
fn parse<T: DeserializeOwned>(body: &str) -> Result<T, Response> {
    if body.trim().is_empty() {
        return Err(bad_request("empty body"));
    }
    serde_json::from_str(body).map_err(bad_request)
}

fn graph_document(v: Value) -> Result<GraphDocument, Response> {
    let doc: GraphDocument = serde_json::from_value(v).map_err(bad_request)?;
    doc.to_graph().map_err(bad_request)?;
    Ok(doc)
}

async fn check(body: String) -> Response {
    let v: Value = match parse(&body) {
        Ok(v) => v,
        Err(r) => return r,
    };
    let doc = match graph_document(v) {
        Ok(d) => d,
        Err(r) => return r,
    };
    let report = rfp_check(&doc.to_graph().unwrap());
    Json(report).into_response()
}

#[derive(Deserialize)]
struct GenerateRequest {
    #[serde(flatten)]
    graph: Value,
    #[serde(default)]
    limit: Option<usize>,
    #[serde(default)]
    allow_ofp: bool,
}

async fn generate(State(reg): State<Shared>, body: String) -> Response {
    let req: GenerateRequest = match parse(&body) {
        Ok(r) => r,
        Err(r) => return r,
    };
    let doc = match graph_document(req.graph) {
        Ok(d) => d,
        Err(r) => return r,
    };
    match reg.submit(doc, req.limit, req.allow_ofp) {
        Ok(id) => (StatusCode::ACCEPTED, Json(json!({ "job": id }))).into_response(),
        Err(SubmitError::Full) => error(
            StatusCode::TOO_MANY_REQUESTS,
            json!({ "error": "too many running jobs" }),
        ),
        Err(SubmitError::Enumerate(e)) => {
            let reason = match e {
                EnumError::Invalid(r) | EnumError::NeedsOfp(r) => r,
            };
            error(
                StatusCode::UNPROCESSABLE_ENTITY,
                json!({ "error": e.to_string(), "reason": reason }),
            )
        }
    }
}

#[derive(Deserialize)]
struct PageQuery {
    #[serde(default)]
    from: usize,
    count: Option<usize>,
}

#[derive(Serialize)]
struct Page<'a> {
    id: &'a str,
    kind: JobKind,
    status: JobStatus,
    produced: usize,
    from: usize,
    cursor: usize,
    ofp: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    stop_reason: Option<gplan_core::enumerate::StopReason>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<&'a str>,
    layouts: &'a [Floorplan],
}

fn not_found(id: &str) -> Response {
    error(StatusCode::NOT_FOUND, json!({ "error": format!("no job {id}") }))
}

fn cancelled(id: &str) -> Response {
    error(StatusCode::CONFLICT, json!({ "error": format!("job {id} was cancelled") }))
}

async fn page(State(reg): State<Shared>, Path(id): Path<String>, Query(q): Query<PageQuery>) -> Response {
    let Some(job) = reg.get(&id) else {
        return not_found(&id);
    };
    let s = job.state.lock().unwrap();
    if s.status == JobStatus::Cancelled {
        return cancelled(&id);
    }
    let produced = s.layouts.len();
    let from = q.from.min(produced);
    let to = q.count.map_or(produced, |c| from.saturating_add(c).min(produced));
    Json(Page {
        id: &id,
        kind: job.kind,
        status: s.status,
        produced,
        from,
        cursor: to,
        ofp: s.ofp,
        stop_reason: s.stop,
        error: s.error.as_deref(),
        layouts: &s.layouts[from..to],
    })
    .into_response()
}

async fn cancel(State(reg): State<Shared>, Path(id): Path<String>) -> Response {
    let Some(job) = reg.get(&id) else {
        return not_found(&id);
    };
    if job.cancel() {
        let produced = job.state.lock().unwrap().layouts.len();
        Json(json!({ "id": id, "status": JobStatus::Cancelled, "produced": produced })).into_response()
    } else if job.state.lock().unwrap().status == JobStatus::Cancelled {
        cancelled(&id)
    } else {
        let s = job.state.lock().unwrap();
        Json(json!({ "id": id, "status": s.status, "produced": s.layouts.len() })).into_response()
    }
}

fn dim_error(e: DimError) -> Response {
    match e {
        DimError::Infeasible { axis, ref conflicts } => error(
            StatusCode::UNPROCESSABLE_ENTITY,
            json!({ "error": e.to_string(), "axis": axis, "conflicts": conflicts }),
        ),
        DimError::MissingBounds(ref room) | DimError::BadBounds(ref room) => error(
            StatusCode::BAD_REQUEST,
            json!({ "error": e.to_string(), "room": room }),
        ),
        DimError::Solver(_) => error(StatusCode::INTERNAL_SERVER_ERROR, json!({ "error": e.to_string() })),
    }
}

#[derive(Deserialize)]
struct DimensionRequest {
    floorplan: Floorplan,
    bounds: BoundsDocument,
}

async fn dimension(body: String) -> Response {
    let req: DimensionRequest = match parse(&body) {
        Ok(r) => r,
        Err(r) => return r,
    };
    if let Err(e) = check_bounds(&req.bounds) {
        return bad_request(e);
    }
    match dimension_floorplan(&req.floorplan, &req.bounds, WALL_EPS) {
        Ok(f) => Json(f).into_response(),
        Err(e) => dim_error(e),
    }
}

#[derive(Deserialize)]
struct IfpRequest {
    layout: String,
    bounds: BoundsDocument,
}

async fn ifp(body: String) -> Response {
    let req: IfpRequest = match parse(&body) {
        Ok(r) => r,
        Err(r) => return r,
    };
    if let Err(e) = check_bounds(&req.bounds) {
        return bad_request(e);
    }
    let layout = match parse_layout(&req.layout) {
        Ok(l) => l,
        Err(e) => return bad_request(e),
    };
    match dimension_ifp(&layout, &req.bounds, WALL_EPS) {
        Ok(f) => Json(f).into_response(),
        Err(IfpError::Layout(e)) => bad_request(e),
        Err(IfpError::Dimension(e)) => dim_error(e),
    }
}
