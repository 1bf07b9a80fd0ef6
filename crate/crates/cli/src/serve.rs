//! HTTP front end: `POST /api/decompose`, `GET /api/health`, and the
//! viewer's static assets under `/`.

use std::net::SocketAddr;
use std::path::PathBuf;

use axum::body::Bytes;
use axum::extract::DefaultBodyLimit;
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use btbs_core::io::parse_states_request;
use btbs_core::{decompose, export_register, Format, QubitOrder};
use serde_json::json;
use tower_http::services::ServeDir;

use crate::CliError;

pub const DEFAULT_BODY_LIMIT: usize = 1 << 20;

#[derive(Debug, Clone)]
pub struct ServeConfig {
    pub static_dir: Option<PathBuf>,
    pub max_body_bytes: usize,
}

impl Default for ServeConfig {
    fn default() -> Self {
        ServeConfig {
            static_dir: None,
            max_body_bytes: DEFAULT_BODY_LIMIT,
        }
    }
}

pub fn router(config: ServeConfig) -> Router {
    let api = Router::new()
        .route("/api/health", get(health))
        .route("/api/decompose", post(decompose_handler))
        .layer(DefaultBodyLimit::max(config.max_body_bytes));
    match config.static_dir.filter(|d| d.is_dir()) {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api.fallback(not_found),
    }
}

async fn health() -> Json<serde_json::Value> {
    Json(json!({ "status": "ok" }))
}

async fn not_found() -> Response {
    (StatusCode::NOT_FOUND, Json(json!({ "error": "not found" }))).into_response()
}

fn bad_request(message: String) -> Response {
    (StatusCode::BAD_REQUEST, Json(json!({ "error": message }))).into_response()
}

async fn decompose_handler(body: Bytes) -> Response {
    let result = tokio::task::spawn_blocking(move || {
        let (batch, order) = parse_states_request(&body)?;
        let order = order.unwrap_or_else(|| QubitOrder::identity(batch.n_qubits()));
        let register = decompose(&batch, &order)?;
        Ok::<_, btbs_core::Error>(export_register(&register, Format::Json))
    })
    .await;
    match result {
        Ok(Ok(bytes)) => ([(header::CONTENT_TYPE, "application/json")], bytes).into_response(),
        Ok(Err(e)) => bad_request(e.to_string()),
        Err(e) => (
            StatusCode::INTERNAL_SERVER_ERROR,
            Json(json!({ "error": e.to_string() })),
        )
            .into_response(),
    }
}

/// Binds `host:port` and serves until the process is stopped.
pub fn run_blocking(host: &str, port: u16, config: ServeConfig) -> Result<(), CliError> {
    let addr: SocketAddr = format!("{host}:{port}")
        .parse()
        .map_err(|e| CliError::Usage(format!("bad listen address {host}:{port}: {e}")))?;
    let runtime = tokio::runtime::Runtime::new().map_err(|e| CliError::Io(e.to_string()))?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind(addr)
            .await
            .map_err(|e| CliError::Io(format!("bind {addr}: {e}")))?;
        eprintln!(
            "listening on http://{}",
            listener
                .local_addr()
                .map_err(|e| CliError::Io(e.to_string()))?
        );
        axum::serve(listener, router(config))
            .await
            .map_err(|e| CliError::Io(e.to_string()))
    })
}
