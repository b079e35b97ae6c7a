//! JSON-over-HTTP service.

use std::net::SocketAddr;
use std::path::PathBuf;

use axum::body::Bytes;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::Serialize;
use tower_http::services::ServeDir;

use super::ErrorBody;
use crate::error::Error;

fn reply<T: Serialize>(result: crate::Result<T>) -> Response {
    match result {
        Ok(body) => Json(body).into_response(),
        Err(e) => (StatusCode::UNPROCESSABLE_ENTITY, Json(ErrorBody::from(&e))).into_response(),
    }
}

fn parse<T: DeserializeOwned>(body: &Bytes) -> Result<T, Response> {
    serde_json::from_slice(body)
        .map_err(|e| (StatusCode::BAD_REQUEST, Json(ErrorBody::malformed(e.to_string()))).into_response())
}

/// Parses the body and runs `handler` off the async executor.
async fn handle<Req, Res>(body: Bytes, handler: fn(&Req) -> crate::Result<Res>) -> Response
where
    Req: DeserializeOwned + Send + 'static,
    Res: Serialize + Send + 'static,
{
    let req: Req = match parse(&body) {
        Ok(r) => r,
        Err(resp) => return resp,
    };
    match tokio::task::spawn_blocking(move || handler(&req)).await {
        Ok(result) => reply(result),
        Err(e) => reply::<()>(Err(Error::Invalid(format!("request failed: {e}")))),
    }
}

async fn health() -> Response {
    Json(serde_json::json!({ "status": "ok" })).into_response()
}

async fn solve(body: Bytes) -> Response {
    handle(body, super::solve).await
}

async fn thresholds(body: Bytes) -> Response {
    handle(body, super::thresholds).await
}

async fn invert(body: Bytes) -> Response {
    handle(body, super::invert).await
}

async fn benefit(body: Bytes) -> Response {
    handle(body, super::benefit).await
}

async fn datasets() -> Response {
    Json(super::list_datasets()).into_response()
}

/// The API routes, plus static files from `static_dir` for every other path.
pub fn router(static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/health", get(health))
        .route("/api/solve", post(solve))
        .route("/api/thresholds", post(thresholds))
        .route("/api/invert", post(invert))
        .route("/api/benefit", post(benefit))
        .route("/api/datasets", get(datasets));
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

/// Binds `addr` and serves until the process is stopped.
pub async fn serve(addr: SocketAddr, static_dir: Option<PathBuf>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(static_dir)).await
}
