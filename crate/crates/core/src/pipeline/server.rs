//! HTTP JSON API over a [`ReviewStore`].

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, Query, Request, State};
use axum::http::{HeaderMap, StatusCode};
use axum::middleware::{self, Next};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};

use super::review::{AcceptRequest, CorrectionRequest, ReviewError, ReviewItem, ReviewStore, REVIEW_SCHEMA};

/// Header carrying the shared token when one is configured.
pub const TOKEN_HEADER: &str = "x-certpipe-token";
pub const DEFAULT_PAGE_SIZE: usize = 50;
pub const MAX_PAGE_SIZE: usize = 500;

#[derive(Debug, Clone, Default)]
pub struct ServeOptions {
    /// Required in [`TOKEN_HEADER`] on every API request when set.
    pub token: Option<String>,
    /// Static files (the review UI build) served at `/`.
    pub static_dir: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum ServeError {
    #[error("refusing to bind {0} without a token; use a loopback address or set a token")]
    NonLoopbackWithoutToken(SocketAddr),
    #[error("server: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Serialize)]
struct ErrorBody {
    schema: &'static str,
    error: String,
    status: u16,
}

struct ApiError(StatusCode, String);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = ErrorBody { schema: REVIEW_SCHEMA, error: self.1, status: self.0.as_u16() };
        (self.0, Json(body)).into_response()
    }
}

impl From<ReviewError> for ApiError {
    fn from(e: ReviewError) -> Self {
        let status = match &e {
            ReviewError::NotFound(_) => StatusCode::NOT_FOUND,
            ReviewError::Conflict { .. } => StatusCode::CONFLICT,
            ReviewError::Invalid(_) => StatusCode::BAD_REQUEST,
            ReviewError::OrphanEvent { .. } | ReviewError::Io(_) => StatusCode::INTERNAL_SERVER_ERROR,
        };
        ApiError(status, e.to_string())
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError(StatusCode::BAD_REQUEST, e.body_text())
    }
}

#[derive(Debug, Serialize)]
struct ItemBody {
    schema: &'static str,
    #[serde(flatten)]
    item: ReviewItem,
}

fn item_body(item: ReviewItem) -> Json<ItemBody> {
    Json(ItemBody { schema: REVIEW_SCHEMA, item })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct QueueParams {
    cursor: Option<String>,
    limit: Option<usize>,
}

async fn queue(
    State(store): State<Arc<ReviewStore>>,
    params: Result<Query<QueueParams>, axum::extract::rejection::QueryRejection>,
) -> Result<Response, ApiError> {
    let Query(params) = params.map_err(|e| ApiError(StatusCode::BAD_REQUEST, e.body_text()))?;
    let limit = params.limit.unwrap_or(DEFAULT_PAGE_SIZE).clamp(1, MAX_PAGE_SIZE);
    let page = store.snapshot().queue(params.cursor.as_deref(), limit)?;
    Ok(Json(page).into_response())
}

async fn item(State(store): State<Arc<ReviewStore>>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let snap = store.snapshot();
    let item = snap.item(&id).cloned().ok_or(ReviewError::NotFound(id))?;
    Ok(item_body(item).into_response())
}

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> Result<T, ReviewError> + Send + 'static) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?
        .map_err(ApiError::from)
}

async fn correct(
    State(store): State<Arc<ReviewStore>>,
    Path(id): Path<String>,
    body: Result<Json<CorrectionRequest>, JsonRejection>,
) -> Result<Response, ApiError> {
    let Json(request) = body?;
    let item = blocking(move || store.correct(&id, &request)).await?;
    Ok(item_body(item).into_response())
}

async fn accept(
    State(store): State<Arc<ReviewStore>>,
    Path(id): Path<String>,
    body: Result<Json<AcceptRequest>, JsonRejection>,
) -> Result<Response, ApiError> {
    let request = match body {
        Ok(Json(r)) => r,
        Err(JsonRejection::MissingJsonContentType(_)) => AcceptRequest::default(),
        Err(e) => return Err(e.into()),
    };
    let item = blocking(move || store.accept(&id, &request)).await?;
    Ok(item_body(item).into_response())
}

async fn check_token(State(token): State<Arc<String>>, headers: HeaderMap, request: Request, next: Next) -> Response {
    match headers.get(TOKEN_HEADER).and_then(|v| v.to_str().ok()) {
        Some(t) if t == token.as_str() => next.run(request).await,
        _ => ApiError(StatusCode::UNAUTHORIZED, format!("missing or wrong {TOKEN_HEADER} header")).into_response(),
    }
}

/// The review API router.
pub fn router(store: Arc<ReviewStore>, options: &ServeOptions) -> Router {
    let mut api = Router::new()
        .route("/api/queue", get(queue))
        .route("/api/items/{id}", get(item))
        .route("/api/items/{id}/corrections", post(correct))
        .route("/api/items/{id}/accept", post(accept))
        .with_state(store);
    if let Some(token) = &options.token {
        api = api.layer(middleware::from_fn_with_state(Arc::new(token.clone()), check_token));
    }
    match &options.static_dir {
        Some(dir) => api.fallback_service(tower_http::services::ServeDir::new(dir)),
        None => api,
    }
}

/// Serve until Ctrl-C. Non-loopback addresses need a token.
pub async fn serve(store: Arc<ReviewStore>, addr: SocketAddr, options: ServeOptions) -> Result<(), ServeError> {
    if !addr.ip().is_loopback() && options.token.is_none() {
        return Err(ServeError::NonLoopbackWithoutToken(addr));
    }
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("review API on http://{}", listener.local_addr()?);
    axum::serve(listener, router(store, &options))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
