//! HTTP facade over the analyses, plus an ephemeral image store for the
//! annotation UI.
//!
//! | route | |
//! |---|---|
//! | `POST /api/analyze` | annotation document → canonical report |
//! | `POST /api/analyze/partial` | one kind of constraint → single-check result |
//! | `POST /api/images` | PNG or JPEG body → `{id, width, height, media_type}` |
//! | `GET /api/images/{id}` | stored bytes |
//! | `GET /api/health` | `{status, version}` |

mod images;
mod partial;

use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{DefaultBodyLimit, Path, Query, State};
use axum::http::{header, HeaderMap, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use pf_core::analysis::analyze_document;
use pf_core::annotation::{canonical, parse_annotations, write_report, AnnotationError};
use pf_core::TOOL_VERSION;
use serde::{Deserialize, Serialize};
use tower_http::cors::{AllowOrigin, CorsLayer};
use tower_http::services::ServeDir;

pub use images::{ImageError, ImageRecord, ImageStore, MediaType};
pub use partial::{analyze_partial, PartialRequest, PartialResponse};

/// Largest accepted request body.
pub const MAX_BODY_BYTES: usize = 32 * 1024 * 1024;

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    /// Origin allowed by CORS; `None` sends no CORS headers.
    pub cors_origin: Option<String>,
    /// Directory served for paths outside `/api`.
    pub static_dir: Option<PathBuf>,
    pub image_store_bytes: usize,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self {
            cors_origin: None,
            static_dir: None,
            image_store_bytes: 256 * 1024 * 1024,
        }
    }
}

#[derive(Clone)]
struct AppState {
    images: Arc<ImageStore>,
}

pub fn router(config: &ServiceConfig) -> Result<Router, ConfigError> {
    let state = AppState {
        images: Arc::new(ImageStore::new(config.image_store_bytes)),
    };
    let api = Router::new()
        .route("/analyze", post(analyze))
        .route("/analyze/partial", post(analyze_partial_handler))
        .route("/images", post(upload_image))
        .route("/images/{id}", get(fetch_image))
        .route("/health", get(health))
        .fallback(|| async {
            ApiError::new(StatusCode::NOT_FOUND, "not-found", "no such endpoint")
        })
        .layer(DefaultBodyLimit::max(MAX_BODY_BYTES))
        .with_state(state);

    let mut app = Router::new().nest("/api", api);
    if let Some(dir) = &config.static_dir {
        app = app.fallback_service(ServeDir::new(dir));
    }
    if let Some(origin) = &config.cors_origin {
        let origin =
            HeaderValue::from_str(origin).map_err(|_| ConfigError::CorsOrigin(origin.clone()))?;
        app = app.layer(
            CorsLayer::new()
                .allow_origin(AllowOrigin::list([origin]))
                .allow_methods([axum::http::Method::GET, axum::http::Method::POST])
                .allow_headers([header::CONTENT_TYPE]),
        );
    }
    Ok(app)
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("invalid CORS origin {0:?}")]
    CorsOrigin(String),
}

/// JSON error body: `{"error": <kind>, "message": <text>, "field": <path>?}`.
#[derive(Debug, Serialize)]
struct ApiError {
    #[serde(skip)]
    status: StatusCode,
    error: &'static str,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    field: Option<String>,
}

impl ApiError {
    fn new(status: StatusCode, error: &'static str, message: impl Into<String>) -> Self {
        Self {
            status,
            error,
            message: message.into(),
            field: None,
        }
    }
}

impl From<AnnotationError> for ApiError {
    fn from(e: AnnotationError) -> Self {
        let (kind, field) = match &e {
            AnnotationError::Parse { .. } => ("parse", None),
            AnnotationError::Schema { field, .. } => ("schema", Some(field.clone())),
            AnnotationError::Validation { field, .. } => ("validation", Some(field.clone())),
        };
        Self {
            status: StatusCode::BAD_REQUEST,
            error: kind,
            message: e.to_string(),
            field,
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (
            self.status,
            json_body(canonical::to_canonical_string(&self)),
        )
            .into_response()
    }
}

fn json_body(text: String) -> impl IntoResponse {
    ([(header::CONTENT_TYPE, "application/json")], text)
}

/// Rejects bodies that declare a non-JSON content type. A missing header
/// is accepted.
fn require_json(headers: &HeaderMap) -> Result<(), ApiError> {
    let Some(value) = headers.get(header::CONTENT_TYPE) else {
        return Ok(());
    };
    let essence = value
        .to_str()
        .unwrap_or("")
        .split(';')
        .next()
        .unwrap_or("")
        .trim()
        .to_ascii_lowercase();
    if essence == "application/json" || essence.ends_with("+json") {
        Ok(())
    } else {
        Err(ApiError::new(
            StatusCode::UNSUPPORTED_MEDIA_TYPE,
            "unsupported-media-type",
            format!("expected application/json, got {essence:?}"),
        ))
    }
}

fn utf8(body: &Bytes) -> Result<&str, ApiError> {
    std::str::from_utf8(body)
        .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "parse", e.to_string()))
}

#[derive(Debug, Deserialize)]
struct AnalyzeQuery {
    tolerance_px: Option<f64>,
}

async fn analyze(
    Query(query): Query<AnalyzeQuery>,
    headers: HeaderMap,
    body: Bytes,
) -> Result<impl IntoResponse, ApiError> {
    require_json(&headers)?;
    if let Some(t) = query.tolerance_px {
        if !(t.is_finite() && t > 0.0) {
            return Err(ApiError::new(
                StatusCode::BAD_REQUEST,
                "validation",
                "tolerance_px must be positive",
            ));
        }
    }
    let doc = parse_annotations(utf8(&body)?)?;
    let report = analyze_document(&doc, query.tolerance_px, TOOL_VERSION);
    Ok(json_body(write_report(&report)))
}

async fn analyze_partial_handler(
    headers: HeaderMap,
    body: Bytes,
) -> Result<impl IntoResponse, ApiError> {
    require_json(&headers)?;
    let request: PartialRequest = serde_json::from_slice(&body)
        .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "parse", e.to_string()))?;
    let response = analyze_partial(&request)?;
    Ok(json_body(canonical::to_canonical_string(&response)))
}

#[derive(Serialize)]
struct UploadResponse<'a> {
    id: &'a str,
    width: u32,
    height: u32,
    media_type: MediaType,
    size_bytes: usize,
}

async fn upload_image(
    State(state): State<AppState>,
    headers: HeaderMap,
    body: Bytes,
) -> Result<impl IntoResponse, ApiError> {
    let declared = headers
        .get(header::CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .unwrap_or("");
    let media_type = MediaType::from_content_type(declared).ok_or_else(|| {
        ApiError::new(
            StatusCode::UNSUPPORTED_MEDIA_TYPE,
            "unsupported-media-type",
            format!("expected image/png or image/jpeg, got {declared:?}"),
        )
    })?;
    let record = state.images.insert(body, media_type).map_err(|e| match e {
        ImageError::TooLarge { .. } => {
            ApiError::new(StatusCode::PAYLOAD_TOO_LARGE, "too-large", e.to_string())
        }
        ImageError::Undecodable(..) => {
            ApiError::new(StatusCode::BAD_REQUEST, "undecodable-image", e.to_string())
        }
    })?;
    let body = canonical::to_canonical_string(&UploadResponse {
        id: &record.id,
        width: record.width,
        height: record.height,
        media_type: record.media_type,
        size_bytes: record.bytes.len(),
    });
    Ok((StatusCode::CREATED, json_body(body)))
}

async fn fetch_image(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> Result<impl IntoResponse, ApiError> {
    let record = state.images.get(&id).ok_or_else(|| {
        ApiError::new(
            StatusCode::NOT_FOUND,
            "not-found",
            format!("no image with id {id:?}"),
        )
    })?;
    Ok((
        [
            (header::CONTENT_TYPE, record.media_type.as_str()),
            (header::CACHE_CONTROL, "public, max-age=31536000, immutable"),
        ],
        record.bytes.clone(),
    ))
}

async fn health() -> impl IntoResponse {
    json_body(canonical::to_canonical_string(
        &serde_json::json!({ "status": "ok", "version": TOOL_VERSION }),
    ))
}
