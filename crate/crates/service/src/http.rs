use std::collections::HashMap;
use std::future::Future;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use procdsl::ViewSubject;
use serde::de::DeserializeOwned;
use serde::Serialize;
use tokio::net::TcpListener;

use crate::service::{Service, ServiceError};

struct ApiError(ServiceError);

impl From<ServiceError> for ApiError {
    fn from(e: ServiceError) -> Self {
        ApiError(e)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.0.status()).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        if status.is_server_error() {
            tracing::error!(error = %self.0, "request failed");
        } else {
            tracing::debug!(code = self.0.code(), "request rejected");
        }
        (status, Json(self.0.body())).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

type Shared = State<Arc<Service>>;

/// Token of an `Authorization: Bearer <token>` header, if it is live.
fn authenticate(service: &Service, headers: &HeaderMap) -> Result<String, ServiceError> {
    let token = headers
        .get(header::AUTHORIZATION)
        .and_then(|v| v.to_str().ok())
        .and_then(|v| v.strip_prefix("Bearer "))
        .map(str::trim)
        .ok_or(ServiceError::AuthRequired)?;
    service.session_user(token)?;
    Ok(token.to_owned())
}

fn json_body<T: DeserializeOwned>(bytes: &Bytes) -> Result<T, ServiceError> {
    serde_json::from_slice(bytes).map_err(|e| ServiceError::BadRequest(format!("malformed request body: {e}")))
}

/// Like `json_body`, but an empty body means the default request.
fn optional_body<T: DeserializeOwned + Default>(bytes: &Bytes) -> Result<T, ServiceError> {
    if bytes.iter().all(u8::is_ascii_whitespace) {
        Ok(T::default())
    } else {
        json_body(bytes)
    }
}

/// Runs blocking service work (hashing, file I/O) off the async workers.
async fn blocking<T: Send + 'static>(work: impl FnOnce() -> Result<T, ServiceError> + Send + 'static) -> ApiResult<T> {
    tokio::task::spawn_blocking(work)
        .await
        .unwrap_or_else(|e| std::panic::resume_unwind(e.into_panic()))
        .map_err(ApiError)
}

fn ok<T: Serialize>(value: T) -> Response {
    Json(value).into_response()
}

async fn login(State(service): Shared, bytes: Bytes) -> ApiResult<Response> {
    let request = json_body(&bytes)?;
    blocking(move || service.login(&request)).await.map(ok)
}

async fn list_files(State(service): Shared, headers: HeaderMap) -> ApiResult<Response> {
    let token = authenticate(&service, &headers)?;
    blocking(move || service.list_files(&token)).await.map(ok)
}

async fn get_file(State(service): Shared, headers: HeaderMap, Path(id): Path<String>) -> ApiResult<Response> {
    let token = authenticate(&service, &headers)?;
    blocking(move || service.get_document(&token, &id)).await.map(ok)
}

async fn put_file(
    State(service): Shared,
    headers: HeaderMap,
    Path(id): Path<String>,
    bytes: Bytes,
) -> ApiResult<Response> {
    let token = authenticate(&service, &headers)?;
    let request = json_body(&bytes)?;
    blocking(move || service.put_document(&token, &id, &request))
        .await
        .map(ok)
}

async fn commands(
    State(service): Shared,
    headers: HeaderMap,
    Path(id): Path<String>,
    bytes: Bytes,
) -> ApiResult<Response> {
    let token = authenticate(&service, &headers)?;
    let request = json_body(&bytes)?;
    blocking(move || service.apply_commands(&token, &id, request))
        .await
        .map(ok)
}

async fn undo(State(service): Shared, headers: HeaderMap, Path(id): Path<String>, bytes: Bytes) -> ApiResult<Response> {
    let token = authenticate(&service, &headers)?;
    let request = optional_body(&bytes)?;
    blocking(move || service.undo(&token, &id, &request)).await.map(ok)
}

async fn redo(State(service): Shared, headers: HeaderMap, Path(id): Path<String>, bytes: Bytes) -> ApiResult<Response> {
    let token = authenticate(&service, &headers)?;
    let request = optional_body(&bytes)?;
    blocking(move || service.redo(&token, &id, &request)).await.map(ok)
}

async fn get_draft(State(service): Shared, headers: HeaderMap, Path(id): Path<String>) -> ApiResult<Response> {
    let token = authenticate(&service, &headers)?;
    blocking(move || service.get_draft(&token, &id)).await.map(ok)
}

async fn put_draft(
    State(service): Shared,
    headers: HeaderMap,
    Path(id): Path<String>,
    bytes: Bytes,
) -> ApiResult<Response> {
    let token = authenticate(&service, &headers)?;
    let request = json_body(&bytes)?;
    blocking(move || service.save_draft(&token, &id, &request)).await?;
    Ok(StatusCode::NO_CONTENT.into_response())
}

async fn delete_draft(State(service): Shared, headers: HeaderMap, Path(id): Path<String>) -> ApiResult<Response> {
    let token = authenticate(&service, &headers)?;
    blocking(move || service.delete_draft(&token, &id)).await?;
    Ok(StatusCode::NO_CONTENT.into_response())
}

async fn validate(
    State(service): Shared,
    headers: HeaderMap,
    Path(id): Path<String>,
    bytes: Bytes,
) -> ApiResult<Response> {
    let token = authenticate(&service, &headers)?;
    let request = optional_body(&bytes)?;
    blocking(move || service.validate(&token, &id, &request)).await.map(ok)
}

async fn view(
    State(service): Shared,
    headers: HeaderMap,
    Path((id, kind)): Path<(String, String)>,
    Query(mut params): Query<HashMap<String, String>>,
) -> ApiResult<Response> {
    let token = authenticate(&service, &headers)?;
    let subject = ViewSubject {
        layer: params.remove("layer"),
        scope: params.remove("scope"),
        milestone: params.remove("milestone"),
    };
    blocking(move || service.view(&token, &id, &kind, &subject))
        .await
        .map(ok)
}

async fn fallback() -> ApiError {
    ApiError(ServiceError::NotFound("no such endpoint".to_owned()))
}

pub fn router(service: Arc<Service>) -> Router {
    Router::new()
        .route("/api/login", post(login))
        .route("/api/files", get(list_files))
        .route("/api/files/{id}", get(get_file).put(put_file))
        .route("/api/files/{id}/commands", post(commands))
        .route("/api/files/{id}/undo", post(undo))
        .route("/api/files/{id}/redo", post(redo))
        .route(
            "/api/files/{id}/draft",
            get(get_draft).put(put_draft).delete(delete_draft),
        )
        .route("/api/files/{id}/validate", post(validate))
        .route("/api/files/{id}/views/{kind}", get(view))
        .fallback(fallback)
        .with_state(service)
}

/// Serves the API on `listener` until `shutdown` resolves, then finishes
/// the requests already in flight.
pub async fn serve(
    listener: TcpListener,
    service: Arc<Service>,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, router(service))
        .with_graceful_shutdown(shutdown)
        .await
}
