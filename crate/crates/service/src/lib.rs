//! HTTP document service for process files.
//!
//! Users log in with a password and receive a bearer token. Each document
//! belongs to one user and is stored as canonical text with a revision
//! number; writes name the revision they expect and fail with
//! `REVISION_CONFLICT` when it moved. Edits go through the command engine,
//! with undo/redo history kept per session on the server.
//!
//! | Method | Path | Body | Response |
//! |---|---|---|---|
//! | POST | `/api/login` | `{username, password}` | `{token, username, expires_at}` |
//! | GET | `/api/files` | | `{files: [{id, name, revision, updated_at}]}` |
//! | GET | `/api/files/{id}` | | `{id, text, revision, updated_at}` |
//! | PUT | `/api/files/{id}` | `{text, expected_revision, allow_invalid?}` | as GET |
//! | POST | `/api/files/{id}/commands` | `{expected_revision, commands: [...]}` | as GET |
//! | POST | `/api/files/{id}/undo`, `/redo` | `{expected_revision?}` or empty | as GET |
//! | GET | `/api/files/{id}/draft` | | `{draft: string or null}` |
//! | PUT | `/api/files/{id}/draft` | `{text}` | 204 |
//! | DELETE | `/api/files/{id}/draft` | | 204 |
//! | POST | `/api/files/{id}/validate` | `{text?}` or empty | `{valid, diagnostics}` |
//! | GET | `/api/files/{id}/views/{kind}?layer=&scope=&milestone=` | | view model |
//!
//! A document is created by a PUT with `expected_revision` 0; its first
//! revision is 1. Failures carry `{code, message, diagnostics?}`.

mod auth;
pub mod config;
mod http;
mod service;
pub mod store;

pub use auth::{hash_password, verify_password, Session};
pub use config::Config;
pub use http::{router, serve};
pub use service::{
    CommandsRequest, DocumentBody, DraftBody, DraftRequest, ErrorBody, FileList, FileSummary, HistoryRequest,
    LoginRequest, PutRequest, Service, ServiceError, ValidateBody, ValidateRequest,
};
pub use store::{Store, StoreError};
