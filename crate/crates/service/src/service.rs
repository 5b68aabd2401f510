use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use chrono::{DateTime, Utc};
use procdsl::views::compute_view;
use procdsl::{
    has_errors, parse, print, resolve, validate, Command, CommandError, Diagnostic, Document, ProcessModel, ViewError,
    ViewKind, ViewModel, ViewSubject,
};
use serde::{Deserialize, Serialize};

use crate::auth::{hash_password, verify_nobody, verify_password, Session, Sessions};
use crate::config::Config;
use crate::store::{DocumentMeta, Store, StoreError, UserRecord};

#[derive(Debug, thiserror::Error)]
pub enum ServiceError {
    #[error("unknown user or wrong password")]
    AuthFailed,
    #[error("missing, unknown or expired session token")]
    AuthRequired,
    #[error("document `{0}` belongs to another user")]
    Forbidden(String),
    #[error("no document `{0}`")]
    NotFound(String),
    #[error("expected revision {expected}, document is at revision {actual}")]
    RevisionConflict { expected: u64, actual: u64 },
    #[error("document has errors")]
    ValidationFailed(Vec<Diagnostic>),
    #[error(transparent)]
    Command(#[from] CommandError),
    #[error(transparent)]
    View(#[from] ViewError),
    #[error("{0}")]
    BadRequest(String),
    #[error("invalid document id `{0}`: use 1 to 64 of A-Z a-z 0-9 _ -")]
    InvalidId(String),
    #[error("storage failure: {0}")]
    Storage(#[from] StoreError),
}

impl ServiceError {
    pub fn code(&self) -> &'static str {
        match self {
            ServiceError::AuthFailed => "AUTH_FAILED",
            ServiceError::AuthRequired => "AUTH_REQUIRED",
            ServiceError::Forbidden(_) => "FORBIDDEN",
            ServiceError::NotFound(_) => "NOT_FOUND",
            ServiceError::RevisionConflict { .. } => "REVISION_CONFLICT",
            ServiceError::ValidationFailed(_) => "VALIDATION_FAILED",
            ServiceError::Command(e) => e.code(),
            ServiceError::View(e) => e.code(),
            ServiceError::BadRequest(_) => "BAD_REQUEST",
            ServiceError::InvalidId(_) => "INVALID_ID",
            ServiceError::Storage(_) => "STORAGE_FAILURE",
        }
    }

    pub fn status(&self) -> u16 {
        match self {
            ServiceError::AuthFailed | ServiceError::AuthRequired => 401,
            ServiceError::Forbidden(_) => 403,
            ServiceError::NotFound(_) => 404,
            ServiceError::RevisionConflict { .. } => 409,
            ServiceError::ValidationFailed(_) | ServiceError::Command(_) => 422,
            ServiceError::View(ViewError::UnknownSubject { .. }) => 404,
            ServiceError::View(_) | ServiceError::BadRequest(_) | ServiceError::InvalidId(_) => 400,
            ServiceError::Storage(_) => 500,
        }
    }

    pub fn body(&self) -> ErrorBody {
        ErrorBody {
            code: self.code().to_owned(),
            message: self.to_string(),
            diagnostics: match self {
                ServiceError::ValidationFailed(d) => Some(d.clone()),
                _ => None,
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, ServiceError>;

/// Error payload of every failed request.
#[derive(Debug, Clone, Serialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<Vec<Diagnostic>>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct LoginRequest {
    pub username: String,
    pub password: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct FileSummary {
    pub id: String,
    pub name: String,
    pub revision: u64,
    pub updated_at: DateTime<Utc>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FileList {
    pub files: Vec<FileSummary>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DocumentBody {
    pub id: String,
    pub text: String,
    pub revision: u64,
    pub updated_at: DateTime<Utc>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct PutRequest {
    pub text: String,
    pub expected_revision: u64,
    #[serde(default)]
    pub allow_invalid: bool,
}

#[derive(Debug, Clone, Deserialize)]
pub struct CommandsRequest {
    pub expected_revision: u64,
    pub commands: Vec<Command>,
}

#[derive(Debug, Clone, Default, Deserialize)]
pub struct HistoryRequest {
    #[serde(default)]
    pub expected_revision: Option<u64>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct DraftRequest {
    pub text: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct DraftBody {
    pub draft: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
pub struct ValidateRequest {
    #[serde(default)]
    pub text: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidateBody {
    pub valid: bool,
    pub diagnostics: Vec<Diagnostic>,
}

fn check_id(id: &str) -> Result<()> {
    let ok = (1..=64).contains(&id.len()) && id.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'-');
    if ok {
        Ok(())
    } else {
        Err(ServiceError::InvalidId(id.to_owned()))
    }
}

/// Parses and validates `text`, returning the model when it parses and all
/// diagnostics with source positions.
fn analyze(text: &str) -> (Option<ProcessModel>, Vec<Diagnostic>) {
    let parsed = parse(text);
    let Some(model) = parsed.model else {
        return (None, parsed.diagnostics);
    };
    let mut diagnostics = match resolve(&model) {
        Ok(resolved) => validate(&resolved),
        Err(errors) => errors,
    };
    parsed.source_map.locate(&mut diagnostics);
    (Some(model), diagnostics)
}

/// Editing state of one session on one document, valid while the document
/// stays at `revision`.
struct History {
    document: Document,
    revision: u64,
}

#[derive(Default)]
struct Slot {
    histories: HashMap<String, History>,
}

/// All document operations, independent of the transport.
///
/// Mutations of one document are serialized by a per-document lock; work on
/// different documents proceeds in parallel.
pub struct Service {
    store: Store,
    sessions: Sessions,
    slots: Mutex<HashMap<String, Arc<Mutex<Slot>>>>,
}

impl Service {
    pub fn open(config: &Config) -> std::result::Result<Service, StoreError> {
        Ok(Service::new(Store::open(&config.data_dir)?, config.session_ttl))
    }

    pub fn new(store: Store, session_ttl: std::time::Duration) -> Service {
        Service {
            store,
            sessions: Sessions::new(session_ttl),
            slots: Mutex::new(HashMap::new()),
        }
    }

    pub fn store(&self) -> &Store {
        &self.store
    }

    pub fn add_user(&self, username: &str, password: &str) -> Result<()> {
        if username.is_empty() || username.chars().any(|c| c.is_control()) {
            return Err(ServiceError::BadRequest(
                "user names must be non-empty and printable".into(),
            ));
        }
        self.store.add_user(
            username,
            UserRecord {
                credential: hash_password(password),
            },
        )?;
        Ok(())
    }

    fn slot(&self, id: &str) -> Arc<Mutex<Slot>> {
        self.slots.lock().unwrap().entry(id.to_owned()).or_default().clone()
    }

    fn user(&self, token: &str) -> Result<String> {
        self.sessions.user(token).ok_or(ServiceError::AuthRequired)
    }

    /// The user a live token belongs to.
    pub fn session_user(&self, token: &str) -> Result<String> {
        self.user(token)
    }

    fn owned(&self, user: &str, id: &str) -> Result<DocumentMeta> {
        check_id(id)?;
        match self.store.meta(id) {
            None => Err(ServiceError::NotFound(id.to_owned())),
            Some(meta) if meta.owner != user => Err(ServiceError::Forbidden(id.to_owned())),
            Some(meta) => Ok(meta),
        }
    }

    fn expect_revision(meta: &DocumentMeta, expected: u64) -> Result<()> {
        if meta.revision == expected {
            Ok(())
        } else {
            Err(ServiceError::RevisionConflict {
                expected,
                actual: meta.revision,
            })
        }
    }

    pub fn login(&self, request: &LoginRequest) -> Result<Session> {
        match self.store.user(&request.username)? {
            Some(record) if verify_password(&request.password, &record.credential) => {
                Ok(self.sessions.open(&request.username))
            }
            Some(_) => Err(ServiceError::AuthFailed),
            None => {
                verify_nobody(&request.password);
                Err(ServiceError::AuthFailed)
            }
        }
    }

    pub fn list_files(&self, token: &str) -> Result<FileList> {
        let user = self.user(token)?;
        let files = self
            .store
            .list(&user)
            .into_iter()
            .map(|(id, meta)| FileSummary {
                id,
                name: meta.name,
                revision: meta.revision,
                updated_at: meta.updated_at,
            })
            .collect();
        Ok(FileList { files })
    }

    pub fn get_document(&self, token: &str, id: &str) -> Result<DocumentBody> {
        let user = self.user(token)?;
        self.owned(&user, id)?;
        let slot = self.slot(id);
        let _guard = slot.lock().unwrap();
        let meta = self.owned(&user, id)?;
        Ok(DocumentBody {
            id: id.to_owned(),
            text: self.store.read(id)?,
            revision: meta.revision,
            updated_at: meta.updated_at,
        })
    }

    /// Creates (with `expected_revision` 0) or replaces a document.
    pub fn put_document(&self, token: &str, id: &str, request: &PutRequest) -> Result<DocumentBody> {
        let user = self.user(token)?;
        check_id(id)?;
        let slot = self.slot(id);
        let _guard = slot.lock().unwrap();
        let current = match self.store.meta(id) {
            Some(meta) if meta.owner != user => return Err(ServiceError::Forbidden(id.to_owned())),
            Some(meta) => meta.revision,
            None => 0,
        };
        if current != request.expected_revision {
            return Err(ServiceError::RevisionConflict {
                expected: request.expected_revision,
                actual: current,
            });
        }
        let (model, diagnostics) = analyze(&request.text);
        let Some(model) = model else {
            return Err(ServiceError::ValidationFailed(diagnostics));
        };
        if has_errors(&diagnostics) && !request.allow_invalid {
            return Err(ServiceError::ValidationFailed(diagnostics));
        }
        let text = print(&model);
        let meta = self.store.commit(id, &user, &model.header().name, &text, current + 1)?;
        Ok(DocumentBody {
            id: id.to_owned(),
            text,
            revision: meta.revision,
            updated_at: meta.updated_at,
        })
    }

    /// Runs `step` on the caller's history for `id` and commits the result.
    fn edit(
        &self,
        token: &str,
        id: &str,
        expected: Option<u64>,
        step: impl FnOnce(&mut Document) -> std::result::Result<bool, CommandError>,
    ) -> Result<DocumentBody> {
        let user = self.user(token)?;
        self.owned(&user, id)?;
        let slot = self.slot(id);
        let mut slot = slot.lock().unwrap();
        let meta = self.owned(&user, id)?;
        if let Some(expected) = expected {
            Self::expect_revision(&meta, expected)?;
        }

        // a history only applies to the revision it produced
        let mut history = match slot.histories.remove(token) {
            Some(h) if h.revision == meta.revision => h,
            _ => {
                let (model, diagnostics) = analyze(&self.store.read(id)?);
                History {
                    document: Document::new(model.ok_or(ServiceError::ValidationFailed(diagnostics))?),
                    revision: meta.revision,
                }
            }
        };

        let changed = match step(&mut history.document) {
            Ok(changed) => changed,
            Err(e) => {
                slot.histories.insert(token.to_owned(), history);
                return Err(e.into());
            }
        };
        if !changed {
            slot.histories.insert(token.to_owned(), history);
            return Ok(DocumentBody {
                id: id.to_owned(),
                text: self.store.read(id)?,
                revision: meta.revision,
                updated_at: meta.updated_at,
            });
        }
        let model = history.document.model();
        let text = print(model);
        let committed = self
            .store
            .commit(id, &user, &model.header().name, &text, meta.revision + 1)?;
        history.revision = committed.revision;
        slot.histories.insert(token.to_owned(), history);
        Ok(DocumentBody {
            id: id.to_owned(),
            text,
            revision: committed.revision,
            updated_at: committed.updated_at,
        })
    }

    /// Applies a batch atomically; an empty batch changes nothing.
    pub fn apply_commands(&self, token: &str, id: &str, request: CommandsRequest) -> Result<DocumentBody> {
        self.edit(token, id, Some(request.expected_revision), |doc| {
            let empty = request.commands.is_empty();
            doc.apply_batch(request.commands)?;
            Ok(!empty)
        })
    }

    pub fn undo(&self, token: &str, id: &str, request: &HistoryRequest) -> Result<DocumentBody> {
        self.edit(token, id, request.expected_revision, |doc| doc.undo().map(|_| true))
    }

    pub fn redo(&self, token: &str, id: &str, request: &HistoryRequest) -> Result<DocumentBody> {
        self.edit(token, id, request.expected_revision, |doc| doc.redo().map(|_| true))
    }

    pub fn get_draft(&self, token: &str, id: &str) -> Result<DraftBody> {
        let user = self.user(token)?;
        self.owned(&user, id)?;
        Ok(DraftBody {
            draft: self.store.read_draft(id)?,
        })
    }

    pub fn save_draft(&self, token: &str, id: &str, request: &DraftRequest) -> Result<()> {
        let user = self.user(token)?;
        self.owned(&user, id)?;
        let slot = self.slot(id);
        let _guard = slot.lock().unwrap();
        self.store.write_draft(id, &request.text)?;
        Ok(())
    }

    pub fn delete_draft(&self, token: &str, id: &str) -> Result<()> {
        let user = self.user(token)?;
        self.owned(&user, id)?;
        let slot = self.slot(id);
        let _guard = slot.lock().unwrap();
        self.store.delete_draft(id)?;
        Ok(())
    }

    /// Validates the submitted text, or the stored document without one.
    pub fn validate(&self, token: &str, id: &str, request: &ValidateRequest) -> Result<ValidateBody> {
        let user = self.user(token)?;
        self.owned(&user, id)?;
        let text = match &request.text {
            Some(text) => text.clone(),
            None => self.get_document(token, id)?.text,
        };
        let (_, diagnostics) = analyze(&text);
        Ok(ValidateBody {
            valid: !has_errors(&diagnostics),
            diagnostics,
        })
    }

    pub fn view(&self, token: &str, id: &str, kind: &str, subject: &ViewSubject) -> Result<ViewModel> {
        let user = self.user(token)?;
        self.owned(&user, id)?;
        let kind: ViewKind = kind.parse()?;
        let text = self.get_document(token, id)?.text;
        let (model, diagnostics) = analyze(&text);
        let model = match model {
            Some(m) if !has_errors(&diagnostics) => m,
            _ => return Err(ServiceError::ValidationFailed(diagnostics)),
        };
        let resolved = resolve(&model).map_err(ServiceError::ValidationFailed)?;
        Ok(compute_view(&resolved, kind, subject)?)
    }
}
