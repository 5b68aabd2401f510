//! File-backed persistence.
//!
//! Layout under the data directory:
//!
//! ```text
//! users.json          account name -> credential
//! index.json          document id -> owner, name, revision, sha256, updated_at
//! docs/<id>.proc      canonical text of the committed revision
//! drafts/<id>.proc    draft text, verbatim
//! ```
//!
//! A commit writes `docs/<id>.proc.next`, then atomically replaces the index
//! (the commit point), then renames the `.next` file into place. Opening the
//! store finishes or discards interrupted commits, so every document is at
//! its previous or its new revision after a crash.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {message}")]
    Corrupt { path: PathBuf, message: String },
    #[error("user `{0}` already exists")]
    UserExists(String),
}

type Result<T> = std::result::Result<T, StoreError>;

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> StoreError + '_ {
    move |source| StoreError::Io {
        path: path.to_owned(),
        source,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentMeta {
    pub owner: String,
    /// Header name of the process, for listings.
    pub name: String,
    pub revision: u64,
    pub sha256: String,
    pub updated_at: DateTime<Utc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UserRecord {
    /// Argon2 PHC string.
    pub credential: String,
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct Index {
    documents: BTreeMap<String, DocumentMeta>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct Users {
    users: BTreeMap<String, UserRecord>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes `bytes` to a temporary sibling, syncs it and renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let tmp = dir.join(format!(
        ".{}.{}.tmp",
        path.file_name().and_then(|n| n.to_str()).unwrap_or("file"),
        hex::encode(rand::random::<[u8; 6]>())
    ));
    let result = (|| {
        let mut file = File::create(&tmp)?;
        file.write_all(bytes)?;
        file.sync_all()?;
        fs::rename(&tmp, path)?;
        sync_dir(dir);
        Ok(())
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map_err(io_err(path))
}

fn sync_dir(dir: &Path) {
    // not supported everywhere; durability is best effort here
    if let Ok(d) = File::open(dir) {
        let _ = d.sync_all();
    }
}

fn read_json<T: Default + for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    match fs::read(path) {
        Ok(bytes) => serde_json::from_slice(&bytes).map_err(|e| StoreError::Corrupt {
            path: path.to_owned(),
            message: e.to_string(),
        }),
        Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(T::default()),
        Err(e) => Err(io_err(path)(e)),
    }
}

pub struct Store {
    root: PathBuf,
    index: Mutex<Index>,
    users: Mutex<()>,
}

impl Store {
    /// Opens (creating if needed) the data directory and recovers from any
    /// interrupted commit.
    pub fn open(root: impl Into<PathBuf>) -> Result<Store> {
        let root = root.into();
        for dir in [root.clone(), root.join("docs"), root.join("drafts")] {
            fs::create_dir_all(&dir).map_err(io_err(&dir))?;
        }
        let index_path = root.join("index.json");
        let index: Index = read_json(&index_path)?;
        let store = Store {
            root,
            index: Mutex::new(index),
            users: Mutex::new(()),
        };
        store.recover()?;
        // proves the directory is writable before anyone relies on it
        store.write_index(&store.index.lock().unwrap())?;
        Ok(store)
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn doc_path(&self, id: &str) -> PathBuf {
        self.root.join("docs").join(format!("{id}.proc"))
    }

    fn next_path(&self, id: &str) -> PathBuf {
        self.root.join("docs").join(format!("{id}.proc.next"))
    }

    fn draft_path(&self, id: &str) -> PathBuf {
        self.root.join("drafts").join(format!("{id}.proc"))
    }

    fn write_index(&self, index: &Index) -> Result<()> {
        let bytes = serde_json::to_vec_pretty(index).expect("index serializes");
        write_atomic(&self.root.join("index.json"), &bytes)
    }

    fn recover(&self) -> Result<()> {
        let index = self.index.lock().unwrap();
        for dir in [self.root.join("docs"), self.root.join("drafts"), self.root.clone()] {
            for entry in fs::read_dir(&dir).map_err(io_err(&dir))? {
                let path = entry.map_err(io_err(&dir))?.path();
                let Some(file) = path.file_name().and_then(|n| n.to_str()) else {
                    continue;
                };
                if file.starts_with('.') && file.ends_with(".tmp") {
                    fs::remove_file(&path).map_err(io_err(&path))?;
                    continue;
                }
                let Some(id) = file.strip_suffix(".proc.next") else {
                    continue;
                };
                let bytes = fs::read(&path).map_err(io_err(&path))?;
                let committed = index.documents.get(id).is_some_and(|m| m.sha256 == sha256_hex(&bytes));
                if committed {
                    let target = self.doc_path(id);
                    fs::rename(&path, &target).map_err(io_err(&target))?;
                } else {
                    fs::remove_file(&path).map_err(io_err(&path))?;
                }
            }
        }
        for (id, meta) in &index.documents {
            let path = self.doc_path(id);
            let bytes = fs::read(&path).map_err(io_err(&path))?;
            if sha256_hex(&bytes) != meta.sha256 {
                return Err(StoreError::Corrupt {
                    path,
                    message: format!("content does not match revision {} in the index", meta.revision),
                });
            }
        }
        Ok(())
    }

    pub fn meta(&self, id: &str) -> Option<DocumentMeta> {
        self.index.lock().unwrap().documents.get(id).cloned()
    }

    /// Documents of `owner`, ordered by id.
    pub fn list(&self, owner: &str) -> Vec<(String, DocumentMeta)> {
        self.index
            .lock()
            .unwrap()
            .documents
            .iter()
            .filter(|(_, m)| m.owner == owner)
            .map(|(id, m)| (id.clone(), m.clone()))
            .collect()
    }

    pub fn read(&self, id: &str) -> Result<String> {
        let path = self.doc_path(id);
        fs::read_to_string(&path).map_err(io_err(&path))
    }

    /// Stores `text` as revision `revision` of `id`.
    pub fn commit(&self, id: &str, owner: &str, name: &str, text: &str, revision: u64) -> Result<DocumentMeta> {
        let next = self.next_path(id);
        write_atomic(&next, text.as_bytes())?;
        let meta = DocumentMeta {
            owner: owner.to_owned(),
            name: name.to_owned(),
            revision,
            sha256: sha256_hex(text.as_bytes()),
            updated_at: Utc::now(),
        };
        {
            let mut index = self.index.lock().unwrap();
            let previous = index.documents.insert(id.to_owned(), meta.clone());
            if let Err(e) = self.write_index(&index) {
                match previous {
                    Some(p) => index.documents.insert(id.to_owned(), p),
                    None => index.documents.remove(id),
                };
                let _ = fs::remove_file(&next);
                return Err(e);
            }
        }
        let target = self.doc_path(id);
        fs::rename(&next, &target).map_err(io_err(&target))?;
        sync_dir(&self.root.join("docs"));
        Ok(meta)
    }

    pub fn read_draft(&self, id: &str) -> Result<Option<String>> {
        let path = self.draft_path(id);
        match fs::read_to_string(&path) {
            Ok(text) => Ok(Some(text)),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(io_err(&path)(e)),
        }
    }

    pub fn write_draft(&self, id: &str, text: &str) -> Result<()> {
        write_atomic(&self.draft_path(id), text.as_bytes())
    }

    /// Returns whether a draft existed.
    pub fn delete_draft(&self, id: &str) -> Result<bool> {
        let path = self.draft_path(id);
        match fs::remove_file(&path) {
            Ok(()) => Ok(true),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(false),
            Err(e) => Err(io_err(&path)(e)),
        }
    }

    fn users_path(&self) -> PathBuf {
        self.root.join("users.json")
    }

    /// Reads the account file on every call so accounts added by another
    /// process become visible without a restart.
    pub fn user(&self, name: &str) -> Result<Option<UserRecord>> {
        let _guard = self.users.lock().unwrap();
        let users: Users = read_json(&self.users_path())?;
        Ok(users.users.get(name).cloned())
    }

    pub fn add_user(&self, name: &str, record: UserRecord) -> Result<()> {
        let _guard = self.users.lock().unwrap();
        let path = self.users_path();
        let mut users: Users = read_json(&path)?;
        if users.users.contains_key(name) {
            return Err(StoreError::UserExists(name.to_owned()));
        }
        users.users.insert(name.to_owned(), record);
        write_atomic(&path, &serde_json::to_vec_pretty(&users).expect("users serialize"))
    }
}
