use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};
use std::time::Duration;

use argon2::password_hash::{PasswordHash, PasswordHasher, PasswordVerifier, SaltString};
use argon2::Argon2;
use chrono::{DateTime, Utc};
use serde::Serialize;

/// Argon2id PHC string with a fresh random salt.
pub fn hash_password(password: &str) -> String {
    let salt = SaltString::encode_b64(&rand::random::<[u8; 16]>()).expect("16 bytes is a valid salt");
    Argon2::default()
        .hash_password(password.as_bytes(), &salt)
        .expect("default parameters are valid")
        .to_string()
}

pub fn verify_password(password: &str, credential: &str) -> bool {
    PasswordHash::new(credential)
        .is_ok_and(|hash| Argon2::default().verify_password(password.as_bytes(), &hash).is_ok())
}

/// Burns the same work as a real check so unknown accounts cannot be told
/// apart by timing.
pub fn verify_nobody(password: &str) {
    static DUMMY: OnceLock<String> = OnceLock::new();
    let credential = DUMMY.get_or_init(|| hash_password("unused dummy password"));
    let _ = verify_password(password, credential);
}

#[derive(Debug, Clone, Serialize)]
pub struct Session {
    pub token: String,
    pub username: String,
    pub expires_at: DateTime<Utc>,
}

pub struct Sessions {
    ttl: chrono::Duration,
    live: Mutex<HashMap<String, Session>>,
}

impl Sessions {
    pub fn new(ttl: Duration) -> Sessions {
        Sessions {
            ttl: chrono::Duration::from_std(ttl).unwrap_or(chrono::Duration::MAX),
            live: Mutex::new(HashMap::new()),
        }
    }

    /// Opens a session with a 256-bit random token.
    pub fn open(&self, username: &str) -> Session {
        let now = Utc::now();
        let session = Session {
            token: hex::encode(rand::random::<[u8; 32]>()),
            username: username.to_owned(),
            expires_at: now.checked_add_signed(self.ttl).unwrap_or(DateTime::<Utc>::MAX_UTC),
        };
        let mut live = self.live.lock().unwrap();
        live.retain(|_, s| s.expires_at > now);
        live.insert(session.token.clone(), session.clone());
        session
    }

    /// The user behind a live token.
    pub fn user(&self, token: &str) -> Option<String> {
        let mut live = self.live.lock().unwrap();
        match live.get(token) {
            Some(s) if s.expires_at > Utc::now() => Some(s.username.clone()),
            Some(_) => {
                live.remove(token);
                None
            }
            None => None,
        }
    }
}
