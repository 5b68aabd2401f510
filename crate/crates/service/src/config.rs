use std::net::SocketAddr;
use std::path::PathBuf;
use std::time::Duration;

pub const ADDR_VAR: &str = "PROCDSL_ADDR";
pub const DATA_DIR_VAR: &str = "PROCDSL_DATA_DIR";
pub const SESSION_TTL_VAR: &str = "PROCDSL_SESSION_TTL";

pub const DEFAULT_ADDR: &str = "127.0.0.1:8080";
pub const DEFAULT_DATA_DIR: &str = "procdsl-data";
pub const DEFAULT_SESSION_TTL: Duration = Duration::from_secs(8 * 60 * 60);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub addr: SocketAddr,
    pub data_dir: PathBuf,
    pub session_ttl: Duration,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("invalid value `{value}` for {var}: {reason}")]
pub struct ConfigError {
    pub var: &'static str,
    pub value: String,
    pub reason: String,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            addr: DEFAULT_ADDR.parse().unwrap(),
            data_dir: PathBuf::from(DEFAULT_DATA_DIR),
            session_ttl: DEFAULT_SESSION_TTL,
        }
    }
}

impl Config {
    /// Reads `PROCDSL_ADDR`, `PROCDSL_DATA_DIR` and `PROCDSL_SESSION_TTL`,
    /// falling back to the defaults for unset variables.
    pub fn from_env() -> Result<Config, ConfigError> {
        Config::from_lookup(|var| std::env::var(var).ok())
    }

    pub fn from_lookup(lookup: impl Fn(&str) -> Option<String>) -> Result<Config, ConfigError> {
        let mut config = Config::default();
        if let Some(value) = lookup(ADDR_VAR) {
            config.addr = value.parse().map_err(|e: std::net::AddrParseError| ConfigError {
                var: ADDR_VAR,
                value: value.clone(),
                reason: e.to_string(),
            })?;
        }
        if let Some(value) = lookup(DATA_DIR_VAR) {
            config.data_dir = PathBuf::from(value);
        }
        if let Some(value) = lookup(SESSION_TTL_VAR) {
            config.session_ttl = parse_duration(&value).ok_or_else(|| ConfigError {
                var: SESSION_TTL_VAR,
                value: value.clone(),
                reason: "expected seconds or a number with suffix s, m, h or d".to_owned(),
            })?;
        }
        Ok(config)
    }
}

/// `90`, `90s`, `15m`, `8h`, `2d`.
pub fn parse_duration(text: &str) -> Option<Duration> {
    let text = text.trim();
    let (digits, unit) = match text.find(|c: char| !c.is_ascii_digit()) {
        Some(i) => text.split_at(i),
        None => (text, "s"),
    };
    let n: u64 = digits.parse().ok()?;
    let factor = match unit {
        "s" => 1,
        "m" => 60,
        "h" => 3600,
        "d" => 86400,
        _ => return None,
    };
    n.checked_mul(factor).map(Duration::from_secs)
}
