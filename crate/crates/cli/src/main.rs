//! `procdsl`: check, format and project process files, or run the editing
//! service.
//!
//! Exit codes: 0 clean, 1 warnings only (or `fmt --check` mismatch),
//! 2 errors, 3 I/O failure, 4 unknown view subject.

mod table;

use std::io::{self, BufRead, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use procdsl::{
    has_errors, parse, print, resolve, validate_text, views, Diagnostic, Severity, ViewError, ViewKind, ViewSubject,
};
use procdsl_service::config::{self, Config};
use procdsl_service::store::write_atomic;
use procdsl_service::{Service, ServiceError, StoreError};

const CLEAN: u8 = 0;
const WARNINGS: u8 = 1;
const ERRORS: u8 = 2;
const IO: u8 = 3;
const BAD_SUBJECT: u8 = 4;

#[derive(Parser)]
#[command(name = "procdsl", version, about = "Process file toolchain")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Report syntax and semantic diagnostics on stderr
    Check { path: PathBuf },
    /// Print the canonical form, or rewrite/verify it in place
    Fmt(FmtArgs),
    /// Render a view of a valid file
    View(ViewArgs),
    /// Run the HTTP service
    Serve(ServeArgs),
    /// Create a service account
    Adduser(AdduserArgs),
}

#[derive(Args)]
struct FmtArgs {
    path: PathBuf,
    /// Rewrite the file in place
    #[arg(long, conflicts_with = "check")]
    write: bool,
    /// Exit 1 when the file is not canonical; never writes
    #[arg(long)]
    check: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct ViewArgs {
    path: PathBuf,
    /// scope-plan, milestone-list, milestone-io or layer-involvement
    #[arg(value_parser = parse_kind)]
    kind: ViewKind,
    #[arg(long)]
    layer: Option<String>,
    #[arg(long)]
    scope: Option<String>,
    #[arg(long)]
    milestone: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

fn parse_kind(s: &str) -> Result<ViewKind, ViewError> {
    s.parse()
}

#[derive(Args)]
struct ServeArgs {
    #[arg(long, env = config::ADDR_VAR, default_value = config::DEFAULT_ADDR)]
    addr: SocketAddr,
    #[arg(long, env = config::DATA_DIR_VAR, default_value = config::DEFAULT_DATA_DIR)]
    data_dir: PathBuf,
    /// Session lifetime, e.g. 30m, 8h, 2d
    #[arg(long, env = config::SESSION_TTL_VAR, default_value = "8h", value_parser = parse_ttl)]
    session_ttl: Duration,
}

fn parse_ttl(s: &str) -> Result<Duration, String> {
    config::parse_duration(s).ok_or_else(|| format!("invalid duration `{s}`"))
}

#[derive(Args)]
struct AdduserArgs {
    username: String,
    #[arg(long, env = config::DATA_DIR_VAR, default_value = config::DEFAULT_DATA_DIR)]
    data_dir: PathBuf,
    /// Read from stdin when not given
    #[arg(long, env = "PROCDSL_PASSWORD", hide_env_values = true)]
    password: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Cmd::Check { path } => check(&path),
        Cmd::Fmt(args) => fmt(&args),
        Cmd::View(args) => view(&args),
        Cmd::Serve(args) => serve(args),
        Cmd::Adduser(args) => adduser(&args),
    };
    ExitCode::from(code)
}

fn read(path: &Path) -> Result<String, u8> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("{}: {e}", path.display());
        IO
    })
}

fn report(path: &Path, diagnostics: &[Diagnostic]) {
    let mut err = io::stderr().lock();
    for d in diagnostics {
        let (line, column) = d.pos.map_or((1, 1), |p| (p.line, p.column));
        let severity = match d.severity {
            Severity::Error => "ERROR",
            Severity::Warning => "WARNING",
        };
        let _ = writeln!(
            err,
            "{}:{line}:{column}: {severity} {} {}",
            path.display(),
            d.code,
            d.message
        );
    }
}

fn check(path: &Path) -> u8 {
    let text = match read(path) {
        Ok(text) => text,
        Err(code) => return code,
    };
    let diagnostics = validate_text(&text);
    report(path, &diagnostics);
    if has_errors(&diagnostics) {
        ERRORS
    } else if diagnostics.is_empty() {
        CLEAN
    } else {
        WARNINGS
    }
}

fn fmt(args: &FmtArgs) -> u8 {
    let text = match read(&args.path) {
        Ok(text) => text,
        Err(code) => return code,
    };
    let parsed = parse(&text);
    let model = match parsed.model {
        Some(model) if !has_errors(&parsed.diagnostics) => model,
        _ => {
            report(&args.path, &parsed.diagnostics);
            return ERRORS;
        }
    };
    let canonical = print(&model);
    if args.check {
        if canonical == text {
            return CLEAN;
        }
        eprintln!("{}: not canonically formatted", args.path.display());
        return WARNINGS;
    }
    if args.write {
        if canonical == text {
            return CLEAN;
        }
        return match write_atomic(&args.path, canonical.as_bytes()) {
            Ok(()) => CLEAN,
            Err(e) => {
                eprintln!("{e}");
                IO
            }
        };
    }
    match io::stdout().lock().write_all(canonical.as_bytes()) {
        Ok(()) => CLEAN,
        Err(_) => IO,
    }
}

fn view(args: &ViewArgs) -> u8 {
    let text = match read(&args.path) {
        Ok(text) => text,
        Err(code) => return code,
    };
    let diagnostics = validate_text(&text);
    if has_errors(&diagnostics) {
        report(&args.path, &diagnostics);
        return ERRORS;
    }
    let model = parse(&text).model.expect("parsed without errors");
    let resolved = resolve(&model).expect("resolved without errors");
    let subject = ViewSubject {
        layer: args.layer.clone(),
        scope: args.scope.clone(),
        milestone: args.milestone.clone(),
    };
    let view = match views::compute_view(&resolved, args.kind, &subject) {
        Ok(view) => view,
        Err(e) => {
            eprintln!("{}: {} {e}", args.path.display(), e.code());
            return match e {
                ViewError::UnknownSubject { .. } => BAD_SUBJECT,
                _ => ERRORS,
            };
        }
    };
    let rendered = match args.format {
        Format::Text => table::render(&view),
        Format::Json => serde_json::to_string_pretty(&view).expect("view models serialize") + "\n",
    };
    match io::stdout().lock().write_all(rendered.as_bytes()) {
        Ok(()) => CLEAN,
        Err(_) => IO,
    }
}

fn serve(args: ServeArgs) -> u8 {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()))
        .with_writer(io::stderr)
        .init();
    let config = Config {
        addr: args.addr,
        data_dir: args.data_dir,
        session_ttl: args.session_ttl,
    };
    let service = match Service::open(&config) {
        Ok(service) => Arc::new(service),
        Err(e) => {
            eprintln!("cannot open data directory {}: {e}", config.data_dir.display());
            return IO;
        }
    };
    let runtime = match tokio::runtime::Runtime::new() {
        Ok(runtime) => runtime,
        Err(e) => {
            eprintln!("cannot start runtime: {e}");
            return IO;
        }
    };
    runtime.block_on(async {
        let listener = match tokio::net::TcpListener::bind(config.addr).await {
            Ok(listener) => listener,
            Err(e) => {
                eprintln!("cannot bind {}: {e}", config.addr);
                return IO;
            }
        };
        let local = listener
            .local_addr()
            .map_or_else(|_| config.addr.to_string(), |a| a.to_string());
        tracing::info!(addr = %local, data_dir = %config.data_dir.display(), "listening");
        // scripts read this line to find an ephemeral port
        println!("listening on {local}");
        let _ = io::stdout().flush();
        let shutdown = async {
            let _ = tokio::signal::ctrl_c().await;
            tracing::info!("shutting down");
        };
        match procdsl_service::serve(listener, service, shutdown).await {
            Ok(()) => CLEAN,
            Err(e) => {
                eprintln!("server failed: {e}");
                IO
            }
        }
    })
}

fn adduser(args: &AdduserArgs) -> u8 {
    let password = match &args.password {
        Some(p) => p.clone(),
        None => {
            let mut line = String::new();
            if let Err(e) = io::stdin().lock().read_line(&mut line) {
                eprintln!("cannot read password: {e}");
                return IO;
            }
            line.trim_end_matches(['\r', '\n']).to_owned()
        }
    };
    if args.username.is_empty() || password.is_empty() {
        eprintln!("username and password must not be empty");
        return ERRORS;
    }
    let store = match procdsl_service::Store::open(&args.data_dir) {
        Ok(store) => store,
        Err(e) => {
            eprintln!("cannot open data directory {}: {e}", args.data_dir.display());
            return IO;
        }
    };
    match Service::new(store, Duration::ZERO).add_user(&args.username, &password) {
        Ok(()) => CLEAN,
        Err(ServiceError::Storage(StoreError::UserExists(_))) => {
            eprintln!("user `{}` already exists", args.username);
            ERRORS
        }
        Err(ServiceError::Storage(e)) => {
            eprintln!("{e}");
            IO
        }
        Err(e) => {
            eprintln!("{e}");
            ERRORS
        }
    }
}
