//! Toolchain for a small textual language describing milestone plans of
//! organizational processes.
//!
//! A process file declares a header with a timeline, organizational layers,
//! milestones with their result artifacts, and scopes (units within a layer)
//! holding typed responsibilities for milestones. The crate parses and
//! canonically prints that format, resolves responsibility references,
//! validates semantic rules, projects the model into per-view listings, and
//! edits it through reversible commands.
//!
//! ```
//! use procdsl::{parse, print, resolve, validate};
//!
//! let text = "process name \"Launch\" version \"1\" timeline weeks 10 end";
//! let model = parse(text).into_result().unwrap();
//! let resolved = resolve(&model).unwrap();
//! assert!(validate(&resolved).is_empty());
//! assert!(print(&model).starts_with("process\n  name \"Launch\"\n"));
//! ```

pub mod command;
mod diagnostic;
pub mod model;
mod resolve;
pub mod syntax;
mod validate;
pub mod views;

pub use command::{Command, CommandError, Document, History, SpanArg, Target};
pub use diagnostic::{has_errors, Code, Diagnostic, Pos, Severity};
pub use model::{
    build_model, Layer, Milestone, Node, NodeId, ProcessHeader, ProcessModel, Responsibility, ResponsibilityKind,
    ResultArtifact, Scope, Span, TimelinePosition, TimelineSpec,
};
pub use resolve::{resolve, ResolvedModel};
pub use syntax::{parse, print, tokenize, ParseResult, SourceMap};
pub use validate::{is_valid, validate, validate_text};
pub use views::{ViewError, ViewKind, ViewModel, ViewSubject};
