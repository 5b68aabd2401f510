use std::fmt;

use serde::Serialize;

use crate::model::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

/// Stable diagnostic codes. The string form is part of the public contract
/// (CLI output, service responses).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Code {
    /// Character outside the lexical alphabet.
    LexChar,
    /// Unterminated string or bad escape.
    LexString,
    /// Unexpected token.
    ParseExpected,
    /// Premature end of input.
    ParseEof,
    /// Responsibility names no milestone.
    DanglingRef,
    /// Two milestones share a name.
    DupMilestone,
    /// Two layers share a name.
    DupLayer,
    /// Two result artifacts of one milestone share a name.
    DupResult,
    /// Duplicate (layer, scope) pair.
    DupScope,
    /// Two responsibilities of one scope name the same milestone.
    DupResp,
    /// Scope refers to an undeclared layer.
    UnknownLayer,
    /// Span start not before span end.
    TimeOrder,
    /// Position or span endpoint outside the timeline.
    PosBounds,
    /// Zero-week timeline or calendar end not after start.
    BadTimeline,
    /// Milestone without a responsible scope (warning).
    NoResponsible,
}

impl Code {
    pub const ALL: [Code; 15] = [
        Code::LexChar,
        Code::LexString,
        Code::ParseExpected,
        Code::ParseEof,
        Code::DanglingRef,
        Code::DupMilestone,
        Code::DupLayer,
        Code::DupResult,
        Code::DupScope,
        Code::DupResp,
        Code::UnknownLayer,
        Code::TimeOrder,
        Code::PosBounds,
        Code::BadTimeline,
        Code::NoResponsible,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Code::LexChar => "LEX_CHAR",
            Code::LexString => "LEX_STRING",
            Code::ParseExpected => "PARSE_EXPECTED",
            Code::ParseEof => "PARSE_EOF",
            Code::DanglingRef => "DANGLING_REF",
            Code::DupMilestone => "DUP_MILESTONE",
            Code::DupLayer => "DUP_LAYER",
            Code::DupResult => "DUP_RESULT",
            Code::DupScope => "DUP_SCOPE",
            Code::DupResp => "DUP_RESP",
            Code::UnknownLayer => "UNKNOWN_LAYER",
            Code::TimeOrder => "TIME_ORDER",
            Code::PosBounds => "POS_BOUNDS",
            Code::BadTimeline => "BAD_TIMELINE",
            Code::NoResponsible => "NO_RESPONSIBLE",
        }
    }

    pub fn severity(self) -> Severity {
        match self {
            Code::NoResponsible => Severity::Warning,
            _ => Severity::Error,
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Pos {
    pub line: u32,
    pub column: u32,
}

impl Pos {
    pub fn new(line: u32, column: u32) -> Self {
        Pos { line, column }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: Code,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pos: Option<Pos>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub node: Option<NodeId>,
}

impl Diagnostic {
    pub fn at(code: Code, pos: Pos, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: code.severity(),
            code,
            message: message.into(),
            pos: Some(pos),
            node: None,
        }
    }

    pub fn on(code: Code, node: NodeId, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: code.severity(),
            code,
            message: message.into(),
            pos: None,
            node: Some(node),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(pos) = self.pos {
            write!(f, "{pos}: ")?;
        }
        write!(f, "{} {} {}", self.severity, self.code, self.message)
    }
}

pub fn has_errors(diagnostics: &[Diagnostic]) -> bool {
    diagnostics.iter().any(Diagnostic::is_error)
}
