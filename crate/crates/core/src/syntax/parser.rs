//! Recursive-descent parser with one token of lookahead.
//!
//! Errors are collected rather than returned early. After an error the
//! parser skips ahead to the next keyword that can start a declaration at the
//! current nesting level and carries on, so one run reports several
//! independent problems.

use std::collections::HashMap;

use chrono::NaiveDate;

use super::lexer::{lex, Keyword, Token, TokenKind};
use crate::diagnostic::{has_errors, Code, Diagnostic, Pos};
use crate::model::{
    build_model, Layer, Milestone, NodeId, ProcessHeader, ProcessModel, Responsibility, ResponsibilityKind,
    ResultArtifact, Scope, TimelineSpec,
};

/// Declaration positions of parsed nodes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SourceMap {
    positions: HashMap<NodeId, Pos>,
    timeline: Option<Pos>,
}

impl SourceMap {
    pub fn position(&self, id: NodeId) -> Option<Pos> {
        self.positions.get(&id).copied()
    }

    /// Fills in `pos` for diagnostics that only reference a node.
    pub fn locate(&self, diagnostics: &mut [Diagnostic]) {
        for diag in diagnostics {
            if diag.pos.is_none() {
                diag.pos = match diag.node {
                    Some(id) => self.position(id),
                    None if diag.code == Code::BadTimeline => self.timeline,
                    None => None,
                };
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct ParseResult {
    /// Present iff no Error-severity diagnostic was produced.
    pub model: Option<ProcessModel>,
    pub diagnostics: Vec<Diagnostic>,
    pub source_map: SourceMap,
}

impl ParseResult {
    pub fn into_result(self) -> Result<ProcessModel, Vec<Diagnostic>> {
        match self.model {
            Some(model) => Ok(model),
            None => Err(self.diagnostics),
        }
    }
}

pub fn parse(text: &str) -> ParseResult {
    let (tokens, mut diagnostics) = lex(text);
    let mut parser = Parser {
        tokens,
        index: 0,
        diagnostics: Vec::new(),
        positions: Vec::new(),
        timeline: None,
    };
    let parsed = parser.file();
    diagnostics.append(&mut parser.diagnostics);
    diagnostics.sort_by_key(|d| d.pos);

    let mut source_map = SourceMap::default();
    let model = match parsed {
        Some((header, layers, milestones, scopes)) if !has_errors(&diagnostics) => {
            let model = build_model(header, layers, milestones, scopes);
            source_map.positions = model.node_ids().into_iter().zip(parser.positions).collect();
            source_map.timeline = parser.timeline;
            Some(model)
        }
        _ => None,
    };
    ParseResult {
        model,
        diagnostics,
        source_map,
    }
}

/// Marker for an error that has already been reported.
struct Reported;

type PResult<T> = Result<T, Reported>;

type Declarations = (ProcessHeader, Vec<Layer>, Vec<Milestone>, Vec<Scope>);

/// Construct currently being parsed; decides which keywords may legally
/// follow it and therefore where a missing token most likely belongs.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Context {
    Header,
    Layer,
    Milestone,
    Artifact,
    Scope,
    Responsibility,
}

impl Context {
    fn follow(self) -> &'static [Keyword] {
        use Keyword::*;
        match self {
            Context::Header => &[Name, Version, Timeline, Layer, Milestone, Scope, End],
            Context::Layer => &[Layer, Milestone, Scope, End],
            Context::Milestone => &[Result, Description, Milestone, Scope, End],
            Context::Artifact => &[Artifact, Description, Milestone, Scope, End],
            Context::Scope | Context::Responsibility => &[Responsibility, Scope, End],
        }
    }
}

struct Parser {
    tokens: Vec<Token>,
    index: usize,
    diagnostics: Vec<Diagnostic>,
    /// Declaration positions in the same traversal order `build_model` uses
    /// to hand out ids.
    positions: Vec<Pos>,
    timeline: Option<Pos>,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.index]
    }

    fn peek_kind(&self) -> TokenKind {
        self.peek().kind
    }

    fn at(&self, keyword: Keyword) -> bool {
        self.peek_kind() == TokenKind::Keyword(keyword)
    }

    fn advance(&mut self) -> Token {
        let token = self.tokens[self.index].clone();
        if token.kind != TokenKind::Eof {
            self.index += 1;
        }
        token
    }

    fn previous(&self) -> Option<&Token> {
        self.index.checked_sub(1).map(|i| &self.tokens[i])
    }

    fn starts_line(&self) -> bool {
        match self.previous() {
            Some(prev) => self.peek().pos.line > prev.end.line,
            None => true,
        }
    }

    /// Reports that `expected` was wanted at the current token.
    fn expected(&mut self, expected: &str, context: Context) -> Reported {
        let found = self.peek().clone();
        let prev_end = self.previous().map(|t| t.end);
        if found.kind == TokenKind::Eof {
            if self.diagnostics.iter().any(|d| d.code == Code::ParseEof) {
                return Reported;
            }
            let pos = prev_end.unwrap_or(found.pos);
            self.diagnostics.push(Diagnostic::at(
                Code::ParseEof,
                pos,
                format!("unexpected end of input, expected {expected}"),
            ));
            return Reported;
        }
        // A keyword that opens the next line and may legally follow the
        // current construct means the current line stopped short.
        let belongs_to_previous_line = match found.kind {
            TokenKind::Keyword(k) => self.starts_line() && context.follow().contains(&k),
            _ => false,
        };
        let pos = match prev_end {
            Some(end) if belongs_to_previous_line => end,
            _ => found.pos,
        };
        self.diagnostics.push(Diagnostic::at(
            Code::ParseExpected,
            pos,
            format!("expected {expected}, found {}", found.describe()),
        ));
        Reported
    }

    fn keyword(&mut self, keyword: Keyword, context: Context) -> PResult<Token> {
        if self.at(keyword) {
            Ok(self.advance())
        } else {
            Err(self.expected(&format!("`{keyword}`"), context))
        }
    }

    fn identifier(&mut self, what: &str, context: Context) -> PResult<String> {
        if self.peek_kind() == TokenKind::Identifier {
            Ok(self.advance().text)
        } else {
            Err(self.expected(what, context))
        }
    }

    fn string(&mut self, context: Context) -> PResult<String> {
        if self.peek_kind() == TokenKind::String {
            Ok(self.advance().text)
        } else {
            Err(self.expected("a string", context))
        }
    }

    fn number(&mut self, context: Context) -> PResult<u32> {
        if self.peek_kind() != TokenKind::Number {
            return Err(self.expected("a number", context));
        }
        let token = self.advance();
        token.text.parse::<u32>().map_err(|_| {
            self.diagnostics.push(Diagnostic::at(
                Code::ParseExpected,
                token.pos,
                format!("expected a number up to {}, found `{}`", u32::MAX, token.text),
            ));
            Reported
        })
    }

    fn date(&mut self, context: Context) -> PResult<NaiveDate> {
        if self.peek_kind() != TokenKind::Date {
            return Err(self.expected("a date (YYYY-MM-DD)", context));
        }
        let token = self.advance();
        NaiveDate::parse_from_str(&token.text, "%Y-%m-%d").map_err(|_| {
            self.diagnostics.push(Diagnostic::at(
                Code::ParseExpected,
                token.pos,
                format!("expected a valid calendar date, found `{}`", token.text),
            ));
            Reported
        })
    }

    /// Skips tokens until one of `stops` (or end of input) is next.
    ///
    /// `layer` only counts when it opens a line: inside a scope it is an
    /// attribute, not a declaration.
    fn synchronize(&mut self, stops: &[Keyword]) {
        loop {
            match self.peek_kind() {
                TokenKind::Eof => return,
                TokenKind::Keyword(Keyword::Layer) if stops.contains(&Keyword::Layer) => {
                    if self.starts_line() {
                        return;
                    }
                }
                TokenKind::Keyword(k) if stops.contains(&k) => return,
                _ => {}
            }
            self.advance();
        }
    }

    fn file(&mut self) -> Option<Declarations> {
        const TOP: &[Keyword] = &[Keyword::Layer, Keyword::Milestone, Keyword::Scope, Keyword::End];

        let mut ok = true;
        if self.at(Keyword::Process) {
            self.advance();
        } else {
            self.expected("`process`", Context::Header);
            ok = false;
            if !self.at(Keyword::Name) {
                self.synchronize(TOP);
            }
        }

        let header = if self.at(Keyword::Name) || ok {
            match self.header() {
                Ok(header) => Some(header),
                Err(Reported) => {
                    self.synchronize(TOP);
                    None
                }
            }
        } else {
            None
        };

        let mut layers = Vec::new();
        let mut milestones = Vec::new();
        let mut scopes = Vec::new();
        // 0: layers, 1: milestones, 2: scopes
        let mut phase = 0;
        loop {
            let (rank, name) = match self.peek_kind() {
                TokenKind::Keyword(Keyword::Layer) => (0, "layer"),
                TokenKind::Keyword(Keyword::Milestone) => (1, "milestone"),
                TokenKind::Keyword(Keyword::Scope) => (2, "scope"),
                TokenKind::Keyword(Keyword::End) => {
                    self.advance();
                    break;
                }
                TokenKind::Eof => {
                    self.expected("`end`", Context::Header);
                    return None;
                }
                _ => {
                    let pos = self.peek().pos;
                    let found = self.peek().describe();
                    self.diagnostics.push(Diagnostic::at(
                        Code::ParseExpected,
                        pos,
                        format!("expected `layer`, `milestone`, `scope` or `end`, found {found}"),
                    ));
                    self.advance();
                    self.synchronize(TOP);
                    continue;
                }
            };
            if rank < phase {
                let pos = self.peek().pos;
                self.diagnostics.push(Diagnostic::at(
                    Code::ParseExpected,
                    pos,
                    format!(
                        "{name} declarations must come before {}",
                        ["", "milestones", "scopes"][phase]
                    ),
                ));
            }
            phase = phase.max(rank);
            let parsed = match rank {
                0 => self.layer().map(|l| layers.push(l)),
                1 => self.milestone().map(|m| milestones.push(m)),
                _ => self.scope().map(|s| scopes.push(s)),
            };
            if parsed.is_err() {
                self.synchronize(TOP);
            }
        }

        if self.peek_kind() != TokenKind::Eof {
            let found = self.peek().clone();
            self.diagnostics.push(Diagnostic::at(
                Code::ParseExpected,
                found.pos,
                format!("expected end of input after `end`, found {}", found.describe()),
            ));
        }
        header.map(|h| (h, layers, milestones, scopes))
    }

    fn header(&mut self) -> PResult<ProcessHeader> {
        let cx = Context::Header;
        self.keyword(Keyword::Name, cx)?;
        let name = self.string(cx)?;
        self.keyword(Keyword::Version, cx)?;
        let version = self.string(cx)?;
        self.timeline = Some(self.keyword(Keyword::Timeline, cx)?.pos);
        let timeline = match self.peek_kind() {
            TokenKind::Keyword(Keyword::Weeks) => {
                self.advance();
                TimelineSpec::Weeks {
                    length_weeks: self.number(cx)?,
                }
            }
            TokenKind::Keyword(Keyword::Calendar) => {
                self.advance();
                let start_date = self.date(cx)?;
                let end_date = self.date(cx)?;
                TimelineSpec::Calendar { start_date, end_date }
            }
            _ => return Err(self.expected("`weeks` or `calendar`", cx)),
        };
        Ok(ProcessHeader {
            name,
            version,
            timeline,
        })
    }

    fn layer(&mut self) -> PResult<Layer> {
        let cx = Context::Layer;
        let start = self.keyword(Keyword::Layer, cx)?.pos;
        let name = self.identifier("a layer name", cx)?;
        self.keyword(Keyword::Description, cx)?;
        let description = self.string(cx)?;
        self.positions.push(start);
        Ok(Layer::new(name, description))
    }

    fn milestone(&mut self) -> PResult<Milestone> {
        let cx = Context::Milestone;
        let start = self.keyword(Keyword::Milestone, cx)?.pos;
        let name = self.identifier("a milestone name", cx)?;
        self.keyword(Keyword::Position, cx)?;
        let position = self.number(cx)?;
        let mut milestone = Milestone::new(name, position, "");
        if self.at(Keyword::Span) {
            self.advance();
            let span_start = self.number(cx)?;
            let span_end = self.number(cx)?;
            milestone = milestone.with_span(span_start, span_end);
        }

        let mut result_positions = Vec::new();
        let mut failed = false;
        if self.at(Keyword::Result) {
            self.advance();
            while self.at(Keyword::Artifact) {
                match self.artifact() {
                    Ok((pos, artifact)) => {
                        result_positions.push(pos);
                        milestone.results.push(artifact);
                    }
                    Err(Reported) => {
                        failed = true;
                        self.synchronize(&[
                            Keyword::Artifact,
                            Keyword::Description,
                            Keyword::Layer,
                            Keyword::Milestone,
                            Keyword::Scope,
                            Keyword::End,
                        ]);
                        if !self.at(Keyword::Artifact) && !self.at(Keyword::Description) {
                            return Err(Reported);
                        }
                    }
                }
            }
        }

        let expected = if milestone.span.is_none() && milestone.results.is_empty() && !failed {
            "`span`, `result` or `description`"
        } else if milestone.results.is_empty() && !failed {
            "`result` or `description`"
        } else {
            "`artifact` or `description`"
        };
        if !self.at(Keyword::Description) {
            return Err(self.expected(expected, cx));
        }
        self.advance();
        milestone.description = self.string(cx)?;
        if failed {
            return Err(Reported);
        }
        self.positions.push(start);
        self.positions.extend(result_positions);
        Ok(milestone)
    }

    fn artifact(&mut self) -> PResult<(Pos, ResultArtifact)> {
        let cx = Context::Artifact;
        let start = self.keyword(Keyword::Artifact, cx)?.pos;
        let name = self.identifier("an artifact name", cx)?;
        self.keyword(Keyword::Description, cx)?;
        let description = self.string(cx)?;
        Ok((start, ResultArtifact::new(name, description)))
    }

    fn scope(&mut self) -> PResult<Scope> {
        let cx = Context::Scope;
        let start = self.keyword(Keyword::Scope, cx)?.pos;
        let name = self.identifier("a scope name", cx)?;
        self.keyword(Keyword::Layer, cx)?;
        let layer_name = self.identifier("a layer name", cx)?;
        self.keyword(Keyword::Description, cx)?;
        let description = self.string(cx)?;
        let mut scope = Scope::new(name, layer_name, description);

        let mut resp_positions = Vec::new();
        let mut failed = false;
        while self.at(Keyword::Responsibility) {
            match self.responsibility() {
                Ok((pos, resp)) => {
                    resp_positions.push(pos);
                    scope.responsibilities.push(resp);
                }
                Err(Reported) => {
                    failed = true;
                    self.synchronize(&[
                        Keyword::Responsibility,
                        Keyword::Layer,
                        Keyword::Milestone,
                        Keyword::Scope,
                        Keyword::End,
                    ]);
                }
            }
        }
        if failed {
            return Err(Reported);
        }
        self.positions.push(start);
        self.positions.extend(resp_positions);
        Ok(scope)
    }

    fn responsibility(&mut self) -> PResult<(Pos, Responsibility)> {
        let cx = Context::Responsibility;
        let start = self.keyword(Keyword::Responsibility, cx)?.pos;
        let kind = match self.peek_kind() {
            TokenKind::Keyword(Keyword::Resp) => ResponsibilityKind::Responsible,
            TokenKind::Keyword(Keyword::Cont) => ResponsibilityKind::Contributing,
            TokenKind::Keyword(Keyword::Noti) => ResponsibilityKind::Noticing,
            _ => return Err(self.expected("`resp`, `cont` or `noti`", cx)),
        };
        self.advance();
        self.keyword(Keyword::AsMilestone, cx)?;
        let target = self.string(cx)?;
        Ok((start, Responsibility::new(kind, target)))
    }
}
