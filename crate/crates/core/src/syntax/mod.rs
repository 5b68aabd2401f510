//! The textual file format: tokenizer, parser and canonical printer.
//!
//! ```text
//! File      := "process" Header Layer* Milestone* Scope* "end"
//! Header    := "name" STRING "version" STRING "timeline" Timeline
//! Timeline  := "weeks" NUMBER | "calendar" DATE DATE
//! Layer     := "layer" IDENT "description" STRING
//! Milestone := "milestone" IDENT "position" NUMBER ["span" NUMBER NUMBER]
//!              ("result" Result*)? "description" STRING
//! Result    := "artifact" IDENT "description" STRING
//! Scope     := "scope" IDENT "layer" IDENT "description" STRING Resp*
//! Resp      := "responsibility" ("resp"|"cont"|"noti") "asmilestone" STRING
//! ```
//!
//! IDENT is an ASCII letter followed by letters, digits or `_` and may not be
//! a keyword. STRING is double-quoted on a single line with `\"` and `\\`
//! escapes. NUMBER is decimal digits, DATE is `YYYY-MM-DD`. `//` starts a
//! comment running to the end of the line.

mod lexer;
mod parser;
mod printer;

pub use lexer::{is_identifier, is_representable_string, tokenize, Keyword, Token, TokenKind};
pub use parser::{parse, ParseResult, SourceMap};
pub use printer::print;
