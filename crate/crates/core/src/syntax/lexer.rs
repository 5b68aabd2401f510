use std::fmt;
use std::iter::Peekable;
use std::str::Chars;

use crate::diagnostic::{Code, Diagnostic, Pos};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Keyword {
    Process,
    End,
    Name,
    Version,
    Timeline,
    Weeks,
    Calendar,
    Layer,
    Milestone,
    Position,
    Span,
    Result,
    Artifact,
    Description,
    Scope,
    Responsibility,
    Resp,
    Cont,
    Noti,
    AsMilestone,
}

impl Keyword {
    pub const ALL: [Keyword; 20] = [
        Keyword::Process,
        Keyword::End,
        Keyword::Name,
        Keyword::Version,
        Keyword::Timeline,
        Keyword::Weeks,
        Keyword::Calendar,
        Keyword::Layer,
        Keyword::Milestone,
        Keyword::Position,
        Keyword::Span,
        Keyword::Result,
        Keyword::Artifact,
        Keyword::Description,
        Keyword::Scope,
        Keyword::Responsibility,
        Keyword::Resp,
        Keyword::Cont,
        Keyword::Noti,
        Keyword::AsMilestone,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Keyword::Process => "process",
            Keyword::End => "end",
            Keyword::Name => "name",
            Keyword::Version => "version",
            Keyword::Timeline => "timeline",
            Keyword::Weeks => "weeks",
            Keyword::Calendar => "calendar",
            Keyword::Layer => "layer",
            Keyword::Milestone => "milestone",
            Keyword::Position => "position",
            Keyword::Span => "span",
            Keyword::Result => "result",
            Keyword::Artifact => "artifact",
            Keyword::Description => "description",
            Keyword::Scope => "scope",
            Keyword::Responsibility => "responsibility",
            Keyword::Resp => "resp",
            Keyword::Cont => "cont",
            Keyword::Noti => "noti",
            Keyword::AsMilestone => "asmilestone",
        }
    }

    pub fn from_word(word: &str) -> Option<Keyword> {
        Keyword::ALL.into_iter().find(|k| k.as_str() == word)
    }
}

impl fmt::Display for Keyword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Keyword(Keyword),
    Identifier,
    String,
    Number,
    Date,
    Eof,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    /// Lexeme text; for strings the unescaped contents without quotes.
    pub text: String,
    /// Position of the first character of the lexeme.
    pub pos: Pos,
    /// Position just past the last character of the lexeme.
    pub end: Pos,
}

impl Token {
    pub fn describe(&self) -> String {
        match self.kind {
            TokenKind::Keyword(k) => format!("`{k}`"),
            TokenKind::Identifier => format!("identifier `{}`", self.text),
            TokenKind::String => "string".to_owned(),
            TokenKind::Number => format!("number `{}`", self.text),
            TokenKind::Date => format!("date `{}`", self.text),
            TokenKind::Eof => "end of input".to_owned(),
        }
    }
}

/// True when `word` is a well-formed identifier that is not a keyword.
pub fn is_identifier(word: &str) -> bool {
    let mut chars = word.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && Keyword::from_word(word).is_none()
}

/// True when `text` can be written as a string literal (no line breaks).
pub fn is_representable_string(text: &str) -> bool {
    !text.contains(['\n', '\r'])
}

/// Splits `text` into tokens. Comments and whitespace are dropped; the
/// stream always ends with an end-of-file token.
pub fn tokenize(text: &str) -> Result<Vec<Token>, Vec<Diagnostic>> {
    let (tokens, diagnostics) = lex(text);
    if diagnostics.is_empty() {
        Ok(tokens)
    } else {
        Err(diagnostics)
    }
}

/// Error-tolerant lexing: malformed lexemes are reported and skipped (or, for
/// unterminated strings, emitted as-is) so parsing can continue.
pub(crate) fn lex(text: &str) -> (Vec<Token>, Vec<Diagnostic>) {
    let mut lexer = Lexer {
        chars: text.chars().peekable(),
        line: 1,
        column: 1,
        tokens: Vec::new(),
        diagnostics: Vec::new(),
    };
    lexer.run();
    (lexer.tokens, lexer.diagnostics)
}

struct Lexer<'a> {
    chars: Peekable<Chars<'a>>,
    line: u32,
    column: u32,
    tokens: Vec<Token>,
    diagnostics: Vec<Diagnostic>,
}

impl Lexer<'_> {
    fn pos(&self) -> Pos {
        Pos::new(self.line, self.column)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn push(&mut self, kind: TokenKind, text: String, pos: Pos) {
        let end = self.pos();
        self.tokens.push(Token { kind, text, pos, end });
    }

    fn run(&mut self) {
        while let Some(&c) = self.chars.peek() {
            let start = self.pos();
            match c {
                ' ' | '\t' | '\r' | '\n' => {
                    self.bump();
                }
                '/' => {
                    self.bump();
                    if self.chars.peek() == Some(&'/') {
                        while self.chars.peek().is_some_and(|&c| c != '\n') {
                            self.bump();
                        }
                    } else {
                        self.diagnostics
                            .push(Diagnostic::at(Code::LexChar, start, "unexpected character `/`"));
                    }
                }
                '"' => self.string(start),
                c if c.is_ascii_digit() => self.number_or_date(start),
                c if c.is_ascii_alphabetic() => self.word(start),
                other => {
                    self.bump();
                    self.diagnostics.push(Diagnostic::at(
                        Code::LexChar,
                        start,
                        format!("unexpected character {other:?}"),
                    ));
                }
            }
        }
        let pos = self.pos();
        self.push(TokenKind::Eof, String::new(), pos);
    }

    fn string(&mut self, start: Pos) {
        self.bump();
        let mut value = String::new();
        loop {
            match self.chars.peek().copied() {
                None | Some('\n') | Some('\r') => {
                    self.diagnostics
                        .push(Diagnostic::at(Code::LexString, start, "unterminated string"));
                    break;
                }
                Some('"') => {
                    self.bump();
                    break;
                }
                Some('\\') => {
                    let escape_pos = self.pos();
                    self.bump();
                    match self.chars.peek().copied() {
                        Some(c @ ('"' | '\\')) => {
                            self.bump();
                            value.push(c);
                        }
                        other => {
                            self.diagnostics.push(Diagnostic::at(
                                Code::LexString,
                                escape_pos,
                                match other {
                                    Some(c) if c != '\n' && c != '\r' => {
                                        format!("invalid escape `\\{c}`")
                                    }
                                    _ => "invalid escape at end of line".to_owned(),
                                },
                            ));
                            if other.is_some_and(|c| c != '\n' && c != '\r') {
                                self.bump();
                            }
                        }
                    }
                }
                Some(c) => {
                    self.bump();
                    value.push(c);
                }
            }
        }
        self.push(TokenKind::String, value, start);
    }

    fn number_or_date(&mut self, start: Pos) {
        let mut digits = String::new();
        while let Some(&c) = self.chars.peek().filter(|c| c.is_ascii_digit()) {
            digits.push(c);
            self.bump();
        }
        if digits.len() == 4 && self.chars.peek() == Some(&'-') {
            // YYYY-MM-DD; anything shorter falls through to a stray `-`.
            let rest: String = self.chars.clone().take(6).collect();
            let bytes = rest.as_bytes();
            let shaped = bytes.len() == 6
                && bytes[0] == b'-'
                && bytes[1].is_ascii_digit()
                && bytes[2].is_ascii_digit()
                && bytes[3] == b'-'
                && bytes[4].is_ascii_digit()
                && bytes[5].is_ascii_digit();
            let trailing_digit = self.chars.clone().nth(6).is_some_and(|c| c.is_ascii_digit());
            if shaped && !trailing_digit {
                for _ in 0..6 {
                    self.bump();
                }
                digits.push_str(&rest);
                self.push(TokenKind::Date, digits, start);
                return;
            }
        }
        self.push(TokenKind::Number, digits, start);
    }

    fn word(&mut self, start: Pos) {
        let mut word = String::new();
        while let Some(&c) = self.chars.peek().filter(|c| c.is_ascii_alphanumeric() || **c == '_') {
            word.push(c);
            self.bump();
        }
        let kind = match Keyword::from_word(&word) {
            Some(k) => TokenKind::Keyword(k),
            None => TokenKind::Identifier,
        };
        self.push(kind, word, start);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(text: &str) -> Vec<TokenKind> {
        tokenize(text).unwrap().into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn single_keyword() {
        let tokens = tokenize("process").unwrap();
        assert_eq!(tokens.len(), 2);
        assert_eq!(tokens[0].kind, TokenKind::Keyword(Keyword::Process));
        assert_eq!(tokens[0].pos, Pos::new(1, 1));
        assert_eq!(tokens[1].kind, TokenKind::Eof);
    }

    #[test]
    fn string_contents_are_unquoted() {
        let tokens = tokenize("\"a b\"").unwrap();
        assert_eq!(tokens[0].kind, TokenKind::String);
        assert_eq!(tokens[0].text, "a b");
        assert_eq!(tokens[0].end, Pos::new(1, 6));
    }

    #[test]
    fn milestone_line() {
        assert_eq!(
            kinds("milestone M1 position 3"),
            vec![
                TokenKind::Keyword(Keyword::Milestone),
                TokenKind::Identifier,
                TokenKind::Keyword(Keyword::Position),
                TokenKind::Number,
                TokenKind::Eof,
            ]
        );
    }

    #[test]
    fn escapes() {
        let tokens = tokenize(r#""say \"hi\" \\ ok""#).unwrap();
        assert_eq!(tokens[0].text, r#"say "hi" \ ok"#);
    }

    #[test]
    fn dates_and_numbers() {
        let tokens = tokenize("2024-01-31 2024 7").unwrap();
        assert_eq!(tokens[0].kind, TokenKind::Date);
        assert_eq!(tokens[0].text, "2024-01-31");
        assert_eq!(tokens[1].kind, TokenKind::Number);
        assert_eq!(tokens[2].kind, TokenKind::Number);
    }

    #[test]
    fn comments_and_positions() {
        let tokens = tokenize("// header\n  end // trailing\n").unwrap();
        assert_eq!(tokens[0].kind, TokenKind::Keyword(Keyword::End));
        assert_eq!(tokens[0].pos, Pos::new(2, 3));
    }

    #[test]
    fn bad_character() {
        let errs = tokenize("process @").unwrap_err();
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].code, Code::LexChar);
        assert_eq!(errs[0].pos, Some(Pos::new(1, 9)));
    }

    #[test]
    fn unterminated_string() {
        let errs = tokenize("description \"open\nend").unwrap_err();
        assert_eq!(errs[0].code, Code::LexString);
        assert_eq!(errs[0].pos, Some(Pos::new(1, 13)));
        // lexing continues on the next line
        let (tokens, _) = lex("description \"open\nend");
        assert_eq!(tokens[2].kind, TokenKind::Keyword(Keyword::End));
    }

    #[test]
    fn invalid_escape() {
        let errs = tokenize(r#""a\nb""#).unwrap_err();
        assert_eq!(errs[0].code, Code::LexString);
    }

    #[test]
    fn identifiers() {
        assert!(is_identifier("M1"));
        assert!(is_identifier("quality_gate_2"));
        assert!(!is_identifier("1M"));
        assert!(!is_identifier("milestone"));
        assert!(!is_identifier(""));
        assert!(!is_identifier("a-b"));
        assert!(!is_identifier("Ä"));
    }
}
