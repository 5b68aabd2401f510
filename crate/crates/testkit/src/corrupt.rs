use procdsl::syntax::{tokenize, Token, TokenKind};

/// A copy of a source text with exactly one token damaged.
#[derive(Debug, Clone)]
pub struct Corruption {
    pub text: String,
    /// 1-based line of the damaged token.
    pub line: u32,
    pub description: String,
}

fn byte_offset(text: &str, line: u32, column: u32) -> usize {
    let mut current = 1;
    let mut start = 0;
    if line > 1 {
        for (i, c) in text.char_indices() {
            if c == '\n' {
                current += 1;
                if current == line {
                    start = i + 1;
                    break;
                }
            }
        }
    }
    text[start..]
        .char_indices()
        .nth(column as usize - 1)
        .map_or(text.len(), |(i, _)| start + i)
}

fn alone_on_line(tokens: &[Token], i: usize) -> bool {
    let line = tokens[i].pos.line;
    let before = i > 0 && tokens[i - 1].end.line == line;
    let after = tokens
        .get(i + 1)
        .is_some_and(|t| t.kind != TokenKind::Eof && t.pos.line == line);
    !before && !after
}

/// Replacement lexeme of a different token class.
fn wrong_class(token: &Token) -> &'static str {
    match token.kind {
        TokenKind::Keyword(_) => "bogus",
        TokenKind::Identifier => "\"text\"",
        TokenKind::String => "42",
        TokenKind::Number => "\"7\"",
        TokenKind::Date => "12",
        TokenKind::Eof => unreachable!(),
    }
}

/// Every single-token corruption of `text`: each token is replaced by a
/// stray character, replaced by a token of the wrong class, and (unless it
/// sits alone on its line) deleted.
///
/// `text` must lex cleanly.
pub fn single_token_corruptions(text: &str) -> Vec<Corruption> {
    let tokens = tokenize(text).expect("source must lex");
    let mut out = Vec::new();
    for (i, token) in tokens.iter().enumerate() {
        if token.kind == TokenKind::Eof {
            continue;
        }
        let start = byte_offset(text, token.pos.line, token.pos.column);
        let end = byte_offset(text, token.end.line, token.end.column);
        let lexeme = &text[start..end];
        let splice = |with: &str| format!("{}{}{}", &text[..start], with, &text[end..]);
        let line = token.pos.line;

        out.push(Corruption {
            text: splice("@"),
            line,
            description: format!("replace `{lexeme}` with `@`"),
        });
        out.push(Corruption {
            text: splice(wrong_class(token)),
            line,
            description: format!("replace `{lexeme}` with `{}`", wrong_class(token)),
        });
        if !alone_on_line(&tokens, i) {
            out.push(Corruption {
                text: splice(""),
                line,
                description: format!("delete `{lexeme}`"),
            });
        }
    }
    out
}
