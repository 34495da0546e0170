//! Lexer for CQL source text.
//!
//! The lexer never fails: bytes it cannot recognize become [`TokenKind::Error`]
//! tokens so the stream always covers the full input. Concatenating the text
//! of all tokens and stripping whitespace reproduces the non-whitespace
//! content of the source.

use serde::Serialize;

/// Token categories of the CQL dialect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TokenKind {
    LBracket,
    RBracket,
    LParen,
    RParen,
    And,
    Or,
    Not,
    Eq,
    Neq,
    StringLiteral,
    Ident,
    /// `:` separating a label from its token expression.
    LabelSep,
    Dot,
    /// The `within` keyword.
    Within,
    /// `::` introducing global conditions.
    CondSep,
    Question,
    Star,
    Plus,
    LBrace,
    RBrace,
    Comma,
    Number,
    /// `<` opening a structure tag.
    StructOpen,
    /// `/>` closing a structure tag.
    StructSelfClose,
    /// A byte sequence the lexer could not recognize.
    Error,
}

impl TokenKind {
    /// Human-readable description used in parse diagnostics.
    pub fn describe(self) -> &'static str {
        match self {
            TokenKind::LBracket => "'['",
            TokenKind::RBracket => "']'",
            TokenKind::LParen => "'('",
            TokenKind::RParen => "')'",
            TokenKind::And => "'&'",
            TokenKind::Or => "'|'",
            TokenKind::Not => "'!'",
            TokenKind::Eq => "'='",
            TokenKind::Neq => "'!='",
            TokenKind::StringLiteral => "string literal",
            TokenKind::Ident => "identifier",
            TokenKind::LabelSep => "':'",
            TokenKind::Dot => "'.'",
            TokenKind::Within => "'within'",
            TokenKind::CondSep => "'::'",
            TokenKind::Question => "'?'",
            TokenKind::Star => "'*'",
            TokenKind::Plus => "'+'",
            TokenKind::LBrace => "'{'",
            TokenKind::RBrace => "'}'",
            TokenKind::Comma => "','",
            TokenKind::Number => "number",
            TokenKind::StructOpen => "'<'",
            TokenKind::StructSelfClose => "'/>'",
            TokenKind::Error => "unrecognized input",
        }
    }
}

/// A lexed token: kind, source text, and byte span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CqlToken {
    pub kind: TokenKind,
    pub text: String,
    /// Byte offsets `[start, end)` into the source.
    pub span: (usize, usize),
}

impl CqlToken {
    /// For string literals, the value without the surrounding quotes.
    /// Other kinds return the full text.
    pub fn unquoted(&self) -> &str {
        if self.kind == TokenKind::StringLiteral && self.text.len() >= 2 {
            &self.text[1..self.text.len() - 1]
        } else {
            &self.text
        }
    }
}

/// Tokenizes `source` into a complete stream. Never fails; unrecognizable
/// bytes are materialized as `Error` tokens.
pub fn lex(source: &str) -> Vec<CqlToken> {
    let bytes = source.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;

    let mut push = |kind: TokenKind, start: usize, end: usize| {
        tokens.push(CqlToken {
            kind,
            text: source[start..end].to_string(),
            span: (start, end),
        });
    };

    while i < bytes.len() {
        let b = bytes[i];
        if b.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        match b {
            b'[' => {
                i += 1;
                push(TokenKind::LBracket, start, i);
            }
            b']' => {
                i += 1;
                push(TokenKind::RBracket, start, i);
            }
            b'(' => {
                i += 1;
                push(TokenKind::LParen, start, i);
            }
            b')' => {
                i += 1;
                push(TokenKind::RParen, start, i);
            }
            b'&' => {
                i += 1;
                push(TokenKind::And, start, i);
            }
            b'|' => {
                i += 1;
                push(TokenKind::Or, start, i);
            }
            b'=' => {
                i += 1;
                push(TokenKind::Eq, start, i);
            }
            b'!' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    i += 2;
                    push(TokenKind::Neq, start, i);
                } else {
                    i += 1;
                    push(TokenKind::Not, start, i);
                }
            }
            b':' => {
                if bytes.get(i + 1) == Some(&b':') {
                    i += 2;
                    push(TokenKind::CondSep, start, i);
                } else {
                    i += 1;
                    push(TokenKind::LabelSep, start, i);
                }
            }
            b'.' => {
                i += 1;
                push(TokenKind::Dot, start, i);
            }
            b'?' => {
                i += 1;
                push(TokenKind::Question, start, i);
            }
            b'*' => {
                i += 1;
                push(TokenKind::Star, start, i);
            }
            b'+' => {
                i += 1;
                push(TokenKind::Plus, start, i);
            }
            b'{' => {
                i += 1;
                push(TokenKind::LBrace, start, i);
            }
            b'}' => {
                i += 1;
                push(TokenKind::RBrace, start, i);
            }
            b',' => {
                i += 1;
                push(TokenKind::Comma, start, i);
            }
            b'<' => {
                i += 1;
                push(TokenKind::StructOpen, start, i);
            }
            b'/' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    i += 2;
                    push(TokenKind::StructSelfClose, start, i);
                } else {
                    i += 1;
                    push(TokenKind::Error, start, i);
                }
            }
            b'"' | b'\'' => {
                let quote = b;
                let mut j = i + 1;
                while j < bytes.len() && bytes[j] != quote {
                    j += 1;
                }
                if j < bytes.len() {
                    i = j + 1;
                    push(TokenKind::StringLiteral, start, i);
                } else {
                    // Unterminated literal: the rest of the input becomes one
                    // error token so the stream still covers every byte.
                    i = bytes.len();
                    push(TokenKind::Error, start, i);
                }
            }
            b'0'..=b'9' => {
                let mut j = i + 1;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                i = j;
                push(TokenKind::Number, start, i);
            }
            b'A'..=b'Z' | b'a'..=b'z' | b'_' => {
                let mut j = i + 1;
                while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                    j += 1;
                }
                i = j;
                let kind = if &source[start..i] == "within" {
                    TokenKind::Within
                } else {
                    TokenKind::Ident
                };
                push(kind, start, i);
            }
            _ => {
                // One error token per unrecognized character (full char, not
                // byte, to stay on UTF-8 boundaries).
                let ch_len = source[i..].chars().next().map_or(1, char::len_utf8);
                i += ch_len;
                push(TokenKind::Error, start, i);
            }
        }
    }

    tokens
}
