// Copyright 2026 The qcontract Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use std::fmt;

use super::{DslError, SourceSpan};

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    Ident(String),
    Int(u64),
    Real(f64),
    /// Imaginary literal such as `3i` or `0.5i`.
    Imag(f64),
    /// Ket labels between `|` and `>`, each one of `0 1 + -`.
    Ket(String),
    Pi,
    // keywords
    Circuit,
    Sub,
    Assert,
    Measure,
    Shots,
    Post,
    Pre,
    Expect,
    // punctuation
    Plus,
    Minus,
    Star,
    Slash,
    At,
    Tilde,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    EqEq,
    DotDot,
    Newline,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Ident(s) => write!(f, "identifier '{s}'"),
            TokenKind::Int(n) => write!(f, "integer {n}"),
            TokenKind::Real(x) => write!(f, "number {x}"),
            TokenKind::Imag(x) => write!(f, "imaginary {x}i"),
            TokenKind::Ket(k) => write!(f, "ket |{k}>"),
            TokenKind::Newline => f.write_str("end of line"),
            other => write!(f, "'{}'", other.lexeme()),
        }
    }
}

impl TokenKind {
    fn lexeme(&self) -> &'static str {
        match self {
            TokenKind::Pi => "pi",
            TokenKind::Circuit => "circuit",
            TokenKind::Sub => "sub",
            TokenKind::Assert => "assert",
            TokenKind::Measure => "measure",
            TokenKind::Shots => "shots",
            TokenKind::Post => "post",
            TokenKind::Pre => "pre",
            TokenKind::Expect => "expect",
            TokenKind::Plus => "+",
            TokenKind::Minus => "-",
            TokenKind::Star => "*",
            TokenKind::Slash => "/",
            TokenKind::At => "@",
            TokenKind::Tilde => "~",
            TokenKind::Caret => "^",
            TokenKind::LParen => "(",
            TokenKind::RParen => ")",
            TokenKind::LBracket => "[",
            TokenKind::RBracket => "]",
            TokenKind::Comma => ",",
            TokenKind::Colon => ":",
            TokenKind::EqEq => "==",
            TokenKind::DotDot => "..",
            _ => "",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: SourceSpan,
}

fn keyword(word: &str) -> Option<TokenKind> {
    Some(match word {
        "circuit" => TokenKind::Circuit,
        "sub" => TokenKind::Sub,
        "assert" => TokenKind::Assert,
        "measure" => TokenKind::Measure,
        "shots" => TokenKind::Shots,
        "post" => TokenKind::Post,
        "pre" => TokenKind::Pre,
        "expect" => TokenKind::Expect,
        "pi" => TokenKind::Pi,
        _ => return None,
    })
}

/// Splits `src` into tokens. Every line, including the last, ends with a
/// [`TokenKind::Newline`]; `#` starts a comment running to the end of line.
pub fn tokenize(src: &str) -> Result<Vec<Token>, DslError> {
    let mut tokens = Vec::new();
    for (line_idx, line) in src.lines().enumerate() {
        let line_no = line_idx + 1;
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        let span = |start: usize, end: usize| SourceSpan::new(line_no, start + 1, end + 1);
        while i < chars.len() {
            let ch = chars[i];
            if ch == '#' {
                break;
            }
            if ch.is_whitespace() {
                i += 1;
                continue;
            }
            let start = i;
            let single = |kind: TokenKind| Token {
                kind,
                span: span(start, start),
            };
            if ch.is_ascii_alphabetic() || ch == '_' {
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                let kind = keyword(&word).unwrap_or(TokenKind::Ident(word));
                tokens.push(Token {
                    kind,
                    span: span(start, i - 1),
                });
                continue;
            }
            if ch.is_ascii_digit()
                || (ch == '.' && chars.get(i + 1).is_some_and(char::is_ascii_digit))
            {
                tokens.push(lex_number(&chars, &mut i, line_no)?);
                continue;
            }
            if ch == '|' {
                i += 1;
                while i < chars.len() && chars[i] != '>' {
                    if !matches!(chars[i], '0' | '1' | '+' | '-') {
                        return Err(DslError::lex(
                            format!("invalid ket label '{}'", chars[i]),
                            span(i, i),
                        ));
                    }
                    i += 1;
                }
                if i >= chars.len() {
                    return Err(DslError::lex("unterminated ket", span(start, i - 1)));
                }
                if i == start + 1 {
                    return Err(DslError::lex("empty ket", span(start, i)));
                }
                let labels: String = chars[start + 1..i].iter().collect();
                i += 1;
                tokens.push(Token {
                    kind: TokenKind::Ket(labels),
                    span: span(start, i - 1),
                });
                continue;
            }
            let two = |next: char| chars.get(i + 1) == Some(&next);
            let tok = match ch {
                '=' if two('=') => {
                    i += 2;
                    tokens.push(Token {
                        kind: TokenKind::EqEq,
                        span: span(start, start + 1),
                    });
                    continue;
                }
                '.' if two('.') => {
                    i += 2;
                    tokens.push(Token {
                        kind: TokenKind::DotDot,
                        span: span(start, start + 1),
                    });
                    continue;
                }
                '+' => single(TokenKind::Plus),
                '-' => single(TokenKind::Minus),
                '*' => single(TokenKind::Star),
                '/' => single(TokenKind::Slash),
                '@' => single(TokenKind::At),
                '~' => single(TokenKind::Tilde),
                '^' => single(TokenKind::Caret),
                '(' => single(TokenKind::LParen),
                ')' => single(TokenKind::RParen),
                '[' => single(TokenKind::LBracket),
                ']' => single(TokenKind::RBracket),
                ',' => single(TokenKind::Comma),
                ':' => single(TokenKind::Colon),
                other => {
                    return Err(DslError::lex(
                        format!("unexpected character '{other}'"),
                        span(start, start),
                    ))
                }
            };
            tokens.push(tok);
            i += 1;
        }
        tokens.push(Token {
            kind: TokenKind::Newline,
            span: span(chars.len(), chars.len()),
        });
    }
    Ok(tokens)
}

fn lex_number(chars: &[char], i: &mut usize, line_no: usize) -> Result<Token, DslError> {
    let start = *i;
    let digits = |i: &mut usize| {
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
    };
    digits(i);
    let mut is_real = false;
    // a lone '.' followed by another '.' is a range, not a decimal point
    if *i < chars.len() && chars[*i] == '.' && chars.get(*i + 1) != Some(&'.') {
        is_real = true;
        *i += 1;
        digits(i);
    }
    if *i < chars.len() && (chars[*i] == 'e' || chars[*i] == 'E') {
        let mut j = *i + 1;
        if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
            j += 1;
        }
        if j < chars.len() && chars[j].is_ascii_digit() {
            is_real = true;
            *i = j;
            digits(i);
        }
    }
    let text: String = chars[start..*i].iter().collect();
    let imaginary = *i < chars.len()
        && chars[*i] == 'i'
        && !chars
            .get(*i + 1)
            .is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_');
    if imaginary {
        *i += 1;
    } else if *i < chars.len() && (chars[*i].is_ascii_alphabetic() || chars[*i] == '_') {
        let mut j = *i;
        while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
            j += 1;
        }
        return Err(DslError::lex(
            "malformed number",
            SourceSpan::new(line_no, start + 1, j),
        ));
    }
    let span = SourceSpan::new(line_no, start + 1, *i);
    let value: f64 = text
        .parse()
        .map_err(|_| DslError::lex("malformed number", span))?;
    let kind = if imaginary {
        TokenKind::Imag(value)
    } else if is_real {
        TokenKind::Real(value)
    } else {
        match text.parse::<u64>() {
            Ok(n) => TokenKind::Int(n),
            Err(_) => return Err(DslError::lex("integer literal too large", span)),
        }
    };
    Ok(Token { kind, span })
}
