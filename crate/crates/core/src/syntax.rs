//! Tokenizer shared by the word and presentation grammars.

use crate::error::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum TokenKind {
    Ident(String),
    Number(u64),
    Star,
    LParen,
    RParen,
    Equals,
    Semicolon,
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub column: usize,
}

impl Token {
    pub fn describe(&self) -> String {
        match &self.kind {
            TokenKind::Ident(s) => format!("`{s}`"),
            TokenKind::Number(n) => format!("`{n}`"),
            TokenKind::Star => "`*`".into(),
            TokenKind::LParen => "`(`".into(),
            TokenKind::RParen => "`)`".into(),
            TokenKind::Equals => "`=`".into(),
            TokenKind::Semicolon => "`;`".into(),
        }
    }
}

/// Splits `text` into tokens. `#` starts a comment running to the end of the line.
pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            let simple = match c {
                '#' => break,
                '*' => Some(TokenKind::Star),
                '(' => Some(TokenKind::LParen),
                ')' => Some(TokenKind::RParen),
                '=' => Some(TokenKind::Equals),
                ';' => Some(TokenKind::Semicolon),
                _ => None,
            };
            if let Some(kind) = simple {
                out.push(Token {
                    kind,
                    line: line_no,
                    column,
                });
                i += 1;
            } else if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                let value = digits
                    .parse()
                    .map_err(|_| ParseError::new(line_no, column, "number out of range"))?;
                out.push(Token {
                    kind: TokenKind::Number(value),
                    line: line_no,
                    column,
                });
            } else if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token {
                    kind: TokenKind::Ident(chars[start..i].iter().collect()),
                    line: line_no,
                    column,
                });
            } else {
                return Err(ParseError::new(
                    line_no,
                    column,
                    format!("unexpected character `{c}`"),
                ));
            }
        }
    }
    Ok(out)
}

/// Cursor over a token list that remembers where the input ended.
pub(crate) struct Cursor {
    tokens: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

impl Cursor {
    pub fn new(tokens: Vec<Token>, text: &str) -> Self {
        let lines: Vec<&str> = text.lines().collect();
        let end = match lines.last() {
            Some(last) => (lines.len(), last.chars().count() + 1),
            None => (1, 1),
        };
        Cursor {
            tokens,
            pos: 0,
            end,
        }
    }

    pub fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    pub fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    pub fn error_here(&self, message: impl Into<String>) -> ParseError {
        match self.peek() {
            Some(t) => ParseError::new(t.line, t.column, message),
            None => ParseError::new(self.end.0, self.end.1, message),
        }
    }

    pub fn expect(&mut self, kind: &TokenKind, what: &str) -> Result<Token, ParseError> {
        match self.peek() {
            Some(t) if &t.kind == kind => Ok(self.next().unwrap()),
            Some(t) => Err(ParseError::new(
                t.line,
                t.column,
                format!("expected {what}, found {}", t.describe()),
            )),
            None => Err(self.error_here(format!("expected {what}, found end of input"))),
        }
    }
}
