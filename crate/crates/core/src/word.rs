//! Left-normed kei words.
//!
//! `a*b*c` reads as `(a*b)*c`. An operator position may hold a parenthesized
//! word, as in `w*(x*y)`; [`KeiWord::normalize`] expands such composites
//! into plain letters using `w*(h*t1*...*tj) = w*tj*...*t1*h*t1*...*tj`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::ParseError;
use crate::syntax::{tokenize, Cursor, Token, TokenKind};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Operator {
    Letter(String),
    Word(KeiWord),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KeiWord {
    pub head: String,
    pub tail: Vec<Operator>,
}

impl KeiWord {
    pub fn letter(name: impl Into<String>) -> Self {
        KeiWord {
            head: name.into(),
            tail: Vec::new(),
        }
    }

    /// A plain left-normed word `l0*l1*...`. Panics on an empty slice.
    pub fn from_letters<S: AsRef<str>>(letters: &[S]) -> Self {
        let (head, rest) = letters.split_first().expect("a word needs at least one letter");
        KeiWord {
            head: head.as_ref().to_string(),
            tail: rest
                .iter()
                .map(|s| Operator::Letter(s.as_ref().to_string()))
                .collect(),
        }
    }

    pub fn parse(text: &str) -> Result<KeiWord, ParseError> {
        let mut cursor = Cursor::new(tokenize(text)?, text);
        let word = parse_word(&mut cursor)?;
        if !cursor.at_end() {
            let t = cursor.peek().unwrap();
            return Err(ParseError::new(
                t.line,
                t.column,
                format!("unexpected {} after word", t.describe()),
            ));
        }
        Ok(word.0)
    }

    pub fn is_generator(&self) -> bool {
        self.tail.is_empty()
    }

    pub fn is_flat(&self) -> bool {
        self.tail.iter().all(|op| matches!(op, Operator::Letter(_)))
    }

    /// Fully left-normed expansion with no parenthesized operators.
    pub fn normalize(&self) -> KeiWord {
        let mut tail = Vec::new();
        for op in &self.tail {
            match op {
                Operator::Letter(l) => tail.push(l.clone()),
                Operator::Word(inner) => {
                    let inner = inner.flat_letters_owned();
                    let (h, t) = inner.split_first().unwrap();
                    tail.extend(t.iter().rev().cloned());
                    tail.push(h.clone());
                    tail.extend(t.iter().cloned());
                }
            }
        }
        KeiWord {
            head: self.head.clone(),
            tail: tail.into_iter().map(Operator::Letter).collect(),
        }
    }

    /// Letters of the normalized word, head first.
    pub fn flat_letters(&self) -> Vec<String> {
        self.flat_letters_owned()
    }

    fn flat_letters_owned(&self) -> Vec<String> {
        let n = self.normalize_if_needed();
        let mut out = vec![n.head.clone()];
        for op in &n.tail {
            if let Operator::Letter(l) = op {
                out.push(l.clone());
            }
        }
        out
    }

    fn normalize_if_needed(&self) -> std::borrow::Cow<'_, KeiWord> {
        if self.is_flat() {
            std::borrow::Cow::Borrowed(self)
        } else {
            std::borrow::Cow::Owned(self.normalize())
        }
    }

    /// Every distinct letter occurring anywhere in the word.
    pub fn letters(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_letters(&mut out);
        out
    }

    fn collect_letters<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        out.insert(&self.head);
        for op in &self.tail {
            match op {
                Operator::Letter(l) => {
                    out.insert(l);
                }
                Operator::Word(w) => w.collect_letters(out),
            }
        }
    }

    /// Letters in order of first appearance.
    pub fn letters_in_order(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for l in self.flat_letters() {
            if !out.contains(&l) {
                out.push(l);
            }
        }
        out
    }

    pub fn substitute(&self, map: &HashMap<String, String>) -> KeiWord {
        let rename = |s: &String| map.get(s).cloned().unwrap_or_else(|| s.clone());
        KeiWord {
            head: rename(&self.head),
            tail: self
                .tail
                .iter()
                .map(|op| match op {
                    Operator::Letter(l) => Operator::Letter(rename(l)),
                    Operator::Word(w) => Operator::Word(w.substitute(map)),
                })
                .collect(),
        }
    }
}

impl fmt::Display for KeiWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        for op in &self.tail {
            match op {
                Operator::Letter(l) => write!(f, "*{l}")?,
                Operator::Word(w) => write!(f, "*({w})")?,
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for KeiWord {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        KeiWord::parse(s)
    }
}

/// `word = primary ('*' primary)*`, `primary = ident | '(' word ')'`.
///
/// A parenthesized head is flattened by left association, so `(a*b)*c`
/// parses the same as `a*b*c`. Returns the word and the token that began it.
pub(crate) fn parse_word(cursor: &mut Cursor) -> Result<(KeiWord, Token), ParseError> {
    let first = cursor
        .peek()
        .cloned()
        .ok_or_else(|| cursor.error_here("expected a word, found end of input"))?;
    let mut word = match parse_primary(cursor)? {
        Primary::Letter(l) => KeiWord::letter(l),
        Primary::Group(w) => w,
    };
    while matches!(cursor.peek(), Some(t) if t.kind == TokenKind::Star) {
        cursor.next();
        match parse_primary(cursor)? {
            Primary::Letter(l) => word.tail.push(Operator::Letter(l)),
            Primary::Group(w) => word.tail.push(Operator::Word(w)),
        }
    }
    Ok((word, first))
}

enum Primary {
    Letter(String),
    Group(KeiWord),
}

fn parse_primary(cursor: &mut Cursor) -> Result<Primary, ParseError> {
    match cursor.next() {
        Some(Token {
            kind: TokenKind::Ident(name),
            ..
        }) => Ok(Primary::Letter(name)),
        Some(Token {
            kind: TokenKind::LParen,
            ..
        }) => {
            let (w, _) = parse_word(cursor)?;
            cursor.expect(&TokenKind::RParen, "`)`")?;
            Ok(Primary::Group(w))
        }
        Some(t) => Err(ParseError::new(
            t.line,
            t.column,
            format!("expected a letter or `(`, found {}", t.describe()),
        )),
        None => Err(cursor.error_here("expected a letter or `(`, found end of input")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> KeiWord {
        KeiWord::parse(s).unwrap()
    }

    #[test]
    fn normalize_expands_composite_operator() {
        assert_eq!(w("w*(x*y)").normalize(), w("w*y*x*y"));
        assert_eq!(w("a*(b)").normalize(), w("a*b"));
        assert_eq!(w("(a*b)*(c*d)").normalize(), w("a*b*d*c*d"));
    }

    #[test]
    fn normalize_nested() {
        // x*(y*(z*u)) = x*(y*u*z*u) = x*u*z*u*y*u*z*u
        assert_eq!(w("x*(y*(z*u))").normalize(), w("x*u*z*u*y*u*z*u"));
    }

    #[test]
    fn display_round_trip() {
        for s in ["a", "a*b*c", "a*(b*c)*d", "x0*(x1*(x2*x3))"] {
            assert_eq!(w(s).to_string(), s);
        }
    }

    #[test]
    fn parse_errors_carry_location() {
        let e = KeiWord::parse("a*\n*b").unwrap_err();
        assert_eq!((e.line, e.column), (2, 1));
        let e = KeiWord::parse("a*(b").unwrap_err();
        assert_eq!(e.line, 1);
        assert!(KeiWord::parse("a b").is_err());
    }

    #[test]
    fn letters_in_first_appearance_order() {
        assert_eq!(w("c*a*(b*a)").letters_in_order(), vec!["c", "a", "b"]);
    }
}
