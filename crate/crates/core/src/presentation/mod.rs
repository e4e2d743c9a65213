//! Presentations of keis and their completion into finite tables.
//!
//! Grammar:
//!
//! ```text
//! presentation = "gens" sym+ ";" [ "burnside" n ";" ] ( "rel" word "=" word ";" )*
//! word         = primary ( "*" primary )*
//! primary      = sym | "(" word ")"
//! ```
//!
//! `#` starts a comment. `burnside n` imposes `a = ...*a*b` (n letters,
//! ending in `b`) for every pair of elements.

mod engine;
mod graph;
mod trace;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

pub use engine::{complete, complete_with, Budget, CompleteOptions, CompletionResult, Outcome, Stats};
pub use trace::{Rule, Trace, TraceEvent};

use crate::error::{Error, ParseError, Result};
use crate::quandle::FiniteQuandle;
use crate::syntax::{tokenize, Cursor, TokenKind};
use crate::word::{parse_word, KeiWord};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuandlePresentation {
    pub generators: Vec<String>,
    pub relations: Vec<(KeiWord, KeiWord)>,
    pub burnside: Option<usize>,
}

impl QuandlePresentation {
    /// `Q̄(k, n)` on generators `a, b, c, ...`.
    pub fn free_burnside(k: usize, n: usize) -> Self {
        assert!((1..=26).contains(&k), "between 1 and 26 generators");
        QuandlePresentation {
            generators: (0..k).map(|i| ((b'a' + i as u8) as char).to_string()).collect(),
            relations: Vec::new(),
            burnside: Some(n),
        }
    }

    pub fn parse(text: &str) -> std::result::Result<Self, ParseError> {
        let mut c = Cursor::new(tokenize(text)?, text);
        keyword(&mut c, "gens")?;
        let mut generators: Vec<String> = Vec::new();
        loop {
            match c.next() {
                Some(t) => match t.kind {
                    TokenKind::Ident(name) => {
                        if generators.contains(&name) {
                            return Err(ParseError::new(
                                t.line,
                                t.column,
                                format!("generator `{name}` declared twice"),
                            ));
                        }
                        generators.push(name);
                    }
                    TokenKind::Semicolon if !generators.is_empty() => break,
                    _ => {
                        return Err(ParseError::new(
                            t.line,
                            t.column,
                            format!("expected a generator name, found {}", t.describe()),
                        ))
                    }
                },
                None => return Err(c.error_here("expected `;` after generators")),
            }
        }

        let mut burnside = None;
        if matches!(c.peek(), Some(t) if t.kind == TokenKind::Ident("burnside".into())) {
            c.next();
            match c.next() {
                Some(t) => match t.kind {
                    TokenKind::Number(n) if n >= 2 => burnside = Some(n as usize),
                    TokenKind::Number(n) => {
                        return Err(ParseError::new(
                            t.line,
                            t.column,
                            format!("burnside exponent must be at least 2, found {n}"),
                        ))
                    }
                    _ => {
                        return Err(ParseError::new(
                            t.line,
                            t.column,
                            format!("expected an exponent, found {}", t.describe()),
                        ))
                    }
                },
                None => return Err(c.error_here("expected an exponent")),
            }
            c.expect(&TokenKind::Semicolon, "`;`")?;
        }

        let mut relations = Vec::new();
        while !c.at_end() {
            keyword(&mut c, "rel")?;
            let (lhs, lt) = parse_word(&mut c)?;
            c.expect(&TokenKind::Equals, "`=`")?;
            let (rhs, rt) = parse_word(&mut c)?;
            c.expect(&TokenKind::Semicolon, "`;`")?;
            for (w, t) in [(&lhs, &lt), (&rhs, &rt)] {
                if let Some(l) = w.letters().into_iter().find(|l| !generators.iter().any(|g| g == l)) {
                    return Err(ParseError::new(
                        t.line,
                        t.column,
                        format!("undeclared generator `{l}`"),
                    ));
                }
            }
            relations.push((lhs, rhs));
        }
        Ok(QuandlePresentation {
            generators,
            relations,
            burnside,
        })
    }
}

fn keyword(c: &mut Cursor, word: &str) -> std::result::Result<(), ParseError> {
    match c.peek() {
        Some(t) if t.kind == TokenKind::Ident(word.into()) => {
            c.next();
            Ok(())
        }
        Some(t) => Err(ParseError::new(
            t.line,
            t.column,
            format!("expected `{word}`, found {}", t.describe()),
        )),
        None => Err(c.error_here(format!("expected `{word}`, found end of input"))),
    }
}

impl std::str::FromStr for QuandlePresentation {
    type Err = ParseError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        QuandlePresentation::parse(s)
    }
}

impl fmt::Display for QuandlePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "gens {};", self.generators.join(" "))?;
        if let Some(n) = self.burnside {
            writeln!(f, "burnside {n};")?;
        }
        for (l, r) in &self.relations {
            writeln!(f, "rel {l} = {r};")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Assignments {
    /// Every map from the identity's letters to generators.
    All,
    /// Only maps sending distinct letters to distinct generators.
    Injective,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub holds: bool,
    /// Number of assignments tried.
    pub checked: usize,
    /// First failing assignment, letter to generator name.
    pub witness: Option<BTreeMap<String, String>>,
}

/// Checks `lhs = rhs` in a completed kei, reading every letter of the two
/// words as a variable ranging over the presentation's generators.
pub fn prove_identity(
    result: &CompletionResult,
    p: &QuandlePresentation,
    lhs: &KeiWord,
    rhs: &KeiWord,
    mode: Assignments,
) -> Result<IdentityCheck> {
    let q = result.finished()?;
    let mut vars: Vec<String> = lhs.letters_in_order();
    for l in rhs.letters_in_order() {
        if !vars.contains(&l) {
            vars.push(l);
        }
    }
    let k = p.generators.len();
    if mode == Assignments::Injective && vars.len() > k {
        return Err(Error::InvalidArgument(format!(
            "{} distinct letters but only {k} generators",
            vars.len()
        )));
    }
    let mut choice = vec![0usize; vars.len()];
    let mut checked = 0;
    loop {
        let distinct = {
            let mut seen = vec![false; k];
            choice.iter().all(|&c| !std::mem::replace(&mut seen[c], true))
        };
        if mode == Assignments::All || distinct {
            checked += 1;
            let env: HashMap<String, usize> = vars
                .iter()
                .cloned()
                .zip(choice.iter().map(|&c| result.generator_elements[c]))
                .collect();
            if q.eval_word(lhs, &env)? != q.eval_word(rhs, &env)? {
                let witness = vars
                    .iter()
                    .cloned()
                    .zip(choice.iter().map(|&c| p.generators[c].clone()))
                    .collect();
                return Ok(IdentityCheck {
                    holds: false,
                    checked,
                    witness: Some(witness),
                });
            }
        }
        let mut i = choice.len();
        loop {
            if i == 0 {
                return Ok(IdentityCheck {
                    holds: true,
                    checked,
                    witness: None,
                });
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < k {
                break;
            }
            choice[i] = 0;
        }
    }
}

/// Number of elements by the letter count of their canonical names.
pub fn element_lengths(q: &FiniteQuandle) -> Result<BTreeMap<usize, usize>> {
    let names = q
        .names()
        .ok_or_else(|| Error::InvalidArgument("table has no element names".into()))?;
    let mut out = BTreeMap::new();
    for n in names {
        *out.entry(n.split('*').count()).or_insert(0) += 1;
    }
    Ok(out)
}
