//! Deduction log of a completion run, and an independent replay.
//!
//! Text form, one event per line:
//!
//! ```text
//! GEN 0 a
//! RELATOR 3 a b a b
//! EQUATION 2 4 [a b] = 0 []
//! DEFINE 5 = 2*c
//! DEDUCE 4*b = 7 BY relator 3 AT 1
//! MERGE 4 9 BY relator 3 AT 1
//! MERGE 4 9 BY equation 2
//! MERGE 6 10 BY cascade
//! ```
//!
//! `EQUATION` lists the head vertex and the generator path of each side.
//! A `MERGE` line names the surviving vertex first.

use std::collections::HashMap;
use std::fmt;

use super::engine::{finish, verify};
use super::graph::{Graph, NONE};
use super::QuandlePresentation;
use crate::error::{Error, Result};
use crate::quandle::FiniteQuandle;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    /// Closing relator `id` at vertex `at`.
    Relator { id: usize, at: u32 },
    /// An element equation, explicit or an instance of the universal relation.
    Equation { id: usize },
    /// Forced by an earlier identification.
    Cascade,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceEvent {
    Generator { vertex: u32, letter: u8 },
    Relator { id: usize, word: Vec<u8> },
    Equation { id: usize, lhs: (u32, Vec<u8>), rhs: (u32, Vec<u8>) },
    Define { vertex: u32, from: u32, letter: u8 },
    Deduce { from: u32, letter: u8, to: u32, relator: usize, at: u32 },
    Merge { a: u32, b: u32, rule: Rule },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub generators: Vec<String>,
    pub events: Vec<TraceEvent>,
}

impl Trace {
    pub fn merges(&self) -> impl Iterator<Item = &TraceEvent> {
        self.events
            .iter()
            .filter(|e| matches!(e, TraceEvent::Merge { .. }))
    }

    /// Re-executes the log on a fresh graph, checking each step's
    /// justification against the graph as it stands, and rebuilds the
    /// table. Identifications marked as cascades are not re-executed; they
    /// must already hold when reached.
    pub fn replay(&self, p: &QuandlePresentation) -> Result<FiniteQuandle> {
        if p.generators != self.generators {
            return Err(Error::InvalidArgument("trace belongs to another presentation".into()));
        }
        let k = p.generators.len();
        let mut g = Graph::new(k);
        let mut relators: Vec<Vec<u8>> = Vec::new();
        let mut equations: HashMap<usize, ((u32, Vec<u8>), (u32, Vec<u8>))> = HashMap::new();
        let bad = |i: usize, msg: &str| Error::Internal(format!("trace event {i}: {msg}"));

        for (i, e) in self.events.iter().enumerate() {
            let ids: &[u32] = match e {
                TraceEvent::Define { from, .. } => &[*from],
                TraceEvent::Deduce { from, to, at, .. } => &[*from, *to, *at],
                TraceEvent::Merge { a, b, rule: Rule::Relator { at, .. } } => &[*a, *b, *at],
                TraceEvent::Merge { a, b, .. } => &[*a, *b],
                TraceEvent::Equation { lhs, rhs, .. } => &[lhs.0, rhs.0],
                _ => &[],
            };
            if ids.iter().any(|&v| v as usize >= g.len()) {
                return Err(bad(i, "unknown vertex"));
            }
            match e {
                TraceEvent::Generator { vertex, letter } => {
                    if *vertex as usize != g.len() || *letter as usize >= k {
                        return Err(bad(i, "generator out of order"));
                    }
                    g.add_generator(*letter);
                }
                TraceEvent::Relator { id, word } => {
                    if *id != relators.len() || word.iter().any(|&s| s as usize >= k) {
                        return Err(bad(i, "relator out of order"));
                    }
                    relators.push(word.clone());
                }
                TraceEvent::Equation { id, lhs, rhs } => {
                    equations.insert(*id, (lhs.clone(), rhs.clone()));
                }
                TraceEvent::Define { vertex, from, letter } => {
                    if *vertex as usize != g.len()
                        || !g.alive(*from)
                        || g.edge(*from, *letter) != NONE
                    {
                        return Err(bad(i, "definition on an occupied or dead slot"));
                    }
                    g.define(*from, *letter);
                }
                TraceEvent::Deduce { from, letter, to, relator, at } => {
                    let r = relators.get(*relator).ok_or_else(|| bad(i, "unknown relator"))?;
                    if !g.alive(*at) {
                        return Err(bad(i, "deduction at a dead vertex"));
                    }
                    let (f, fi) = g.forward(*at, r);
                    if fi == r.len() || f != *from || r[fi] != *letter {
                        return Err(bad(i, "deduction does not match the relator's gap"));
                    }
                    let (b, j) = g.backward(*at, r, fi);
                    if j != fi + 1 || b != *to {
                        return Err(bad(i, "deduction does not match the relator's gap"));
                    }
                    g.join(*from, *letter, *to);
                }
                TraceEvent::Merge { a, b, rule } => {
                    let pair = match rule {
                        Rule::Cascade => {
                            if g.find(*a) != g.find(*b) {
                                return Err(bad(i, "cascade merge not implied"));
                            }
                            continue;
                        }
                        Rule::Relator { id, at } => {
                            let r = relators.get(*id).ok_or_else(|| bad(i, "unknown relator"))?;
                            let (f, fi) = g.forward(*at, r);
                            if fi == r.len() {
                                (f, *at)
                            } else {
                                let (bv, j) = g.backward(*at, r, fi);
                                if j != fi {
                                    return Err(bad(i, "relator does not force this merge"));
                                }
                                (f, bv)
                            }
                        }
                        Rule::Equation { id } => {
                            let ((lh, lp), (rh, rp)) =
                                equations.get(id).ok_or_else(|| bad(i, "unknown equation"))?;
                            let lh = g.find(*lh);
                            let rh = g.find(*rh);
                            let (x, xi) = g.forward(lh, lp);
                            let (y, yi) = g.forward(rh, rp);
                            if xi != lp.len() || yi != rp.len() {
                                return Err(bad(i, "equation path undefined"));
                            }
                            (x, y)
                        }
                    };
                    let mut want = [g.find(*a), g.find(*b)];
                    let mut got = [g.find(pair.0), g.find(pair.1)];
                    want.sort_unstable();
                    got.sort_unstable();
                    if want != got {
                        return Err(bad(i, "merge does not match its justification"));
                    }
                    g.coincidence(*a, *b, |_, _| {});
                }
            }
        }
        let (q, gens) = finish(&mut g, &p.generators)?;
        verify(&q, p, &gens)?;
        Ok(q)
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |s: &u8| self.generators[*s as usize].as_str();
        let path = |w: &[u8]| w.iter().map(name).collect::<Vec<_>>().join(" ");
        for e in &self.events {
            match e {
                TraceEvent::Generator { vertex, letter } => {
                    writeln!(f, "GEN {vertex} {}", name(letter))?
                }
                TraceEvent::Relator { id, word } => writeln!(f, "RELATOR {id} {}", path(word))?,
                TraceEvent::Equation { id, lhs, rhs } => writeln!(
                    f,
                    "EQUATION {id} {} [{}] = {} [{}]",
                    lhs.0,
                    path(&lhs.1),
                    rhs.0,
                    path(&rhs.1)
                )?,
                TraceEvent::Define { vertex, from, letter } => {
                    writeln!(f, "DEFINE {vertex} = {from}*{}", name(letter))?
                }
                TraceEvent::Deduce { from, letter, to, relator, at } => writeln!(
                    f,
                    "DEDUCE {from}*{} = {to} BY relator {relator} AT {at}",
                    name(letter)
                )?,
                TraceEvent::Merge { a, b, rule } => match rule {
                    Rule::Relator { id, at } => writeln!(f, "MERGE {a} {b} BY relator {id} AT {at}")?,
                    Rule::Equation { id } => writeln!(f, "MERGE {a} {b} BY equation {id}")?,
                    Rule::Cascade => writeln!(f, "MERGE {a} {b} BY cascade")?,
                },
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::engine::{complete_with, Budget, CompleteOptions};
    use super::*;

    fn run(text: &str) -> (QuandlePresentation, FiniteQuandle, Trace) {
        let p: QuandlePresentation = text.parse().unwrap();
        let r = complete_with(
            &p,
            CompleteOptions {
                budget: Budget::default(),
                trace: true,
            },
        )
        .unwrap();
        let q = r.finished().unwrap().clone();
        (p, q, r.trace.unwrap())
    }

    #[test]
    fn replay_reproduces_table() {
        for text in [
            "gens a b; burnside 3;",
            "gens a b c; burnside 3;",
            "gens a b; burnside 6;",
            "gens a b c; rel a*b = c; rel b*c = a; rel c*a = b;",
        ] {
            let (p, q, t) = run(text);
            let back = t.replay(&p).unwrap();
            assert_eq!(back.to_table_text(), q.to_table_text(), "{text}");
        }
    }

    #[test]
    fn text_form() {
        let (_, _, t) = run("gens a b; burnside 3;");
        let text = t.to_string();
        assert!(text.starts_with("GEN 0 a\nGEN 1 b\n"));
        assert!(text.lines().any(|l| l.starts_with("MERGE ") && l.contains(" BY ")));
    }

    #[test]
    fn tampered_trace_is_rejected() {
        let (p, _, mut t) = run("gens a b; burnside 3;");
        let pos = t
            .events
            .iter()
            .position(|e| matches!(e, TraceEvent::Merge { rule: Rule::Relator { .. } | Rule::Equation { .. }, .. }))
            .unwrap();
        if let TraceEvent::Merge { b, .. } = &mut t.events[pos] {
            *b += 1;
        }
        assert!(t.replay(&p).is_err());
    }
}
