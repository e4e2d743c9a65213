//! Link diagrams, their kei presentations, and coloring invariants.
//!
//! Diagram format, one item per line:
//!
//! ```text
//! # components 1
//! A a            # declares arcs, needed only for arcs without crossings
//! X b a c        # under-in arc, over arc, under-out arc
//! ```
//!
//! Arc ids are identifiers or numbers; a numeric id `7` becomes the
//! generator `x7`. Other `#` lines are comments. Crossing signs are not
//! recorded: in a kei both kinds of crossing give `under_in * over = under_out`.
//!
//! A move pair file holds two diagrams:
//!
//! ```text
//! move R2        # R1, R2, R3 or <n>-move
//! site free text describing where the move happens
//! before
//! X ...
//! after
//! X ...
//! ```

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, ParseError, Result};
use crate::presentation::{complete, Budget, CompletionResult, QuandlePresentation};
use crate::quandle::{FiniteQuandle, HomOptions};
use crate::word::{KeiWord, Operator};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Crossing {
    pub under_in: usize,
    pub over: usize,
    pub under_out: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkDiagram {
    pub arcs: Vec<String>,
    pub crossings: Vec<Crossing>,
    pub components: usize,
}

struct ArcTable {
    names: Vec<String>,
    index: HashMap<String, usize>,
    /// Line and column of each arc's first mention.
    origin: Vec<(usize, usize)>,
}

impl ArcTable {
    fn new() -> Self {
        ArcTable {
            names: Vec::new(),
            index: HashMap::new(),
            origin: Vec::new(),
        }
    }

    fn intern(&mut self, id: &str, at: (usize, usize)) -> std::result::Result<usize, ParseError> {
        let name = arc_name(id).ok_or_else(|| ParseError::new(at.0, at.1, format!("bad arc id `{id}`")))?;
        if let Some(&i) = self.index.get(&name) {
            return Ok(i);
        }
        let i = self.names.len();
        self.index.insert(name.clone(), i);
        self.names.push(name);
        self.origin.push(at);
        Ok(i)
    }
}

fn arc_name(id: &str) -> Option<String> {
    if !id.is_empty() && id.chars().all(|c| c.is_ascii_digit()) {
        return Some(format!("x{id}"));
    }
    let mut chars = id.chars();
    let first = chars.next()?;
    if (first.is_alphabetic() || first == '_') && chars.all(|c| c.is_alphanumeric() || c == '_') {
        Some(id.to_string())
    } else {
        None
    }
}

/// Whitespace-separated fields of a line with their 1-based columns.
fn fields(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter()
        .map(|(s, f)| (line[..s].chars().count() + 1, f))
        .collect()
}

struct DiagramBuilder {
    arcs: ArcTable,
    crossings: Vec<Crossing>,
    declared_components: Option<(usize, usize)>,
}

impl DiagramBuilder {
    fn new() -> Self {
        DiagramBuilder {
            arcs: ArcTable::new(),
            crossings: Vec::new(),
            declared_components: None,
        }
    }

    /// Consumes a line if it belongs to a diagram. Returns false for lines
    /// this builder does not recognize.
    fn line(&mut self, line_no: usize, line: &str) -> std::result::Result<bool, ParseError> {
        let f = fields(line);
        if f.is_empty() {
            return Ok(true);
        }
        match f[0].1 {
            "#" | "#components" if f[0].1 == "#components" || f.get(1).map(|x| x.1) == Some("components") => {
                let value = if f[0].1 == "#components" { f.get(1) } else { f.get(2) };
                let (col, v) = value.ok_or_else(|| ParseError::new(line_no, f[0].0, "missing component count"))?;
                let k = v
                    .parse()
                    .map_err(|_| ParseError::new(line_no, *col, format!("bad component count `{v}`")))?;
                self.declared_components = Some((k, line_no));
            }
            s if s.starts_with('#') => {}
            "X" => {
                if f.len() != 4 {
                    return Err(ParseError::new(
                        line_no,
                        f[0].0,
                        format!("a crossing needs three arcs, found {}", f.len() - 1),
                    ));
                }
                let mut ids = [0; 3];
                for (slot, (col, id)) in ids.iter_mut().zip(&f[1..]) {
                    *slot = self.arcs.intern(id, (line_no, *col))?;
                }
                self.crossings.push(Crossing {
                    under_in: ids[0],
                    over: ids[1],
                    under_out: ids[2],
                });
            }
            "A" => {
                if f.len() < 2 {
                    return Err(ParseError::new(line_no, f[0].0, "expected arc ids after `A`"));
                }
                for (col, id) in &f[1..] {
                    self.arcs.intern(id, (line_no, *col))?;
                }
            }
            _ => return Ok(false),
        }
        Ok(true)
    }

    fn finish(self, end_line: usize) -> std::result::Result<LinkDiagram, ParseError> {
        let m = self.arcs.names.len();
        let mut ends = vec![0usize; m];
        for c in &self.crossings {
            ends[c.under_in] += 1;
            ends[c.under_out] += 1;
        }
        if let Some(a) = (0..m).find(|&a| ends[a] != 0 && ends[a] != 2) {
            let (line, col) = self.arcs.origin[a];
            return Err(ParseError::new(
                line,
                col,
                format!(
                    "dangling arc `{}`: {} under-crossing ends, expected 0 or 2",
                    self.arcs.names[a], ends[a]
                ),
            ));
        }
        let components = count_components(m, &self.crossings);
        if let Some((k, line)) = self.declared_components {
            if k != components {
                return Err(ParseError::new(
                    line,
                    1,
                    format!("header declares {k} components, diagram has {components}"),
                ));
            }
        }
        if m == 0 {
            return Err(ParseError::new(end_line, 1, "diagram has no arcs"));
        }
        Ok(LinkDiagram {
            arcs: self.arcs.names,
            crossings: self.crossings,
            components,
        })
    }
}

/// Arcs joined end to end through crossings form the components.
fn count_components(m: usize, crossings: &[Crossing]) -> usize {
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut k = m;
    for c in crossings {
        let a = find(&mut parent, c.under_in);
        let b = find(&mut parent, c.under_out);
        if a != b {
            parent[a.max(b)] = a.min(b);
            k -= 1;
        }
    }
    k
}

pub fn parse_pd(text: &str) -> std::result::Result<LinkDiagram, ParseError> {
    let mut b = DiagramBuilder::new();
    let mut last = 1;
    for (i, line) in text.lines().enumerate() {
        last = i + 1;
        if !b.line(i + 1, line)? {
            let f = fields(line);
            return Err(ParseError::new(
                i + 1,
                f[0].0,
                format!("expected `X`, `A` or a comment, found `{}`", f[0].1),
            ));
        }
    }
    b.finish(last)
}

impl LinkDiagram {
    pub fn is_knot(&self) -> bool {
        self.components == 1
    }
}

impl fmt::Display for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# components {}", self.components)?;
        let mut crossed = vec![false; self.arcs.len()];
        for c in &self.crossings {
            for a in [c.under_in, c.over, c.under_out] {
                crossed[a] = true;
            }
        }
        let free: Vec<&str> = (0..self.arcs.len())
            .filter(|&a| !crossed[a])
            .map(|a| self.arcs[a].as_str())
            .collect();
        if !free.is_empty() {
            writeln!(f, "A {}", free.join(" "))?;
        }
        for c in &self.crossings {
            writeln!(
                f,
                "X {} {} {}",
                self.arcs[c.under_in], self.arcs[c.over], self.arcs[c.under_out]
            )?;
        }
        Ok(())
    }
}

/// One generator per arc and `under_in * over = under_out` per crossing.
pub fn kei_presentation(d: &LinkDiagram, n: Option<usize>) -> QuandlePresentation {
    QuandlePresentation {
        generators: d.arcs.clone(),
        relations: d
            .crossings
            .iter()
            .map(|c| {
                (
                    KeiWord::from_letters(&[&d.arcs[c.under_in], &d.arcs[c.over]]),
                    KeiWord::letter(&d.arcs[c.under_out]),
                )
            })
            .collect(),
        burnside: n,
    }
}

pub fn burnside_kei_of_link(d: &LinkDiagram, n: usize, budget: Budget) -> Result<CompletionResult> {
    if budget.max_elements == 0 || budget.max_steps == 0 {
        return Err(Error::InvalidArgument("budget must be positive".into()));
    }
    complete(&kei_presentation(d, Some(n)), budget)
}

/// Number of colorings of the arcs by `target` satisfying every crossing.
pub fn coloring_invariant(d: &LinkDiagram, target: &FiniteQuandle) -> Result<u64> {
    if !target.is_kei() {
        return Err(Error::TargetRejected("coloring target is not a kei".into()));
    }
    Ok(target.hom_count(&kei_presentation(d, None), HomOptions::default())?.count)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    /// Reidemeister move of type 1, 2 or 3.
    Reidemeister(u8),
    /// `n` half twists on two parallel strands.
    NMove(usize),
}

impl Move {
    pub fn parse(tag: &str) -> Option<Move> {
        match tag {
            "R1" => Some(Move::Reidemeister(1)),
            "R2" => Some(Move::Reidemeister(2)),
            "R3" => Some(Move::Reidemeister(3)),
            _ => {
                let n: usize = tag.strip_suffix("-move")?.parse().ok()?;
                (n >= 2).then_some(Move::NMove(n))
            }
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Reidemeister(i) => write!(f, "R{i}"),
            Move::NMove(n) => write!(f, "{n}-move"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramPair {
    pub before: LinkDiagram,
    pub after: LinkDiagram,
    pub kind: Move,
    pub site: String,
}

impl DiagramPair {
    pub fn parse(text: &str) -> std::result::Result<Self, ParseError> {
        let mut kind = None;
        let mut site = String::new();
        // before, then after
        let mut sections: Vec<DiagramBuilder> = Vec::new();
        let mut last = 1;
        for (i, line) in text.lines().enumerate() {
            let n = i + 1;
            last = n;
            let f = fields(line);
            if f.is_empty() {
                continue;
            }
            let word = f[0].1;
            if sections.is_empty() {
                match word {
                    "move" => {
                        let (col, tag) = f
                            .get(1)
                            .ok_or_else(|| ParseError::new(n, f[0].0, "missing move tag"))?;
                        kind = Some(
                            Move::parse(tag)
                                .ok_or_else(|| ParseError::new(n, *col, format!("unknown move `{tag}`")))?,
                        );
                    }
                    "site" => site = line.trim_start()["site".len()..].trim().to_string(),
                    "before" => sections.push(DiagramBuilder::new()),
                    w if w.starts_with('#') => {}
                    w => return Err(ParseError::new(n, f[0].0, format!("unexpected `{w}`"))),
                }
            } else if word == "after" && sections.len() == 1 {
                sections.push(DiagramBuilder::new());
            } else if !sections.last_mut().unwrap().line(n, line)? {
                return Err(ParseError::new(n, f[0].0, format!("unexpected `{word}`")));
            }
        }
        let mut sections = sections.into_iter();
        let before = sections.next();
        let after = sections.next();
        let kind = kind.ok_or_else(|| ParseError::new(1, 1, "missing `move` line"))?;
        let before = before.ok_or_else(|| ParseError::new(last, 1, "missing `before` section"))?;
        let after = after.ok_or_else(|| ParseError::new(last, 1, "missing `after` section"))?;
        Ok(DiagramPair {
            before: before.finish(last)?,
            after: after.finish(last)?,
            kind,
            site,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetCounts {
    pub target_size: usize,
    pub before: u64,
    pub after: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvarianceReport {
    pub kind: Move,
    pub counts: Vec<TargetCounts>,
}

impl InvarianceReport {
    pub fn holds(&self) -> bool {
        self.counts.iter().all(|c| c.before == c.after)
    }
}

/// Coloring counts of both diagrams into each target. For an `n`-move every
/// target must satisfy the universal relation with `n` letters.
pub fn invariance_check(pair: &DiagramPair, targets: &[FiniteQuandle]) -> Result<InvarianceReport> {
    if let Move::NMove(n) = pair.kind {
        for (i, t) in targets.iter().enumerate() {
            if let Some((a, b)) = t.universal_witness(n)? {
                return Err(Error::TargetRejected(format!(
                    "target {i} fails the universal relation with {n} letters at ({a}, {b}), so {n}-moves need not preserve its colorings"
                )));
            }
        }
    }
    let mut counts = Vec::with_capacity(targets.len());
    for t in targets {
        counts.push(TargetCounts {
            target_size: t.size(),
            before: coloring_invariant(&pair.before, t)?,
            after: coloring_invariant(&pair.after, t)?,
        });
    }
    Ok(InvarianceReport {
        kind: pair.kind,
        counts,
    })
}

/// Completes the Burnside keis of both diagrams and compares them. `None`
/// when either completion runs out of budget.
pub fn burnside_invariance(pair: &DiagramPair, n: usize, budget: Budget) -> Result<Option<bool>> {
    if let Move::NMove(m) = pair.kind {
        if m != n {
            return Err(Error::InvalidArgument(format!(
                "a {m}-move need not preserve the Burnside kei with {n} letters"
            )));
        }
    }
    let a = burnside_kei_of_link(&pair.before, n, budget)?;
    let b = burnside_kei_of_link(&pair.after, n, budget)?;
    Ok(match (a.quandle(), b.quandle()) {
        (Some(x), Some(y)) => Some(x.is_isomorphic(y).is_some()),
        _ => None,
    })
}

#[derive(Debug, Clone)]
pub struct Elimination {
    /// Presentation on the surviving arcs, same kei as the diagram's.
    pub presentation: QuandlePresentation,
    pub eliminated: Vec<String>,
}

impl Elimination {
    /// An upper bound on the minimal number of generators.
    pub fn generator_count(&self) -> usize {
        self.presentation.generators.len()
    }
}

/// Repeatedly removes a generator `w` using a relation `w = u` whose other
/// side does not mention `w`, substituting `u` for `w` everywhere else.
pub fn eliminate_generators(d: &LinkDiagram) -> Elimination {
    let p = kei_presentation(d, None);
    let mut gens = p.generators;
    let mut rels = p.relations;
    let mut eliminated = Vec::new();
    loop {
        let found = rels.iter().enumerate().find_map(|(i, (l, r))| {
            for (side, other) in [(l, r), (r, l)] {
                if side.is_generator() && !other.letters().contains(side.head.as_str()) {
                    return Some((i, side.head.clone(), other.clone()));
                }
            }
            None
        });
        let Some((i, g, w)) = found else { break };
        rels.remove(i);
        for (l, r) in rels.iter_mut() {
            *l = substitute(l, &g, &w);
            *r = substitute(r, &g, &w);
        }
        rels.retain(|(l, r)| l != r);
        gens.retain(|x| *x != g);
        eliminated.push(g);
    }
    Elimination {
        presentation: QuandlePresentation {
            generators: gens,
            relations: rels,
            burnside: None,
        },
        eliminated,
    }
}

fn substitute(word: &KeiWord, g: &str, by: &KeiWord) -> KeiWord {
    let mut out = if word.head == g {
        by.clone()
    } else {
        KeiWord::letter(&word.head)
    };
    for op in &word.tail {
        out.tail.push(match op {
            Operator::Letter(l) if l == g => {
                if by.is_generator() {
                    Operator::Letter(by.head.clone())
                } else {
                    Operator::Word(by.clone())
                }
            }
            Operator::Letter(l) => Operator::Letter(l.clone()),
            Operator::Word(inner) => Operator::Word(substitute(inner, g, by)),
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::dihedral;

    const TREFOIL: &str = "# components 1\nX b a c\nX a c b\nX c b a\n";

    /// Every assignment of target elements to arcs, checked crossing by crossing.
    fn brute_colorings(d: &LinkDiagram, t: &FiniteQuandle) -> u64 {
        let m = d.arcs.len();
        let s = t.size();
        let mut count = 0;
        for code in 0..s.pow(m as u32) {
            let mut c = vec![0; m];
            let mut x = code;
            for slot in c.iter_mut() {
                *slot = x % s;
                x /= s;
            }
            if d.crossings.iter().all(|k| t.op(c[k.under_in], c[k.over]) == c[k.under_out]) {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn parses_diagrams() {
        let d = parse_pd(TREFOIL).unwrap();
        assert_eq!(d.arcs, ["b", "a", "c"]);
        assert_eq!(d.crossings.len(), 3);
        assert!(d.is_knot());
        let u = parse_pd("A a\n").unwrap();
        assert_eq!((u.arcs.len(), u.crossings.len(), u.components), (1, 0, 1));
        let d = parse_pd("X 1 2 3\nX 3 1 2\nX 2 3 1\n").unwrap();
        assert_eq!(d.arcs, ["x1", "x2", "x3"]);
        let round = parse_pd(&d.to_string()).unwrap();
        assert_eq!(round, d);
        let hopf_with_free = parse_pd("A z\nX a b a\nX b a b\n").unwrap();
        assert_eq!(hopf_with_free.components, 3);
    }

    #[test]
    fn parse_errors_have_locations() {
        let e = parse_pd("X a b c\nX c b a\nX a b\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 1));
        let e = parse_pd("X a b c\n").unwrap_err();
        assert!(e.message.contains("dangling arc `a`"), "{e}");
        assert_eq!((e.line, e.column), (1, 3));
        let e = parse_pd("# components 2\nX b a c\nX a c b\nX c b a\n").unwrap_err();
        assert_eq!(e.line, 1);
        assert!(parse_pd("Y a b c\n").is_err());
        assert!(parse_pd("X a b- c\n").is_err());
        assert!(parse_pd("").is_err());
    }

    #[test]
    fn trefoil_presentation() {
        let d = parse_pd(TREFOIL).unwrap();
        let p = kei_presentation(&d, Some(3));
        assert_eq!(p.to_string(), "gens b a c;\nburnside 3;\nrel b*a = c;\nrel a*c = b;\nrel c*b = a;\n");
        assert_eq!(kei_presentation(&d, None).burnside, None);
    }

    #[test]
    fn colorings_match_brute_force() {
        let d = parse_pd(TREFOIL).unwrap();
        let figure_eight = parse_pd("X b a d\nX a c b\nX c d a\nX d b c\n").unwrap();
        let unknot = parse_pd("A a\n").unwrap();
        for n in 2..7 {
            let t = dihedral(n);
            for diagram in [&d, &figure_eight, &unknot] {
                assert_eq!(coloring_invariant(diagram, &t).unwrap(), brute_colorings(diagram, &t));
            }
        }
        assert_eq!(coloring_invariant(&d, &dihedral(3)).unwrap(), 9);
        assert_eq!(coloring_invariant(&figure_eight, &dihedral(3)).unwrap(), 3);
        assert_eq!(coloring_invariant(&figure_eight, &dihedral(5)).unwrap(), 25);
        assert_eq!(coloring_invariant(&unknot, &dihedral(3)).unwrap(), 3);
    }

    #[test]
    fn small_burnside_keis() {
        let d = parse_pd(TREFOIL).unwrap();
        let r = burnside_kei_of_link(&d, 4, Budget::default()).unwrap();
        assert_eq!(r.finished().unwrap().size(), 1);
        let r = burnside_kei_of_link(&d, 3, Budget::default()).unwrap();
        let q = r.finished().unwrap();
        assert!(q.is_isomorphic(&dihedral(3)).is_some());
        let u = parse_pd("A a\n").unwrap();
        let r = burnside_kei_of_link(&u, 3, Budget::default()).unwrap();
        assert_eq!(r.finished().unwrap().size(), 1);
    }

    #[test]
    fn pair_parsing_and_rejection() {
        let text = "move 3-move\nsite twist region\nbefore\nX b a c\nX a c b\nX c b a\nafter\nA a b\n";
        let p = DiagramPair::parse(text).unwrap();
        assert_eq!(p.kind, Move::NMove(3));
        assert_eq!(p.site, "twist region");
        assert_eq!(p.after.components, 2);
        assert!(matches!(
            invariance_check(&p, &[dihedral(4)]),
            Err(Error::TargetRejected(_))
        ));
        let r = invariance_check(&p, &[dihedral(3)]).unwrap();
        assert!(r.holds());
        assert_eq!(r.counts[0].before, 9);
        assert!(DiagramPair::parse("move R4\nbefore\nA a\nafter\nA a\n").is_err());
        assert!(DiagramPair::parse("move R1\nbefore\nA a\n").is_err());
        assert_eq!(Move::parse("R2").unwrap().to_string(), "R2");
    }

    #[test]
    fn elimination_keeps_the_kei() {
        let d = parse_pd("X b a d\nX a c b\nX c d a\nX d b c\n").unwrap();
        let e = eliminate_generators(&d);
        assert!(e.generator_count() <= 3);
        let t = dihedral(5);
        let direct = coloring_invariant(&d, &t).unwrap();
        let reduced = t.hom_count(&e.presentation, HomOptions::default()).unwrap().count;
        assert_eq!(direct, reduced);
        let w = KeiWord::parse("a*b*(c*a)").unwrap();
        let by = KeiWord::parse("x*y").unwrap();
        assert_eq!(substitute(&w, "a", &by).to_string(), "x*y*b*(c*(x*y))");
    }
}
