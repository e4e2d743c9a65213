//! Completion of a presentation into a finite kei.
//!
//! The engine enumerates the elements as vertices of a Schreier graph for
//! the generator translations, in the style of Todd–Coxeter coset
//! enumeration. Right multiplication by an element `y = g_h * g_t1 * ... *
//! g_tj` acts as the generator word `W_y = tj..t1 h t1..tj`, so every
//! equation between elements `u = v` contributes two things:
//!
//! * the vertices reached by `u` and `v` are identified;
//! * the word `W_u W_v` must act trivially, so it becomes a relator that is
//!   kept closed at every vertex.
//!
//! Each generator vertex carries a loop for its own translation. The
//! universal relation is instantiated lazily: when a vertex `b` is
//! processed, `r_n(g, b)` is imposed for every generator `g`. Since right
//! translations are automorphisms, this covers every pair of elements.
//!
//! Vertices are processed in creation order (HLT strategy): impose the
//! universal relation, close every relator at the vertex, then define any
//! missing edges. A relator found later is closed at every processed
//! vertex straight away. When the pointer runs past the last vertex, every
//! live vertex has all its edges and every relator and equation holds.

use std::collections::HashSet;
use std::rc::Rc;

use super::graph::{cyclic_key, operator_word, reduce, Graph, NONE};
use super::trace::{Rule, Trace, TraceEvent};
use super::QuandlePresentation;
use crate::error::{Error, Result};
use crate::quandle::{FiniteQuandle, ReportMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Cap on simultaneously live vertices.
    pub max_elements: usize,
    /// Cap on relator scans plus identifications.
    pub max_steps: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_elements: 10_000,
            max_steps: 10_000_000,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Stats {
    pub allocated: usize,
    pub live: usize,
    pub merges: usize,
    pub steps: u64,
    pub relators: usize,
}

#[derive(Debug, Clone)]
pub enum Outcome {
    Finished(FiniteQuandle),
    Diverged { budget: Budget, stats: Stats },
}

#[derive(Debug, Clone)]
pub struct CompletionResult {
    pub outcome: Outcome,
    pub stats: Stats,
    /// Element of each presentation generator, in declaration order. Empty
    /// when diverged.
    pub generator_elements: Vec<usize>,
    pub trace: Option<Trace>,
}

impl CompletionResult {
    pub fn quandle(&self) -> Option<&FiniteQuandle> {
        match &self.outcome {
            Outcome::Finished(q) => Some(q),
            Outcome::Diverged { .. } => None,
        }
    }

    pub fn is_finished(&self) -> bool {
        self.quandle().is_some()
    }

    pub fn finished(&self) -> Result<&FiniteQuandle> {
        self.quandle().ok_or(Error::Diverged)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CompleteOptions {
    pub budget: Budget,
    pub trace: bool,
}

struct OutOfBudget;

type Step<T = ()> = std::result::Result<T, OutOfBudget>;

/// An element expression: a head vertex with its defining word, then a
/// sequence of right translations given as generator words.
struct Expr {
    head: u32,
    head_word: Vec<u8>,
    ops: Vec<Vec<u8>>,
}

impl Expr {
    fn operator_word(&self) -> Vec<u8> {
        let flat: Vec<u8> = self.ops.iter().flatten().copied().collect();
        let mut out: Vec<u8> = flat.iter().rev().copied().collect();
        out.extend(operator_word(&self.head_word));
        out.extend(flat);
        out
    }

    fn path(&self) -> Vec<u8> {
        self.ops.iter().flatten().copied().collect()
    }
}

struct Engine {
    g: Graph,
    relators: Vec<Rc<[u8]>>,
    keys: HashSet<Vec<u8>>,
    processed: usize,
    steps: u64,
    equations: usize,
    budget: Budget,
    trace: Option<Vec<TraceEvent>>,
}

impl Engine {
    fn stats(&self) -> Stats {
        Stats {
            allocated: self.g.len(),
            live: self.g.live(),
            merges: self.g.merges,
            steps: self.steps,
            relators: self.relators.len(),
        }
    }

    fn step(&mut self) -> Step {
        self.steps += 1;
        if self.steps > self.budget.max_steps {
            Err(OutOfBudget)
        } else {
            Ok(())
        }
    }

    fn log(&mut self, e: TraceEvent) {
        if let Some(t) = &mut self.trace {
            t.push(e);
        }
    }

    fn define(&mut self, u: u32, s: u8) -> Step<u32> {
        if self.g.live() >= self.budget.max_elements {
            return Err(OutOfBudget);
        }
        let v = self.g.define(u, s);
        self.log(TraceEvent::Define {
            vertex: v,
            from: u,
            letter: s,
        });
        Ok(v)
    }

    fn coincide(&mut self, a: u32, b: u32, rule: Rule) -> Step {
        if self.g.find(a) == self.g.find(b) {
            return Ok(());
        }
        let before = self.g.merges;
        match &mut self.trace {
            Some(t) => {
                let mut first = Some(rule);
                self.g.coincidence(a, b, |lo, hi| {
                    let rule = first.take().unwrap_or(Rule::Cascade);
                    t.push(TraceEvent::Merge { a: lo, b: hi, rule });
                });
            }
            None => self.g.coincidence(a, b, |_, _| {}),
        }
        self.steps += (self.g.merges - before) as u64;
        if self.steps > self.budget.max_steps {
            return Err(OutOfBudget);
        }
        Ok(())
    }

    /// Makes relator `ri` close at `v`, defining vertices as needed.
    fn scan(&mut self, v: u32, ri: usize) -> Step {
        self.step()?;
        let r = Rc::clone(&self.relators[ri]);
        loop {
            let (f, i) = self.g.forward(v, &r);
            if i == r.len() {
                if f != v {
                    self.coincide(f, v, Rule::Relator { id: ri, at: v })?;
                }
                return Ok(());
            }
            let (b, j) = self.g.backward(v, &r, i);
            if j == i {
                if f != b {
                    self.coincide(f, b, Rule::Relator { id: ri, at: v })?;
                }
                return Ok(());
            }
            if j == i + 1 {
                self.g.join(f, r[i], b);
                self.log(TraceEvent::Deduce {
                    from: f,
                    letter: r[i],
                    to: b,
                    relator: ri,
                    at: v,
                });
                return Ok(());
            }
            self.define(f, r[i])?;
        }
    }

    /// Registers a relator unless an equivalent one is known, and closes it
    /// at every processed vertex.
    fn add_relator(&mut self, word: &[u8]) -> Step {
        let r = reduce(word);
        if r.is_empty() || !self.keys.insert(cyclic_key(&r)) {
            return Ok(());
        }
        let id = self.relators.len();
        self.log(TraceEvent::Relator { id, word: r.clone() });
        self.relators.push(r.into());
        for v in 0..self.processed as u32 {
            if self.g.alive(v) {
                self.scan(v, id)?;
            }
        }
        Ok(())
    }

    fn trace_defining(&mut self, start: u32, letters: &[u8]) -> Step<u32> {
        let mut cur = self.g.find(start);
        for &s in letters {
            let w = self.g.edge(cur, s);
            cur = if w == NONE { self.define(cur, s)? } else { w };
        }
        Ok(cur)
    }

    fn equation(&mut self, lhs: Expr, rhs: Expr) -> Step {
        let mut rel = lhs.operator_word();
        rel.extend(rhs.operator_word());
        self.add_relator(&rel)?;
        let id = self.equations;
        self.equations += 1;
        let lp = lhs.path();
        let rp = rhs.path();
        let lh = self.g.find(lhs.head);
        let rh = self.g.find(rhs.head);
        self.log(TraceEvent::Equation {
            id,
            lhs: (lh, lp.clone()),
            rhs: (rh, rp.clone()),
        });
        let a = self.trace_defining(lh, &lp)?;
        let b = self.trace_defining(rh, &rp)?;
        self.coincide(a, b, Rule::Equation { id })
    }

    /// `r_n(g, b)`: `g = ...*g*b` with `n` letters ending in `b`.
    fn universal(&mut self, gen: u8, b: u32, n: usize) -> Step {
        let gv = self.g.find(gen as u32);
        if gv == self.g.find(b) {
            return Ok(());
        }
        let b_word = self.g.word(b);
        let wb = operator_word(&b_word);
        let is_b = |i: usize| (n - 1 - i) % 2 == 0;
        let (head, head_word) = if is_b(0) {
            (b, b_word)
        } else {
            (gv, vec![gen])
        };
        let ops = (1..n)
            .map(|i| if is_b(i) { wb.clone() } else { vec![gen] })
            .collect();
        let lhs = Expr {
            head: gv,
            head_word: vec![gen],
            ops: Vec::new(),
        };
        self.equation(lhs, Expr { head, head_word, ops })
    }

    fn run(&mut self, p: &QuandlePresentation, gen_index: &dyn Fn(&str) -> u8) -> Step {
        let k = p.generators.len();
        for g in 0..k as u8 {
            let v = self.g.add_generator(g);
            self.log(TraceEvent::Generator { vertex: v, letter: g });
        }
        for (l, r) in &p.relations {
            let expr = |w: &crate::word::KeiWord| {
                let letters: Vec<u8> = w.flat_letters().iter().map(|s| gen_index(s)).collect();
                Expr {
                    head: letters[0] as u32,
                    head_word: vec![letters[0]],
                    ops: letters[1..].iter().map(|&s| vec![s]).collect(),
                }
            };
            self.equation(expr(l), expr(r))?;
        }
        while self.processed < self.g.len() {
            let v = self.processed as u32;
            if let Some(n) = p.burnside {
                for gen in 0..k as u8 {
                    if !self.g.alive(v) {
                        break;
                    }
                    self.universal(gen, v, n)?;
                }
            }
            let mut ri = 0;
            while ri < self.relators.len() && self.g.alive(v) {
                self.scan(v, ri)?;
                ri += 1;
            }
            if self.g.alive(v) {
                for s in 0..k as u8 {
                    if self.g.edge(v, s) == NONE {
                        self.define(v, s)?;
                    }
                }
            }
            self.processed += 1;
        }
        Ok(())
    }
}

/// Builds the finished kei from a closed graph. Elements are numbered in
/// breadth-first order from the generator vertices, trying generators in
/// declaration order, so element `i` is named by its shortlex-least
/// left-normed word.
pub(crate) fn finish(g: &mut Graph, names: &[String]) -> Result<(FiniteQuandle, Vec<usize>)> {
    let k = g.k;
    let mut new_id = vec![NONE; g.len()];
    let mut order: Vec<u32> = Vec::new();
    let mut words: Vec<Vec<u8>> = Vec::new();
    let mut gen_elements = Vec::with_capacity(k);
    for gen in 0..k {
        let r = g.find(gen as u32);
        if new_id[r as usize] == NONE {
            new_id[r as usize] = order.len() as u32;
            order.push(r);
            words.push(vec![gen as u8]);
        }
        gen_elements.push(new_id[r as usize] as usize);
    }
    let distinct_gens = order.len();
    let mut pos = 0;
    while pos < order.len() {
        let v = order[pos];
        for s in 0..k as u8 {
            let w = g.edge(v, s);
            if w == NONE {
                return Err(Error::Internal(format!("vertex {v} lacks an edge at finish")));
            }
            let w = g.find(w);
            if new_id[w as usize] == NONE {
                new_id[w as usize] = order.len() as u32;
                order.push(w);
                let mut word = words[pos].clone();
                word.push(s);
                words.push(word);
            }
        }
        pos += 1;
    }
    let m = order.len();
    let mut table = vec![0usize; m * m];
    for (y, wy) in words.iter().enumerate() {
        let op = operator_word(wy);
        for (x, &vx) in order.iter().enumerate() {
            let mut cur = vx;
            for &s in &op {
                cur = g.find(g.edge(cur, s));
            }
            table[x * m + y] = new_id[cur as usize] as usize;
        }
    }
    let element_names: Vec<String> = words
        .iter()
        .map(|w| {
            w.iter()
                .map(|&s| names[s as usize].as_str())
                .collect::<Vec<_>>()
                .join("*")
        })
        .collect();
    let q = FiniteQuandle::from_fn(m, |x, y| table[x * m + y])?
        .with_names(element_names)?
        .with_generators((0..distinct_gens).collect())?;
    Ok((q, gen_elements))
}

/// Exhaustive re-check of a finished table against the presentation.
pub(crate) fn verify(q: &FiniteQuandle, p: &QuandlePresentation, gens: &[usize]) -> Result<()> {
    let report = q.validate(ReportMode::FirstPerAxiom);
    if let Some(v) = report.violations.first() {
        return Err(Error::Internal(format!(
            "completed table violates axiom {} at {:?}",
            v.axiom, v.witness
        )));
    }
    if let Some(n) = p.burnside {
        if let Some((a, b)) = q.universal_witness(n)? {
            return Err(Error::Internal(format!(
                "completed table violates r_{n} at ({a}, {b})"
            )));
        }
    }
    let env = p
        .generators
        .iter()
        .cloned()
        .zip(gens.iter().copied())
        .collect();
    for (l, r) in &p.relations {
        if q.eval_word(l, &env)? != q.eval_word(r, &env)? {
            return Err(Error::Internal(format!("completed table violates {l} = {r}")));
        }
    }
    Ok(())
}

pub fn complete(p: &QuandlePresentation, budget: Budget) -> Result<CompletionResult> {
    complete_with(p, CompleteOptions { budget, trace: false })
}

pub fn complete_with(p: &QuandlePresentation, opts: CompleteOptions) -> Result<CompletionResult> {
    if opts.budget.max_elements == 0 || opts.budget.max_steps == 0 {
        return Err(Error::InvalidArgument("budget must be positive".into()));
    }
    let k = p.generators.len();
    if k == 0 {
        return Err(Error::InvalidArgument("presentation has no generators".into()));
    }
    if k > u8::MAX as usize {
        return Err(Error::InvalidArgument(format!("too many generators ({k})")));
    }
    let mut engine = Engine {
        g: Graph::new(k),
        relators: Vec::new(),
        keys: HashSet::new(),
        processed: 0,
        steps: 0,
        equations: 0,
        budget: opts.budget,
        trace: opts.trace.then(Vec::new),
    };
    let gen_index = |s: &str| p.generators.iter().position(|g| g == s).unwrap() as u8;
    let run = engine.run(p, &gen_index);
    let stats = engine.stats();
    let trace = engine.trace.take().map(|events| Trace {
        generators: p.generators.clone(),
        events,
    });
    if run.is_err() {
        return Ok(CompletionResult {
            outcome: Outcome::Diverged {
                budget: opts.budget,
                stats: stats.clone(),
            },
            stats,
            generator_elements: Vec::new(),
            trace,
        });
    }
    let (q, gens) = finish(&mut engine.g, &p.generators)?;
    verify(&q, p, &gens)?;
    Ok(CompletionResult {
        outcome: Outcome::Finished(q),
        stats,
        generator_elements: gens,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::dihedral;

    fn build(text: &str) -> FiniteQuandle {
        let p: QuandlePresentation = text.parse().unwrap();
        complete(&p, Budget::default()).unwrap().finished().unwrap().clone()
    }

    #[test]
    fn two_generators_give_dihedral() {
        for n in 2..=8 {
            let q = build(&format!("gens a b; burnside {n};"));
            assert_eq!(q.size(), n, "n = {n}");
            assert!(q.is_isomorphic(&dihedral(n)).is_some(), "n = {n}");
        }
    }

    #[test]
    fn three_generators_r3() {
        let q = build("gens a b c; burnside 3;");
        assert_eq!(q.size(), 9);
        assert!(q.is_isomorphic(&dihedral(3).power(2)).is_some());
    }

    #[test]
    fn names_are_shortlex() {
        let q = build("gens a b; burnside 3;");
        assert_eq!(q.names().unwrap(), &["a", "b", "a*b"]);
        assert_eq!(q.generators().unwrap(), &[0, 1]);
    }

    #[test]
    fn explicit_relations() {
        // trivial quandle on two points
        let q = build("gens x y; rel x*y = x; rel y*x = y;");
        assert_eq!(q.size(), 2);
        assert!(q.is_isomorphic(&FiniteQuandle::trivial(2)).is_some());
        // trefoil fundamental kei is dihedral(3)
        let q = build("gens a b c; rel a*b = c; rel b*c = a; rel c*a = b;");
        assert!(q.is_isomorphic(&dihedral(3)).is_some());
        // identifying generators
        let p: QuandlePresentation = "gens a b; rel a = b;".parse().unwrap();
        let r = complete(&p, Budget::default()).unwrap();
        assert_eq!(r.finished().unwrap().size(), 1);
        assert_eq!(r.generator_elements, vec![0, 0]);
    }

    #[test]
    fn free_kei_diverges() {
        let p: QuandlePresentation = "gens a b;".parse().unwrap();
        let r = complete(
            &p,
            Budget {
                max_elements: 200,
                max_steps: 100_000,
            },
        )
        .unwrap();
        assert!(matches!(r.outcome, Outcome::Diverged { .. }));
        assert!(r.finished().is_err());
    }

    #[test]
    fn single_generator() {
        assert_eq!(build("gens a;").size(), 1);
        assert_eq!(build("gens a; burnside 4;").size(), 1);
    }

    #[test]
    fn zero_budget_rejected() {
        let p: QuandlePresentation = "gens a;".parse().unwrap();
        let b = Budget {
            max_elements: 0,
            max_steps: 1,
        };
        assert!(complete(&p, b).is_err());
    }
}
