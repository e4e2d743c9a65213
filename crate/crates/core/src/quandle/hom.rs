//! Homomorphism counting from presentations, and isomorphism search.

use rayon::prelude::*;

use super::generate::Bits;
use super::FiniteQuandle;
use crate::error::{Error, Result};
use crate::presentation::QuandlePresentation;
use crate::word::{KeiWord, Operator};

#[derive(Debug, Clone, Copy, Default)]
pub struct HomOptions {
    /// Reject targets that do not satisfy the presentation's universal
    /// relation themselves.
    pub require_universal: bool,
    /// Keep every homomorphism, not just the count.
    pub collect: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomCount {
    pub count: u64,
    /// Images of the generators, in presentation order, when collected.
    pub homs: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone)]
enum Op {
    Gen(usize),
    Word(Compiled),
}

#[derive(Debug, Clone)]
struct Compiled {
    head: usize,
    tail: Vec<Op>,
}

impl Compiled {
    fn new(w: &KeiWord, gens: &[String]) -> Result<Self> {
        let idx = |l: &str| {
            gens.iter()
                .position(|g| g == l)
                .ok_or_else(|| Error::UnboundLetter(l.to_string()))
        };
        Ok(Compiled {
            head: idx(&w.head)?,
            tail: w
                .tail
                .iter()
                .map(|op| match op {
                    Operator::Letter(l) => idx(l).map(Op::Gen),
                    Operator::Word(inner) => Compiled::new(inner, gens).map(Op::Word),
                })
                .collect::<Result<_>>()?,
        })
    }

    fn eval(&self, q: &FiniteQuandle, assign: &[usize]) -> usize {
        let mut x = assign[self.head];
        for op in &self.tail {
            let y = match op {
                Op::Gen(g) => assign[*g],
                Op::Word(w) => w.eval(q, assign),
            };
            x = q.op(x, y);
        }
        x
    }

    fn max_gen(&self) -> usize {
        self.tail.iter().fold(self.head, |acc, op| {
            acc.max(match op {
                Op::Gen(g) => *g,
                Op::Word(w) => w.max_gen(),
            })
        })
    }

    fn uses(&self, g: usize) -> bool {
        self.head == g
            || self.tail.iter().any(|op| match op {
                Op::Gen(h) => *h == g,
                Op::Word(w) => w.uses(g),
            })
    }

    fn single(&self) -> Option<usize> {
        self.tail.is_empty().then_some(self.head)
    }
}

/// Relations grouped by the last generator they mention, so each is checked
/// as soon as its letters are assigned.
struct Plan {
    gens: usize,
    checks: Vec<Vec<(Compiled, Compiled)>>,
    /// A relation `g_i = word(g_0..g_{i-1})` that fixes the image of `g_i`.
    forced: Vec<Option<Compiled>>,
}

impl Plan {
    fn new(relations: &[(KeiWord, KeiWord)], gens: &[String]) -> Result<Plan> {
        let k = gens.len();
        let mut checks: Vec<Vec<(Compiled, Compiled)>> = vec![Vec::new(); k];
        let mut forced: Vec<Option<Compiled>> = vec![None; k];
        for (l, r) in relations {
            let l = Compiled::new(l, gens)?;
            let r = Compiled::new(r, gens)?;
            let level = l.max_gen().max(r.max_gen());
            for (a, b) in [(&l, &r), (&r, &l)] {
                if forced[level].is_none() && a.single() == Some(level) && !b.uses(level) {
                    forced[level] = Some(b.clone());
                }
            }
            checks[level].push((l, r));
        }
        Ok(Plan {
            gens: k,
            checks,
            forced,
        })
    }

    fn search(
        &self,
        q: &FiniteQuandle,
        assign: &mut Vec<usize>,
        out: &mut Option<Vec<Vec<usize>>>,
    ) -> u64 {
        let i = assign.len();
        if i == self.gens {
            if let Some(o) = out {
                o.push(assign.clone());
            }
            return 1;
        }
        let mut total = 0;
        let candidates: Vec<usize> = match &self.forced[i] {
            Some(w) => vec![w.eval(q, assign)],
            None => (0..q.size()).collect(),
        };
        for v in candidates {
            assign.push(v);
            if self.checks[i]
                .iter()
                .all(|(l, r)| l.eval(q, assign) == r.eval(q, assign))
            {
                total += self.search(q, assign, out);
            }
            assign.pop();
        }
        total
    }
}

/// Relations of `p` with the universal relation instantiated on every
/// ordered pair of distinct generators.
pub(crate) fn relations_with_universal(p: &QuandlePresentation) -> Vec<(KeiWord, KeiWord)> {
    let mut rels = p.relations.clone();
    if let Some(n) = p.burnside {
        for a in &p.generators {
            for b in &p.generators {
                if a != b {
                    rels.push((KeiWord::letter(a.clone()), burnside_word(a, b, n)));
                }
            }
        }
    }
    rels
}

/// The word `...a*b*...*a*b` with `n` letters ending in `b`.
pub fn burnside_word(a: &str, b: &str, n: usize) -> KeiWord {
    let letters: Vec<&str> = (0..n)
        .map(|i| if (n - 1 - i) % 2 == 0 { b } else { a })
        .collect();
    KeiWord::from_letters(&letters)
}

impl FiniteQuandle {
    /// Number of assignments of the presentation's generators to elements of
    /// `self` satisfying every relation. The universal relation, if present,
    /// is imposed on generator pairs only, unless
    /// [`HomOptions::require_universal`] asks for the target to satisfy it
    /// outright.
    pub fn hom_count(&self, p: &QuandlePresentation, opts: HomOptions) -> Result<HomCount> {
        if let (Some(n), true) = (p.burnside, opts.require_universal) {
            if let Some((a, b)) = self.universal_witness(n)? {
                return Err(Error::TargetRejected(format!(
                    "target violates the universal relation with {n} letters at ({a}, {b})"
                )));
            }
        }
        let plan = Plan::new(&relations_with_universal(p), &p.generators)?;
        if plan.gens == 0 {
            return Ok(HomCount {
                count: 1,
                homs: opts.collect.then(|| vec![Vec::new()]),
            });
        }
        let parts: Vec<(u64, Option<Vec<Vec<usize>>>)> = (0..self.size())
            .into_par_iter()
            .map(|first| {
                let mut assign = vec![first];
                let mut out = opts.collect.then(Vec::new);
                let ok = plan.checks[0]
                    .iter()
                    .all(|(l, r)| l.eval(self, &assign) == r.eval(self, &assign));
                let n = if ok { plan.search(self, &mut assign, &mut out) } else { 0 };
                (n, out)
            })
            .collect();
        let count = parts.iter().map(|p| p.0).sum();
        let homs = opts
            .collect
            .then(|| parts.into_iter().flat_map(|p| p.1.unwrap()).collect());
        Ok(HomCount { count, homs })
    }

    fn element_signatures(&self) -> Vec<Vec<usize>> {
        let m = self.size();
        let comps = self.components();
        let comp_labels = comps.labels(m);
        let beh = self.behavioral_classes();
        let beh_labels = beh.labels(m);
        let medial = m <= 100;
        (0..m)
            .map(|x| {
                let col_fixed = (0..m).filter(|&y| self.op(y, x) == y).count();
                let row_fixed = (0..m).filter(|&y| self.op(x, y) == x).count();
                let commuting = (0..m).filter(|&y| self.op(x, y) == self.op(y, x)).count();
                let mut sig = vec![
                    col_fixed,
                    row_fixed,
                    commuting,
                    comps.blocks[comp_labels[x]].len(),
                    beh.blocks[beh_labels[x]].len(),
                ];
                if medial {
                    let mut count = 0;
                    for y in 0..m {
                        let xy = self.op(x, y);
                        for z in 0..m {
                            let xz = self.op(x, z);
                            for w in 0..m {
                                if self.op(xy, self.op(z, w)) == self.op(xz, self.op(y, w)) {
                                    count += 1;
                                }
                            }
                        }
                    }
                    sig.push(count);
                }
                sig
            })
            .collect()
    }

    /// Extends `gens[i] ↦ images[i]` over the closure of `gens`, failing on
    /// an inconsistency or a collision. Returns the closure size on success.
    fn extend_map(
        &self,
        other: &FiniteQuandle,
        gens: &[usize],
        images: &[usize],
        map: &mut [usize],
        inv: &mut [usize],
    ) -> Option<usize> {
        map.fill(usize::MAX);
        inv.fill(usize::MAX);
        let mut bits = Bits::new(self.size());
        let mut list: Vec<usize> = Vec::new();
        let mut assign = |x: usize, t: usize, list: &mut Vec<usize>, map: &mut [usize], inv: &mut [usize]| {
            if map[x] != usize::MAX {
                return map[x] == t;
            }
            if inv[t] != usize::MAX {
                return false;
            }
            map[x] = t;
            inv[t] = x;
            bits.insert(x);
            list.push(x);
            true
        };
        for (&g, &t) in gens.iter().zip(images) {
            if !assign(g, t, &mut list, map, inv) {
                return None;
            }
        }
        let mut p = 0;
        while p < list.len() {
            let e = list[p];
            for j in 0..=p {
                let f = list[j];
                for (a, b) in [(e, f), (f, e)] {
                    let v = self.op(a, b);
                    let t = other.op(map[a], map[b]);
                    if !assign(v, t, &mut list, map, inv) {
                        return None;
                    }
                }
            }
            p += 1;
        }
        Some(list.len())
    }

    /// A bijection `φ` with `φ(x*y) = φ(x)*φ(y)`, if one exists.
    ///
    /// Maps a greedy generating set of `self` one element at a time, extends
    /// the partial map over the generated subquandle after each choice, and
    /// backtracks on any inconsistency. Candidates are filtered by
    /// per-element invariants first. The first generator's image is split
    /// across threads; the lowest successful branch wins, so the answer is
    /// deterministic.
    pub fn is_isomorphic(&self, other: &FiniteQuandle) -> Option<Vec<usize>> {
        let m = self.size();
        if m != other.size() {
            return None;
        }
        let sa = self.element_signatures();
        let sb = other.element_signatures();
        let mut sorted_a = sa.clone();
        let mut sorted_b = sb.clone();
        sorted_a.sort();
        sorted_b.sort();
        if sorted_a != sorted_b {
            return None;
        }
        let gens = self.greedy_generators();
        let prefix_sizes: Vec<usize> = (1..=gens.len())
            .map(|i| self.closure(&gens[..i]).unwrap().len())
            .collect();
        let candidates: Vec<Vec<usize>> = gens
            .iter()
            .map(|&g| (0..m).filter(|&t| sb[t] == sa[g]).collect())
            .collect();

        candidates[0].par_iter().find_map_first(|&first| {
            let mut map = vec![usize::MAX; m];
            let mut inv = vec![usize::MAX; m];
            let mut images = vec![first];
            if self.extend_map(other, &gens[..1], &images, &mut map, &mut inv) != Some(prefix_sizes[0]) {
                return None;
            }
            self.iso_search(other, &gens, &prefix_sizes, &candidates, &mut images, &mut map, &mut inv)
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn iso_search(
        &self,
        other: &FiniteQuandle,
        gens: &[usize],
        prefix_sizes: &[usize],
        candidates: &[Vec<usize>],
        images: &mut Vec<usize>,
        map: &mut [usize],
        inv: &mut [usize],
    ) -> Option<Vec<usize>> {
        let i = images.len();
        if i == gens.len() {
            self.extend_map(other, gens, images, map, inv)?;
            return Some(map.to_vec());
        }
        for &t in &candidates[i] {
            if images.contains(&t) {
                continue;
            }
            images.push(t);
            if self.extend_map(other, &gens[..=i], images, map, inv) == Some(prefix_sizes[i]) {
                if let Some(found) = self.iso_search(other, gens, prefix_sizes, candidates, images, map, inv) {
                    return Some(found);
                }
            }
            images.pop();
        }
        None
    }

    /// Checks that `phi` is a bijective homomorphism onto `other`.
    pub fn is_isomorphism(&self, other: &FiniteQuandle, phi: &[usize]) -> bool {
        let m = self.size();
        if other.size() != m || phi.len() != m {
            return false;
        }
        let mut hit = vec![false; m];
        for &t in phi {
            if t >= m || std::mem::replace(&mut hit[t], true) {
                return false;
            }
        }
        (0..m).all(|x| (0..m).all(|y| phi[self.op(x, y)] == other.op(phi[x], phi[y])))
    }
}
