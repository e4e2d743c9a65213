//! Operator groups of finite quandles, and associated-group presentations.
//!
//! The right translation `f_x` sends `y` to `y*x`. `Op(Q)` is the permutation
//! group they generate.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use indexmap::IndexSet;

use crate::error::{Error, Result};
use crate::presentation::QuandlePresentation;
use crate::quandle::FiniteQuandle;
use crate::word::{KeiWord, Operator};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn identity(m: usize) -> Self {
        Permutation((0..m as u32).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let m = images.len();
        let mut seen = vec![false; m];
        for &i in &images {
            if i >= m || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidArgument("images do not form a permutation".into()));
            }
        }
        Ok(Permutation(images.into_iter().map(|i| i as u32).collect()))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut out = vec![0u32; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            out[j as usize] = i as u32;
        }
        Permutation(out)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// `g⁻¹ ∘ self ∘ g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        g.inverse().compose(&self.compose(g))
    }

    pub fn images(&self) -> Vec<usize> {
        self.0.iter().map(|&i| i as usize).collect()
    }

    /// Disjoint cycles including fixed points, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i);
                i = self.apply(i);
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in self.cycles() {
            let parts: Vec<String> = c.iter().map(|i| i.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

/// The right translation `f_x: y ↦ y*x`.
pub fn translation(q: &FiniteQuandle, x: usize) -> Permutation {
    Permutation(q.column(x).into_iter().map(|i| i as u32).collect())
}

/// A permutation group with every element materialized, in BFS order from
/// the identity.
#[derive(Debug, Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: IndexSet<Permutation>,
}

impl PermGroup {
    /// Closure of `generators` under composition, or `None` once more than
    /// `cap` elements turn up.
    pub fn generate(degree: usize, generators: Vec<Permutation>, cap: usize) -> Result<Option<PermGroup>> {
        if cap == 0 {
            return Err(Error::InvalidArgument("cap must be positive".into()));
        }
        if generators.iter().any(|g| g.degree() != degree) {
            return Err(Error::InvalidArgument("generator of the wrong degree".into()));
        }
        let mut elements = IndexSet::new();
        elements.insert(Permutation::identity(degree));
        let mut i = 0;
        while i < elements.len() {
            for g in &generators {
                let p = g.compose(&elements[i]);
                if elements.insert(p) && elements.len() > cap {
                    return Ok(None);
                }
            }
            i += 1;
        }
        Ok(Some(PermGroup {
            degree,
            generators,
            elements,
        }))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.contains(p)
    }

    pub fn elements(&self) -> impl Iterator<Item = &Permutation> {
        self.elements.iter()
    }

    /// Conjugacy class of `p`, as its orbit under conjugation by the
    /// generators.
    pub fn conjugacy_class(&self, p: &Permutation) -> Vec<Permutation> {
        conjugation_orbit(p, &self.generators)
    }
}

fn conjugation_orbit(p: &Permutation, by: &[Permutation]) -> Vec<Permutation> {
    let mut orbit = IndexSet::new();
    orbit.insert(p.clone());
    let mut queue = VecDeque::from([p.clone()]);
    while let Some(x) = queue.pop_front() {
        for g in by {
            let y = x.conjugate_by(g);
            if orbit.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    orbit.into_iter().collect()
}

#[derive(Debug, Clone)]
pub enum OpGroup {
    Complete(PermGroup),
    CapExceeded { cap: usize },
}

impl OpGroup {
    pub fn group(&self) -> Option<&PermGroup> {
        match self {
            OpGroup::Complete(g) => Some(g),
            OpGroup::CapExceeded { .. } => None,
        }
    }

    pub fn order(&self) -> Option<usize> {
        self.group().map(PermGroup::order)
    }
}

/// Translations of a generating set of `q`, without repeats. They generate
/// `Op(q)` because `f_{x*y} = f_y f_x f_y`.
fn generator_translations(q: &FiniteQuandle) -> Vec<Permutation> {
    let mut out: Vec<Permutation> = Vec::new();
    for x in q.generating_set() {
        let f = translation(q, x);
        if !out.contains(&f) {
            out.push(f);
        }
    }
    out
}

/// `Op(q)`, materialized when its order is at most `cap`.
pub fn op_group(q: &FiniteQuandle, cap: usize) -> Result<OpGroup> {
    if !q.columns_are_permutations() {
        return Err(Error::InvalidArgument("right translations are not bijective".into()));
    }
    Ok(match PermGroup::generate(q.size(), generator_translations(q), cap)? {
        Some(g) => OpGroup::Complete(g),
        None => OpGroup::CapExceeded { cap },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingReport {
    /// `x ↦ f_x` is injective.
    pub injective: bool,
    /// Two distinct elements with the same translation.
    pub collision: Option<(usize, usize)>,
    /// `f_{x*y} = f_y f_x f_y` for all `x, y`.
    pub conjugation_holds: bool,
    pub conjugation_witness: Option<(usize, usize)>,
    /// Size of the union of the conjugacy classes in `Op(q)` of the
    /// generators' translations.
    pub class_union: usize,
    /// How many elements have their translation in that union.
    pub elements_in_union: usize,
}

impl EmbeddingReport {
    /// The image of `q` is exactly the union of the generator classes.
    pub fn union_is_image(&self) -> bool {
        self.injective && self.class_union == self.elements_in_union
    }
}

pub fn conj_embedding_check(q: &FiniteQuandle) -> Result<EmbeddingReport> {
    if !q.columns_are_permutations() {
        return Err(Error::InvalidArgument("right translations are not bijective".into()));
    }
    let m = q.size();
    let fs: Vec<Permutation> = (0..m).map(|x| translation(q, x)).collect();

    let mut first: HashMap<&Permutation, usize> = HashMap::new();
    let mut collision = None;
    for (x, f) in fs.iter().enumerate() {
        if let Some(&y) = first.get(f) {
            collision.get_or_insert((y, x));
        } else {
            first.insert(f, x);
        }
    }

    let mut conjugation_witness = None;
    'outer: for x in 0..m {
        for y in 0..m {
            let lhs = &fs[q.op(x, y)];
            let rhs = fs[y].inverse().compose(&fs[x].compose(&fs[y]));
            if *lhs != rhs {
                conjugation_witness = Some((x, y));
                break 'outer;
            }
        }
    }

    let gens = generator_translations(q);
    let mut union: IndexSet<Permutation> = IndexSet::new();
    for g in &gens {
        if !union.contains(g) {
            union.extend(conjugation_orbit(g, &gens));
        }
    }
    let elements_in_union = fs.iter().filter(|f| union.contains(*f)).count();

    Ok(EmbeddingReport {
        injective: collision.is_none(),
        collision,
        conjugation_holds: conjugation_witness.is_none(),
        conjugation_witness,
        class_union: union.len(),
        elements_in_union,
    })
}

/// A finitely presented group: relators are words over the generators, with
/// `^-1` marking inverses and `^k` powers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPresentationText {
    pub generators: Vec<String>,
    pub relators: Vec<String>,
    /// Lines printed as `#` comments before the relators.
    pub notes: Vec<String>,
}

impl GroupPresentationText {
    /// The same presentation as a GAP script defining `G`.
    pub fn to_gap(&self) -> String {
        let mut out = String::new();
        for n in &self.notes {
            out.push_str(&format!("# {n}\n"));
        }
        let quoted: Vec<String> = self.generators.iter().map(|g| format!("\"{g}\"")).collect();
        out.push_str(&format!("F := FreeGroup({});\n", quoted.join(", ")));
        for (i, g) in self.generators.iter().enumerate() {
            out.push_str(&format!("{g} := F.{};\n", i + 1));
        }
        let rels: Vec<String> = self.relators.iter().map(|r| gap_word(r)).collect();
        out.push_str(&format!("G := F / [ {} ];\n", rels.join(", ")));
        out
    }
}

fn gap_word(r: &str) -> String {
    if r.is_empty() {
        return "One(F)".into();
    }
    r.split(' ').collect::<Vec<_>>().join("*")
}

impl fmt::Display for GroupPresentationText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for n in &self.notes {
            writeln!(f, "# {n}")?;
        }
        writeln!(f, "generators {}", self.generators.join(" "))?;
        for r in &self.relators {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Free group word as (generator, ±1) syllables.
type GroupWord = Vec<(String, i8)>;

fn group_word(w: &KeiWord) -> GroupWord {
    let mut out: GroupWord = vec![(w.head.clone(), 1)];
    for op in &w.tail {
        let v: GroupWord = match op {
            Operator::Letter(l) => vec![(l.clone(), 1)],
            Operator::Word(inner) => group_word(inner),
        };
        let mut next = invert(&v);
        next.extend(out);
        next.extend(v);
        out = next;
    }
    free_reduce(out)
}

fn invert(w: &GroupWord) -> GroupWord {
    w.iter().rev().map(|(g, e)| (g.clone(), -e)).collect()
}

fn free_reduce(w: GroupWord) -> GroupWord {
    let mut out: GroupWord = Vec::with_capacity(w.len());
    for s in w {
        match out.last() {
            Some(t) if t.0 == s.0 && t.1 == -s.1 => {
                out.pop();
            }
            _ => out.push(s),
        }
    }
    out
}

fn render(w: &GroupWord) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < w.len() {
        let mut j = i;
        while j < w.len() && w[j] == w[i] {
            j += 1;
        }
        let k = (j - i) as i64 * w[i].1 as i64;
        parts.push(match k {
            1 => w[i].0.clone(),
            _ => format!("{}^{k}", w[i].0),
        });
        i = j;
    }
    parts.join(" ")
}

/// Associated-group presentation: each relation `u = w` becomes the relator
/// `ū w̄⁻¹`, where `x*y` translates to `ȳ⁻¹ x̄ ȳ`.
///
/// The Burnside relation quantifies over all elements, which no finite list
/// of relators captures. It is emitted as the usual schema in a note, with
/// its instances on the generators as relators.
pub fn export_as_presentation(p: &QuandlePresentation) -> GroupPresentationText {
    let gens = &p.generators;
    let mut notes = Vec::new();
    let mut relators = Vec::new();
    if let Some(n) = p.burnside {
        let squares: Vec<String> = gens.iter().map(|g| format!("{g}^2")).collect();
        let power = if n <= 3 { "xy".repeat(n) } else { format!("(xy)^{n}") };
        notes.push(format!("{{ {} | {}=1, {power}=1 }}", gens.join(", "), squares.join("=")));
        notes.push(format!(
            "schema: generators are involutions; (x y)^{n} = 1 for all conjugates x, y of generators; instances on generators follow"
        ));
        for g in gens {
            relators.push(format!("{g}^2"));
        }
        for (i, x) in gens.iter().enumerate() {
            for y in &gens[i + 1..] {
                relators.push(vec![format!("{x} {y}"); n].join(" "));
            }
        }
    }
    for (l, r) in &p.relations {
        let mut w = group_word(l);
        w.extend(invert(&group_word(r)));
        relators.push(render(&free_reduce(w)));
    }
    GroupPresentationText {
        generators: gens.clone(),
        relators,
        notes,
    }
}

/// A presentation of the kei given by a table: its generators, and one
/// relation `w*g = w'` per element word `w` and generator `g`, with words
/// from a breadth-first spanning tree.
pub fn table_presentation(q: &FiniteQuandle) -> Result<QuandlePresentation> {
    let gens = q.generating_set();
    let names: Vec<String> = match q.names() {
        Some(n) if gens.iter().all(|&g| is_plain_name(&n[g])) => gens.iter().map(|&g| n[g].clone()).collect(),
        _ => (0..gens.len()).map(|i| format!("g{i}")).collect(),
    };
    let m = q.size();
    let mut word: Vec<Option<Vec<usize>>> = vec![None; m];
    let mut queue = VecDeque::new();
    for (i, &g) in gens.iter().enumerate() {
        if word[g].is_none() {
            word[g] = Some(vec![i]);
            queue.push_back(g);
        }
    }
    while let Some(x) = queue.pop_front() {
        for (i, &g) in gens.iter().enumerate() {
            let y = q.op(x, g);
            if word[y].is_none() {
                let mut w = word[x].clone().unwrap();
                w.push(i);
                word[y] = Some(w);
                queue.push_back(y);
            }
        }
    }
    if word.iter().any(Option::is_none) {
        return Err(Error::InvalidArgument("generators do not reach every element".into()));
    }
    let as_word = |w: &[usize]| {
        let letters: Vec<&str> = w.iter().map(|&i| names[i].as_str()).collect();
        KeiWord::from_letters(&letters)
    };
    let mut relations = Vec::new();
    for x in 0..m {
        let wx = word[x].as_ref().unwrap();
        for (i, &g) in gens.iter().enumerate() {
            let y = q.op(x, g);
            let mut lhs = wx.clone();
            lhs.push(i);
            if word[y].as_ref() != Some(&lhs) {
                relations.push((as_word(&lhs), as_word(word[y].as_ref().unwrap())));
            }
        }
    }
    Ok(QuandlePresentation {
        generators: names,
        relations,
        burnside: None,
    })
}

fn is_plain_name(s: &str) -> bool {
    let mut c = s.chars();
    matches!(c.next(), Some(ch) if ch.is_ascii_alphabetic() || ch == '_')
        && c.all(|ch| ch.is_ascii_alphanumeric() || ch == '_')
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{core_of_group, dihedral, FiniteGroupTable};
    use crate::presentation::{complete, Budget};

    #[test]
    fn translations_of_dihedral_three() {
        let q = dihedral(3);
        assert_eq!(translation(&q, 0).to_string(), "(0)(1 2)");
        for x in 0..3 {
            let f = translation(&q, x);
            assert_eq!(f.apply(x), x);
            assert!(f.compose(&f).is_identity());
        }
    }

    /// Closure by repeated products of all pairs until nothing new appears.
    fn brute_order(gens: &[Permutation]) -> usize {
        let mut set: Vec<Permutation> = Vec::new();
        for g in gens {
            if !set.contains(g) {
                set.push(g.clone());
            }
        }
        loop {
            let mut grew = false;
            for a in set.clone() {
                for b in set.clone() {
                    let c = a.compose(&b);
                    if !set.contains(&c) {
                        set.push(c);
                        grew = true;
                    }
                }
            }
            if !grew {
                return set.len();
            }
        }
    }

    #[test]
    fn small_orders_match_brute_force() {
        for n in 3..8 {
            let q = dihedral(n);
            let all: Vec<Permutation> = (0..n).map(|x| translation(&q, x)).collect();
            let op = op_group(&q, 1000).unwrap();
            assert_eq!(op.order(), Some(brute_order(&all)), "dihedral({n})");
        }
        assert_eq!(op_group(&dihedral(3), 100).unwrap().order(), Some(6));
        assert_eq!(op_group(&FiniteQuandle::trivial(4), 100).unwrap().order(), Some(1));
    }

    #[test]
    fn cap_is_reported() {
        let op = op_group(&dihedral(7), 5).unwrap();
        assert!(matches!(op, OpGroup::CapExceeded { cap: 5 }));
        assert!(op_group(&dihedral(3), 0).is_err());
    }

    #[test]
    fn conjugation_identity_on_models() {
        let models = [
            dihedral(5),
            dihedral(6),
            core_of_group(&FiniteGroupTable::symmetric3()),
            core_of_group(&FiniteGroupTable::heisenberg27()),
        ];
        for q in &models {
            let r = conj_embedding_check(q).unwrap();
            assert!(r.conjugation_holds);
            assert_eq!(r.injective, q.behavioral_classes().all_singletons());
        }
        let r = conj_embedding_check(&FiniteQuandle::trivial(2)).unwrap();
        assert!(!r.injective);
        assert_eq!(r.collision, Some((0, 1)));
    }

    #[test]
    fn dihedral_three_classes() {
        let q = dihedral(3);
        let r = conj_embedding_check(&q).unwrap();
        assert!(r.injective);
        assert_eq!(r.class_union, 3);
        assert!(r.union_is_image());
        let g = op_group(&q, 100).unwrap();
        let g = g.group().unwrap();
        let class = g.conjugacy_class(&translation(&q, 0));
        assert_eq!(class.len(), 3);
        assert!(class.iter().all(|p| g.contains(p)));
    }

    #[test]
    fn q33_op_group() {
        let p = QuandlePresentation::free_burnside(3, 3);
        let r = complete(&p, Budget::default()).unwrap();
        let q = r.finished().unwrap();
        let e = conj_embedding_check(q).unwrap();
        assert!(e.union_is_image());
        assert_eq!(e.class_union, 9);
        let order = op_group(q, 10_000).unwrap().order().unwrap();
        assert_eq!(order % 2, 0);
        assert!(log_base(order / 2, 3).is_some());
    }

    fn log_base(mut m: usize, b: usize) -> Option<u32> {
        let mut k = 0;
        while m > 1 {
            if m % b != 0 {
                return None;
            }
            m /= b;
            k += 1;
        }
        Some(k)
    }

    #[test]
    fn relations_become_conjugation_relators() {
        let p: QuandlePresentation = "gens a b c; rel a*b = c;".parse().unwrap();
        let t = export_as_presentation(&p);
        assert_eq!(t.relators, vec!["b^-1 a b c^-1"]);
        let p: QuandlePresentation = "gens a b c; rel a*(b*c) = a;".parse().unwrap();
        let t = export_as_presentation(&p);
        assert_eq!(t.relators, vec!["c^-1 b^-1 c a c^-1 b c a^-1"]);
        let p: QuandlePresentation = "gens a b; rel a*b*b = a;".parse().unwrap();
        assert_eq!(export_as_presentation(&p).relators, vec!["b^-2 a b^2 a^-1"]);
    }

    #[test]
    fn burnside_headers() {
        let t = export_as_presentation(&QuandlePresentation::free_burnside(3, 4));
        assert_eq!(t.notes[0], "{ a, b, c | a^2=b^2=c^2=1, (xy)^4=1 }");
        assert!(t.relators.contains(&"a b a b a b a b".to_string()));
        let t = export_as_presentation(&QuandlePresentation::free_burnside(4, 3));
        assert_eq!(t.notes[0], "{ a, b, c, d | a^2=b^2=c^2=d^2=1, xyxyxy=1 }");
        assert_eq!(t.relators.len(), 4 + 6);
        let text = t.to_string();
        assert!(text.starts_with("# { a, b, c, d |"));
        assert!(text.contains("\ngenerators a b c d\n"));
        let gap = t.to_gap();
        assert!(gap.contains("F := FreeGroup(\"a\", \"b\", \"c\", \"d\");"));
        assert!(gap.contains("a^2, b^2"));
        assert!(gap.contains("a*b*a*b*a*b"));
    }

    #[test]
    fn table_presentation_recovers_table() {
        for q in [dihedral(5), core_of_group(&FiniteGroupTable::cyclic(3).power(2))] {
            let p = table_presentation(&q).unwrap();
            let back = complete(&p, Budget::default()).unwrap();
            let back = back.finished().unwrap();
            assert!(back.is_isomorphic(&q).is_some());
        }
    }
}
