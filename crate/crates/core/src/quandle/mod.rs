//! Finite quandles and keis given by explicit multiplication tables.

mod analysis;
mod generate;
mod hom;
mod table_io;

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::word::{KeiWord, Operator};

pub use analysis::{log3_exact, Diameter, TripleStats};
pub use hom::{HomCount, HomOptions};

/// A size-`m` binary operation on `0..m`, stored row-major: `op(a, b)` is
/// `table[a * m + b]`.
///
/// Construction only checks the table shape; use [`FiniteQuandle::validate`]
/// to check the quandle and kei axioms.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteQuandle {
    size: usize,
    table: Vec<u32>,
    names: Option<Vec<String>>,
    generators: Option<Vec<usize>>,
}

impl fmt::Debug for FiniteQuandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteQuandle")
            .field("size", &self.size)
            .field("generators", &self.generators)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axiom {
    /// `a*a = a`
    Idempotence,
    /// `(a*b)*b = a`
    Involution,
    /// `(a*b)*c = (a*c)*(b*c)`
    RightDistributivity,
    /// every right translation is a bijection
    RightInvertibility,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::Idempotence => "i",
            Axiom::Involution => "ii",
            Axiom::RightDistributivity => "iii",
            Axiom::RightInvertibility => "bijective-columns",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportMode {
    /// Stop at the first violation of each axiom.
    FirstPerAxiom,
    All,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub is_quandle: bool,
    pub is_kei: bool,
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    pub fn first(&self, axiom: Axiom) -> Option<&Violation> {
        self.violations.iter().find(|v| v.axiom == axiom)
    }
}

/// Disjoint blocks covering `0..m`. Blocks are sorted, and ordered by their
/// smallest element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut index: HashMap<usize, usize> = HashMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (x, &l) in labels.iter().enumerate() {
            let b = *index.entry(l).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[b].push(x);
        }
        Partition { blocks }
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    pub fn all_singletons(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }

    /// Checks disjointness and coverage of `0..m`.
    pub fn is_partition_of(&self, m: usize) -> bool {
        let mut seen = vec![false; m];
        for b in &self.blocks {
            for &x in b {
                if x >= m || seen[x] {
                    return false;
                }
                seen[x] = true;
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Block index of every element.
    pub fn labels(&self, m: usize) -> Vec<usize> {
        let mut out = vec![usize::MAX; m];
        for (i, b) in self.blocks.iter().enumerate() {
            for &x in b {
                out[x] = i;
            }
        }
        out
    }
}

impl FiniteQuandle {
    /// Builds a table from rows, `rows[a][b] = a*b`.
    pub fn from_rows(rows: Vec<Vec<usize>>) -> Result<Self> {
        let m = rows.len();
        if m == 0 {
            return Err(Error::MalformedTable("empty table".into()));
        }
        let mut table = Vec::with_capacity(m * m);
        for (a, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::MalformedTable(format!(
                    "row {a} has {} entries, expected {m}",
                    row.len()
                )));
            }
            for (b, &v) in row.iter().enumerate() {
                if v >= m {
                    return Err(Error::MalformedTable(format!(
                        "entry ({a},{b}) = {v} is out of range 0..{m}"
                    )));
                }
                table.push(v as u32);
            }
        }
        Ok(FiniteQuandle {
            size: m,
            table,
            names: None,
            generators: None,
        })
    }

    pub fn from_fn(m: usize, f: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let rows = (0..m).map(|a| (0..m).map(|b| f(a, b)).collect()).collect();
        Self::from_rows(rows)
    }

    /// `x*y = x` on `m` points.
    pub fn trivial(m: usize) -> Self {
        Self::from_fn(m.max(1), |a, _| a).expect("trivial table is well formed")
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.size {
            return Err(Error::MalformedTable(format!(
                "{} names for {} elements",
                names.len(),
                self.size
            )));
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn with_generators(mut self, generators: Vec<usize>) -> Result<Self> {
        if let Some(&g) = generators.iter().find(|&&g| g >= self.size) {
            return Err(Error::MalformedTable(format!("generator {g} out of range")));
        }
        self.generators = Some(generators);
        Ok(self)
    }

    pub fn without_labels(mut self) -> Self {
        self.names = None;
        self.generators = None;
        self
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn op(&self, a: usize, b: usize) -> usize {
        self.table[a * self.size + b] as usize
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn name(&self, x: usize) -> String {
        match &self.names {
            Some(n) => n[x].clone(),
            None => x.to_string(),
        }
    }

    pub fn generators(&self) -> Option<&[usize]> {
        self.generators.as_deref()
    }

    /// Element index carrying the given canonical name.
    pub fn element_named(&self, name: &str) -> Option<usize> {
        self.names.as_ref()?.iter().position(|n| n == name)
    }

    /// Right translation by `x`: `y ↦ y*x`.
    pub fn column(&self, x: usize) -> Vec<usize> {
        (0..self.size).map(|y| self.op(y, x)).collect()
    }

    pub fn row(&self, a: usize) -> &[u32] {
        &self.table[a * self.size..(a + 1) * self.size]
    }

    /// Checks axioms (i), (ii), (iii) and bijectivity of every column.
    pub fn validate(&self, mode: ReportMode) -> AxiomReport {
        let m = self.size;
        let mut violations = Vec::new();
        let all = mode == ReportMode::All;

        for a in 0..m {
            if self.op(a, a) != a {
                violations.push(Violation {
                    axiom: Axiom::Idempotence,
                    witness: vec![a],
                });
                if !all {
                    break;
                }
            }
        }
        'inv: for a in 0..m {
            for b in 0..m {
                if self.op(self.op(a, b), b) != a {
                    violations.push(Violation {
                        axiom: Axiom::Involution,
                        witness: vec![a, b],
                    });
                    if !all {
                        break 'inv;
                    }
                }
            }
        }
        let mut seen = vec![usize::MAX; m];
        'bij: for b in 0..m {
            for a in 0..m {
                let v = self.op(a, b);
                if seen[v] == b {
                    violations.push(Violation {
                        axiom: Axiom::RightInvertibility,
                        witness: vec![b],
                    });
                    if !all {
                        break 'bij;
                    }
                    continue 'bij;
                }
                seen[v] = b;
            }
        }
        'dist: for a in 0..m {
            for b in 0..m {
                let ab = self.op(a, b);
                for c in 0..m {
                    let lhs = self.op(ab, c);
                    let rhs = self.op(self.op(a, c), self.op(b, c));
                    if lhs != rhs {
                        violations.push(Violation {
                            axiom: Axiom::RightDistributivity,
                            witness: vec![a, b, c],
                        });
                        if !all {
                            break 'dist;
                        }
                    }
                }
            }
        }

        let has = |ax: Axiom| violations.iter().any(|v| v.axiom == ax);
        let base = !has(Axiom::Idempotence) && !has(Axiom::RightDistributivity);
        let is_quandle = base && !has(Axiom::RightInvertibility);
        let is_kei = base && !has(Axiom::Involution);
        AxiomReport {
            is_quandle,
            is_kei,
            violations,
        }
    }

    pub fn is_kei(&self) -> bool {
        self.validate(ReportMode::FirstPerAxiom).is_kei
    }

    /// True iff every column is a permutation of `0..m`.
    pub fn columns_are_permutations(&self) -> bool {
        let m = self.size;
        let mut seen = vec![usize::MAX; m];
        for b in 0..m {
            for a in 0..m {
                let v = self.op(a, b);
                if seen[v] == b {
                    return false;
                }
                seen[v] = b;
            }
        }
        true
    }

    /// A pair with `a*b != b*a`, if any.
    pub fn commutativity_witness(&self) -> Option<(usize, usize)> {
        let m = self.size;
        (0..m)
            .flat_map(|a| (a + 1..m).map(move |b| (a, b)))
            .find(|&(a, b)| self.op(a, b) != self.op(b, a))
    }

    pub fn is_commutative(&self) -> bool {
        self.commutativity_witness().is_none()
    }

    /// Right-hand side of the universal relation with `n` letters,
    /// `...a*b*...*a*b`, always ending in `b`.
    pub fn burnside_rhs(&self, a: usize, b: usize, n: usize) -> usize {
        let mut x = if n % 2 == 0 { a } else { b };
        for i in 1..n {
            // letters alternate and the last one (i = n-1) is b
            let letter = if (n - 1 - i) % 2 == 0 { b } else { a };
            x = self.op(x, letter);
        }
        x
    }

    /// A pair `(a, b)` violating `a = ...a*b*...*a*b` (`n` letters), if any.
    pub fn universal_witness(&self, n: usize) -> Result<Option<(usize, usize)>> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "universal relation needs n >= 2, got {n}"
            )));
        }
        let m = self.size;
        Ok((0..m)
            .flat_map(|a| (0..m).map(move |b| (a, b)))
            .find(|&(a, b)| self.burnside_rhs(a, b, n) != a))
    }

    pub fn satisfies_universal(&self, n: usize) -> Result<bool> {
        Ok(self.universal_witness(n)?.is_none())
    }

    /// Evaluates a word by left-folding the table; composite operators are
    /// evaluated to an element first.
    pub fn eval_word(&self, w: &KeiWord, env: &HashMap<String, usize>) -> Result<usize> {
        let lookup = |l: &str| -> Result<usize> {
            let x = *env
                .get(l)
                .ok_or_else(|| Error::UnboundLetter(l.to_string()))?;
            if x >= self.size {
                return Err(Error::InvalidArgument(format!(
                    "letter `{l}` bound to {x}, outside 0..{}",
                    self.size
                )));
            }
            Ok(x)
        };
        let mut x = lookup(&w.head)?;
        for op in &w.tail {
            let y = match op {
                Operator::Letter(l) => lookup(l)?,
                Operator::Word(inner) => self.eval_word(inner, env)?,
            };
            x = self.op(x, y);
        }
        Ok(x)
    }

    /// Generators from the stored labels, or a greedy generating set.
    pub fn generating_set(&self) -> Vec<usize> {
        match &self.generators {
            Some(g) => {
                let mut out: Vec<usize> = Vec::new();
                for &x in g {
                    if !out.contains(&x) {
                        out.push(x);
                    }
                }
                out
            }
            None => self.greedy_generators(),
        }
    }

    /// The subquandle on `elements` (which must be closed), renumbered in the
    /// given order.
    pub fn restrict(&self, elements: &[usize]) -> Result<FiniteQuandle> {
        let mut index = vec![usize::MAX; self.size];
        for (i, &x) in elements.iter().enumerate() {
            index[x] = i;
        }
        let mut rows = Vec::with_capacity(elements.len());
        for &a in elements {
            let mut row = Vec::with_capacity(elements.len());
            for &b in elements {
                let v = index[self.op(a, b)];
                if v == usize::MAX {
                    return Err(Error::InvalidArgument(format!(
                        "subset is not closed: {a}*{b} = {} escapes",
                        self.op(a, b)
                    )));
                }
                row.push(v);
            }
            rows.push(row);
        }
        let q = FiniteQuandle::from_rows(rows)?;
        match &self.names {
            Some(n) => q.with_names(elements.iter().map(|&x| n[x].clone()).collect()),
            None => Ok(q),
        }
    }

    /// Relabels elements: element `x` of `self` becomes `perm[x]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<FiniteQuandle> {
        let m = self.size;
        let mut inv = vec![usize::MAX; m];
        for (x, &p) in perm.iter().enumerate() {
            if p >= m || inv[p] != usize::MAX {
                return Err(Error::InvalidArgument("relabeling is not a bijection".into()));
            }
            inv[p] = x;
        }
        let q = FiniteQuandle::from_fn(m, |a, b| perm[self.op(inv[a], inv[b])])?;
        let q = match &self.names {
            Some(n) => q.with_names((0..m).map(|x| n[inv[x]].clone()).collect())?,
            None => q,
        };
        match &self.generators {
            Some(g) => q.with_generators(g.iter().map(|&x| perm[x]).collect()),
            None => Ok(q),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::dihedral;

    #[test]
    fn dihedral_three_is_kei() {
        let q = dihedral(3);
        let r = q.validate(ReportMode::All);
        assert!(r.is_kei && r.is_quandle);
        assert!(r.violations.is_empty());
    }

    #[test]
    fn broken_involution_reports_witness() {
        let d = dihedral(3);
        let mut rows: Vec<Vec<usize>> = (0..3).map(|a| d.column_row(a)).collect();
        rows[0][1] = 1;
        let q = FiniteQuandle::from_rows(rows).unwrap();
        let r = q.validate(ReportMode::All);
        assert!(!r.is_kei);
        assert_eq!(r.first(Axiom::Involution).unwrap().witness, vec![0, 1]);
    }

    #[test]
    fn malformed_tables_are_structural_errors() {
        assert!(matches!(
            FiniteQuandle::from_rows(vec![vec![0, 1], vec![1]]),
            Err(Error::MalformedTable(_))
        ));
        assert!(matches!(
            FiniteQuandle::from_rows(vec![vec![0, 2], vec![1, 1]]),
            Err(Error::MalformedTable(_))
        ));
        assert!(FiniteQuandle::from_rows(vec![]).is_err());
    }

    #[test]
    fn universal_relation_examples() {
        assert!(dihedral(3).satisfies_universal(3).unwrap());
        assert!(dihedral(4).satisfies_universal(4).unwrap());
        assert!(dihedral(5).universal_witness(3).unwrap().is_some());
        assert!(matches!(
            dihedral(3).satisfies_universal(1),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn dihedral_five_fails_commutativity_by_brute_force() {
        let q = dihedral(5);
        let brute: Vec<(usize, usize)> = (0..5)
            .flat_map(|a| (0..5).map(move |b| (a, b)))
            .filter(|&(a, b)| q.op(q.op(b, a), b) != a)
            .collect();
        assert!(!brute.is_empty());
        let w = q.universal_witness(3).unwrap().unwrap();
        assert!(brute.contains(&w));
    }

    #[test]
    fn eval_word_examples() {
        let q = dihedral(3);
        let mut env = HashMap::new();
        env.insert("a".to_string(), 0);
        env.insert("b".to_string(), 1);
        assert_eq!(q.eval_word(&KeiWord::letter("a"), &env).unwrap(), 0);
        assert_eq!(q.eval_word(&"a*b".parse().unwrap(), &env).unwrap(), 2);
        assert!(matches!(
            q.eval_word(&"a*c".parse().unwrap(), &env),
            Err(Error::UnboundLetter(l)) if l == "c"
        ));
        let q6 = dihedral(6);
        env.insert("a".to_string(), 5);
        assert_eq!(q6.eval_word(&KeiWord::letter("a"), &env).unwrap(), 5);
    }

    #[test]
    fn eval_composite_matches_normal_form() {
        let q = dihedral(7);
        let env: HashMap<String, usize> = [("a", 1), ("b", 3), ("c", 4), ("d", 6)]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        let w: KeiWord = "a*(b*(c*d))*b".parse().unwrap();
        assert_eq!(
            q.eval_word(&w, &env).unwrap(),
            q.eval_word(&w.normalize(), &env).unwrap()
        );
    }

    impl FiniteQuandle {
        fn column_row(&self, a: usize) -> Vec<usize> {
            self.row(a).iter().map(|&v| v as usize).collect()
        }
    }
}
