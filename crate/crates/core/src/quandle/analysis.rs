use std::collections::{HashMap, VecDeque};
use std::fmt;

use super::{FiniteQuandle, Partition, ReportMode};
use crate::error::{Error, Result};

/// Diameter of the right-translation metric. Disconnected quandles have no
/// finite diameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Diameter {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Diameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diameter::Finite(d) => write!(f, "{d}"),
            Diameter::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleStats {
    /// Number of distinct subquandles `{a, b, a*b}` with `a != b`.
    pub triple_count: usize,
    /// For each element, the number of those triples containing it.
    pub membership: Vec<usize>,
}

impl TripleStats {
    /// `C(m,2)/3` triples, each element in `(m-1)/2` of them.
    pub fn matches_formulas(&self) -> bool {
        let m = self.membership.len();
        let pairs = m * (m.saturating_sub(1)) / 2;
        pairs % 3 == 0
            && self.triple_count == pairs / 3
            && self.membership.iter().all(|&c| 2 * c + 1 == m)
    }

    /// The common membership count, when uniform.
    pub fn uniform_membership(&self) -> Option<usize> {
        let first = *self.membership.first()?;
        self.membership.iter().all(|&c| c == first).then_some(first)
    }
}

impl FiniteQuandle {
    /// `x ~ y` iff columns `x` and `y` coincide.
    pub fn behavioral_classes(&self) -> Partition {
        let m = self.size();
        let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
        let labels: Vec<usize> = (0..m)
            .map(|x| {
                let n = seen.len();
                *seen.entry(self.column(x)).or_insert(n)
            })
            .collect();
        Partition::from_labels(&labels)
    }

    /// Some `(z, x, y)` with `x != y` and `z*x = z*y`.
    pub fn left_cancellation_witness(&self) -> Option<(usize, usize, usize)> {
        let m = self.size();
        let mut seen: Vec<Option<usize>> = vec![None; m];
        for z in 0..m {
            seen.fill(None);
            for x in 0..m {
                let v = self.op(z, x);
                if let Some(first) = seen[v] {
                    return Some((z, first, x));
                }
                seen[v] = Some(x);
            }
        }
        None
    }

    /// Orbits of the group generated by all right translations.
    pub fn components(&self) -> Partition {
        let m = self.size();
        let mut label = vec![usize::MAX; m];
        let mut next = 0;
        for start in 0..m {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = next;
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for g in 0..m {
                    let y = self.op(x, g);
                    if label[y] == usize::MAX {
                        label[y] = next;
                        queue.push_back(y);
                    }
                }
            }
            next += 1;
        }
        Partition::from_labels(&label)
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Shortest number of right translations from `x` to every element.
    pub fn distances_from(&self, x: usize) -> Vec<Option<usize>> {
        let m = self.size();
        let mut dist = vec![None; m];
        dist[x] = Some(0);
        let mut queue = VecDeque::from([x]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap();
            for g in 0..m {
                let v = self.op(u, g);
                if dist[v].is_none() {
                    dist[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn diameter(&self) -> Diameter {
        let mut best = 0;
        for x in 0..self.size() {
            for d in self.distances_from(x) {
                match d {
                    Some(d) => best = best.max(d),
                    None => return Diameter::Infinite,
                }
            }
        }
        Diameter::Finite(best)
    }

    /// Some `(a, b, c)` with `c*(a*b) != (c*a)*(c*b)`.
    pub fn left_distributivity_witness(&self) -> Option<(usize, usize, usize)> {
        let m = self.size();
        for a in 0..m {
            for b in 0..m {
                let ab = self.op(a, b);
                for c in 0..m {
                    if self.op(c, ab) != self.op(self.op(c, a), self.op(c, b)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// Checks that for all `a, b` exactly one `c` has `c*b = a`, and that this
    /// `c` also satisfies `a*c = b` and `c*a = b`. Returns a failing pair.
    pub fn quasigroup_witness(&self) -> Option<(usize, usize)> {
        let m = self.size();
        for a in 0..m {
            for b in 0..m {
                let solutions: Vec<usize> = (0..m).filter(|&c| self.op(c, b) == a).collect();
                if solutions.len() != 1 {
                    return Some((a, b));
                }
                let c = solutions[0];
                if self.op(a, c) != b || self.op(c, a) != b {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// Counts the 3-element subquandles `{a, b, a*b}` of a commutative kei.
    pub fn three_element_stats(&self) -> Result<TripleStats> {
        self.require_commutative_kei()?;
        let m = self.size();
        let mut triples: Vec<[usize; 3]> = Vec::new();
        for a in 0..m {
            for b in a + 1..m {
                let c = self.op(a, b);
                let mut t = [a, b, c];
                t.sort_unstable();
                if t[0] == t[1] || t[1] == t[2] {
                    return Err(Error::NotCommutative(format!(
                        "{a}*{b} = {c} does not give three distinct elements"
                    )));
                }
                triples.push(t);
            }
        }
        triples.sort_unstable();
        triples.dedup();
        let mut membership = vec![0; m];
        for t in &triples {
            for &x in t {
                membership[x] += 1;
            }
            let closed = t
                .iter()
                .all(|&x| t.iter().all(|&y| t.contains(&self.op(x, y))));
            if !closed {
                return Err(Error::NotCommutative(format!("{t:?} is not a subquandle")));
            }
        }
        Ok(TripleStats {
            triple_count: triples.len(),
            membership,
        })
    }

    fn require_commutative_kei(&self) -> Result<()> {
        let report = self.validate(ReportMode::FirstPerAxiom);
        if !report.is_kei {
            let v = &report.violations[0];
            return Err(Error::NotCommutative(format!(
                "axiom ({}) fails at {:?}",
                v.axiom, v.witness
            )));
        }
        if let Some((a, b)) = self.commutativity_witness() {
            return Err(Error::NotCommutative(format!("{a}*{b} != {b}*{a}")));
        }
        Ok(())
    }

    /// Blocks `{x, x*b*a, x*a*b}` of a commutative kei for fixed `a != b`.
    pub fn triple_partition(&self, a: usize, b: usize) -> Result<Partition> {
        self.require_commutative_kei()?;
        let m = self.size();
        if a >= m || b >= m {
            return Err(Error::InvalidArgument(format!("elements must lie in 0..{m}")));
        }
        if a == b {
            return Err(Error::InvalidArgument("triple collapse needs a != b".into()));
        }
        let mut label = vec![usize::MAX; m];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for x in 0..m {
            let y = self.op(self.op(x, b), a);
            let z = self.op(self.op(x, a), b);
            let mut block = vec![x, y, z];
            block.sort_unstable();
            if block[0] == block[1] || block[1] == block[2] {
                return Err(Error::TriplePartition(format!(
                    "block of {x} is {{{x}, {y}, {z}}}, not three distinct elements"
                )));
            }
            let owners: Vec<usize> = block.iter().map(|&e| label[e]).collect();
            if owners.iter().all(|&o| o == usize::MAX) {
                for &e in &block {
                    label[e] = blocks.len();
                }
                blocks.push(block);
            } else if owners.iter().any(|&o| o == usize::MAX || blocks[o] != block) {
                return Err(Error::TriplePartition(format!(
                    "block {block:?} of {x} overlaps a different block"
                )));
            }
        }
        let p = Partition { blocks };
        debug_assert!(p.is_partition_of(m));
        Ok(p)
    }

    /// Quandle on the triples `{x, x*b*a, x*a*b}`.
    ///
    /// Blocks are multiplied through representatives: block `i` times block
    /// `j` is the block of `r_i * r_j`. The triple relation is not a
    /// congruence, so the result depends on the representatives; they are
    /// chosen to form a subquandle meeting every block once, found by a
    /// depth-first search over blocks in order. The result is checked to be
    /// a commutative kei.
    pub fn triple_collapse(&self, a: usize, b: usize) -> Result<FiniteQuandle> {
        let p = self.triple_partition(a, b)?;
        let labels = p.labels(self.size());
        let reps = self.closed_transversal(&p, &labels).ok_or_else(|| {
            Error::TriplePartition("no subquandle meets every triple exactly once".into())
        })?;
        let q = FiniteQuandle::from_fn(reps.len(), |i, j| labels[self.op(reps[i], reps[j])])?;
        q.require_commutative_kei().map_err(|e| {
            Error::TriplePartition(format!("collapsed table is not a commutative kei: {e}"))
        })?;
        Ok(q)
    }

    /// Representatives `r_i ∈ blocks[i]` forming a subquandle, if any.
    fn closed_transversal(&self, p: &Partition, labels: &[usize]) -> Option<Vec<usize>> {
        let mut chosen = vec![usize::MAX; p.len()];
        let mut list = Vec::new();
        if self.transversal_search(p, labels, &mut chosen, &mut list) {
            Some(chosen)
        } else {
            None
        }
    }

    fn transversal_search(
        &self,
        p: &Partition,
        labels: &[usize],
        chosen: &mut Vec<usize>,
        list: &mut Vec<usize>,
    ) -> bool {
        let Some(block) = chosen.iter().position(|&c| c == usize::MAX) else {
            return true;
        };
        for &x in &p.blocks[block] {
            let saved_chosen = chosen.clone();
            let saved_len = list.len();
            if self.close_choice(x, labels, chosen, list)
                && self.transversal_search(p, labels, chosen, list)
            {
                return true;
            }
            *chosen = saved_chosen;
            list.truncate(saved_len);
        }
        false
    }

    /// Adds `x` and closes; fails when two elements of one block meet.
    fn close_choice(
        &self,
        x: usize,
        labels: &[usize],
        chosen: &mut [usize],
        list: &mut Vec<usize>,
    ) -> bool {
        let add = |v: usize, chosen: &mut [usize], list: &mut Vec<usize>| -> bool {
            let slot = &mut chosen[labels[v]];
            if *slot == usize::MAX {
                *slot = v;
                list.push(v);
                true
            } else {
                *slot == v
            }
        };
        let mut p = list.len();
        if !add(x, chosen, list) {
            return false;
        }
        while p < list.len() {
            let e = list[p];
            for j in 0..=p {
                let f = list[j];
                if !add(self.op(e, f), chosen, list) || !add(self.op(f, e), chosen, list) {
                    return false;
                }
            }
            p += 1;
        }
        true
    }

    /// Repeatedly collapses with the first two elements until one element is
    /// left. Returns the sizes seen, starting with `self.size()`.
    pub fn collapse_to_point(&self) -> Result<Vec<usize>> {
        let mut sizes = vec![self.size()];
        let mut current = self.clone().without_labels();
        while current.size() > 1 {
            current = current.triple_collapse(0, 1)?;
            sizes.push(current.size());
        }
        Ok(sizes)
    }

    /// Coordinatewise product; `(i, j)` is element `i * other.size() + j`.
    pub fn direct_product(&self, other: &FiniteQuandle) -> FiniteQuandle {
        let n = other.size();
        FiniteQuandle::from_fn(self.size() * n, |x, y| {
            self.op(x / n, y / n) * n + other.op(x % n, y % n)
        })
        .expect("product table is well formed")
    }

    pub fn power(&self, k: usize) -> FiniteQuandle {
        let mut out = FiniteQuandle::trivial(1);
        for _ in 0..k {
            out = out.direct_product(self);
        }
        out
    }
}

/// `Some(t)` with `m = 3^t`.
pub fn log3_exact(mut m: usize) -> Option<u32> {
    if m == 0 {
        return None;
    }
    let mut t = 0;
    while m % 3 == 0 {
        m /= 3;
        t += 1;
    }
    (m == 1).then_some(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::dihedral;

    #[test]
    fn behavioral_examples() {
        assert_eq!(FiniteQuandle::trivial(3).behavioral_classes().block_sizes(), vec![3]);
        assert_eq!(
            dihedral(4).behavioral_classes().blocks,
            vec![vec![0, 2], vec![1, 3]]
        );
        assert!(dihedral(3).behavioral_classes().all_singletons());
    }

    #[test]
    fn dihedral_four_columns_by_hand() {
        // 2j - i == 2(j+2) - i mod 4, so columns j and j+2 agree
        let q = dihedral(4);
        for j in 0..2 {
            assert_eq!(q.column(j), q.column(j + 2));
        }
        assert_ne!(q.column(0), q.column(1));
    }

    #[test]
    fn components_examples() {
        assert_eq!(dihedral(3).components().len(), 1);
        assert_eq!(FiniteQuandle::trivial(4).components().block_sizes(), vec![1, 1, 1, 1]);
        // dihedral(4): even and odd elements never mix
        assert_eq!(dihedral(4).components().len(), 2);
    }

    #[test]
    fn diameter_examples() {
        assert_eq!(dihedral(3).diameter(), Diameter::Finite(1));
        assert_eq!(FiniteQuandle::trivial(2).diameter(), Diameter::Infinite);
        assert_eq!(FiniteQuandle::trivial(1).diameter(), Diameter::Finite(0));
        assert_eq!(dihedral(9).power(1).diameter(), Diameter::Finite(1));
    }

    #[test]
    fn three_element_stats_small() {
        let s = dihedral(3).three_element_stats().unwrap();
        assert_eq!((s.triple_count, s.uniform_membership()), (1, Some(1)));
        let s = dihedral(3).power(2).three_element_stats().unwrap();
        assert_eq!((s.triple_count, s.uniform_membership()), (12, Some(4)));
        assert!(s.matches_formulas());
        assert!(matches!(
            dihedral(5).three_element_stats(),
            Err(Error::NotCommutative(_))
        ));
    }

    #[test]
    fn triple_collapse_of_affine_plane() {
        let q = dihedral(3).power(2);
        for a in 0..9 {
            for b in 0..9 {
                if a == b {
                    assert!(q.triple_collapse(a, b).is_err());
                    continue;
                }
                let c = q.triple_collapse(a, b).unwrap();
                assert_eq!(c.size(), 3);
                assert!(c.is_isomorphic(&dihedral(3)).is_some());
            }
        }
    }

    #[test]
    fn collapse_rejects_non_commutative() {
        assert!(matches!(dihedral(4).triple_collapse(0, 1), Err(Error::NotCommutative(_))));
    }

    #[test]
    fn products() {
        let q = dihedral(3).direct_product(&dihedral(3));
        assert_eq!(q.size(), 9);
        assert!(q.is_kei() && q.is_commutative());
        let one = FiniteQuandle::trivial(1);
        assert!(dihedral(5).direct_product(&one).is_isomorphic(&dihedral(5)).is_some());
        let cube = dihedral(3).power(3);
        assert_eq!(cube.size(), 27);
        assert!(cube.is_kei() && cube.is_commutative());
    }

    #[test]
    fn log3() {
        assert_eq!(log3_exact(81), Some(4));
        assert_eq!(log3_exact(1), Some(0));
        assert_eq!(log3_exact(96), None);
        assert_eq!(log3_exact(0), None);
    }
}
