use std::collections::HashSet;

use rayon::prelude::*;

use super::FiniteQuandle;
use crate::error::{Error, Result};

/// Fixed-size bitset over element indices.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub(crate) struct Bits(Vec<u64>);

impl Bits {
    pub fn new(m: usize) -> Self {
        Bits(vec![0; m.div_ceil(64)])
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.0[x / 64] >> (x % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, x: usize) -> bool {
        let had = self.contains(x);
        self.0[x / 64] |= 1 << (x % 64);
        !had
    }
}

/// A closed subset kept both as a bitset and as a list.
#[derive(Clone)]
struct Closed {
    bits: Bits,
    list: Vec<usize>,
}

impl FiniteQuandle {
    /// Extends a closed set by `extra` and closes again. Only pairs involving
    /// at least one new element are multiplied.
    fn extend_closed(&self, base: &Closed, extra: &[usize]) -> Closed {
        let mut bits = base.bits.clone();
        let mut list = base.list.clone();
        let mut p = list.len();
        for &x in extra {
            if bits.insert(x) {
                list.push(x);
            }
        }
        while p < list.len() {
            let e = list[p];
            let mut j = 0;
            while j <= p {
                let f = list[j];
                for v in [self.op(e, f), self.op(f, e)] {
                    if bits.insert(v) {
                        list.push(v);
                    }
                }
                j += 1;
            }
            p += 1;
        }
        Closed { bits, list }
    }

    fn empty_closed(&self) -> Closed {
        Closed {
            bits: Bits::new(self.size()),
            list: Vec::new(),
        }
    }

    /// Smallest subquandle containing `seed`, sorted.
    pub fn closure(&self, seed: &[usize]) -> Result<Vec<usize>> {
        if seed.is_empty() {
            return Err(Error::InvalidArgument("closure of an empty seed".into()));
        }
        if let Some(&x) = seed.iter().find(|&&x| x >= self.size()) {
            return Err(Error::InvalidArgument(format!("seed element {x} out of range")));
        }
        let mut out = self.extend_closed(&self.empty_closed(), seed).list;
        out.sort_unstable();
        Ok(out)
    }

    pub fn generates(&self, seed: &[usize]) -> bool {
        !seed.is_empty() && self.extend_closed(&self.empty_closed(), seed).list.len() == self.size()
    }

    /// Scans elements in index order, keeping each one not yet in the closure
    /// of those kept so far.
    pub fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut closed = self.empty_closed();
        for x in 0..self.size() {
            if !closed.bits.contains(x) {
                gens.push(x);
                closed = self.extend_closed(&closed, &[x]);
                if closed.list.len() == self.size() {
                    break;
                }
            }
        }
        gens
    }

    /// Size of a smallest generating set, if it is at most `upper_bound`.
    ///
    /// Works level by level over the distinct subquandles generated by `j`
    /// elements: level `j+1` closes every level-`j` subquandle together with
    /// one element outside it. A minimal generating set never contains an
    /// element of the closure of the others, so skipping elements already in
    /// the subquandle loses nothing, and identical closures reached from
    /// different subsets are expanded once. The search is exhaustive within
    /// the bound; no symmetry of the quandle is assumed.
    pub fn min_generators(&self, upper_bound: usize) -> Result<Option<usize>> {
        if upper_bound == 0 {
            return Err(Error::InvalidArgument("upper bound must be at least 1".into()));
        }
        let m = self.size();
        let empty = self.empty_closed();
        let mut level: Vec<Closed> = Vec::new();
        let mut seen: HashSet<Bits> = HashSet::new();
        for x in 0..m {
            let c = self.extend_closed(&empty, &[x]);
            if c.list.len() == m {
                return Ok(Some(1));
            }
            if seen.insert(c.bits.clone()) {
                level.push(c);
            }
        }
        for j in 2..=upper_bound {
            let children: Vec<Vec<Closed>> = level
                .par_iter()
                .map(|s| {
                    (0..m)
                        .filter(|&x| !s.bits.contains(x))
                        .map(|x| self.extend_closed(s, &[x]))
                        .collect()
                })
                .collect();
            let mut next = Vec::new();
            let mut seen: HashSet<Bits> = HashSet::new();
            for c in children.into_iter().flatten() {
                if c.list.len() == m {
                    return Ok(Some(j));
                }
                if seen.insert(c.bits.clone()) {
                    next.push(c);
                }
            }
            if next.is_empty() {
                break;
            }
            level = next;
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::dihedral;

    #[test]
    fn closure_examples() {
        let q = dihedral(3);
        assert_eq!(q.closure(&[0, 1]).unwrap(), vec![0, 1, 2]);
        assert_eq!(q.closure(&[2]).unwrap(), vec![2]);
        assert!(q.closure(&[]).is_err());
        assert!(q.closure(&[7]).is_err());
    }

    #[test]
    fn closure_is_subquandle() {
        let q = dihedral(12);
        let c = q.closure(&[0, 4]).unwrap();
        assert_eq!(c, vec![0, 4, 8]);
        for &a in &c {
            for &b in &c {
                assert!(c.contains(&q.op(a, b)));
            }
        }
    }

    #[test]
    fn min_generators_small() {
        assert_eq!(dihedral(3).min_generators(4).unwrap(), Some(2));
        assert_eq!(FiniteQuandle::trivial(1).min_generators(1).unwrap(), Some(1));
        assert_eq!(FiniteQuandle::trivial(4).min_generators(3).unwrap(), None);
        assert_eq!(FiniteQuandle::trivial(4).min_generators(4).unwrap(), Some(4));
        assert_eq!(dihedral(3).power(2).min_generators(5).unwrap(), Some(3));
        assert!(dihedral(3).min_generators(0).is_err());
    }

    #[test]
    fn greedy_set_generates() {
        for n in 1..10 {
            let q = dihedral(n);
            assert!(q.generates(&q.greedy_generators()));
        }
    }
}
