//! Schreier graph of the generator translations, with coincidence handling.
//!
//! Vertex `v` stands for an element `e_v`; an `s`-edge joins `e_v` and
//! `e_v * g_s`. Every generator translation is an involution, so edges are
//! undirected and one column per generator suffices.

pub(crate) const NONE: u32 = u32::MAX;

pub(crate) struct Graph {
    pub k: usize,
    next: Vec<u32>,
    parent: Vec<u32>,
    letter: Vec<u8>,
    uf: Vec<u32>,
    pub merges: usize,
}

impl Graph {
    pub fn new(k: usize) -> Self {
        Graph {
            k,
            next: Vec::new(),
            parent: Vec::new(),
            letter: Vec::new(),
            uf: Vec::new(),
            merges: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.uf.len()
    }

    pub fn live(&self) -> usize {
        self.len() - self.merges
    }

    #[inline]
    pub fn alive(&self, v: u32) -> bool {
        self.uf[v as usize] == v
    }

    #[inline]
    pub fn edge(&self, v: u32, s: u8) -> u32 {
        self.next[v as usize * self.k + s as usize]
    }

    #[inline]
    fn set(&mut self, v: u32, s: u8, w: u32) {
        self.next[v as usize * self.k + s as usize] = w;
    }

    /// Joins `v` and `w` by an `s`-edge. Both ends must be free.
    pub fn join(&mut self, v: u32, s: u8, w: u32) {
        debug_assert!(self.edge(v, s) == NONE && self.edge(w, s) == NONE);
        self.set(v, s, w);
        self.set(w, s, v);
    }

    fn push(&mut self, parent: u32, letter: u8) -> u32 {
        let v = self.len() as u32;
        self.next.extend(std::iter::repeat(NONE).take(self.k));
        self.parent.push(parent);
        self.letter.push(letter);
        self.uf.push(v);
        v
    }

    /// A vertex for generator `g`, fixed by its own translation.
    pub fn add_generator(&mut self, g: u8) -> u32 {
        let v = self.push(NONE, g);
        self.set(v, g, v);
        v
    }

    pub fn define(&mut self, u: u32, s: u8) -> u32 {
        let v = self.push(u, s);
        self.join(u, s, v);
        v
    }

    pub fn find(&mut self, x: u32) -> u32 {
        let mut root = x;
        while self.uf[root as usize] != root {
            root = self.uf[root as usize];
        }
        let mut cur = x;
        while self.uf[cur as usize] != root {
            let up = self.uf[cur as usize];
            self.uf[cur as usize] = root;
            cur = up;
        }
        root
    }

    /// Defining word `[h, t1, ..., tj]`: `e_v = g_h * g_t1 * ... * g_tj`.
    pub fn word(&self, v: u32) -> Vec<u8> {
        let mut tail = Vec::new();
        let mut cur = v;
        while self.parent[cur as usize] != NONE {
            tail.push(self.letter[cur as usize]);
            cur = self.parent[cur as usize];
        }
        tail.push(self.letter[cur as usize]);
        tail.reverse();
        tail
    }

    /// Follows `letters` from `v` while edges exist. Returns the last vertex
    /// reached and how many letters were consumed.
    pub fn forward(&self, v: u32, letters: &[u8]) -> (u32, usize) {
        let mut cur = v;
        for (i, &s) in letters.iter().enumerate() {
            let w = self.edge(cur, s);
            if w == NONE {
                return (cur, i);
            }
            cur = w;
        }
        (cur, letters.len())
    }

    /// Follows `letters[floor..]` backwards from `v`. Returns the vertex
    /// reached and the index of the first consumed letter.
    pub fn backward(&self, v: u32, letters: &[u8], floor: usize) -> (u32, usize) {
        let mut cur = v;
        let mut j = letters.len();
        while j > floor {
            let w = self.edge(cur, letters[j - 1]);
            if w == NONE {
                break;
            }
            cur = w;
            j -= 1;
        }
        (cur, j)
    }

    /// Identifies `a` and `b` and every pair this forces. The smaller index
    /// survives. `on_merge` sees each identification as `(survivor, dead)`.
    pub fn coincidence(&mut self, a: u32, b: u32, mut on_merge: impl FnMut(u32, u32)) {
        let mut queue: Vec<u32> = Vec::new();
        self.merge_roots(a, b, &mut queue, &mut on_merge);
        let mut i = 0;
        while i < queue.len() {
            let dead = queue[i];
            i += 1;
            for s in 0..self.k as u8 {
                let d = self.edge(dead, s);
                if d == NONE {
                    continue;
                }
                self.set(d, s, NONE);
                self.set(dead, s, NONE);
                let mu = self.find(dead);
                let nu = self.find(d);
                let mu_s = self.edge(mu, s);
                if mu_s != NONE {
                    self.merge_roots(nu, mu_s, &mut queue, &mut on_merge);
                    continue;
                }
                let nu_s = self.edge(nu, s);
                if nu_s != NONE {
                    self.merge_roots(mu, nu_s, &mut queue, &mut on_merge);
                } else {
                    self.set(mu, s, nu);
                    self.set(nu, s, mu);
                }
            }
        }
    }

    fn merge_roots(
        &mut self,
        a: u32,
        b: u32,
        queue: &mut Vec<u32>,
        on_merge: &mut impl FnMut(u32, u32),
    ) {
        let a = self.find(a);
        let b = self.find(b);
        if a == b {
            return;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.uf[hi as usize] = lo;
        self.merges += 1;
        queue.push(hi);
        on_merge(lo, hi);
    }
}

/// Cancels adjacent equal letters, then strips matching ends.
pub(crate) fn reduce(word: &[u8]) -> Vec<u8> {
    let mut out: Vec<u8> = Vec::with_capacity(word.len());
    for &s in word {
        if out.last() == Some(&s) {
            out.pop();
        } else {
            out.push(s);
        }
    }
    let (mut lo, mut hi) = (0, out.len());
    while hi - lo >= 2 && out[lo] == out[hi - 1] {
        lo += 1;
        hi -= 1;
    }
    out[lo..hi].to_vec()
}

/// Smallest rotation of the word or of its reverse. Two relators with the
/// same key hold at exactly the same vertices.
pub(crate) fn cyclic_key(word: &[u8]) -> Vec<u8> {
    let n = word.len();
    let mut best: Option<Vec<u8>> = None;
    let rev: Vec<u8> = word.iter().rev().copied().collect();
    for w in [word, &rev[..]] {
        for r in 0..n {
            let cand: Vec<u8> = w[r..].iter().chain(&w[..r]).copied().collect();
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or_default()
}

/// Operator word of the element with defining word `[h, t1..tj]`:
/// `tj..t1 h t1..tj`.
pub(crate) fn operator_word(word: &[u8]) -> Vec<u8> {
    let (h, t) = word.split_first().expect("non-empty word");
    let mut out: Vec<u8> = t.iter().rev().copied().collect();
    out.push(*h);
    out.extend_from_slice(t);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction() {
        assert_eq!(reduce(&[0, 1, 1, 0]), Vec::<u8>::new());
        assert_eq!(reduce(&[0, 1, 2, 0]), vec![1, 2]);
        assert_eq!(reduce(&[1, 0, 0, 2]), vec![1, 2]);
        assert_eq!(reduce(&[0, 1, 0]), vec![1]);
    }

    #[test]
    fn keys_identify_rotations_and_reversals() {
        assert_eq!(cyclic_key(&[2, 0, 1]), cyclic_key(&[0, 1, 2]));
        assert_eq!(cyclic_key(&[2, 1, 0]), cyclic_key(&[0, 1, 2]));
        assert_ne!(cyclic_key(&[0, 1, 0, 2]), cyclic_key(&[0, 1, 2, 2]));
    }

    #[test]
    fn operator_words() {
        assert_eq!(operator_word(&[0]), vec![0]);
        assert_eq!(operator_word(&[0, 1, 2]), vec![2, 1, 0, 1, 2]);
    }

    #[test]
    fn coincidence_cascades() {
        // v1 = v0*b, v2 = v1*c, v3 = v0*c, v4 = v3*b; then v1 = v3 forces
        // v4 = v1*b = v0 and v2 = v3*c = v0
        let mut g = Graph::new(3);
        let v0 = g.add_generator(0);
        let v1 = g.define(v0, 1);
        let v2 = g.define(v1, 2);
        let v3 = g.define(v0, 2);
        let v4 = g.define(v3, 1);
        let mut seen = Vec::new();
        g.coincidence(v1, v3, |a, b| seen.push((a, b)));
        assert_eq!(seen, vec![(1, 3), (0, 4), (0, 2)]);
        assert_eq!(g.live(), 2);
        assert_eq!(g.find(v4), v0);
        assert_eq!(g.find(v2), v0);
        assert_eq!(g.edge(v0, 1), v1);
        assert_eq!(g.edge(v0, 2), v1);
        assert_eq!(g.edge(v0, 0), v0);
    }
}
