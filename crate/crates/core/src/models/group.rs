//! Finite groups given by multiplication tables.
//!
//! Text format: line 1 is the order `m`; line 2 is
//! `identity <e> inverses <i_0> ... <i_{m-1}>`; then `m` rows of `m`
//! indices, row `a` listing `a·0 … a·(m-1)`. `#` lines are comments.

use std::fmt::Write as _;

use crate::error::{Error, ParseError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupTable {
    size: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    identity: usize,
}

impl FiniteGroupTable {
    /// Builds a group from its table, finding the identity and inverses and
    /// checking associativity.
    pub fn from_fn(m: usize, f: impl Fn(usize, usize) -> usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidGroup("empty carrier".into()));
        }
        let mut table = Vec::with_capacity(m * m);
        for a in 0..m {
            for b in 0..m {
                let v = f(a, b);
                if v >= m {
                    return Err(Error::InvalidGroup(format!("{a}·{b} = {v} out of range")));
                }
                table.push(v as u32);
            }
        }
        let mul = |a: usize, b: usize| table[a * m + b] as usize;
        let identity = (0..m)
            .find(|&e| (0..m).all(|x| mul(e, x) == x && mul(x, e) == x))
            .ok_or_else(|| Error::InvalidGroup("no identity".into()))?;
        let inverse = (0..m)
            .map(|a| {
                (0..m)
                    .find(|&b| mul(a, b) == identity && mul(b, a) == identity)
                    .map(|b| b as u32)
                    .ok_or_else(|| Error::InvalidGroup(format!("{a} has no inverse")))
            })
            .collect::<Result<Vec<_>>>()?;
        for a in 0..m {
            for b in 0..m {
                let ab = mul(a, b);
                for c in 0..m {
                    if mul(ab, c) != mul(a, mul(b, c)) {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroupTable {
            size: m,
            table,
            inverse,
            identity,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.size + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.size).all(|a| (0..self.size).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    /// Smallest `e ≥ 1` with `g^e = 1` for every `g`.
    pub fn exponent(&self) -> usize {
        let order = |a: usize| {
            let mut x = a;
            let mut k = 1;
            while x != self.identity {
                x = self.mul(x, a);
                k += 1;
            }
            k
        };
        (0..self.size).map(order).fold(1, lcm)
    }

    pub fn cyclic(n: usize) -> Self {
        FiniteGroupTable::from_fn(n, |a, b| (a + b) % n).expect("cyclic group")
    }

    /// `S_3` acting on `{0,1,2}`, elements listed in lexicographic order of
    /// their image tuples.
    pub fn symmetric3() -> Self {
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        FiniteGroupTable::from_fn(6, |a, b| {
            // apply a, then b
            let c = [perms[b][perms[a][0]], perms[b][perms[a][1]], perms[b][perms[a][2]]];
            perms.iter().position(|p| *p == c).unwrap()
        })
        .expect("S3")
    }

    /// Non-abelian group of order 27 and exponent 3 on triples `(x,y,z)`,
    /// element `9x + 3y + z`, with
    /// `(x1,y1,z1)(x2,y2,z2) = (x1+x2, y1+y2, z1+z2+x1·y2) mod 3`.
    pub fn heisenberg27() -> Self {
        let split = |i: usize| (i / 9, (i / 3) % 3, i % 3);
        FiniteGroupTable::from_fn(27, |a, b| {
            let (x1, y1, z1) = split(a);
            let (x2, y2, z2) = split(b);
            ((x1 + x2) % 3) * 9 + ((y1 + y2) % 3) * 3 + (z1 + z2 + x1 * y2) % 3
        })
        .expect("Heisenberg group")
    }

    /// Direct product; `(g, h)` is element `g * other.size() + h`.
    pub fn product(&self, other: &FiniteGroupTable) -> Self {
        let n = other.size;
        FiniteGroupTable::from_fn(self.size * n, |a, b| {
            self.mul(a / n, b / n) * n + other.mul(a % n, b % n)
        })
        .expect("product of groups")
    }

    pub fn power(&self, k: usize) -> Self {
        (0..k).fold(FiniteGroupTable::cyclic(1), |acc, _| acc.product(self))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{}", self.size).unwrap();
        let inv: Vec<String> = self.inverse.iter().map(|v| v.to_string()).collect();
        writeln!(out, "identity {} inverses {}", self.identity, inv.join(" ")).unwrap();
        for a in 0..self.size {
            let row: Vec<String> = (0..self.size).map(|b| self.mul(a, b).to_string()).collect();
            writeln!(out, "{}", row.join(" ")).unwrap();
        }
        out
    }

    /// Parses [`FiniteGroupTable::to_text`] output. The header must agree
    /// with the identity and inverses computed from the table.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let num = |line: usize, s: &str| -> Result<usize> {
            s.parse()
                .map_err(|_| ParseError::new(line, 1, format!("expected an integer, found `{s}`")).into())
        };
        let (l1, first) = lines.next().ok_or_else(|| ParseError::new(1, 1, "missing order line"))?;
        let m = num(l1, first)?;
        let (l2, header) = lines
            .next()
            .ok_or_else(|| ParseError::new(l1 + 1, 1, "missing identity/inverses line"))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != m + 3 || parts[0] != "identity" || parts[2] != "inverses" {
            return Err(ParseError::new(l2, 1, "expected `identity <e> inverses <m indices>`").into());
        }
        let identity = num(l2, parts[1])?;
        let inverses = parts[3..]
            .iter()
            .map(|s| num(l2, s))
            .collect::<Result<Vec<_>>>()?;
        let mut entries = Vec::with_capacity(m * m);
        for (line, l) in lines {
            for tok in l.split_whitespace() {
                entries.push(num(line, tok)?);
            }
        }
        if entries.len() != m * m {
            return Err(Error::InvalidGroup(format!(
                "expected {} entries, found {}",
                m * m,
                entries.len()
            )));
        }
        let g = FiniteGroupTable::from_fn(m, |a, b| entries[a * m + b])?;
        if g.identity != identity || g.inverse.iter().map(|&v| v as usize).ne(inverses) {
            return Err(Error::InvalidGroup("header disagrees with the table".into()));
        }
        Ok(g)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}
