//! The twisted extension `(Z_3 × Z_3^3, *̂)` with
//! `(a1,x1) *̂ (a2,x2) = (2·a2 - a1 + c(x1,x2), x1*x2)`.
//!
//! Elements of `Z_3^3` are numbered `9x + 3y + z`; the cocycle file lists
//! `c(i, j)` as row `i`, column `j`, one digit per entry.

use std::collections::HashMap;

use rayon::prelude::*;

use super::z3_cubed;
use crate::error::{Error, ParseError, Result};
use crate::quandle::FiniteQuandle;
use crate::word::KeiWord;

const N: usize = 27;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocycleMatrix {
    entries: Vec<u8>,
}

impl CocycleMatrix {
    pub fn zero() -> Self {
        CocycleMatrix {
            entries: vec![0; N * N],
        }
    }

    /// The cocycle shipped in `fixtures/cocycle_m.txt`.
    pub fn bundled() -> Self {
        CocycleMatrix::from_text(include_str!("../../fixtures/cocycle_m.txt"))
            .expect("bundled cocycle fixture is well formed")
    }

    /// 27 lines of 27 digits in `{0,1,2}`. Whitespace between digits is
    /// ignored; blank lines and `#` lines are skipped.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut entries = Vec::with_capacity(N * N);
        let mut rows = 0;
        for (i, line) in text.lines().enumerate() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            rows += 1;
            let mut count = 0;
            for (col, ch) in line.char_indices() {
                if ch.is_whitespace() {
                    continue;
                }
                let d = match ch {
                    '0'..='2' => ch as u8 - b'0',
                    _ => {
                        return Err(ParseError::new(i + 1, col + 1, format!("expected 0, 1 or 2, found `{ch}`"))
                            .into())
                    }
                };
                entries.push(d);
                count += 1;
            }
            if count != N {
                return Err(Error::InvalidCocycle(format!(
                    "line {} has {count} entries, expected {N}",
                    i + 1
                )));
            }
        }
        if rows != N {
            return Err(Error::InvalidCocycle(format!("{rows} rows, expected {N}")));
        }
        Ok(CocycleMatrix { entries })
    }

    pub fn to_text(&self) -> String {
        self.entries
            .chunks(N)
            .map(|row| row.iter().map(|d| (b'0' + d) as char).collect::<String>() + "\n")
            .collect()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.entries[i * N + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        assert!(v < 3);
        self.entries[i * N + j] = v;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocycleViolation {
    /// 1 to 4, for `c(x,x) = 0`, `c(x*y,y) = c(x,y)`, the distributivity
    /// condition and symmetry.
    pub condition: u8,
    pub witness: Vec<usize>,
}

#[derive(Debug, Clone, Default)]
pub struct CocycleReport {
    /// Number of instances checked for each condition.
    pub checked: [usize; 4],
    pub violations: Vec<CocycleViolation>,
}

impl CocycleReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations_of(&self, condition: u8) -> impl Iterator<Item = &CocycleViolation> {
        self.violations.iter().filter(move |v| v.condition == condition)
    }
}

/// Checks every instance of the four conditions over `base`:
///
/// 1. `c(x,x) = 0`
/// 2. `c(x*y,y) = c(x,y)`
/// 3. `c(x1*x3, x2*x3) - c(x1*x2, x3) = -c(x1,x2) + c(x2,x3) + c(x1,x3)` mod 3
/// 4. `c(x,y) = c(y,x)`
pub fn validate_cocycle(m: &CocycleMatrix, base: &FiniteQuandle) -> Result<CocycleReport> {
    if base.size() != N {
        return Err(Error::InvalidCocycle(format!(
            "base has {} elements, expected {N}",
            base.size()
        )));
    }
    let c = |i: usize, j: usize| m.get(i, j) as i32;
    let mut report = CocycleReport {
        checked: [N, N * N, N * N * N, N * N],
        violations: Vec::new(),
    };
    let mut push = |condition: u8, witness: Vec<usize>| {
        report.violations.push(CocycleViolation { condition, witness })
    };
    for x in 0..N {
        if c(x, x) != 0 {
            push(1, vec![x]);
        }
    }
    for x in 0..N {
        for y in 0..N {
            if c(base.op(x, y), y) != c(x, y) {
                push(2, vec![x, y]);
            }
        }
    }
    let third: Vec<Vec<usize>> = (0..N)
        .into_par_iter()
        .flat_map_iter(|x1| {
            let mut bad = Vec::new();
            for x2 in 0..N {
                for x3 in 0..N {
                    let lhs = c(base.op(x1, x3), base.op(x2, x3)) - c(base.op(x1, x2), x3);
                    let rhs = -c(x1, x2) + c(x2, x3) + c(x1, x3);
                    if (lhs - rhs).rem_euclid(3) != 0 {
                        bad.push(vec![x1, x2, x3]);
                    }
                }
            }
            bad
        })
        .collect();
    for w in third {
        push(3, w);
    }
    for x in 0..N {
        for y in 0..N {
            if c(x, y) != c(y, x) {
                push(4, vec![x, y]);
            }
        }
    }
    Ok(report)
}

/// The 81-element extension. Element `(a, x)` has index `27a + x`; the
/// generators are the four unit vectors `(1,0)`, `(0,(1,0,0))`,
/// `(0,(0,1,0))`, `(0,(0,0,1))`, i.e. indices 27, 9, 3, 1.
pub fn alexander_extension(base: &FiniteQuandle, m: &CocycleMatrix) -> Result<FiniteQuandle> {
    let report = validate_cocycle(m, base)?;
    if let Some(v) = report.violations.first() {
        return Err(Error::InvalidCocycle(format!(
            "condition {} fails at {:?}",
            v.condition, v.witness
        )));
    }
    FiniteQuandle::from_fn(3 * N, |p, q| {
        let (a1, x1) = (p / N, p % N);
        let (a2, x2) = (q / N, q % N);
        let a = (2 * a2 + 3 - a1 + m.get(x1, x2) as usize) % 3;
        a * N + base.op(x1, x2)
    })?
    .with_generators(vec![27, 9, 3, 1])
}

#[derive(Debug, Clone)]
pub struct EpimorphismReport {
    /// `p` on every element, when it extends consistently.
    pub image: Option<Vec<usize>>,
    /// `(x, y)` where `p(x*y)` was forced to two different values.
    pub conflict: Option<(usize, usize)>,
    pub surjective: bool,
    pub p_ab: Option<(u8, u8, u8)>,
    pub p_ab_cd: Option<(u8, u8, u8)>,
    pub p_ac_bd: Option<(u8, u8, u8)>,
    /// Whether `(a*b)*(c*d)` and `(a*c)*(b*d)` are different elements.
    pub products_distinct: bool,
}

impl EpimorphismReport {
    pub fn passes(&self) -> bool {
        self.image.is_some()
            && self.surjective
            && self.p_ab == Some((2, 0, 0))
            && self.p_ab_cd == Some((1, 1, 1))
            && self.p_ac_bd == Some((1, 1, 1))
            && self.products_distinct
    }
}

fn coords(i: usize) -> (u8, u8, u8) {
    ((i / 9) as u8, ((i / 3) % 3) as u8, (i % 3) as u8)
}

/// Extends `a ↦ (0,0,0)`, `b ↦ (1,0,0)`, `c ↦ (0,1,0)`, `d ↦ (0,0,1)` over
/// `q` by closure and checks it is a surjective homomorphism onto `Z_3^3`.
/// The generators are the elements named `a`..`d`, or else the first four
/// listed generators.
pub fn epimorphism_p_check(q: &FiniteQuandle) -> Result<EpimorphismReport> {
    let gens: Vec<usize> = match ["a", "b", "c", "d"]
        .iter()
        .map(|n| q.element_named(n))
        .collect::<Option<Vec<_>>>()
    {
        Some(g) => g,
        None => match q.generators() {
            Some(g) if g.len() >= 4 => g[..4].to_vec(),
            _ => {
                return Err(Error::InvalidArgument(
                    "quandle needs four named or listed generators".into(),
                ))
            }
        },
    };
    let target = z3_cubed();
    let m = q.size();
    let mut map = vec![usize::MAX; m];
    let mut list = Vec::new();
    let mut conflict = None;
    for (&g, t) in gens.iter().zip([0, 9, 3, 1]) {
        if map[g] != usize::MAX && map[g] != t {
            conflict = Some((g, g));
        }
        if map[g] == usize::MAX {
            map[g] = t;
            list.push(g);
        }
    }
    let mut p = 0;
    'outer: while p < list.len() && conflict.is_none() {
        let e = list[p];
        for j in 0..=p {
            let f = list[j];
            for (x, y) in [(e, f), (f, e)] {
                let v = q.op(x, y);
                let t = target.op(map[x], map[y]);
                if map[v] == usize::MAX {
                    map[v] = t;
                    list.push(v);
                } else if map[v] != t {
                    conflict = Some((x, y));
                    break 'outer;
                }
            }
        }
        p += 1;
    }
    let image = (conflict.is_none() && list.len() == m).then_some(map);
    let env: HashMap<String, usize> = ["a", "b", "c", "d"]
        .iter()
        .map(|s| s.to_string())
        .zip(gens.iter().copied())
        .collect();
    let eval = |w: &str| q.eval_word(&KeiWord::parse(w).expect("fixed word"), &env);
    let ab = eval("a*b")?;
    let ab_cd = eval("(a*b)*(c*d)")?;
    let ac_bd = eval("(a*c)*(b*d)")?;
    let at = |x: usize| image.as_ref().map(|im| coords(im[x]));
    let surjective = image.as_ref().is_some_and(|im| {
        let mut hit = [false; N];
        im.iter().for_each(|&t| hit[t] = true);
        hit.iter().all(|&h| h)
    });
    Ok(EpimorphismReport {
        p_ab: at(ab),
        p_ab_cd: at(ab_cd),
        p_ac_bd: at(ac_bd),
        image,
        conflict,
        surjective,
        products_distinct: ab_cd != ac_bd,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{core_of_group, dihedral, FiniteGroupTable};

    /// Direct transcription of the four conditions with coordinates spelled
    /// out, independent of the quandle table code.
    fn oracle_violations(m: &CocycleMatrix) -> usize {
        let op = |i: usize, j: usize| {
            let (a, b) = (coords(i), coords(j));
            let f = |x: u8, y: u8| ((2 * y as usize + 3 - x as usize) % 3) as usize;
            f(a.0, b.0) * 9 + f(a.1, b.1) * 3 + f(a.2, b.2)
        };
        let c = |i: usize, j: usize| m.get(i, j) as i64;
        let mut bad = 0;
        for x in 0..N {
            bad += (c(x, x) != 0) as usize;
            for y in 0..N {
                bad += (c(op(x, y), y) != c(x, y)) as usize;
                bad += (c(x, y) != c(y, x)) as usize;
                for z in 0..N {
                    let l = c(op(x, z), op(y, z)) - c(op(x, y), z);
                    let r = -c(x, y) + c(y, z) + c(x, z);
                    bad += ((l - r).rem_euclid(3) != 0) as usize;
                }
            }
        }
        bad
    }

    #[test]
    fn bundled_matrix_is_a_cocycle() {
        let m = CocycleMatrix::bundled();
        let r = validate_cocycle(&m, &z3_cubed()).unwrap();
        assert!(r.is_valid(), "{:?}", &r.violations[..r.violations.len().min(5)]);
        assert_eq!(r.checked, [27, 729, 19683, 729]);
        assert_eq!(oracle_violations(&m), 0);
    }

    #[test]
    fn zero_matrix_is_a_cocycle() {
        assert!(validate_cocycle(&CocycleMatrix::zero(), &z3_cubed()).unwrap().is_valid());
    }

    #[test]
    fn asymmetric_perturbation_breaks_symmetry() {
        let mut m = CocycleMatrix::bundled();
        let v = m.get(0, 1);
        m.set(0, 1, (v + 1) % 3);
        let r = validate_cocycle(&m, &z3_cubed()).unwrap();
        assert!(r.violations_of(4).any(|v| v.witness == vec![0, 1]));
        assert!(oracle_violations(&m) > 0);
        assert!(alexander_extension(&z3_cubed(), &m).is_err());
    }

    #[test]
    fn text_round_trip_and_errors() {
        let m = CocycleMatrix::bundled();
        assert_eq!(CocycleMatrix::from_text(&m.to_text()).unwrap(), m);
        assert!(CocycleMatrix::from_text("012\n").is_err());
        let bad = m.to_text().replacen('1', "3", 1);
        assert!(matches!(CocycleMatrix::from_text(&bad), Err(Error::Parse(_))));
        assert!(validate_cocycle(&m, &dihedral(3)).is_err());
    }

    #[test]
    fn extension_properties() {
        let q = alexander_extension(&z3_cubed(), &CocycleMatrix::bundled()).unwrap();
        assert_eq!(q.size(), 81);
        assert!(q.is_kei());
        assert!(q.satisfies_universal(3).unwrap());
        assert!(q.generates(&[27, 9, 3, 1]));
        assert_eq!(q.min_generators(4).unwrap(), Some(4));
        let core = core_of_group(&FiniteGroupTable::cyclic(3).power(4));
        assert!(q.is_isomorphic(&core).is_none());
    }

    #[test]
    fn untwisted_extension_is_the_product() {
        let q = alexander_extension(&z3_cubed(), &CocycleMatrix::zero()).unwrap();
        assert_eq!(q.to_table_text(), dihedral(3).direct_product(&z3_cubed()).to_table_text());
    }

    #[test]
    fn epimorphism_on_extension() {
        let q = alexander_extension(&z3_cubed(), &CocycleMatrix::bundled()).unwrap();
        let r = epimorphism_p_check(&q).unwrap();
        assert!(r.passes(), "{r:?}");
    }
}
