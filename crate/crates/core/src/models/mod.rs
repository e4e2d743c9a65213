//! Concrete keis: dihedral quandles, cores of groups, and the twisted
//! extension of `Z_3^3` by `Z_3`.

mod cocycle;
mod group;

pub use cocycle::{
    alexander_extension, epimorphism_p_check, validate_cocycle, CocycleMatrix, CocycleReport,
    CocycleViolation, EpimorphismReport,
};
pub use group::FiniteGroupTable;

use crate::quandle::FiniteQuandle;

/// `Z_n` with `i*j = 2j - i mod n`.
pub fn dihedral(n: usize) -> FiniteQuandle {
    assert!(n >= 1, "dihedral quandle needs n >= 1");
    FiniteQuandle::from_fn(n, |i, j| (2 * j + n - i) % n).expect("dihedral table is well formed")
}

/// `Core(G)`: the group carrier with `a*b = b a^-1 b`.
pub fn core_of_group(g: &FiniteGroupTable) -> FiniteQuandle {
    FiniteQuandle::from_fn(g.size(), |a, b| g.mul(g.mul(b, g.inv(a)), b))
        .expect("core table is well formed")
}

/// `Z_3^3` with the coordinate order used by the cocycle fixture:
/// element `9x + 3y + z` is `(x, y, z)`.
pub fn z3_cubed() -> FiniteQuandle {
    dihedral(3).power(3)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dihedral_examples() {
        let d3 = dihedral(3);
        assert_eq!(d3.op(1, 0), 2);
        assert!(d3.is_kei());
        assert_eq!(dihedral(1).size(), 1);
        assert!(dihedral(4).satisfies_universal(4).unwrap());
    }

    #[test]
    fn dihedral_satisfies_its_relation() {
        for n in 2..=12 {
            let q = dihedral(n);
            assert!(q.is_kei(), "dihedral({n})");
            assert!(q.satisfies_universal(n).unwrap(), "dihedral({n}) fails r_{n}");
        }
    }

    #[test]
    fn core_of_cyclic_is_dihedral() {
        for n in 1..8 {
            let c = core_of_group(&FiniteGroupTable::cyclic(n));
            assert_eq!(c.to_table_text(), dihedral(n).to_table_text());
        }
    }

    #[test]
    fn cores_are_keis() {
        let h = FiniteGroupTable::heisenberg27();
        let c = core_of_group(&h);
        assert!(c.is_kei());
        assert!(c.is_commutative());
        assert_eq!(crate::quandle::log3_exact(c.size()), Some(3));
        assert_eq!(c.collapse_to_point().unwrap().last(), Some(&1));

        let s3 = FiniteGroupTable::symmetric3();
        let cs = core_of_group(&s3);
        assert!(cs.is_kei());
        assert!(!cs.is_commutative());
    }

    #[test]
    fn core_z3_4_needs_five_generators() {
        let c = core_of_group(&FiniteGroupTable::cyclic(3).power(4));
        assert_eq!(c.size(), 81);
        assert!(c.is_kei());
        assert_eq!(c.min_generators(4).unwrap(), None);
        assert_eq!(c.min_generators(5).unwrap(), Some(5));
    }

    #[test]
    fn powers_of_dihedral3_are_powers_of_three() {
        for k in 1..=4 {
            let q = dihedral(3).power(k);
            assert!(q.is_commutative());
            assert_eq!(crate::quandle::log3_exact(q.size()), Some(k as u32));
        }
    }
}
