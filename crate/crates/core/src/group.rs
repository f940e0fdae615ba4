//! Finite groups given by Cayley tables.
//!
//! Elements are dense indices `0..n`. Identity and inverses are always derived
//! from the table, never taken on trust.

use serde::{Deserialize, Serialize};

use crate::error::{check_table, Error, Result};
use crate::perm::lex_permutations;

/// Largest symmetric group degree the builder accepts (order 120).
pub const MAX_SYMMETRIC_DEGREE: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    Cyclic,
    Dihedral,
    Symmetric,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    n: usize,
    mul: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a Cayley table: associativity over all n³ triples, a two-sided
    /// identity, and two-sided inverses.
    pub fn from_table(rows: &[Vec<usize>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyTable);
        }
        check_table(rows, n, n)?;
        let mul: Vec<usize> = rows.iter().flatten().copied().collect();
        let at = |a: usize, b: usize| mul[a * n + b];

        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::NotAssociative { a, b, c });
                    }
                }
            }
        }

        let identity = (0..n)
            .find(|&e| (0..n).all(|a| at(e, a) == a && at(a, e) == a))
            .ok_or(Error::NoIdentity)?;

        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| at(a, b) == identity && at(b, a) == identity)
                .ok_or(Error::NoInverse { a })?;
            inverse.push(inv);
        }

        Ok(FiniteGroup { n, mul, identity, inverse })
    }

    /// Built-in families.
    ///
    /// * cyclic `n`: integers mod `n` under addition.
    /// * dihedral `n`: order `2n`; index `k + n*f` is the map `x -> (-1)^f x + k` on `Z_n`.
    /// * symmetric `n`: order `n!`; index `i` is the `i`-th permutation of `0..n` in
    ///   lexicographic one-line order, multiplied as `(a*b)(i) = a(b(i))`.
    pub fn builtin(kind: GroupKind, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("group parameter must be positive".into()));
        }
        let rows: Vec<Vec<usize>> = match kind {
            GroupKind::Cyclic => (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect(),
            GroupKind::Dihedral => {
                let order = 2 * n;
                (0..order)
                    .map(|a| {
                        let (k1, f1) = (a % n, a / n);
                        (0..order)
                            .map(|b| {
                                let (k2, f2) = (b % n, b / n);
                                let twisted = if f1 == 1 { (n - k2) % n } else { k2 };
                                (k1 + twisted) % n + n * (f1 ^ f2)
                            })
                            .collect()
                    })
                    .collect()
            }
            GroupKind::Symmetric => {
                if n > MAX_SYMMETRIC_DEGREE {
                    return Err(Error::SizeLimitExceeded {
                        what: "symmetric group degree".into(),
                        requested: n as u128,
                        limit: MAX_SYMMETRIC_DEGREE as u128,
                    });
                }
                let perms = lex_permutations(n);
                let index_of = |p: &[usize]| perms.binary_search_by(|q| q.as_slice().cmp(p)).unwrap();
                perms
                    .iter()
                    .map(|a| {
                        perms
                            .iter()
                            .map(|b| {
                                let ab: Vec<usize> = b.iter().map(|&i| a[i]).collect();
                                index_of(&ab)
                            })
                            .collect()
                    })
                    .collect()
            }
        };
        FiniteGroup::from_table(&rows)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.n).map(<[usize]>::to_vec).collect()
    }
}

/// Index of a permutation of `0..n` under the symmetric group's lexicographic numbering.
pub fn symmetric_index(perm: &[usize]) -> Option<usize> {
    if perm.len() > MAX_SYMMETRIC_DEGREE {
        return None;
    }
    lex_permutations(perm.len()).iter().position(|p| p == perm)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_associative(g: &FiniteGroup) -> bool {
        let n = g.order();
        (0..n).all(|a| {
            (0..n).all(|b| (0..n).all(|c| g.mul(g.mul(a, b), c) == g.mul(a, g.mul(b, c))))
        })
    }

    #[test]
    fn z2_table() {
        let g = FiniteGroup::from_table(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.identity(), 0);
        assert_eq!(g.inv(0), 0);
        assert_eq!(g.inv(1), 1);
    }

    #[test]
    fn left_projection_has_no_identity() {
        // a*b = b: associative, every element a left identity, none a right identity
        let err = FiniteGroup::from_table(&[vec![0, 1], vec![0, 1]]).unwrap_err();
        assert_eq!(err, Error::NoIdentity);
    }

    #[test]
    fn non_associative_witness() {
        // a*b = a - b mod 3
        let rows: Vec<Vec<usize>> = (0..3).map(|a| (0..3).map(|b| (a + 3 - b) % 3).collect()).collect();
        match FiniteGroup::from_table(&rows).unwrap_err() {
            Error::NotAssociative { a, b, c } => {
                let m = |x: usize, y: usize| rows[x][y];
                assert_ne!(m(m(a, b), c), m(a, m(b, c)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_inverse() {
        // {0,1} under max with identity 0: 1 has no inverse
        let err = FiniteGroup::from_table(&[vec![0, 1], vec![1, 1]]).unwrap_err();
        assert_eq!(err, Error::NoInverse { a: 1 });
    }

    #[test]
    fn ragged_and_out_of_range_tables() {
        assert!(matches!(FiniteGroup::from_table(&[vec![0, 1], vec![1]]), Err(Error::RaggedTable { .. })));
        assert!(matches!(
            FiniteGroup::from_table(&[vec![0, 2], vec![1, 0]]),
            Err(Error::EntryOutOfRange { row: 0, col: 1, value: 2, bound: 2 })
        ));
        assert_eq!(FiniteGroup::from_table(&[]), Err(Error::EmptyTable));
    }

    #[test]
    fn builtin_orders() {
        let c3 = FiniteGroup::builtin(GroupKind::Cyclic, 3).unwrap();
        assert_eq!(c3.mul(1, 2), 0);
        assert_eq!(FiniteGroup::builtin(GroupKind::Symmetric, 3).unwrap().order(), 6);
        assert_eq!(FiniteGroup::builtin(GroupKind::Dihedral, 4).unwrap().order(), 8);
        assert_eq!(FiniteGroup::builtin(GroupKind::Symmetric, 5).unwrap().order(), 120);
        assert!(matches!(
            FiniteGroup::builtin(GroupKind::Symmetric, 6),
            Err(Error::SizeLimitExceeded { .. })
        ));
    }

    #[test]
    fn builtins_round_trip_and_associate() {
        let mut groups = Vec::new();
        for n in 1..=8 {
            groups.push(FiniteGroup::builtin(GroupKind::Cyclic, n).unwrap());
            groups.push(FiniteGroup::builtin(GroupKind::Dihedral, n).unwrap());
        }
        for n in 1..=5 {
            groups.push(FiniteGroup::builtin(GroupKind::Symmetric, n).unwrap());
        }
        for g in groups.iter().filter(|g| g.order() <= 60) {
            assert!(brute_associative(g));
        }
        for g in &groups {
            assert_eq!(&FiniteGroup::from_table(&g.table()).unwrap(), g);
        }
    }

    #[test]
    fn dihedral_is_non_abelian_from_three() {
        let d3 = FiniteGroup::builtin(GroupKind::Dihedral, 3).unwrap();
        let abelian = (0..6).all(|a| (0..6).all(|b| d3.mul(a, b) == d3.mul(b, a)));
        assert!(!abelian);
        // reflections are involutions
        for f in 3..6 {
            assert_eq!(d3.mul(f, f), d3.identity());
        }
    }

    #[test]
    fn symmetric_indexing_is_lexicographic() {
        let s3 = FiniteGroup::builtin(GroupKind::Symmetric, 3).unwrap();
        assert_eq!(s3.identity(), 0);
        assert_eq!(symmetric_index(&[0, 2, 1]), Some(1));
        assert_eq!(symmetric_index(&[2, 1, 0]), Some(5));
        // (0 2 1)-style 3-cycle [1,2,0] is index 3, its square [2,0,1] index 4
        assert_eq!(s3.mul(3, 3), 4);
    }
}
