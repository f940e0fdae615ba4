//! Exhaustive enumeration of small racks.
//!
//! Candidates are tables whose rows are permutations (R1 by construction),
//! filtered by self-distributivity. Isomorphism classes are represented by the
//! lexicographically minimal table over all `n!` relabelings.

use crate::error::{Error, Result};
use crate::perm::lex_permutations;
use crate::rack::FiniteRack;

pub const MAX_ENUMERATION_ORDER: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EnumerationFilter {
    pub up_to_iso: bool,
    pub quandles_only: bool,
}

/// All racks of order `n` (at most 4), labelled or one per isomorphism class.
///
/// Results are sorted by table.
pub fn enumerate_racks(n: usize, filter: EnumerationFilter) -> Result<Vec<FiniteRack>> {
    if n > MAX_ENUMERATION_ORDER {
        return Err(Error::SizeLimitExceeded {
            what: "rack enumeration order".into(),
            requested: n as u128,
            limit: MAX_ENUMERATION_ORDER as u128,
        });
    }
    if n == 0 {
        return Err(Error::Invalid("rack order must be positive".into()));
    }
    let perms = lex_permutations(n);
    let relabelings = lex_permutations(n);
    let mut tables: Vec<Vec<usize>> = Vec::new();

    let mut digits = vec![0usize; n];
    'outer: loop {
        let flat: Vec<usize> = digits.iter().flat_map(|&d| perms[d].iter().copied()).collect();
        if is_self_distributive(&flat, n) && (!filter.quandles_only || (0..n).all(|r| flat[r * n + r] == r)) {
            let table = if filter.up_to_iso { canonical_form(&flat, n, &relabelings) } else { flat };
            tables.push(table);
        }
        // mixed-radix increment, last row fastest
        for i in (0..n).rev() {
            digits[i] += 1;
            if digits[i] < perms.len() {
                continue 'outer;
            }
            digits[i] = 0;
        }
        break;
    }

    tables.sort();
    tables.dedup();
    tables
        .into_iter()
        .map(|flat| {
            let rows: Vec<Vec<usize>> = flat.chunks(n).map(<[usize]>::to_vec).collect();
            FiniteRack::from_table(&rows)
        })
        .collect()
}

/// Lexicographically minimal relabeled table of `rack`.
pub fn canonical_table(rack: &FiniteRack) -> Vec<usize> {
    let n = rack.order();
    canonical_form(rack.raw_op(), n, &lex_permutations(n))
}

fn canonical_form(table: &[usize], n: usize, relabelings: &[Vec<usize>]) -> Vec<usize> {
    let mut best: Option<Vec<usize>> = None;
    let mut candidate = vec![0; n * n];
    for pi in relabelings {
        for r in 0..n {
            for s in 0..n {
                candidate[pi[r] * n + pi[s]] = pi[table[r * n + s]];
            }
        }
        if best.as_ref().is_none_or(|b| candidate < *b) {
            best = Some(candidate.clone());
        }
    }
    best.unwrap_or_default()
}

fn is_self_distributive(t: &[usize], n: usize) -> bool {
    (0..n).all(|r| {
        (0..n).all(|s| {
            let rs = t[r * n + s];
            (0..n).all(|u| t[r * n + t[s * n + u]] == t[rs * n + t[r * n + u]])
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(n: usize, up_to_iso: bool, quandles_only: bool) -> usize {
        enumerate_racks(n, EnumerationFilter { up_to_iso, quandles_only }).unwrap().len()
    }

    #[test]
    fn orders_one_and_two() {
        assert_eq!(count(1, false, false), 1);
        assert_eq!(count(2, false, false), 2);
        assert_eq!(count(2, true, false), 2);
        let two = enumerate_racks(2, EnumerationFilter::default()).unwrap();
        assert!(two.contains(&FiniteRack::trivial(2).unwrap()));
        assert!(two.contains(&FiniteRack::cyclic(2).unwrap()));
    }

    #[test]
    fn order_three_by_full_table_scan() {
        // independent recount: all 3^9 tables, R1 and R2 checked directly
        let n = 3;
        let mut labelled = 0;
        let mut classes = std::collections::BTreeSet::new();
        let mut quandle_classes = std::collections::BTreeSet::new();
        let relabelings = lex_permutations(n);
        for code in 0..3usize.pow(9) {
            let t: Vec<usize> = (0..9).map(|i| code / 3usize.pow(i) % 3).collect();
            let rows: Vec<Vec<usize>> = t.chunks(3).map(<[usize]>::to_vec).collect();
            if FiniteRack::from_table(&rows).is_ok() {
                labelled += 1;
                let c = canonical_form(&t, n, &relabelings);
                if (0..n).all(|r| t[r * n + r] == r) {
                    quandle_classes.insert(c.clone());
                }
                classes.insert(c);
            }
        }
        assert_eq!(count(3, false, false), labelled);
        assert_eq!(count(3, true, false), classes.len());
        assert_eq!(count(3, true, true), quandle_classes.len());
    }

    #[test]
    fn iso_classes_of_small_orders() {
        // agrees with the published rack and quandle counts for orders 1..=4
        assert_eq!((1..=4).map(|n| count(n, true, false)).collect::<Vec<_>>(), vec![1, 2, 6, 19]);
        assert_eq!((1..=4).map(|n| count(n, true, true)).collect::<Vec<_>>(), vec![1, 1, 3, 7]);
    }

    #[test]
    fn rejects_large_orders() {
        assert!(matches!(
            enumerate_racks(5, EnumerationFilter::default()),
            Err(Error::SizeLimitExceeded { .. })
        ));
    }

    #[test]
    fn canonical_table_is_isomorphism_invariant() {
        let d4 = FiniteRack::dihedral(4).unwrap();
        let mut moved = 0;
        for pi in lex_permutations(4) {
            let rows: Vec<Vec<usize>> = d4.relabeled(&pi).chunks(4).map(<[usize]>::to_vec).collect();
            let other = FiniteRack::from_table(&rows).unwrap();
            moved += usize::from(other != d4);
            assert_eq!(canonical_table(&other), canonical_table(&d4));
        }
        assert!(moved > 0);
    }
}
