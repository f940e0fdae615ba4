//! Finite racks stored as operation tables.
//!
//! `op(r, s)` is `r > s`; row `r` of the table is the inner automorphism `phi_r`.
//! The inverse operation `r >^-1 s` is always derived by inverting rows.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::error::{check_table, Error, Result};
use crate::group::FiniteGroup;
use crate::perm::{is_bijection, Permutation};
use crate::verdict::{Verdict, Witness, WitnessKind};

/// Default cap on the number of inner-group elements produced by closure.
pub const INNER_GROUP_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteRack {
    n: usize,
    op: Vec<usize>,
    inv_op: Vec<usize>,
    quandle: bool,
}

impl FiniteRack {
    /// Validates R1 (bijective rows) and R2 (left self-distributivity).
    pub fn from_table(rows: &[Vec<usize>]) -> Result<Self> {
        let rack = Self::from_permutation_rows(rows)?;
        if let Some(w) = rack.self_distributivity_witness() {
            let (r, s, t) = (w.elements[0], w.elements[1], w.elements[2]);
            return Err(Error::SelfDistributivityViolation { r, s, t, lhs: w.lhs[0], rhs: w.rhs[0] });
        }
        Ok(rack)
    }

    /// Builds the structure from a table whose rows are permutations without
    /// checking self-distributivity. The result may be a non-rack; it exists so
    /// checkers can be exercised on near-racks.
    pub fn from_permutation_rows(rows: &[Vec<usize>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyTable);
        }
        check_table(rows, n, n)?;
        if let Some(row) = rows.iter().position(|r| !is_bijection(r)) {
            return Err(Error::RowNotBijective { row });
        }
        let op: Vec<usize> = rows.iter().flatten().copied().collect();
        let mut inv_op = vec![0; n * n];
        for r in 0..n {
            for s in 0..n {
                inv_op[r * n + op[r * n + s]] = s;
            }
        }
        let quandle = (0..n).all(|r| op[r * n + r] == r);
        Ok(FiniteRack { n, op, inv_op, quandle })
    }

    fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let rows: Vec<Vec<usize>> = (0..n).map(|r| (0..n).map(|s| f(r, s)).collect()).collect();
        Self::from_table(&rows)
    }

    /// `r > s = s`.
    pub fn trivial(n: usize) -> Result<Self> {
        positive(n)?;
        Self::from_fn(n, |_, s| s)
    }

    /// `r > s = s + 1 mod n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        positive(n)?;
        Self::from_fn(n, |_, s| (s + 1) % n)
    }

    /// `r > s = 2r - s mod n`.
    pub fn dihedral(n: usize) -> Result<Self> {
        positive(n)?;
        Self::from_fn(n, |r, s| (2 * r + n - s) % n)
    }

    /// `r > s = r s r^-1`.
    pub fn conjugation(g: &FiniteGroup) -> Result<Self> {
        Self::from_fn(g.order(), |r, s| g.mul(g.mul(r, s), g.inv(r)))
    }

    /// `r > s = r s^-1 r`.
    pub fn core(g: &FiniteGroup) -> Result<Self> {
        Self::from_fn(g.order(), |r, s| g.mul(g.mul(r, g.inv(s)), r))
    }

    /// `r > s = (1 - alpha) r + alpha s mod n`, for a unit `alpha` of `Z_n`.
    pub fn affine(n: usize, alpha: usize) -> Result<Self> {
        positive(n)?;
        let alpha = alpha % n;
        if gcd(alpha, n) != 1 {
            return Err(Error::AlphaNotUnit { alpha, n });
        }
        let one_minus = (1 + n - alpha) % n;
        Self::from_fn(n, |r, s| (one_minus * r + alpha * s) % n)
    }

    /// The conjugacy class of transpositions in `S_degree` under conjugation.
    ///
    /// Transpositions `(i j)`, `i < j`, are indexed in reverse lexicographic order
    /// of the pair. For degree 3 this gives `0 = (2 3)`, `1 = (1 3)`, `2 = (1 2)`
    /// in 1-based cycle notation.
    pub fn transpositions(degree: usize) -> Result<Self> {
        if degree < 2 {
            return Err(Error::Invalid("transposition rack needs degree >= 2".into()));
        }
        let perms = transposition_list(degree);
        let index_of = |p: &Permutation| perms.iter().position(|q| q == p).unwrap();
        Self::from_fn(perms.len(), |r, s| {
            let (a, b) = (&perms[r], &perms[s]);
            index_of(&a.compose(b).compose(&a.inverse()))
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn op(&self, r: usize, s: usize) -> usize {
        self.op[r * self.n + s]
    }

    pub fn inv_op(&self, r: usize, s: usize) -> usize {
        self.inv_op[r * self.n + s]
    }

    pub fn is_quandle(&self) -> bool {
        self.quandle
    }

    pub fn is_trivial(&self) -> bool {
        (0..self.n).all(|r| (0..self.n).all(|s| self.op(r, s) == s))
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.op.chunks(self.n).map(<[usize]>::to_vec).collect()
    }

    pub fn inverse_table(&self) -> Vec<Vec<usize>> {
        self.inv_op.chunks(self.n).map(<[usize]>::to_vec).collect()
    }

    pub(crate) fn raw_op(&self) -> &[usize] {
        &self.op
    }

    /// `phi_r`, the map `s -> r > s`.
    pub fn inner_automorphism(&self, r: usize) -> Result<Permutation> {
        self.check_element(r)?;
        Ok(Permutation::from_vec_unchecked(self.op[r * self.n..(r + 1) * self.n].to_vec()))
    }

    /// `phi_r^-1`, the map `s -> r >^-1 s`.
    pub fn inverse_automorphism(&self, r: usize) -> Result<Permutation> {
        self.check_element(r)?;
        Ok(Permutation::from_vec_unchecked(self.inv_op[r * self.n..(r + 1) * self.n].to_vec()))
    }

    pub(crate) fn check_element(&self, r: usize) -> Result<()> {
        if r >= self.n {
            return Err(Error::IndexOutOfRange { index: r as u128, bound: self.n as u128 });
        }
        Ok(())
    }

    pub(crate) fn check_subset(&self, subset: &[usize]) -> Result<()> {
        subset.iter().try_for_each(|&s| self.check_element(s))
    }

    /// The group generated by all inner automorphisms, by breadth-first closure.
    /// Returned sorted by one-line notation.
    pub fn inner_group(&self, limit: usize) -> Result<Vec<Permutation>> {
        let mut generators = Vec::with_capacity(2 * self.n);
        for r in 0..self.n {
            generators.push(self.inner_automorphism(r)?);
            generators.push(self.inverse_automorphism(r)?);
        }
        let identity = Permutation::identity(self.n);
        let mut seen: HashSet<Permutation> = HashSet::from([identity.clone()]);
        let mut queue = VecDeque::from([identity]);
        while let Some(p) = queue.pop_front() {
            for g in &generators {
                let next = g.compose(&p);
                if seen.insert(next.clone()) {
                    if seen.len() > limit {
                        return Err(Error::SizeLimitExceeded {
                            what: "inner group".into(),
                            requested: seen.len() as u128,
                            limit: limit as u128,
                        });
                    }
                    queue.push_back(next);
                }
            }
        }
        let mut out: Vec<Permutation> = seen.into_iter().collect();
        out.sort();
        Ok(out)
    }

    /// Closed under `>`.
    pub fn is_closed_subset(&self, subset: &[usize]) -> bool {
        self.closure_witness(subset).is_none()
    }

    /// Closed under `>` and every restricted row is a bijection of the subset.
    pub fn is_subrack(&self, subset: &[usize]) -> bool {
        if !self.is_closed_subset(subset) {
            return false;
        }
        let members: BTreeSet<usize> = subset.iter().copied().collect();
        members.iter().all(|&r| {
            let image: BTreeSet<usize> = members.iter().map(|&s| self.op(r, s)).collect();
            image == members
        })
    }

    /// Lowest pair `(r1, r2)` of the subset with `r1 > r2` outside it.
    pub fn closure_witness(&self, subset: &[usize]) -> Option<Witness> {
        let members: BTreeSet<usize> = subset.iter().copied().collect();
        for &r1 in &members {
            for &r2 in &members {
                let v = self.op(r1, r2);
                if !members.contains(&v) {
                    return Some(
                        Witness::new(WitnessKind::ShelfClosure)
                            .elements([r1, r2])
                            .sides([v], members.iter().copied().collect::<Vec<_>>()),
                    );
                }
            }
        }
        None
    }

    pub fn self_distributivity_witness(&self) -> Option<Witness> {
        let n = self.n;
        for r in 0..n {
            for s in 0..n {
                let rs = self.op(r, s);
                for t in 0..n {
                    let lhs = self.op(r, self.op(s, t));
                    let rhs = self.op(rs, self.op(r, t));
                    if lhs != rhs {
                        return Some(
                            Witness::new(WitnessKind::SelfDistributivity)
                                .elements([r, s, t])
                                .sides([lhs], [rhs]),
                        );
                    }
                }
            }
        }
        None
    }

    /// `phi_{r1>r2} = phi_r1 ∘ phi_r2 ∘ phi_r1^-1` for all pairs.
    pub fn inner_conjugation_check(&self) -> Verdict {
        let instance = format!("rack of order {}", self.n);
        let witness = (0..self.n)
            .flat_map(|r1| (0..self.n).map(move |r2| (r1, r2)))
            .find_map(|(r1, r2)| {
                let (lhs, rhs) = self.inner_conjugation_sides(r1, r2);
                (lhs != rhs).then(|| {
                    Witness::new(WitnessKind::InnerConjugation).elements([r1, r2]).sides(lhs, rhs)
                })
            });
        Verdict::from_witness("R2-inner-conj", instance, witness)
    }

    pub fn inner_conjugation_sides(&self, r1: usize, r2: usize) -> (Vec<usize>, Vec<usize>) {
        let lhs = self.inner_automorphism(self.op(r1, r2)).unwrap();
        let p1 = self.inner_automorphism(r1).unwrap();
        let p2 = self.inner_automorphism(r2).unwrap();
        let rhs = p1.compose(&p2).compose(&p1.inverse());
        (lhs.into(), rhs.into())
    }

    /// Scans every subset (order at most 20) for one that is closed but not a subrack.
    pub fn closed_implies_subrack_check(&self) -> Result<Verdict> {
        if self.n > 20 {
            return Err(Error::SizeLimitExceeded {
                what: "subset scan".into(),
                requested: 1u128 << self.n,
                limit: 1 << 20,
            });
        }
        let instance = format!("all {} subsets of a rack of order {}", 1u64 << self.n, self.n);
        for mask in 0u64..(1u64 << self.n) {
            let subset = mask_to_subset(mask, self.n);
            if self.is_closed_subset(&subset) && !self.is_subrack(&subset) {
                let w = Witness::new(WitnessKind::ClosedNotSubrack).elements(subset);
                return Ok(Verdict::fails("Rem2.8", instance, w));
            }
        }
        Ok(Verdict::holds("Rem2.8", instance))
    }

    /// The rack induced on a subrack, re-indexed in ascending element order.
    pub fn induced(&self, subset: &[usize]) -> Result<Subrack> {
        self.check_subset(subset)?;
        let elements: Vec<usize> = subset.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        if elements.is_empty() || !self.is_subrack(&elements) {
            return Err(Error::NotASubrack { subset: elements });
        }
        let pos = |e: usize| elements.binary_search(&e).unwrap();
        let rows: Vec<Vec<usize>> =
            elements.iter().map(|&r| elements.iter().map(|&s| pos(self.op(r, s))).collect()).collect();
        let rack = FiniteRack::from_table(&rows)?;
        Ok(Subrack { rack, elements })
    }

    /// The same rack with elements renamed by `relabel` (`old -> new`).
    pub fn relabeled(&self, relabel: &[usize]) -> Vec<usize> {
        let n = self.n;
        let mut out = vec![0; n * n];
        for r in 0..n {
            for s in 0..n {
                out[relabel[r] * n + relabel[s]] = relabel[self.op(r, s)];
            }
        }
        out
    }
}

/// A subrack together with its embedding into the ambient rack.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subrack {
    pub rack: FiniteRack,
    /// `elements[i]` is the ambient index of local element `i`; ascending.
    pub elements: Vec<usize>,
}

impl Subrack {
    pub fn local(&self, ambient: usize) -> Option<usize> {
        self.elements.binary_search(&ambient).ok()
    }
}

fn positive(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Invalid("rack order must be positive".into()));
    }
    Ok(())
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Ascending elements of the bitmask `mask` over `0..n`.
pub fn mask_to_subset(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}

pub fn subset_to_mask(subset: &[usize]) -> u64 {
    subset.iter().fold(0, |m, &e| m | 1 << e)
}

fn transposition_list(degree: usize) -> Vec<Permutation> {
    let mut pairs: Vec<(usize, usize)> =
        (0..degree).flat_map(|i| (i + 1..degree).map(move |j| (i, j))).collect();
    pairs.reverse();
    pairs
        .into_iter()
        .map(|(i, j)| {
            let mut map: Vec<usize> = (0..degree).collect();
            map.swap(i, j);
            Permutation::from_vec_unchecked(map)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupKind;

    #[test]
    fn trivial_and_cyclic_order_two() {
        let t = FiniteRack::from_table(&[vec![0, 1], vec![0, 1]]).unwrap();
        assert!(t.is_quandle());
        assert!(t.is_trivial());
        let c = FiniteRack::from_table(&[vec![1, 0], vec![1, 0]]).unwrap();
        assert!(!c.is_quandle());
        assert_eq!(c, FiniteRack::cyclic(2).unwrap());
    }

    #[test]
    fn z2_group_table_is_not_a_rack() {
        // 1>(0>0) = 1 but (1>0)>(1>0) = 0
        let err = FiniteRack::from_table(&[vec![0, 1], vec![1, 0]]).unwrap_err();
        assert_eq!(err, Error::SelfDistributivityViolation { r: 1, s: 0, t: 0, lhs: 1, rhs: 0 });
    }

    #[test]
    fn rejects_non_bijective_row() {
        let err = FiniteRack::from_table(&[vec![0, 0], vec![0, 1]]).unwrap_err();
        assert_eq!(err, Error::RowNotBijective { row: 0 });
    }

    #[test]
    fn dihedral_three_table() {
        let d3 = FiniteRack::dihedral(3).unwrap();
        assert_eq!(d3.table(), vec![vec![0, 2, 1], vec![2, 1, 0], vec![1, 0, 2]]);
        assert_eq!(d3.table(), d3.inverse_table());
    }

    #[test]
    fn core_of_z3_is_dihedral_three() {
        let z3 = FiniteGroup::builtin(GroupKind::Cyclic, 3).unwrap();
        assert_eq!(FiniteRack::core(&z3).unwrap(), FiniteRack::dihedral(3).unwrap());
    }

    #[test]
    fn affine_alpha_one_is_trivial() {
        assert!(FiniteRack::affine(5, 1).unwrap().is_trivial());
        assert_eq!(FiniteRack::affine(6, 2).unwrap_err(), Error::AlphaNotUnit { alpha: 2, n: 6 });
    }

    #[test]
    fn affine_inverse_formula() {
        for n in 2..=9usize {
            for alpha in (1..n).filter(|&a| gcd(a, n) == 1) {
                let rack = FiniteRack::affine(n, alpha).unwrap();
                let alpha_inv = (1..n).find(|&b| alpha * b % n == 1).unwrap();
                for r in 0..n {
                    for s in 0..n {
                        let expected = ((1 + n - alpha_inv) * r + alpha_inv * s) % n;
                        assert_eq!(rack.inv_op(r, s), expected);
                    }
                }
            }
        }
    }

    #[test]
    fn inner_automorphisms() {
        let t = FiniteRack::trivial(4).unwrap();
        assert!(t.inner_automorphism(2).unwrap().is_identity());
        let c3 = FiniteRack::cyclic(3).unwrap();
        for r in 0..3 {
            assert_eq!(c3.inner_automorphism(r).unwrap().as_slice(), &[1, 2, 0]);
        }
        let d3 = FiniteRack::dihedral(3).unwrap();
        assert_eq!(d3.inner_automorphism(0).unwrap().as_slice(), &[0, 2, 1]);
        assert!(d3.inner_automorphism(3).is_err());
    }

    #[test]
    fn inner_group_sizes() {
        assert_eq!(FiniteRack::trivial(5).unwrap().inner_group(INNER_GROUP_LIMIT).unwrap().len(), 1);
        assert_eq!(FiniteRack::cyclic(3).unwrap().inner_group(INNER_GROUP_LIMIT).unwrap().len(), 3);
        assert_eq!(FiniteRack::dihedral(3).unwrap().inner_group(INNER_GROUP_LIMIT).unwrap().len(), 6);
        assert!(matches!(
            FiniteRack::dihedral(3).unwrap().inner_group(4),
            Err(Error::SizeLimitExceeded { .. })
        ));
    }

    #[test]
    fn subsets_of_small_dihedrals() {
        let d3 = FiniteRack::dihedral(3).unwrap();
        assert!(d3.is_closed_subset(&[0]));
        assert!(d3.is_subrack(&[0]));
        assert!(!d3.is_closed_subset(&[0, 1]));
        let d4 = FiniteRack::dihedral(4).unwrap();
        assert!(d4.is_closed_subset(&[0, 2]));
        assert!(d4.is_subrack(&[0, 2]));
    }

    #[test]
    fn inner_conjugation_on_racks_and_near_racks() {
        assert!(FiniteRack::dihedral(8).unwrap().inner_conjugation_check().is_holds());
        let s3 = FiniteGroup::builtin(GroupKind::Symmetric, 3).unwrap();
        assert!(FiniteRack::conjugation(&s3).unwrap().inner_conjugation_check().is_holds());
        let near = FiniteRack::from_permutation_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        let v = near.inner_conjugation_check();
        assert!(v.is_fails());
        let w = v.witness.unwrap();
        let (lhs, rhs) = near.inner_conjugation_sides(w.elements[0], w.elements[1]);
        assert_eq!((lhs, rhs), (w.lhs, w.rhs));
    }

    #[test]
    fn transposition_indexing() {
        let t = FiniteRack::transpositions(3).unwrap();
        assert!(t.is_quandle());
        // (23) > (13) = (23)(13)(23) = (12)
        assert_eq!(t.op(0, 1), 2);
        assert_eq!(t.op(2, 0), 1);
        assert_eq!(FiniteRack::transpositions(4).unwrap().order(), 6);
    }

    #[test]
    fn induced_subrack() {
        let d4 = FiniteRack::dihedral(4).unwrap();
        let sub = d4.induced(&[2, 0]).unwrap();
        assert_eq!(sub.elements, vec![0, 2]);
        assert!(sub.rack.is_trivial());
        assert_eq!(d4.induced(&[0, 1]).unwrap_err(), Error::NotASubrack { subset: vec![0, 1] });
    }

    #[test]
    fn closed_subsets_are_subracks() {
        for n in 1..=5 {
            for rack in [FiniteRack::trivial(n), FiniteRack::cyclic(n), FiniteRack::dihedral(n)] {
                assert!(rack.unwrap().closed_implies_subrack_check().unwrap().is_holds());
            }
        }
    }
}
