//! The magnitude chain complex of a finite metric space and its integral
//! homology, one endpoint pair and one length at a time.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::chain::{boundary_chain, chain_length, Chain};
use crate::error::Error;
use crate::matrix::IntegerMatrix;
use crate::metric::{FiniteMetricSpace, Metric, PointId};
use crate::rational::Rational;
use crate::snf::invariant_factors;

/// A finitely generated abelian group `Z^rank + Z/t_1 + ... + Z/t_k` with
/// `t_1 | t_2 | ... | t_k` and every `t_i > 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HomologyGroup {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        Self { rank, torsion: Vec::new() }
    }

    /// Normalizes an arbitrary list of cyclic orders (units dropped, zeros
    /// counted as free summands) into a divisibility chain.
    pub fn from_parts(rank: usize, orders: Vec<BigInt>) -> Self {
        let mut rank = rank;
        let mut finite = Vec::new();
        for o in orders {
            if o.is_zero() {
                rank += 1;
            } else if !o.is_one() {
                finite.push(if o < BigInt::zero() { -o } else { o });
            }
        }
        Self { rank, torsion: normalize_torsion(finite) }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut orders = self.torsion.clone();
        orders.extend(other.torsion.iter().cloned());
        Self::from_parts(self.rank + other.rank, orders)
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut parts: Vec<alloc::string::String> = Vec::new();
        if self.rank > 0 {
            parts.push(alloc::format!("Z^{}", self.rank));
        }
        for t in &self.torsion {
            parts.push(alloc::format!("Z/{t}"));
        }
        f.write_str(&parts.join(" + "))
    }
}

// Invariant factors of diag(orders): the canonical divisibility chain of the
// multiset of prime-power components.
fn normalize_torsion(orders: Vec<BigInt>) -> Vec<BigInt> {
    if orders.len() <= 1 {
        return orders;
    }
    let n = orders.len();
    let mut m = IntegerMatrix::zeros(n, n);
    for (i, o) in orders.into_iter().enumerate() {
        m.add(i, i, o);
    }
    invariant_factors(&m).into_iter().filter(|x| !x.is_one()).collect()
}

/// Canonically ordered proper `n`-chains of length exactly `length` from
/// `a` to `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainBasis {
    pub degree: usize,
    pub length: Rational,
    pub endpoints: (PointId, PointId),
    pub chains: Vec<Chain<PointId>>,
}

impl ChainBasis {
    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    pub fn index(&self) -> BTreeMap<&Chain<PointId>, usize> {
        self.chains.iter().enumerate().map(|(i, c)| (c, i)).collect()
    }
}

/// Every length achieved by a proper `n`-chain from `a` to `b`.
///
/// Exhaustive: the number of chains grows like `(|X| - 1)^(n - 1)`.
pub fn length_spectrum(m: &FiniteMetricSpace, n: usize, a: PointId, b: PointId) -> Vec<Rational> {
    let mut out = BTreeSet::new();
    if n == 0 {
        if a == b {
            out.insert(Rational::zero());
        }
        return out.into_iter().collect();
    }
    let mut stack: Vec<(PointId, usize, Rational)> = alloc::vec![(a, 0, Rational::zero())];
    while let Some((cur, depth, acc)) = stack.pop() {
        if depth + 1 == n {
            if cur != b {
                out.insert(&acc + m.d(cur, b));
            }
            continue;
        }
        for next in m.points() {
            if next != cur {
                stack.push((next, depth + 1, &acc + m.d(cur, next)));
            }
        }
    }
    out.into_iter().collect()
}

/// Proper `n`-chains of length `length` from `a` to `b`, in lexicographic order.
///
/// Depth-first from `a`; a prefix is dropped as soon as its length plus the
/// remaining distance to `b` exceeds `length`.
pub fn enumerate_chains(
    m: &FiniteMetricSpace,
    n: usize,
    length: &Rational,
    a: PointId,
    b: PointId,
) -> ChainBasis {
    let mut chains = Vec::new();
    let mut prefix = alloc::vec![a];
    extend(m, n, length, b, &mut prefix, &Rational::zero(), &mut chains);
    ChainBasis { degree: n, length: length.clone(), endpoints: (a, b), chains }
}

fn extend(
    m: &FiniteMetricSpace,
    n: usize,
    length: &Rational,
    b: PointId,
    prefix: &mut Vec<PointId>,
    acc: &Rational,
    out: &mut Vec<Chain<PointId>>,
) {
    let cur = *prefix.last().expect("prefix starts with a");
    if prefix.len() == n + 1 {
        if cur == b && acc == length {
            out.push(Chain::new(prefix.clone()));
        }
        return;
    }
    if acc + m.d(cur, b) > *length {
        return;
    }
    let last_step = prefix.len() == n;
    for next in m.points() {
        if next == cur || (last_step && next != b) {
            continue;
        }
        let acc2 = acc + m.d(cur, next);
        if acc2.clone() + m.d(next, b) > *length {
            continue;
        }
        prefix.push(next);
        extend(m, n, length, b, prefix, &acc2, out);
        prefix.pop();
    }
}

/// Every proper `n`-chain of the given length, over all endpoint pairs.
pub fn enumerate_all_chains(m: &FiniteMetricSpace, n: usize, length: &Rational) -> Vec<Chain<PointId>> {
    let mut all = Vec::new();
    for a in m.points() {
        for b in m.points() {
            all.extend(enumerate_chains(m, n, length, a, b).chains);
        }
    }
    all.sort();
    all
}

/// Matrix of the boundary from `cols` (degree n) into `rows` (degree n-1).
pub fn boundary_matrix_of<M: Metric>(
    m: &M,
    cols: &[Chain<M::Point>],
    rows: &[Chain<M::Point>],
) -> Result<IntegerMatrix, Error> {
    let index: BTreeMap<&Chain<M::Point>, usize> = rows.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut out = IntegerMatrix::zeros(rows.len(), cols.len());
    for (j, c) in cols.iter().enumerate() {
        for (face, k) in boundary_chain(m, c).terms() {
            let i = index
                .get(face)
                .ok_or_else(|| Error::InconsistentBases(alloc::format!("{face:?}")))?;
            out.add(*i, j, BigInt::from(k));
        }
    }
    Ok(out)
}

/// Boundary matrix between two bases of the same `(length, a, b)`.
pub fn boundary_matrix(
    m: &FiniteMetricSpace,
    basis_n: &ChainBasis,
    basis_n_minus_1: &ChainBasis,
) -> Result<IntegerMatrix, Error> {
    if basis_n.length != basis_n_minus_1.length
        || basis_n.endpoints != basis_n_minus_1.endpoints
        || basis_n.degree != basis_n_minus_1.degree + 1
    {
        return Err(Error::InconsistentBases(alloc::format!(
            "degree {} -> {} with mismatched length or endpoints",
            basis_n.degree,
            basis_n_minus_1.degree
        )));
    }
    boundary_matrix_of(m, &basis_n.chains, &basis_n_minus_1.chains)
}

/// Homology at the middle of `c_{n+1} -> c_n -> c_{n-1}` given the two
/// boundary matrices and `dim c_n`.
pub fn homology_from_boundaries(dim: usize, d_n: &IntegerMatrix, d_n_plus_1: &IntegerMatrix) -> HomologyGroup {
    let rank_out = invariant_factors(d_n).len();
    let inv_in = invariant_factors(d_n_plus_1);
    let rank = dim - rank_out - inv_in.len();
    HomologyGroup::from_parts(rank, inv_in)
}

/// Sizes involved in one homology computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyReport {
    pub group: HomologyGroup,
    pub dim_chains: usize,
    /// Rank of the image of the incoming boundary.
    pub dim_boundaries: usize,
}

/// `H^length_n(a, b)`.
pub fn homology(m: &FiniteMetricSpace, n: usize, length: &Rational, a: PointId, b: PointId) -> HomologyGroup {
    homology_report(m, n, length, a, b).group
}

pub fn homology_report(
    m: &FiniteMetricSpace,
    n: usize,
    length: &Rational,
    a: PointId,
    b: PointId,
) -> HomologyReport {
    let mid = enumerate_chains(m, n, length, a, b);
    if mid.is_empty() {
        return HomologyReport { group: HomologyGroup::zero(), dim_chains: 0, dim_boundaries: 0 };
    }
    let up = enumerate_chains(m, n + 1, length, a, b);
    let d_in = boundary_matrix(m, &up, &mid).expect("bases built from one enumeration");
    let d_out = if n == 0 {
        IntegerMatrix::zeros(0, mid.len())
    } else {
        let down = enumerate_chains(m, n - 1, length, a, b);
        boundary_matrix(m, &mid, &down).expect("bases built from one enumeration")
    };
    let rank_out = invariant_factors(&d_out).len();
    let inv_in = invariant_factors(&d_in);
    let dim_boundaries = inv_in.len();
    let group = HomologyGroup::from_parts(mid.len() - rank_out - dim_boundaries, inv_in);
    HomologyReport { group, dim_chains: mid.len(), dim_boundaries }
}

/// `H^length_n(X)` as the direct sum of the per-pair summands.
pub fn homology_total(m: &FiniteMetricSpace, n: usize, length: &Rational) -> HomologyGroup {
    let mut total = HomologyGroup::zero();
    for a in m.points() {
        for b in m.points() {
            total = total.direct_sum(&homology(m, n, length, a, b));
        }
    }
    total
}

/// `H^length_n(X)` from one boundary matrix over all endpoint pairs at once,
/// without using the direct sum decomposition.
pub fn homology_undecomposed(m: &FiniteMetricSpace, n: usize, length: &Rational) -> HomologyGroup {
    let mid = enumerate_all_chains(m, n, length);
    let up = enumerate_all_chains(m, n + 1, length);
    let d_in = boundary_matrix_of(m, &up, &mid).expect("complete bases");
    let d_out = if n == 0 {
        IntegerMatrix::zeros(0, mid.len())
    } else {
        let down = enumerate_all_chains(m, n - 1, length);
        boundary_matrix_of(m, &mid, &down).expect("complete bases")
    };
    homology_from_boundaries(mid.len(), &d_out, &d_in)
}

/// Sanity check used by tests and reports: every chain in a basis really is
/// proper, of the right length and endpoints.
pub fn basis_is_consistent(m: &FiniteMetricSpace, basis: &ChainBasis) -> bool {
    basis.chains.windows(2).all(|w| w[0] < w[1])
        && basis.chains.iter().all(|c| {
            c.is_proper()
                && c.degree() == basis.degree
                && *c.first() == basis.endpoints.0
                && *c.last() == basis.endpoints.1
                && chain_length(m, c) == basis.length
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use alloc::vec;

    fn space(rows: &[&[i64]]) -> FiniteMetricSpace {
        FiniteMetricSpace::unlabeled(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()).unwrap()
    }

    fn path(n: usize) -> FiniteMetricSpace {
        let d: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i as i64 - j as i64).abs()).collect()).collect();
        let rows: Vec<&[i64]> = d.iter().map(|r| r.as_slice()).collect();
        space(&rows)
    }

    const P: fn(usize) -> PointId = PointId;

    #[test]
    fn spectrum_trivial_degrees() {
        let x = path(3);
        assert_eq!(length_spectrum(&x, 1, P(0), P(2)), vec![int(2)]);
        assert_eq!(length_spectrum(&x, 0, P(1), P(1)), vec![int(0)]);
        assert!(length_spectrum(&x, 0, P(0), P(1)).is_empty());
    }

    #[test]
    fn spectrum_degree_two_by_brute_force() {
        let x = space(&[&[0, 1, 2, 2], &[1, 0, 1, 2], &[2, 1, 0, 1], &[2, 2, 1, 0]]);
        let (a, b) = (P(0), P(3));
        let mut expected: Vec<Rational> = x
            .points()
            .filter(|&y| y != a && y != b)
            .map(|y| x.d(a, y) + x.d(y, b))
            .collect();
        expected.sort();
        expected.dedup();
        assert_eq!(length_spectrum(&x, 2, a, b), expected);
    }

    #[test]
    fn short_lengths_have_no_chains() {
        let x = path(4);
        for n in 0..4 {
            assert!(enumerate_chains(&x, n, &int(2), P(0), P(3)).is_empty());
        }
    }

    #[test]
    fn single_edge_chain() {
        let x = path(3);
        let b = enumerate_chains(&x, 1, &int(2), P(0), P(2));
        assert_eq!(b.chains, vec![Chain::new(vec![P(0), P(2)])]);
        assert!(basis_is_consistent(&x, &b));
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let x = space(&[&[0, 1, 2, 2], &[1, 0, 1, 2], &[2, 1, 0, 1], &[2, 2, 1, 0]]);
        for len in 0..7 {
            let len = int(len);
            let got = enumerate_chains(&x, 3, &len, P(0), P(2));
            assert!(basis_is_consistent(&x, &got));
            let mut brute = Vec::new();
            for i in 0..4 {
                for j in 0..4 {
                    let c = Chain::new(vec![P(0), P(i), P(j), P(2)]);
                    if c.is_proper() && chain_length(&x, &c) == len {
                        brute.push(c);
                    }
                }
            }
            assert_eq!(got.chains, brute);
        }
    }

    #[test]
    fn degree_one_boundary_is_zero() {
        let x = path(3);
        let one = enumerate_chains(&x, 1, &int(2), P(0), P(2));
        let zero = enumerate_chains(&x, 0, &int(2), P(0), P(2));
        let m = boundary_matrix(&x, &one, &zero).unwrap();
        assert!(m.is_zero());
    }

    #[test]
    fn mismatched_bases_are_rejected() {
        let x = path(3);
        let two = enumerate_chains(&x, 2, &int(2), P(0), P(2));
        let other = enumerate_chains(&x, 1, &int(1), P(0), P(1));
        assert!(boundary_matrix(&x, &two, &other).is_err());
        let empty = ChainBasis { degree: 1, length: int(2), endpoints: (P(0), P(2)), chains: vec![] };
        assert!(matches!(boundary_matrix(&x, &two, &empty), Err(Error::InconsistentBases(_))));
    }

    #[test]
    fn low_degree_closed_forms() {
        let x = path(3);
        assert_eq!(homology(&x, 0, &int(0), P(1), P(1)), HomologyGroup::free(1));
        assert_eq!(homology(&x, 1, &int(1), P(0), P(1)), HomologyGroup::free(1));
        assert_eq!(homology(&x, 1, &int(2), P(0), P(2)), HomologyGroup::zero());
        assert_eq!(homology_total(&x, 0, &int(0)), HomologyGroup::free(3));
        assert_eq!(homology_total(&x, 3, &int(1)), HomologyGroup::zero());
    }

    #[test]
    fn torsion_normalization() {
        let g = HomologyGroup::from_parts(0, vec![BigInt::from(4), BigInt::from(6)]);
        assert_eq!(g.torsion, vec![BigInt::from(2), BigInt::from(12)]);
        let h = HomologyGroup::from_parts(1, vec![BigInt::from(2)]).direct_sum(&HomologyGroup::from_parts(0, vec![BigInt::from(3)]));
        assert_eq!(h, HomologyGroup::from_parts(1, vec![BigInt::from(6)]));
        assert_eq!(alloc::format!("{h}"), "Z^1 + Z/6");
    }
}
