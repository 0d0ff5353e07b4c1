//! The simplicial complexes `A(a, b)` and `B^l(a, b)` whose homology computes
//! the magnitude homology summands `H^l_n(a, b)` at `l = d(a, b)` and in
//! degree 2 at `l > d(a, b)`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::chain::{chain_length, frame, Chain};
use crate::error::Error;
use crate::homology::{boundary_matrix, enumerate_chains, homology_from_boundaries, HomologyGroup};
use crate::matrix::IntegerMatrix;
use crate::metric::{FiniteMetricSpace, PointId};
use crate::rational::Rational;
use crate::unionfind::UnionFind;

/// `A(a, b)`: vertices strictly between `a` and `b`; a simplex is a vertex
/// sequence realizing `d(a, b)`, stored in its betweenness order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexA {
    pub endpoints: (PointId, PointId),
    pub vertices: Vec<PointId>,
    /// `simplices[k]` holds the k-simplices, sorted.
    pub simplices: Vec<Vec<Vec<PointId>>>,
}

impl ComplexA {
    pub fn dimension(&self) -> Option<usize> {
        self.simplices.len().checked_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn simplices_of_dim(&self, k: usize) -> &[Vec<PointId>] {
        self.simplices.get(k).map_or(&[], |s| s.as_slice())
    }

    pub fn simplex_count(&self) -> usize {
        self.simplices.iter().map(Vec::len).sum()
    }

    /// Every face of every simplex is itself a simplex.
    pub fn is_downward_closed(&self) -> bool {
        (1..self.simplices.len()).all(|k| {
            let lower = &self.simplices[k - 1];
            self.simplices[k].iter().all(|s| {
                (0..s.len()).all(|i| {
                    let mut f = s.clone();
                    f.remove(i);
                    lower.binary_search(&f).is_ok()
                })
            })
        })
    }
}

/// Builds `A(a, b)` by extending geodesic vertex sequences from `a`.
pub fn build_a(m: &FiniteMetricSpace, a: PointId, b: PointId) -> Result<ComplexA, Error> {
    m.check_point(a)?;
    m.check_point(b)?;
    if a == b {
        return Err(Error::EqualEndpoints);
    }
    let target = m.d(a, b).clone();
    let vertices: Vec<PointId> = m
        .points()
        .filter(|&x| x != a && x != b && m.d(a, x) + m.d(x, b) == target)
        .collect();
    let mut simplices: Vec<Vec<Vec<PointId>>> = Vec::new();
    let mut prefix = Vec::new();
    grow(m, b, &target, &vertices, &mut prefix, a, &Rational::zero(), &mut simplices);
    for level in &mut simplices {
        level.sort();
    }
    Ok(ComplexA { endpoints: (a, b), vertices, simplices })
}

#[allow(clippy::too_many_arguments)]
fn grow(
    m: &FiniteMetricSpace,
    b: PointId,
    target: &Rational,
    vertices: &[PointId],
    prefix: &mut Vec<PointId>,
    last: PointId,
    acc: &Rational,
    out: &mut Vec<Vec<Vec<PointId>>>,
) {
    for &x in vertices {
        let acc2 = acc + m.d(last, x);
        if x == last || acc2.clone() + m.d(x, b) != *target {
            continue;
        }
        prefix.push(x);
        let k = prefix.len() - 1;
        if out.len() <= k {
            out.push(Vec::new());
        }
        out[k].push(prefix.clone());
        grow(m, b, target, vertices, prefix, x, &acc2, out);
        prefix.pop();
    }
}

/// Boundary of the augmented oriented chain complex from dimension `k` to
/// `k - 1`, with `[x_1 ... x_p] -> sum_{i=1}^p (-1)^i [.. x_i omitted ..]`.
/// At `k = 0` the target is the single empty simplex, so `[x] -> -[]`.
pub fn boundary_matrix_a(c: &ComplexA, k: usize) -> IntegerMatrix {
    let src = c.simplices_of_dim(k);
    if k == 0 {
        let mut out = IntegerMatrix::zeros(1, src.len());
        for j in 0..src.len() {
            out.add(0, j, BigInt::from(-1));
        }
        return out;
    }
    let dst = c.simplices_of_dim(k - 1);
    let mut out = IntegerMatrix::zeros(dst.len(), src.len());
    for (j, s) in src.iter().enumerate() {
        for i in 0..s.len() {
            let mut f = s.clone();
            f.remove(i);
            let row = dst.binary_search(&f).expect("A(a, b) is downward closed");
            // vertex i is x_{i+1} in one-based numbering
            out.add(row, j, BigInt::from(if i % 2 == 0 { -1 } else { 1 }));
        }
    }
    out
}

/// Reduced homology of `A(a, b)` in degree `k`.
pub fn reduced_homology_a(c: &ComplexA, k: usize) -> HomologyGroup {
    let dim = c.simplices_of_dim(k).len();
    if dim == 0 {
        return HomologyGroup::zero();
    }
    homology_from_boundaries(dim, &boundary_matrix_a(c, k), &boundary_matrix_a(c, k + 1))
}

/// Checks that `<a, x_1, ..., x_p, b> -> [x_1 ... x_p]` (with `<a, b> -> []`)
/// is a bijection of bases that intertwines the magnitude boundary with the
/// augmented simplicial boundary, for magnitude degrees `2..=max_n`.
pub fn check_phi_commutes(m: &FiniteMetricSpace, c: &ComplexA, max_n: usize) -> Result<(), Error> {
    let (a, b) = c.endpoints;
    let len = m.d(a, b).clone();
    for n in 2..=max_n {
        let top = enumerate_chains(m, n, &len, a, b);
        let bottom = enumerate_chains(m, n - 1, &len, a, b);
        let simp_top = c.simplices_of_dim(n - 2);
        let simp_bottom: Vec<Vec<PointId>> =
            if n == 2 { alloc::vec![Vec::new()] } else { c.simplices_of_dim(n - 3).to_vec() };
        let interior = |ch: &Chain<PointId>| ch.points()[1..ch.points().len() - 1].to_vec();
        let phi_top: Vec<Vec<PointId>> = top.chains.iter().map(interior).collect();
        let phi_bottom: Vec<Vec<PointId>> = bottom.chains.iter().map(interior).collect();
        let as_set = |v: &[Vec<PointId>]| {
            let mut s = v.to_vec();
            s.sort();
            s
        };
        if as_set(&phi_top) != simp_top || as_set(&phi_bottom) != simp_bottom {
            return Err(Error::ChainMismatch(alloc::format!("basis of degree {n} is not in bijection with simplices")));
        }
        let d_mag = boundary_matrix(m, &top, &bottom)?;
        let d_simp = boundary_matrix_a(c, n - 2);
        let col: BTreeMap<&Vec<PointId>, usize> = simp_top.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let row: BTreeMap<&Vec<PointId>, usize> = simp_bottom.iter().enumerate().map(|(i, s)| (s, i)).collect();
        for (j, s) in phi_top.iter().enumerate() {
            for (i, f) in phi_bottom.iter().enumerate() {
                if d_mag.get(i, j) != d_simp.get(row[f], col[s]) {
                    return Err(Error::ChainMismatch(alloc::format!(
                        "boundary of {:?} differs at {:?} in degree {n}",
                        top.chains[j],
                        bottom.chains[i]
                    )));
                }
            }
        }
    }
    Ok(())
}

/// `B^l(a, b)` for `l > d(a, b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexB {
    pub length: Rational,
    pub endpoints: (PointId, PointId),
    /// Points with `l = d(a, phi) + d(phi, b)`.
    pub detours: Vec<PointId>,
    /// Detours admitting a smooth point next to them at length `l`.
    pub filled: Vec<PointId>,
    pub vertices: Vec<PointId>,
    /// Oriented edges `(phi, psi)` with `<a, phi, psi, b>` a 4-cut of length `l`.
    pub edges: Vec<(PointId, PointId)>,
}

fn proper_len_frame(m: &FiniteMetricSpace, pts: [PointId; 4], length: &Rational, fr: &[PointId]) -> bool {
    let c = Chain::new(pts.to_vec());
    c.is_proper() && chain_length(m, &c) == *length && frame(m, &c).points() == fr
}

/// Whether some `x` makes `<a, x, phi, b>` or `<a, phi, x, b>` a 3-chain of
/// length `l` with frame `<a, phi, b>`.
pub fn has_filling(m: &FiniteMetricSpace, length: &Rational, a: PointId, b: PointId, phi: PointId) -> bool {
    let fr = [a, phi, b];
    m.points().any(|x| {
        proper_len_frame(m, [a, x, phi, b], length, &fr) || proper_len_frame(m, [a, phi, x, b], length, &fr)
    })
}

/// Whether `<a, phi, psi, b>` lies in `P^l_3(<a, b>)`.
pub fn is_cut_pair(m: &FiniteMetricSpace, length: &Rational, a: PointId, b: PointId, phi: PointId, psi: PointId) -> bool {
    proper_len_frame(m, [a, phi, psi, b], length, &[a, b])
}

/// Builds `B^l(a, b)`. Condition (iii) removes every filling-free detour that
/// is joined by a 4-cut, in either order, to a detour that has a filling.
pub fn build_b(m: &FiniteMetricSpace, length: &Rational, a: PointId, b: PointId) -> Result<ComplexB, Error> {
    m.check_point(a)?;
    m.check_point(b)?;
    if *length <= *m.d(a, b) {
        return Err(Error::LengthNotAboveDistance {
            length: crate::rational::format_rational(length),
            distance: crate::rational::format_rational(m.d(a, b)),
        });
    }
    let detours: Vec<PointId> = m.points().filter(|&p| m.d(a, p) + m.d(p, b) == *length).collect();
    let filled: Vec<PointId> = detours.iter().copied().filter(|&p| has_filling(m, length, a, b, p)).collect();
    let vertices: Vec<PointId> = detours
        .iter()
        .copied()
        .filter(|p| filled.binary_search(p).is_err())
        .filter(|&phi| {
            !filled
                .iter()
                .any(|&psi| is_cut_pair(m, length, a, b, phi, psi) || is_cut_pair(m, length, a, b, psi, phi))
        })
        .collect();
    let mut edges = Vec::new();
    for (i, &phi) in vertices.iter().enumerate() {
        for &psi in &vertices[i + 1..] {
            if is_cut_pair(m, length, a, b, phi, psi) {
                edges.push((phi, psi));
            } else if is_cut_pair(m, length, a, b, psi, phi) {
                edges.push((psi, phi));
            }
        }
    }
    Ok(ComplexB { length: length.clone(), endpoints: (a, b), detours, filled, vertices, edges })
}

/// `H_0(B^l(a, b))`: free of rank the number of connected components.
pub fn h0_b(c: &ComplexB) -> HomologyGroup {
    let index: BTreeMap<PointId, usize> = c.vertices.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut uf = UnionFind::new(c.vertices.len());
    for (p, q) in &c.edges {
        uf.union(index[p], index[q]);
    }
    HomologyGroup::free(uf.components())
}

/// `Z[detours]` modulo the filled detours and the differences of 4-cut
/// pairs: the rank is the number of 4-cut components of the detour set that
/// contain no filled detour. Unlike [`h0_b`], a detour linked to a filled one
/// through a chain of 4-cuts is killed however long the chain.
pub fn detour_quotient(c: &ComplexB, m: &FiniteMetricSpace) -> HomologyGroup {
    let (a, b) = c.endpoints;
    let n = c.detours.len();
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        for j in i + 1..n {
            let (p, q) = (c.detours[i], c.detours[j]);
            if is_cut_pair(m, &c.length, a, b, p, q) || is_cut_pair(m, &c.length, a, b, q, p) {
                uf.union(i, j);
            }
        }
    }
    let rank = uf
        .classes()
        .iter()
        .filter(|class| class.iter().all(|&i| c.filled.binary_search(&c.detours[i]).is_err()))
        .count();
    HomologyGroup::free(rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::homology;
    use crate::rational::int;
    use alloc::vec;

    fn space(rows: &[&[i64]]) -> FiniteMetricSpace {
        FiniteMetricSpace::unlabeled(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()).unwrap()
    }

    fn path(n: usize) -> FiniteMetricSpace {
        let d = (0..n).map(|i| (0..n).map(|j| int((i as i64 - j as i64).abs())).collect()).collect();
        FiniteMetricSpace::unlabeled(d).unwrap()
    }

    const P: fn(usize) -> PointId = PointId;

    #[test]
    fn adjacent_pair_gives_empty_complex() {
        let c = build_a(&path(3), P(0), P(1)).unwrap();
        assert!(c.is_empty());
        assert_eq!(reduced_homology_a(&c, 0), HomologyGroup::zero());
    }

    #[test]
    fn path_of_three_has_one_vertex() {
        let c = build_a(&path(3), P(0), P(2)).unwrap();
        assert_eq!(c.vertices, vec![P(1)]);
        assert_eq!(c.simplices, vec![vec![vec![P(1)]]]);
        assert_eq!(reduced_homology_a(&c, 0), HomologyGroup::zero());
    }

    #[test]
    fn totally_ordered_vertices_are_acyclic() {
        let x = path(6);
        let c = build_a(&x, P(0), P(5)).unwrap();
        assert_eq!(c.dimension(), Some(3));
        assert!(c.is_downward_closed());
        for k in 0..5 {
            assert!(reduced_homology_a(&c, k).is_zero());
        }
        check_phi_commutes(&x, &c, 5).unwrap();
    }

    #[test]
    fn square_gives_two_isolated_vertices() {
        // 4-cycle 0-1-2-3-0 with unit edges
        let x = space(&[&[0, 1, 2, 1], &[1, 0, 1, 2], &[2, 1, 0, 1], &[1, 2, 1, 0]]);
        let c = build_a(&x, P(0), P(2)).unwrap();
        assert_eq!(c.vertices, vec![P(1), P(3)]);
        assert_eq!(reduced_homology_a(&c, 0), HomologyGroup::free(1));
        assert_eq!(homology(&x, 2, &int(2), P(0), P(2)), HomologyGroup::free(1));
        check_phi_commutes(&x, &c, 4).unwrap();
    }

    #[test]
    fn equal_endpoints_rejected() {
        assert!(matches!(build_a(&path(2), P(0), P(0)), Err(Error::EqualEndpoints)));
    }

    #[test]
    fn b_rejects_short_lengths() {
        let x = path(3);
        assert!(build_b(&x, &int(2), P(0), P(2)).is_err());
        assert!(build_b(&x, &int(1), P(0), P(2)).is_err());
    }

    #[test]
    fn two_detours_without_relations() {
        // 0 and 3 adjacent; 1 and 2 are detours of total length 4 not between each other
        let x = space(&[&[0, 2, 2, 1], &[2, 0, 3, 2], &[2, 3, 0, 2], &[1, 2, 2, 0]]);
        let c = build_b(&x, &int(4), P(0), P(3)).unwrap();
        assert_eq!(c.vertices, vec![P(1), P(2)]);
        assert!(c.edges.is_empty());
        assert_eq!(h0_b(&c), HomologyGroup::free(2));
        assert_eq!(homology(&x, 2, &int(4), P(0), P(3)), HomologyGroup::free(2));
    }

    #[test]
    fn path_metric_has_empty_b() {
        let x = path(5);
        for len in 3..9 {
            let c = build_b(&x, &int(len), P(0), P(2)).unwrap();
            assert_eq!(h0_b(&c), homology(&x, 2, &int(len), P(0), P(2)));
        }
    }

    // detours 0 - 1 - 2 from 3 to 4 at length 5 linked by the 4-cuts
    // <3, 1, 0, 4> and <3, 1, 2, 4>, only 2 filled: condition (iii) removes 1
    // and leaves 0 isolated, yet <3, 0, 4> is homologous to the killed <3, 2, 4>
    fn chained_detours() -> FiniteMetricSpace {
        space(&[&[0, 1, 3, 3, 2], &[1, 0, 2, 2, 3], &[3, 2, 0, 4, 1], &[3, 2, 4, 0, 3], &[2, 3, 1, 3, 0]])
    }

    #[test]
    fn literal_b_keeps_a_vertex_chained_to_a_filled_detour() {
        let x = chained_detours();
        let c = build_b(&x, &int(5), P(3), P(4)).unwrap();
        assert_eq!(h0_b(&c), HomologyGroup::free(1));
        assert_eq!(homology(&x, 2, &int(5), P(3), P(4)), HomologyGroup::zero());
        assert_eq!(detour_quotient(&c, &x), HomologyGroup::zero());
    }

    #[test]
    fn empty_b_is_zero() {
        let x = path(2);
        let c = build_b(&x, &int(5), P(0), P(1)).unwrap();
        assert!(c.vertices.is_empty());
        assert!(h0_b(&c).is_zero());
    }
}
