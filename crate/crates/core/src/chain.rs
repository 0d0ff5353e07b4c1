//! Chains, formal sums and the chain-level predicates of the magnitude complex.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::error::Error;
use crate::metric::Metric;
use crate::rational::Rational;

/// A sequence `<x_0, ..., x_n>` of points; an `n`-chain has `n + 1` entries.
///
/// Chains order lexicographically by their point sequence, which is the
/// canonical basis order used throughout.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Chain<P> {
    points: Vec<P>,
}

impl<P: fmt::Debug> fmt::Debug for Chain<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p:?}")?;
        }
        f.write_str(">")
    }
}

impl<P: Clone + PartialEq> Chain<P> {
    /// Panics on an empty sequence.
    pub fn new(points: Vec<P>) -> Self {
        assert!(!points.is_empty(), "a chain has at least one point");
        Self { points }
    }

    pub fn points(&self) -> &[P] {
        &self.points
    }

    pub fn into_points(self) -> Vec<P> {
        self.points
    }

    /// `n` for an `n`-chain.
    pub fn degree(&self) -> usize {
        self.points.len() - 1
    }

    pub fn first(&self) -> &P {
        &self.points[0]
    }

    pub fn last(&self) -> &P {
        &self.points[self.points.len() - 1]
    }

    pub fn is_proper(&self) -> bool {
        self.points.windows(2).all(|w| w[0] != w[1])
    }

    /// The chain with entry `i` removed.
    pub fn face(&self, i: usize) -> Self {
        let mut points = self.points.clone();
        points.remove(i);
        Self { points }
    }

    pub fn map<Q, F: FnMut(&P) -> Q>(&self, f: F) -> Chain<Q> {
        Chain { points: self.points.iter().map(f).collect() }
    }
}

/// `x < y < z`: `x != y != z` and `d(x, y) + d(y, z) = d(x, z)` exactly.
pub fn between<M: Metric>(m: &M, x: &M::Point, y: &M::Point, z: &M::Point) -> bool {
    x != y && y != z && m.distance(x, y) + m.distance(y, z) == m.distance(x, z)
}

/// Sum of consecutive distances; zero for a 0-chain.
pub fn chain_length<M: Metric>(m: &M, c: &Chain<M::Point>) -> Rational {
    c.points
        .windows(2)
        .fold(Rational::zero(), |acc, w| acc + m.distance(&w[0], &w[1]))
}

/// Whether interior entry `i` is strictly between its neighbours.
pub fn is_smooth_at<M: Metric>(m: &M, c: &Chain<M::Point>, i: usize) -> bool {
    let p = &c.points;
    i > 0 && i + 1 < p.len() && between(m, &p[i - 1], &p[i], &p[i + 1])
}

fn require_proper<P: Clone + PartialEq + fmt::Debug>(c: &Chain<P>) -> Result<(), Error> {
    if c.is_proper() {
        Ok(())
    } else {
        Err(Error::ImproperChain(alloc::format!("{c:?}")))
    }
}

/// Number of smooth interior points of a proper chain.
pub fn smoothness_count<M: Metric>(m: &M, c: &Chain<M::Point>) -> Result<usize, Error> {
    require_proper(c)?;
    Ok(smoothness_unchecked(m, c))
}

pub(crate) fn smoothness_unchecked<M: Metric>(m: &M, c: &Chain<M::Point>) -> usize {
    (1..c.points.len().saturating_sub(1)).filter(|&i| is_smooth_at(m, c, i)).count()
}

/// A proper 3-chain whose two interior points are smooth while the total
/// length exceeds the endpoint distance.
pub fn is_four_cut<M: Metric>(m: &M, c: &Chain<M::Point>) -> Result<bool, Error> {
    if c.points.len() != 4 {
        return Err(Error::Arity { expected: 4, got: c.points.len() });
    }
    require_proper(c)?;
    let p = &c.points;
    Ok(between(m, &p[0], &p[1], &p[2])
        && between(m, &p[1], &p[2], &p[3])
        && chain_length(m, c) > m.distance(&p[0], &p[3]))
}

/// The chain with every smooth point deleted. May be improper.
pub fn frame<M: Metric>(m: &M, c: &Chain<M::Point>) -> Chain<M::Point> {
    let points = c
        .points
        .iter()
        .enumerate()
        .filter(|&(i, _)| !is_smooth_at(m, c, i))
        .map(|(_, p)| p.clone())
        .collect();
    Chain { points }
}

/// Integer combination of chains; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct FormalSum<P: Ord> {
    terms: BTreeMap<Chain<P>, i64>,
}

impl<P: Ord + fmt::Debug> fmt::Debug for FormalSum<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (c, k)) in self.terms.iter().enumerate() {
            let sign = if *k < 0 { "-" } else if i > 0 { "+" } else { "" };
            if i > 0 {
                f.write_str(" ")?;
            }
            match k.unsigned_abs() {
                1 => write!(f, "{sign}{c:?}")?,
                a => write!(f, "{sign}{a}{c:?}")?,
            }
        }
        Ok(())
    }
}

impl<P: Ord> Default for FormalSum<P> {
    fn default() -> Self {
        Self { terms: BTreeMap::new() }
    }
}

impl<P: Ord + Clone> FormalSum<P> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(c: Chain<P>, k: i64) -> Self {
        let mut s = Self::zero();
        s.add_term(c, k);
        s
    }

    pub fn add_term(&mut self, c: Chain<P>, k: i64) {
        if k == 0 {
            return;
        }
        let entry = self.terms.entry(c);
        match entry {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(k);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += k;
                if *o.get() == 0 {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (c, k) in &other.terms {
            self.add_term(c.clone(), *k);
        }
    }

    pub fn scaled(&self, k: i64) -> Self {
        let mut s = Self::zero();
        for (c, v) in &self.terms {
            s.add_term(c.clone(), v * k);
        }
        s
    }

    pub fn negated(&self) -> Self {
        self.scaled(-1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, c: &Chain<P>) -> i64 {
        self.terms.get(c).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Chain<P>, i64)> {
        self.terms.iter().map(|(c, k)| (c, *k))
    }
}

impl<P: Ord + Clone> FromIterator<(Chain<P>, i64)> for FormalSum<P> {
    fn from_iter<I: IntoIterator<Item = (Chain<P>, i64)>>(iter: I) -> Self {
        let mut s = Self::zero();
        for (c, k) in iter {
            s.add_term(c, k);
        }
        s
    }
}

/// `sum_i (-1)^i d_i(c)` over interior smooth positions.
pub fn boundary_chain<M: Metric>(m: &M, c: &Chain<M::Point>) -> FormalSum<M::Point> {
    let mut out = FormalSum::zero();
    for i in 1..c.points.len().saturating_sub(1) {
        if is_smooth_at(m, c, i) {
            out.add_term(c.face(i), if i % 2 == 0 { 1 } else { -1 });
        }
    }
    out
}

/// Linear extension of [`boundary_chain`].
pub fn boundary<M: Metric>(m: &M, s: &FormalSum<M::Point>) -> FormalSum<M::Point> {
    let mut out = FormalSum::zero();
    for (c, k) in s.terms() {
        out.add_assign(&boundary_chain(m, c).scaled(k));
    }
    out
}
