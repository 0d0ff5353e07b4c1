use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use super::geodesic::{check_non_branching, enumerate_geodesics};
use super::{graph_distance, GraphPoint, MetricGraph};
use crate::chain::{between, boundary, Chain, FormalSum};
use crate::error::Error;
use crate::metric::Metric;
use crate::rational::{format_rational, Rational};

/// Points `x_i, x'_i` placed between consecutive entries of a frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleSet<P> {
    pub pairs: Vec<(P, P)>,
}

/// Whether `adm` is admissible for the proper frame `phi_0, ..., phi_q`.
pub fn check_admissible<M: Metric>(m: &M, frame: &[M::Point], adm: &AdmissibleSet<M::Point>) -> bool {
    let q = adm.pairs.len();
    if q == 0 || frame.len() != q + 1 || frame.windows(2).any(|w| w[0] == w[1]) {
        return false;
    }
    let inside = adm
        .pairs
        .iter()
        .enumerate()
        .all(|(i, (x, y))| between(m, &frame[i], x, &frame[i + 1]) && between(m, &frame[i], y, &frame[i + 1]));
    let separated = (1..q).all(|i| {
        let (x, x2) = &adm.pairs[i - 1];
        let (y, y2) = &adm.pairs[i];
        [x, x2].iter().all(|l| [y, y2].iter().all(|r| !between(m, l, &frame[i], r)))
    });
    inside && separated
}

/// `<phi_0, x_1 - x'_1, phi_1, ..., x_q - x'_q, phi_q>` expanded into `2^q`
/// signed chains; fails unless the result is a cycle.
pub fn build_gamma_cycle<M: Metric>(m: &M, frame: &[M::Point], adm: &AdmissibleSet<M::Point>) -> Result<FormalSum<M::Point>, Error>
where
    M::Point: fmt::Debug,
{
    if !check_admissible(m, frame, adm) {
        return Err(Error::Inadmissible(alloc::format!("{adm:?} for frame {frame:?}")));
    }
    let q = adm.pairs.len();
    let mut out = FormalSum::zero();
    for mask in 0u64..(1 << q) {
        let mut pts = alloc::vec![frame[0].clone()];
        for (i, (x, y)) in adm.pairs.iter().enumerate() {
            pts.push(if mask >> i & 1 == 0 { x.clone() } else { y.clone() });
            pts.push(frame[i + 1].clone());
        }
        out.add_term(Chain::new(pts), if mask.count_ones() % 2 == 0 { 1 } else { -1 });
    }
    if !boundary(m, &out).is_zero() {
        return Err(Error::Inadmissible(alloc::format!("boundary of the cycle on {frame:?} is nonzero")));
    }
    Ok(out)
}

/// Sum over anchor tuples `phi_0, ..., phi_q` with consecutive distances
/// positive and adding up to `length` of `prod (|Geod(phi_{i-1}, phi_i)| - 1)`.
///
/// This is the rank of `H^length_{2q}` only when the anchors contain every
/// point of every such tuple; otherwise it counts the part the anchors see.
pub fn nonbranching_rank(g: &MetricGraph, length: &Rational, q: usize, anchors: &[GraphPoint]) -> Result<usize, Error> {
    let mut total = 0;
    for start in anchors {
        total += rank_from(g, length, q, anchors, start)?;
    }
    Ok(total)
}

/// As [`nonbranching_rank`] with `phi_0 = start` fixed.
pub fn nonbranching_rank_from(
    g: &MetricGraph,
    length: &Rational,
    q: usize,
    anchors: &[GraphPoint],
    start: &GraphPoint,
) -> Result<usize, Error> {
    rank_from(g, length, q, anchors, start)
}

fn rank_from(g: &MetricGraph, length: &Rational, q: usize, anchors: &[GraphPoint], start: &GraphPoint) -> Result<usize, Error> {
    if q == 0 || *length <= Rational::zero() {
        return Err(Error::Graph(alloc::format!(
            "rank needs q >= 1 and a positive length, got q = {q}, length {}",
            format_rational(length)
        )));
    }
    let anchors: Vec<GraphPoint> = anchors.iter().map(|p| g.canonical(p)).collect::<Result<_, _>>()?;
    let start = g.canonical(start)?;
    let mut counts = alloc::collections::BTreeMap::new();
    let mut geodesics = |p: &GraphPoint, r: &GraphPoint| -> Result<usize, Error> {
        let key = (p.clone(), r.clone());
        if let Some(&n) = counts.get(&key) {
            return Ok(n);
        }
        if let Some(w) = check_non_branching(g, core::slice::from_ref(&key))? {
            return Err(Error::NonBranching { from: g.describe(&w.from), to: g.describe(&w.to) });
        }
        let n = enumerate_geodesics(g, p, r)?.len();
        counts.insert(key, n);
        Ok(n)
    };
    // depth-first over tuples, carrying the remaining length and the product so far
    let mut total = 0usize;
    let mut stack: Vec<(GraphPoint, usize, Rational, usize)> = alloc::vec![(start, 0, length.clone(), 1)];
    while let Some((at, depth, left, prod)) = stack.pop() {
        if depth == q {
            if left.is_zero() {
                total += prod;
            }
            continue;
        }
        for next in &anchors {
            let step = graph_distance(g, &at, next);
            if step.is_zero() || step > left {
                continue;
            }
            let n = geodesics(&at, next)?;
            if n > 1 {
                stack.push((next.clone(), depth + 1, &left - &step, prod * (n - 1)));
            }
        }
    }
    Ok(total)
}
