//! Metric graphs as geodesic spaces: points on edges at exact rational
//! offsets, shortest-path distances, geodesic enumeration and the
//! geodesic-based invariants built on them.

mod gamma;
mod geodesic;
mod nu;

pub use gamma::{build_gamma_cycle, check_admissible, nonbranching_rank, nonbranching_rank_from, AdmissibleSet};
pub use geodesic::{
    check_non_branching, check_unique_between_geodesics, common_time, enumerate_geodesics, geodesic_through,
    h2_rank_geodesic, pi0_geodesics, BranchingWitness, GeodesicClasses, GeodesicPath, Segment, UniquenessWitness,
};
pub use nu::{classify_piece, decompose_f_regular, nu_f, nu_f_of_subdivision, Piece, RegularCase};

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::error::Error;
use crate::metric::{FiniteMetricSpace, Metric};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::unionfind::UnionFind;

/// An edge `u -- v` of positive length; offsets along it are measured from `u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub len: Rational,
}

/// A connected graph with positive rational edge lengths, viewed as the
/// continuum of its edges. Multi-edges and self-loops are allowed.
#[derive(Clone, Debug)]
pub struct MetricGraph {
    labels: Vec<String>,
    edges: Vec<Edge>,
    apsp: Vec<Vec<Rational>>,
}

/// A vertex, or a point strictly inside an edge at offset `t` from its `u` end.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GraphPoint {
    Vertex(usize),
    Edge { edge: usize, t: Rational },
}

impl fmt::Display for GraphPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphPoint::Vertex(v) => write!(f, "v{v}"),
            GraphPoint::Edge { edge, t } => write!(f, "e{edge}:{}", format_rational(t)),
        }
    }
}

impl MetricGraph {
    pub fn new(labels: Vec<String>, edges: Vec<(usize, usize, Rational)>) -> Result<Self, Error> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::Graph("a metric graph needs at least one vertex".into()));
        }
        let mut out = Vec::with_capacity(edges.len());
        let mut uf = UnionFind::new(n);
        for (k, (u, v, len)) in edges.into_iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::Graph(alloc::format!("edge {k} references a missing vertex")));
            }
            if len <= Rational::zero() {
                return Err(Error::Graph(alloc::format!("edge {k} has nonpositive length {}", format_rational(&len))));
            }
            uf.union(u, v);
            out.push(Edge { u, v, len });
        }
        if uf.components() != 1 {
            return Err(Error::Graph("graph is not connected".into()));
        }
        let apsp = all_pairs(n, &out);
        Ok(Self { labels, edges: out, apsp })
    }

    /// Vertices labelled `0..n`.
    pub fn unlabeled(n: usize, edges: Vec<(usize, usize, Rational)>) -> Result<Self, Error> {
        Self::new((0..n).map(|i| i.to_string()).collect(), edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, k: usize) -> &Edge {
        &self.edges[k]
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Shortest-path distance between vertices.
    pub fn vertex_distance(&self, u: usize, v: usize) -> &Rational {
        &self.apsp[u][v]
    }

    /// Canonical point at offset `t` on edge `k`; the ends become vertices.
    pub fn point(&self, k: usize, t: Rational) -> Result<GraphPoint, Error> {
        let e = self.edges.get(k).ok_or_else(|| Error::Graph(alloc::format!("no edge {k}")))?;
        if t < Rational::zero() || t > e.len {
            return Err(Error::Graph(alloc::format!("offset {} outside edge {k}", format_rational(&t))));
        }
        Ok(if t.is_zero() {
            GraphPoint::Vertex(e.u)
        } else if t == e.len {
            GraphPoint::Vertex(e.v)
        } else {
            GraphPoint::Edge { edge: k, t }
        })
    }

    pub fn vertex(&self, v: usize) -> Result<GraphPoint, Error> {
        if v < self.labels.len() {
            Ok(GraphPoint::Vertex(v))
        } else {
            Err(Error::Graph(alloc::format!("no vertex {v}")))
        }
    }

    /// Brings any point into canonical form, rejecting out-of-range data.
    pub fn canonical(&self, p: &GraphPoint) -> Result<GraphPoint, Error> {
        match p {
            GraphPoint::Vertex(v) => self.vertex(*v),
            GraphPoint::Edge { edge, t } => self.point(*edge, t.clone()),
        }
    }

    /// Parses a vertex label or `e<k>:<t>`.
    pub fn parse_point(&self, s: &str) -> Result<GraphPoint, Error> {
        if let Some(v) = self.vertex_by_label(s) {
            return Ok(GraphPoint::Vertex(v));
        }
        if let Some(rest) = s.strip_prefix('e') {
            if let Some((k, t)) = rest.split_once(':') {
                let k: usize = k.parse().map_err(|_| Error::Parse(alloc::format!("bad edge index in {s:?}")))?;
                return self.point(k, parse_rational(t)?);
            }
        }
        Err(Error::Parse(alloc::format!("unknown graph point {s:?}")))
    }

    pub fn describe(&self, p: &GraphPoint) -> String {
        match p {
            GraphPoint::Vertex(v) => self.labels[*v].clone(),
            GraphPoint::Edge { edge, t } => alloc::format!("e{edge}:{}", format_rational(t)),
        }
    }

    /// `(vertex, distance to it)` exits of a point.
    fn exits(&self, p: &GraphPoint) -> Vec<(usize, Rational)> {
        match p {
            GraphPoint::Vertex(v) => alloc::vec![(*v, Rational::zero())],
            GraphPoint::Edge { edge, t } => {
                let e = &self.edges[*edge];
                alloc::vec![(e.u, t.clone()), (e.v, &e.len - t)]
            }
        }
    }

    /// Every vertex of the graph as a point.
    pub fn vertex_points(&self) -> Vec<GraphPoint> {
        (0..self.labels.len()).map(GraphPoint::Vertex).collect()
    }

    /// The finite metric space on the given points.
    pub fn induced_space(&self, points: &[GraphPoint]) -> Result<FiniteMetricSpace, Error> {
        let labels = points.iter().map(|p| self.describe(p)).collect();
        let dist = points.iter().map(|p| points.iter().map(|q| graph_distance(self, p, q)).collect()).collect();
        FiniteMetricSpace::new(labels, dist)
    }
}

fn all_pairs(n: usize, edges: &[Edge]) -> Vec<Vec<Rational>> {
    let mut d: Vec<Vec<Option<Rational>>> = alloc::vec![alloc::vec![None; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = Some(Rational::zero());
    }
    for e in edges {
        if e.u == e.v {
            continue;
        }
        let better = d[e.u][e.v].as_ref().is_none_or(|x| e.len < *x);
        if better {
            d[e.u][e.v] = Some(e.len.clone());
            d[e.v][e.u] = Some(e.len.clone());
        }
    }
    for k in 0..n {
        for i in 0..n {
            let Some(ik) = d[i][k].clone() else { continue };
            for j in 0..n {
                if let Some(kj) = &d[k][j] {
                    let via = &ik + kj;
                    if d[i][j].as_ref().is_none_or(|x| via < *x) {
                        d[i][j] = Some(via);
                    }
                }
            }
        }
    }
    d.into_iter().map(|r| r.into_iter().map(|x| x.expect("graph is connected")).collect()).collect()
}

/// Exact shortest-path distance between two points of the continuum.
pub fn graph_distance(g: &MetricGraph, p: &GraphPoint, q: &GraphPoint) -> Rational {
    if p == q {
        return Rational::zero();
    }
    let mut best: Option<Rational> = None;
    if let (GraphPoint::Edge { edge: e1, t: t1 }, GraphPoint::Edge { edge: e2, t: t2 }) = (p, q) {
        if e1 == e2 {
            best = Some(if t1 > t2 { t1 - t2 } else { t2 - t1 });
        }
    }
    for (u, du) in g.exits(p) {
        for (v, dv) in g.exits(q) {
            let cand = &du + g.vertex_distance(u, v) + &dv;
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.expect("every point has an exit")
}

impl Metric for MetricGraph {
    type Point = GraphPoint;

    fn distance(&self, x: &GraphPoint, y: &GraphPoint) -> Rational {
        graph_distance(self, x, y)
    }
}

/// The vertex graph with `p` and `q` inserted as extra nodes, each edge
/// remembering which stretch of an original edge it covers.
#[derive(Clone, Debug)]
pub(crate) struct Augmented {
    pub nodes: Vec<GraphPoint>,
    /// `(a, b, len, original edge, offset at a, offset at b)`
    pub arcs: Vec<(usize, usize, Rational, usize, Rational, Rational)>,
}

impl Augmented {
    pub fn new(g: &MetricGraph, extra: &[&GraphPoint]) -> Self {
        let mut nodes: Vec<GraphPoint> = g.vertex_points();
        let mut cuts: Vec<Vec<(Rational, usize)>> = g
            .edges
            .iter()
            .map(|e| alloc::vec![(Rational::zero(), e.u), (e.len.clone(), e.v)])
            .collect();
        for p in extra {
            if let GraphPoint::Edge { edge, t } = p {
                if !nodes.contains(p) {
                    nodes.push((*p).clone());
                    cuts[*edge].push((t.clone(), nodes.len() - 1));
                }
            }
        }
        let mut arcs = Vec::new();
        for (k, c) in cuts.iter_mut().enumerate() {
            c.sort_by(|x, y| x.0.cmp(&y.0));
            for w in c.windows(2) {
                arcs.push((w[0].1, w[1].1, &w[1].0 - &w[0].0, k, w[0].0.clone(), w[1].0.clone()));
            }
        }
        Self { nodes, arcs }
    }

    pub fn index(&self, p: &GraphPoint) -> usize {
        self.nodes.iter().position(|x| x == p).expect("point was inserted")
    }

    /// Exact single-source shortest paths (quadratic Dijkstra).
    pub fn dijkstra(&self, s: usize) -> Vec<Rational> {
        let n = self.nodes.len();
        let mut dist: Vec<Option<Rational>> = alloc::vec![None; n];
        let mut done = alloc::vec![false; n];
        dist[s] = Some(Rational::zero());
        loop {
            let mut cur: Option<usize> = None;
            for i in 0..n {
                if done[i] {
                    continue;
                }
                if let Some(d) = &dist[i] {
                    if cur.is_none_or(|c| *d < *dist[c].as_ref().unwrap()) {
                        cur = Some(i);
                    }
                }
            }
            let Some(c) = cur else { break };
            done[c] = true;
            let dc = dist[c].clone().unwrap();
            for (a, b, len, ..) in &self.arcs {
                for (x, y) in [(*a, *b), (*b, *a)] {
                    if x == c && !done[y] {
                        let cand = &dc + len;
                        if dist[y].as_ref().is_none_or(|d| cand < *d) {
                            dist[y] = Some(cand);
                        }
                    }
                }
            }
        }
        dist.into_iter().map(|d| d.expect("graph is connected")).collect()
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::rational::int;

    /// The cube with edge length `r`, vertices labelled 1..8.
    pub fn cube(r: i64) -> MetricGraph {
        let pairs = [(1, 2), (1, 4), (2, 6), (4, 6), (4, 5), (6, 8), (5, 8), (1, 3), (2, 7), (5, 3), (8, 7), (3, 7)];
        let labels = (1..=8).map(|i| i.to_string()).collect();
        MetricGraph::new(labels, pairs.iter().map(|&(u, v)| (u - 1, v - 1, int(r))).collect()).unwrap()
    }

    /// Two parallel edges of length `l` between vertices 0 and 1.
    pub fn two_arc_circle(l: i64) -> MetricGraph {
        MetricGraph::unlabeled(2, alloc::vec![(0, 1, int(l)), (0, 1, int(l))]).unwrap()
    }

    pub fn star(arms: usize) -> MetricGraph {
        MetricGraph::unlabeled(arms + 1, (1..=arms).map(|i| (0, i, int(i as i64))).collect()).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn cube_antipodes() {
        let g = cube(2);
        assert_eq!(graph_distance(&g, &GraphPoint::Vertex(0), &GraphPoint::Vertex(7)), int(6));
        let p = GraphPoint::Vertex(3);
        assert_eq!(graph_distance(&g, &p, &p), int(0));
    }

    #[test]
    fn circle_antipodes_tie() {
        let g = two_arc_circle(5);
        assert_eq!(graph_distance(&g, &GraphPoint::Vertex(0), &GraphPoint::Vertex(1)), int(5));
        let x = g.point(0, int(2)).unwrap();
        let y = g.point(1, int(2)).unwrap();
        assert_eq!(graph_distance(&g, &x, &y), int(4));
        let z = g.point(0, int(4)).unwrap();
        assert_eq!(graph_distance(&g, &x, &z), int(2));
    }

    #[test]
    fn canonical_points() {
        let g = two_arc_circle(5);
        assert_eq!(g.point(1, int(0)).unwrap(), GraphPoint::Vertex(0));
        assert_eq!(g.point(1, int(5)).unwrap(), GraphPoint::Vertex(1));
        assert!(g.point(1, int(6)).is_err());
        assert_eq!(g.parse_point("e1:5/2").unwrap(), GraphPoint::Edge { edge: 1, t: ratio(5, 2) });
        assert_eq!(g.parse_point("1").unwrap(), GraphPoint::Vertex(1));
        assert!(g.parse_point("e1:2.5").is_err());
    }

    #[test]
    fn rejects_bad_graphs() {
        assert!(MetricGraph::unlabeled(3, alloc::vec![(0, 1, int(1))]).is_err());
        assert!(MetricGraph::unlabeled(2, alloc::vec![(0, 1, int(0))]).is_err());
        assert!(MetricGraph::unlabeled(2, alloc::vec![(0, 2, int(1))]).is_err());
    }

    #[test]
    fn formula_matches_augmented_dijkstra() {
        let g = MetricGraph::unlabeled(
            4,
            alloc::vec![(0, 1, int(3)), (1, 2, ratio(5, 2)), (2, 0, int(4)), (2, 3, int(1)), (3, 3, int(2)), (0, 1, int(1))],
        )
        .unwrap();
        let mut pts = g.vertex_points();
        for (k, e) in g.edges().iter().enumerate() {
            pts.push(g.point(k, &e.len / int(3)).unwrap());
            pts.push(g.point(k, &e.len * ratio(3, 4)).unwrap());
        }
        for p in &pts {
            for q in &pts {
                let aug = Augmented::new(&g, &[p, q]);
                let d = aug.dijkstra(aug.index(p));
                assert_eq!(d[aug.index(q)], graph_distance(&g, p, q), "{p} {q}");
            }
        }
    }
}
