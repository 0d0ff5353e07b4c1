use alloc::vec::Vec;

use num_traits::Zero;

use super::{graph_distance, Augmented, GraphPoint, MetricGraph};
use crate::chain::between;
use crate::error::Error;
use crate::rational::{int, Rational};
use crate::unionfind::UnionFind;

/// A stretch of one edge, run from offset `from` to offset `to`, entered at
/// arclength `t0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Segment {
    pub edge: usize,
    pub from: Rational,
    pub to: Rational,
    pub t0: Rational,
}

impl Segment {
    pub fn len(&self) -> Rational {
        abs(&self.to - &self.from)
    }

    pub fn t1(&self) -> Rational {
        &self.t0 + self.len()
    }

    fn direction(&self) -> Rational {
        if self.to > self.from {
            int(1)
        } else {
            int(-1)
        }
    }

    fn offset_at(&self, t: &Rational) -> Rational {
        &self.from + self.direction() * (t - &self.t0)
    }

    /// Sorted offset range covered.
    pub fn span(&self) -> (Rational, Rational) {
        if self.from <= self.to {
            (self.from.clone(), self.to.clone())
        } else {
            (self.to.clone(), self.from.clone())
        }
    }
}

pub(crate) fn abs(x: Rational) -> Rational {
    if x < Rational::zero() {
        -x
    } else {
        x
    }
}

/// An arclength-parameterized shortest path.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GeodesicPath {
    pub start: GraphPoint,
    pub end: GraphPoint,
    pub length: Rational,
    pub segments: Vec<Segment>,
}

impl GeodesicPath {
    /// `(point, parameter)` at the start, at every segment junction and at the end.
    pub fn breakpoints(&self, g: &MetricGraph) -> Vec<(GraphPoint, Rational)> {
        let mut out = alloc::vec![(self.start.clone(), Rational::zero())];
        for s in &self.segments {
            out.push((g.point(s.edge, s.to.clone()).expect("segment inside its edge"), s.t1()));
        }
        out
    }

    /// The point at parameter `t` in `[0, length]`.
    pub fn point_at(&self, g: &MetricGraph, t: &Rational) -> GraphPoint {
        assert!(*t >= Rational::zero() && *t <= self.length, "parameter outside the geodesic");
        if t.is_zero() {
            return self.start.clone();
        }
        for s in &self.segments {
            if *t <= s.t1() {
                return g.point(s.edge, s.offset_at(t)).expect("segment inside its edge");
            }
        }
        self.end.clone()
    }

    /// Vertices visited, in order, including endpoints when they are vertices.
    pub fn vertices(&self, g: &MetricGraph) -> Vec<usize> {
        self.breakpoints(g)
            .into_iter()
            .filter_map(|(p, _)| match p {
                GraphPoint::Vertex(v) => Some(v),
                GraphPoint::Edge { .. } => None,
            })
            .collect()
    }

    /// Isometry on every pair of breakpoints and no edge stretch used twice.
    pub fn verify(&self, g: &MetricGraph) -> bool {
        let bp = self.breakpoints(g);
        let isometric = bp.iter().all(|(p, s)| bp.iter().all(|(q, t)| abs(t - s) == graph_distance(g, p, q)));
        let total = self.segments.iter().fold(Rational::zero(), |acc, s| acc + s.len());
        let simple = self.segments.iter().enumerate().all(|(i, a)| {
            self.segments[i + 1..].iter().all(|b| {
                a.edge != b.edge || {
                    let (x0, x1) = a.span();
                    let (y0, y1) = b.span();
                    x1 <= y0 || y1 <= x0
                }
            })
        });
        isometric && simple && total == self.length && self.length == graph_distance(g, &self.start, &self.end)
    }

    fn shifted(&self, by: &Rational) -> Vec<Segment> {
        self.segments.iter().map(|s| Segment { t0: &s.t0 + by, ..s.clone() }).collect()
    }
}

fn push_merged(out: &mut Vec<Segment>, s: Segment) {
    if let Some(last) = out.last_mut() {
        if last.edge == s.edge && last.to == s.from && last.direction() == s.direction() {
            last.to = s.to;
            return;
        }
    }
    out.push(s);
}

/// All geodesics from `p` to `q`, ordered by their arc sequences.
pub fn enumerate_geodesics(g: &MetricGraph, p: &GraphPoint, q: &GraphPoint) -> Result<Vec<GeodesicPath>, Error> {
    let p = g.canonical(p)?;
    let q = g.canonical(q)?;
    if p == q {
        return Ok(alloc::vec![GeodesicPath { start: p, end: q, length: Rational::zero(), segments: Vec::new() }]);
    }
    let aug = Augmented::new(g, &[&p, &q]);
    let (s, t) = (aug.index(&p), aug.index(&q));
    let ds = aug.dijkstra(s);
    let dt = aug.dijkstra(t);
    let total = ds[t].clone();
    // tight arcs on some shortest s-t path, oriented away from s
    let mut out_arcs: Vec<Vec<(usize, usize, bool)>> = alloc::vec![Vec::new(); aug.nodes.len()];
    for (k, (a, b, len, ..)) in aug.arcs.iter().enumerate() {
        for (x, y, fwd) in [(*a, *b, true), (*b, *a, false)] {
            if &ds[x] + len == ds[y] && &ds[y] + &dt[y] == total {
                out_arcs[x].push((k, y, fwd));
            }
        }
    }
    let mut paths = Vec::new();
    let mut stack: Vec<(usize, bool)> = Vec::new();
    walk(&out_arcs, s, t, &mut stack, &mut paths);
    Ok(paths
        .into_iter()
        .map(|arcs| {
            let mut segments = Vec::new();
            let mut t0 = Rational::zero();
            for (k, fwd) in arcs {
                let (_, _, len, edge, oa, ob) = &aug.arcs[k];
                let (from, to) = if fwd { (oa.clone(), ob.clone()) } else { (ob.clone(), oa.clone()) };
                push_merged(&mut segments, Segment { edge: *edge, from, to, t0: t0.clone() });
                t0 += len;
            }
            GeodesicPath { start: p.clone(), end: q.clone(), length: total.clone(), segments }
        })
        .collect())
}

fn walk(
    out_arcs: &[Vec<(usize, usize, bool)>],
    at: usize,
    target: usize,
    stack: &mut Vec<(usize, bool)>,
    paths: &mut Vec<Vec<(usize, bool)>>,
) {
    if at == target {
        paths.push(stack.clone());
        return;
    }
    for &(k, y, fwd) in &out_arcs[at] {
        stack.push((k, fwd));
        walk(out_arcs, y, target, stack, paths);
        stack.pop();
    }
}

/// Least `t` in `(0, d)` with `f(t) = h(t)`, if any.
pub fn common_time(g: &MetricGraph, f: &GeodesicPath, h: &GeodesicPath) -> Option<Rational> {
    let d = f.length.clone().min(h.length.clone());
    let zero = Rational::zero();
    let inside = |t: &Rational| *t > zero && *t < d;
    let mut best: Option<Rational> = None;
    let mut offer = |t: Rational| {
        if best.as_ref().is_none_or(|b| t < *b) {
            best = Some(t);
        }
    };
    for (a, b) in [(f, h), (h, f)] {
        for (pt, t) in a.breakpoints(g) {
            if inside(&t) && b.point_at(g, &t) == pt {
                offer(t);
            }
        }
    }
    for sf in &f.segments {
        for sh in &h.segments {
            if sf.edge != sh.edge {
                continue;
            }
            let lo = sf.t0.clone().max(sh.t0.clone()).max(zero.clone());
            let hi = sf.t1().min(sh.t1()).min(d.clone());
            if lo > hi {
                continue;
            }
            if sf.direction() == sh.direction() {
                if sf.offset_at(&lo) == sh.offset_at(&lo) {
                    if lo < hi {
                        // the whole stretch coincides; its interior lies in (0, d)
                        offer(if inside(&lo) { lo } else { (&lo + &hi) / int(2) });
                    } else if inside(&lo) {
                        offer(lo);
                    }
                }
            } else {
                // from_f + s_f (t - t0_f) = from_h + s_h (t - t0_h), s_h = -s_f
                let sgn = sf.direction();
                let t = (&sh.from - &sf.from + &sgn * &sf.t0 + &sgn * &sh.t0) / (int(2) * &sgn);
                if t >= lo && t <= hi && inside(&t) {
                    offer(t);
                }
            }
        }
    }
    best
}

/// Geodesics from `p` to `q` partitioned into classes of the equivalence
/// generated by "equal point at equal parameter strictly inside".
#[derive(Clone, Debug)]
pub struct GeodesicClasses {
    pub geodesics: Vec<GeodesicPath>,
    pub classes: Vec<Vec<usize>>,
}

pub fn pi0_geodesics(g: &MetricGraph, p: &GraphPoint, q: &GraphPoint) -> Result<GeodesicClasses, Error> {
    let geodesics = enumerate_geodesics(g, p, q)?;
    Ok(classify(g, geodesics))
}

pub(crate) fn classify(g: &MetricGraph, geodesics: Vec<GeodesicPath>) -> GeodesicClasses {
    let n = geodesics.len();
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if common_time(g, &geodesics[i], &geodesics[j]).is_some() {
                uf.union(i, j);
            }
        }
    }
    GeodesicClasses { classes: uf.classes(), geodesics }
}

/// `|pi_0(Geod(a, b))| - 1`, the rank of `H^{d(a,b)}_2(a, b)`.
pub fn h2_rank_geodesic(g: &MetricGraph, a: &GraphPoint, b: &GraphPoint) -> Result<usize, Error> {
    Ok(pi0_geodesics(g, a, b)?.classes.len() - 1)
}

/// A geodesic from `x` to `z` through `y`, for `x < y < z`.
pub fn geodesic_through(g: &MetricGraph, x: &GraphPoint, y: &GraphPoint, z: &GraphPoint) -> Result<GeodesicPath, Error> {
    let (x, y, z) = (g.canonical(x)?, g.canonical(y)?, g.canonical(z)?);
    if !between(g, &x, &y, &z) {
        return Err(Error::NotBetween(alloc::format!("{} < {} < {} fails", g.describe(&x), g.describe(&y), g.describe(&z))));
    }
    let first = enumerate_geodesics(g, &x, &y)?.swap_remove(0);
    let second = enumerate_geodesics(g, &y, &z)?.swap_remove(0);
    let mut segments = first.segments.clone();
    for s in second.shifted(&first.length) {
        push_merged(&mut segments, s);
    }
    let path = GeodesicPath { start: x, end: z, length: &first.length + &second.length, segments };
    debug_assert!(path.verify(g));
    Ok(path)
}

/// Two distinct geodesics sharing an interior point at equal parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchingWitness {
    pub from: GraphPoint,
    pub to: GraphPoint,
    pub f: GeodesicPath,
    pub g: GeodesicPath,
    pub t: Rational,
}

/// First pair in `pairs` with two distinct geodesics meeting inside.
pub fn check_non_branching(g: &MetricGraph, pairs: &[(GraphPoint, GraphPoint)]) -> Result<Option<BranchingWitness>, Error> {
    for (p, q) in pairs {
        let geo = enumerate_geodesics(g, p, q)?;
        for i in 0..geo.len() {
            for j in i + 1..geo.len() {
                if let Some(t) = common_time(g, &geo[i], &geo[j]) {
                    return Ok(Some(BranchingWitness {
                        from: geo[i].start.clone(),
                        to: geo[i].end.clone(),
                        f: geo[i].clone(),
                        g: geo[j].clone(),
                        t,
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// A probe pair `a < x < y < b` with other than one geodesic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniquenessWitness {
    pub x: GraphPoint,
    pub y: GraphPoint,
    pub count: usize,
}

/// Checks uniqueness of geodesics between every probe pair `a < x < y < b`.
pub fn check_unique_between_geodesics(
    g: &MetricGraph,
    a: &GraphPoint,
    b: &GraphPoint,
    probes: &[GraphPoint],
) -> Result<Option<UniquenessWitness>, Error> {
    let (a, b) = (g.canonical(a)?, g.canonical(b)?);
    if a == b {
        return Err(Error::EqualEndpoints);
    }
    let dab = graph_distance(g, &a, &b);
    for x in probes {
        for y in probes {
            let ordered = x != y
                && graph_distance(g, &a, x) + graph_distance(g, x, y) + graph_distance(g, y, &b) == dab
                && *x != a
                && *y != b;
            if !ordered {
                continue;
            }
            let count = enumerate_geodesics(g, x, y)?.len();
            if count != 1 {
                return Ok(Some(UniquenessWitness { x: x.clone(), y: y.clone(), count }));
            }
        }
    }
    Ok(None)
}
