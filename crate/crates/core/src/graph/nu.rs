use alloc::vec::Vec;

use num_traits::Zero;

use super::geodesic::{abs, enumerate_geodesics, GeodesicPath};
use super::{graph_distance, GraphPoint, MetricGraph};
use crate::chain::{between, chain_length, FormalSum};
use crate::error::Error;
use crate::rational::Rational;

/// How the geodesic of a 3-chain `<a, x, y, b>` meets the reference `f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RegularCase {
    /// Meets `f` only at its end `y`.
    I,
    /// Meets `f` only at its start `x`.
    II,
    /// Lies on `f`.
    III,
    /// Misses `f`.
    IV,
}

impl RegularCase {
    pub fn nu(self) -> i64 {
        i64::from(self == RegularCase::I)
    }

    pub fn name(self) -> &'static str {
        match self {
            RegularCase::I => "i",
            RegularCase::II => "ii",
            RegularCase::III => "iii",
            RegularCase::IV => "iv",
        }
    }
}

/// One `f`-regular piece `<a, from, to, b>`, with the parameters of its ends
/// along the geodesic being subdivided.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub from: GraphPoint,
    pub to: GraphPoint,
    pub s0: Rational,
    pub s1: Rational,
    pub case: RegularCase,
}

fn on_image(g: &MetricGraph, f: &GeodesicPath, p: &GraphPoint) -> bool {
    match p {
        GraphPoint::Vertex(_) => f.breakpoints(g).iter().any(|(q, _)| q == p),
        GraphPoint::Edge { edge, t } => f.segments.iter().any(|s| {
            let (lo, hi) = s.span();
            s.edge == *edge && lo <= *t && *t <= hi
        }),
    }
}

/// `h^{-1}(Im f)` as disjoint closed parameter intervals in increasing order.
fn preimage(g: &MetricGraph, f: &GeodesicPath, h: &GeodesicPath) -> Vec<(Rational, Rational)> {
    let mut raw: Vec<(Rational, Rational)> = Vec::new();
    for (p, t) in h.breakpoints(g) {
        if on_image(g, f, &p) {
            raw.push((t.clone(), t));
        }
    }
    for sh in &h.segments {
        let (h0, h1) = sh.span();
        for sf in f.segments.iter().filter(|s| s.edge == sh.edge) {
            let (f0, f1) = sf.span();
            let lo = h0.clone().max(f0);
            let hi = h1.clone().min(f1);
            if lo <= hi {
                let a = &sh.t0 + abs(&lo - &sh.from);
                let b = &sh.t0 + abs(&hi - &sh.from);
                raw.push(if a <= b { (a, b) } else { (b, a) });
            }
        }
    }
    raw.sort();
    let mut out: Vec<(Rational, Rational)> = Vec::new();
    for (a, b) in raw {
        match out.last_mut() {
            Some(last) if a <= last.1 => {
                if b > last.1 {
                    last.1 = b;
                }
            }
            _ => out.push((a, b)),
        }
    }
    out
}

/// Case of the stretch `[s0, s1]` of `h`, given the preimage intervals.
fn classify_span(iv: &[(Rational, Rational)], s0: &Rational, s1: &Rational) -> Option<RegularCase> {
    let clipped: Vec<(Rational, Rational)> = iv
        .iter()
        .filter(|(a, b)| a <= s1 && b >= s0)
        .map(|(a, b)| (a.clone().max(s0.clone()), b.clone().min(s1.clone())))
        .collect();
    match clipped.as_slice() {
        [] => Some(RegularCase::IV),
        [(a, b)] if a == s0 && b == s1 => Some(RegularCase::III),
        [(a, b)] if a == s1 && b == s1 => Some(RegularCase::I),
        [(a, b)] if a == s0 && b == s0 => Some(RegularCase::II),
        _ => None,
    }
}

fn unique_geodesic(g: &MetricGraph, x: &GraphPoint, y: &GraphPoint) -> Result<GeodesicPath, Error> {
    let mut all = enumerate_geodesics(g, x, y)?;
    if all.len() != 1 {
        return Err(Error::NonUniqueGeodesic { from: g.describe(x), to: g.describe(y), count: all.len() });
    }
    Ok(all.swap_remove(0))
}

fn check_inside(g: &MetricGraph, f: &GeodesicPath, x: &GraphPoint, y: &GraphPoint) -> Result<(), Error> {
    let ok = between(g, &f.start, x, y)
        && between(g, x, y, &f.end)
        && graph_distance(g, &f.start, x) + graph_distance(g, x, y) + graph_distance(g, y, &f.end) == f.length;
    if ok {
        Ok(())
    } else {
        Err(Error::NotBetween(alloc::format!(
            "{} < {} < {} < {} fails",
            g.describe(&f.start),
            g.describe(x),
            g.describe(y),
            g.describe(&f.end)
        )))
    }
}

/// The case of `<a, x, y, b>` if it is `f`-regular, `None` otherwise.
pub fn classify_piece(g: &MetricGraph, f: &GeodesicPath, x: &GraphPoint, y: &GraphPoint) -> Result<Option<RegularCase>, Error> {
    let (x, y) = (g.canonical(x)?, g.canonical(y)?);
    check_inside(g, f, &x, &y)?;
    let h = unique_geodesic(g, &x, &y)?;
    Ok(classify_span(&preimage(g, f, &h), &Rational::zero(), &h.length))
}

fn pieces_at(g: &MetricGraph, h: &GeodesicPath, iv: &[(Rational, Rational)], cuts: &[Rational]) -> Result<Vec<Piece>, Error> {
    let mut params = alloc::vec![Rational::zero()];
    params.extend(cuts.iter().filter(|t| **t > Rational::zero() && **t < h.length).cloned());
    params.push(h.length.clone());
    params.sort();
    params.dedup();
    params
        .windows(2)
        .map(|w| {
            let case = classify_span(iv, &w[0], &w[1]).ok_or_else(|| {
                Error::ChainMismatch(alloc::format!(
                    "stretch [{}, {}] of the geodesic from {} is not regular",
                    w[0],
                    w[1],
                    g.describe(&h.start)
                ))
            })?;
            Ok(Piece { from: h.point_at(g, &w[0]), to: h.point_at(g, &w[1]), s0: w[0].clone(), s1: w[1].clone(), case })
        })
        .collect()
}

/// Subdivides the geodesic from `x` to `y` at the ends of its intersection
/// with `Im f`, so that every `<a, x_i, x_{i+1}, b>` is `f`-regular.
pub fn decompose_f_regular(g: &MetricGraph, f: &GeodesicPath, x: &GraphPoint, y: &GraphPoint) -> Result<Vec<Piece>, Error> {
    let (x, y) = (g.canonical(x)?, g.canonical(y)?);
    check_inside(g, f, &x, &y)?;
    let h = unique_geodesic(g, &x, &y)?;
    let iv = preimage(g, f, &h);
    let cuts: Vec<Rational> = iv.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).collect();
    pieces_at(g, &h, &iv, &cuts)
}

/// The same total as [`decompose_f_regular`] would give, computed on a finer
/// subdivision with extra cut parameters along the geodesic from `x` to `y`.
pub fn nu_f_of_subdivision(
    g: &MetricGraph,
    f: &GeodesicPath,
    x: &GraphPoint,
    y: &GraphPoint,
    extra: &[Rational],
) -> Result<i64, Error> {
    let (x, y) = (g.canonical(x)?, g.canonical(y)?);
    check_inside(g, f, &x, &y)?;
    let h = unique_geodesic(g, &x, &y)?;
    let iv = preimage(g, f, &h);
    let mut cuts: Vec<Rational> = iv.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).collect();
    cuts.extend(extra.iter().cloned());
    Ok(pieces_at(g, &h, &iv, &cuts)?.iter().map(|p| p.case.nu()).sum())
}

/// The intersection number of a combination of 3-chains `<a, x, y, b>` of
/// length `d(a, b)` with the reference geodesic `f` from `a` to `b`.
pub fn nu_f(g: &MetricGraph, f: &GeodesicPath, gamma: &FormalSum<GraphPoint>) -> Result<i64, Error> {
    let mut total = 0i64;
    for (c, k) in gamma.terms() {
        let p = c.points();
        if p.len() != 4 {
            return Err(Error::Arity { expected: 4, got: p.len() });
        }
        let describe = || {
            p.iter().map(|q| g.describe(q)).collect::<Vec<_>>().join(", ")
        };
        if p[0] != f.start || p[3] != f.end || chain_length(g, c) != f.length {
            return Err(Error::ChainMismatch(alloc::format!("<{}> against {}..{}", describe(), g.describe(&f.start), g.describe(&f.end))));
        }
        let n: i64 = decompose_f_regular(g, f, &p[1], &p[2])?.iter().map(|piece| piece.case.nu()).sum();
        total += k * n;
    }
    Ok(total)
}
