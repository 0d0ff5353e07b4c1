//! Command implementations. Each returns a complete [`Outcome`]; the binary
//! only prints it and picks the exit code.

use std::sync::OnceLock;

use magnihom_core::corpus::corpus;
use magnihom_core::graph::{
    check_non_branching, check_unique_between_geodesics, decompose_f_regular, enumerate_geodesics, graph_distance,
    nonbranching_rank, nonbranching_rank_from, nu_f, pi0_geodesics, GeodesicPath, GraphPoint, MetricGraph,
};
use magnihom_core::homology::{homology_report, length_spectrum};
use magnihom_core::rational::Rational;
use magnihom_core::simplicial::{build_a, build_b, detour_quotient, h0_b, reduced_homology_a};
use magnihom_core::spectral::{convergence_check, e1_blocks, SpectralPage, FilteredComplex};
use magnihom_core::{homology, validate_metric, Chain, FiniteMetricSpace, FormalSum, PointId};
use rayon::prelude::*;
use serde::Serialize;

use crate::io::{parse_metric_document, write_metric};
use crate::report::{rational_text, table, Format, GroupReport};
use crate::CliError;

/// Environment variable capping the number of worker threads.
pub const THREADS_VAR: &str = "MAGNIHOM_THREADS";

fn pool() -> &'static rayon::ThreadPool {
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let n = std::env::var(THREADS_VAR).ok().and_then(|v| v.trim().parse::<usize>().ok()).unwrap_or(0);
        rayon::ThreadPoolBuilder::new().num_threads(n).build().expect("thread pool")
    })
}

/// Maps `f` over `items` on the worker pool, keeping input order.
pub fn fan_out<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    pool().install(|| items.par_iter().map(f).collect())
}

/// Rendered command result. `ok` is false when a check reported a mismatch.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub json: String,
    pub table: String,
    pub ok: bool,
}

impl Outcome {
    fn new<T: Serialize>(report: &T, table: String, ok: bool) -> Self {
        Self { json: serde_json::to_string_pretty(report).expect("reports serialize") + "\n", table, ok }
    }

    pub fn render(&self, format: Format) -> &str {
        match format {
            Format::Json => &self.json,
            Format::Table => &self.table,
        }
    }
}

/// Which endpoint pairs a command runs over.
#[derive(Clone, Debug)]
pub enum Pairs {
    All,
    Listed(Vec<(String, String)>),
}

impl Pairs {
    fn resolve(&self, m: &FiniteMetricSpace) -> Result<Vec<(PointId, PointId)>, CliError> {
        match self {
            Pairs::All => Ok(m.points().flat_map(|a| m.points().map(move |b| (a, b))).collect()),
            Pairs::Listed(list) => list.iter().map(|(a, b)| Ok((point(m, a)?, point(m, b)?))).collect(),
        }
    }
}

fn point(m: &FiniteMetricSpace, label: &str) -> Result<PointId, CliError> {
    m.point_by_label(label).ok_or_else(|| CliError::Usage(format!("no point labelled {label:?}")))
}

fn label(m: &FiniteMetricSpace, p: PointId) -> String {
    m.label(p).to_string()
}

/// Fixed lengths, or every length realized by a chain of the degree in question.
#[derive(Clone, Debug)]
pub enum Lengths {
    Spectrum,
    Listed(Vec<Rational>),
}

impl Lengths {
    fn for_pair(&self, m: &FiniteMetricSpace, n: usize, a: PointId, b: PointId) -> Vec<Rational> {
        match self {
            Lengths::Spectrum => length_spectrum(m, n, a, b),
            Lengths::Listed(l) => l.clone(),
        }
    }
}

#[derive(Serialize)]
struct ValidateReport {
    points: usize,
    valid: bool,
    violation: Option<String>,
}

pub fn validate(text: &str) -> Result<Outcome, CliError> {
    let doc = parse_metric_document(text)?;
    let rows = doc.rows();
    let mut violation = validate_metric(&rows).err().map(|v| v.to_string());
    if violation.is_none() {
        if let Err(e) = FiniteMetricSpace::new(doc.labels(), rows.clone()) {
            violation = Some(e.to_string());
        }
    }
    let r = ValidateReport { points: rows.len(), valid: violation.is_none(), violation };
    let t = match &r.violation {
        None => format!("valid metric space on {} points\n", r.points),
        Some(v) => format!("invalid: {v}\n"),
    };
    Ok(Outcome::new(&r, t, r.valid))
}

#[derive(Serialize)]
struct SpectrumRow {
    n: usize,
    a: String,
    b: String,
    lengths: Vec<String>,
}

pub fn spectrum(m: &FiniteMetricSpace, degrees: &[usize], pairs: &Pairs) -> Result<Outcome, CliError> {
    let mut rows = Vec::new();
    for (a, b) in pairs.resolve(m)? {
        for &n in degrees {
            let lengths = length_spectrum(m, n, a, b).iter().map(rational_text).collect();
            rows.push(SpectrumRow { n, a: label(m, a), b: label(m, b), lengths });
        }
    }
    let t = table(&["n", "a", "b", "lengths"], &rows.iter().map(|r| vec![r.n.to_string(), r.a.clone(), r.b.clone(), r.lengths.join(" ")]).collect::<Vec<_>>());
    Ok(Outcome::new(&rows, t, true))
}

#[derive(Serialize)]
pub struct HomologyRow {
    pub n: usize,
    pub length: String,
    pub a: String,
    pub b: String,
    pub rank: usize,
    pub torsion: Vec<String>,
    pub dim_chains: usize,
    pub dim_boundaries: usize,
}

pub fn homology_cmd(m: &FiniteMetricSpace, degrees: &[usize], lengths: &Lengths, pairs: &Pairs) -> Result<Outcome, CliError> {
    let mut jobs = Vec::new();
    for (a, b) in pairs.resolve(m)? {
        for &n in degrees {
            for l in lengths.for_pair(m, n, a, b) {
                jobs.push((n, l, a, b));
            }
        }
    }
    jobs.sort();
    let rows: Vec<HomologyRow> = fan_out(&jobs, |(n, l, a, b)| {
        let r = homology_report(m, *n, l, *a, *b);
        let g = GroupReport::from(&r.group);
        HomologyRow {
            n: *n,
            length: rational_text(l),
            a: label(m, *a),
            b: label(m, *b),
            rank: g.rank,
            torsion: g.torsion,
            dim_chains: r.dim_chains,
            dim_boundaries: r.dim_boundaries,
        }
    });
    let cells = rows
        .iter()
        .map(|r| {
            let g = GroupReport { rank: r.rank, torsion: r.torsion.clone() };
            vec![r.n.to_string(), r.length.clone(), r.a.clone(), r.b.clone(), g.cell(), r.dim_chains.to_string(), r.dim_boundaries.to_string()]
        })
        .collect::<Vec<_>>();
    let t = table(&["n", "length", "a", "b", "group", "chains", "boundaries"], &cells);
    Ok(Outcome::new(&rows, t, true))
}

#[derive(Serialize)]
struct DegreeGroup {
    degree: usize,
    rank: usize,
    torsion: Vec<String>,
}

#[derive(Serialize)]
struct ComplexAReport {
    a: String,
    b: String,
    vertices: Vec<String>,
    simplices: Vec<Vec<String>>,
    reduced_homology: Vec<DegreeGroup>,
}

pub fn complex_a(m: &FiniteMetricSpace, a: &str, b: &str, max_n: usize) -> Result<Outcome, CliError> {
    let (pa, pb) = (point(m, a)?, point(m, b)?);
    let c = build_a(m, pa, pb)?;
    let names = |s: &[PointId]| s.iter().map(|&p| label(m, p)).collect::<Vec<_>>();
    let simplices: Vec<Vec<String>> = c.simplices.iter().flatten().map(|s| names(s)).collect();
    let reduced_homology: Vec<DegreeGroup> = (0..=max_n.saturating_sub(2))
        .map(|k| {
            let g = GroupReport::from(&reduced_homology_a(&c, k));
            DegreeGroup { degree: k, rank: g.rank, torsion: g.torsion }
        })
        .collect();
    let r = ComplexAReport { a: a.into(), b: b.into(), vertices: names(&c.vertices), simplices, reduced_homology };
    let mut t = format!("A({}, {}): {} vertices, {} simplices\n", r.a, r.b, r.vertices.len(), r.simplices.len());
    for s in &r.simplices {
        t.push_str(&format!("  [{}]\n", s.join(" ")));
    }
    for d in &r.reduced_homology {
        t.push_str(&format!("reduced H_{} = {}\n", d.degree, GroupReport { rank: d.rank, torsion: d.torsion.clone() }.cell()));
    }
    Ok(Outcome::new(&r, t, true))
}

#[derive(Serialize)]
struct ComplexBReport {
    a: String,
    b: String,
    length: String,
    detours: Vec<String>,
    filled: Vec<String>,
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
    h0: GroupReport,
    detour_quotient: GroupReport,
}

pub fn complex_b(m: &FiniteMetricSpace, a: &str, b: &str, length: &Rational) -> Result<Outcome, CliError> {
    let (pa, pb) = (point(m, a)?, point(m, b)?);
    let c = build_b(m, length, pa, pb)?;
    let names = |s: &[PointId]| s.iter().map(|&p| label(m, p)).collect::<Vec<_>>();
    let r = ComplexBReport {
        a: a.into(),
        b: b.into(),
        length: rational_text(length),
        detours: names(&c.detours),
        filled: names(&c.filled),
        vertices: names(&c.vertices),
        edges: c.edges.iter().map(|&(p, q)| (label(m, p), label(m, q))).collect(),
        h0: GroupReport::from(&h0_b(&c)),
        detour_quotient: GroupReport::from(&detour_quotient(&c, m)),
    };
    let t = format!(
        "B^{}({}, {})\ndetours: {}\nfilled: {}\nvertices: {}\nedges: {}\nH_0(B) = {}\ndetour quotient = {}\n",
        r.length,
        r.a,
        r.b,
        r.detours.join(" "),
        r.filled.join(" "),
        r.vertices.join(" "),
        r.edges.iter().map(|(p, q)| format!("{p}->{q}")).collect::<Vec<_>>().join(" "),
        r.h0.cell(),
        r.detour_quotient.cell()
    );
    Ok(Outcome::new(&r, t, true))
}

#[derive(Serialize)]
struct BlockReport {
    frame: Vec<String>,
    lengths: Vec<String>,
    size: usize,
}

#[derive(Serialize)]
struct EntryReport {
    p: usize,
    q: usize,
    rank: usize,
    torsion: Vec<String>,
    blocks: Vec<BlockReport>,
}

#[derive(Serialize)]
struct ConvergenceRowReport {
    n: usize,
    graded_rank: usize,
    direct: GroupReport,
    matches: bool,
}

#[derive(Serialize)]
struct SpectralReport {
    a: String,
    b: String,
    length: String,
    page: usize,
    entries: Vec<EntryReport>,
    stabilized_at: usize,
    squares_vanish: bool,
    e1_p0_vanishes: bool,
    exact_sequence_n2: Option<bool>,
    convergence: Vec<ConvergenceRowReport>,
}

/// Page `page` (default: the stable one) plus the convergence check.
pub fn spectral(m: &FiniteMetricSpace, a: &str, b: &str, length: &Rational, max_n: usize, page: Option<usize>) -> Result<Outcome, CliError> {
    let (pa, pb) = (point(m, a)?, point(m, b)?);
    let complex = FilteredComplex::new(m, length, pa, pb, max_n);
    let r = page.unwrap_or_else(|| complex.stable_page()).max(1);
    let built = SpectralPage::build(complex.clone(), r)?;
    let entries = built
        .entries
        .iter()
        .map(|(&(p, q), e)| {
            let g = GroupReport::from(&e.group);
            let blocks = e1_blocks(m, &complex, p, q)
                .into_iter()
                .map(|(k, idx)| BlockReport {
                    frame: k.frame.points().iter().map(|&x| label(m, x)).collect(),
                    lengths: k.lengths.iter().map(rational_text).collect(),
                    size: idx.len(),
                })
                .collect();
            EntryReport { p, q, rank: g.rank, torsion: g.torsion, blocks }
        })
        .collect();
    let conv = convergence_check(m, length, pa, pb, max_n)?;
    let convergence: Vec<ConvergenceRowReport> = conv
        .rows
        .iter()
        .map(|row| ConvergenceRowReport { n: row.n, graded_rank: row.graded_rank, direct: GroupReport::from(&row.direct), matches: row.matches() })
        .collect();
    let rep = SpectralReport {
        a: a.into(),
        b: b.into(),
        length: rational_text(length),
        page: r,
        entries,
        stabilized_at: conv.stabilized_at,
        squares_vanish: conv.squares_vanish,
        e1_p0_vanishes: conv.e1_p0_vanishes,
        exact_sequence_n2: conv.exact_sequence_n2,
        convergence,
    };
    let mut rows = Vec::new();
    for e in &rep.entries {
        rows.push(vec![
            e.p.to_string(),
            e.q.to_string(),
            GroupReport { rank: e.rank, torsion: e.torsion.clone() }.cell(),
            e.blocks.len().to_string(),
        ]);
    }
    let mut t = format!("E^{} for ({}, {}) at length {}\n", rep.page, rep.a, rep.b, rep.length);
    t.push_str(&table(&["p", "q", "group", "E1 blocks"], &rows));
    for c in &rep.convergence {
        t.push_str(&format!("n = {}: graded E^inf rank {} vs H = {} {}\n", c.n, c.graded_rank, c.direct.cell(), verdict(c.matches)));
    }
    let ok = conv.all_match();
    Ok(Outcome::new(&rep, t, ok))
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "match"
    } else {
        "MISMATCH"
    }
}

#[derive(Clone, Serialize)]
pub struct OracleRow {
    pub kind: &'static str,
    pub a: String,
    pub b: String,
    pub length: String,
    pub n: usize,
    pub direct: GroupReport,
    pub oracle: GroupReport,
    pub matches: bool,
}

#[derive(Serialize)]
struct OracleReport {
    rows: Vec<OracleRow>,
    mismatches: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum OracleJob {
    A { n: usize },
    B,
    Spectral { max_n: usize },
}

/// Direct homology next to the complex `A`, complex `B` and spectral answers.
pub fn oracles(m: &FiniteMetricSpace, pairs: &Pairs, max_n: usize) -> Result<Outcome, CliError> {
    let mut jobs: Vec<(PointId, PointId, Rational, OracleJob)> = Vec::new();
    for (a, b) in pairs.resolve(m)? {
        let d = m.d(a, b).clone();
        if a != b {
            for n in 2..=4 {
                jobs.push((a, b, d.clone(), OracleJob::A { n }));
            }
            for l in length_spectrum(m, 2, a, b).into_iter().filter(|l| *l > d) {
                jobs.push((a, b, l, OracleJob::B));
            }
        }
        let mut lengths: Vec<Rational> = (0..=max_n).flat_map(|n| length_spectrum(m, n, a, b)).collect();
        lengths.sort();
        lengths.dedup();
        for l in lengths {
            jobs.push((a, b, l, OracleJob::Spectral { max_n }));
        }
    }
    let results: Vec<Result<Vec<OracleRow>, CliError>> = fan_out(&jobs, |(a, b, l, job)| {
        let (a, b) = (*a, *b);
        let row = |kind, n, direct: &magnihom_core::HomologyGroup, oracle: &magnihom_core::HomologyGroup| OracleRow {
            kind,
            a: label(m, a),
            b: label(m, b),
            length: rational_text(l),
            n,
            direct: direct.into(),
            oracle: oracle.into(),
            matches: direct == oracle,
        };
        Ok(match *job {
            OracleJob::A { n } => {
                let c = build_a(m, a, b)?;
                vec![row("A", n, &homology(m, n, l, a, b), &reduced_homology_a(&c, n - 2))]
            }
            OracleJob::B => {
                let c = build_b(m, l, a, b)?;
                vec![row("B", 2, &homology(m, 2, l, a, b), &h0_b(&c))]
            }
            OracleJob::Spectral { max_n } => {
                let rep = convergence_check(m, l, a, b, max_n)?;
                rep.rows
                    .iter()
                    .map(|r| {
                        let graded = magnihom_core::HomologyGroup::free(r.graded_rank);
                        let direct = magnihom_core::HomologyGroup::free(r.direct.rank);
                        let mut out = row("spectral", r.n, &direct, &graded);
                        out.matches = r.matches() && rep.squares_vanish && rep.e1_p0_vanishes && rep.exact_sequence_n2.unwrap_or(true);
                        out
                    })
                    .collect()
            }
        })
    });
    let mut rows = Vec::new();
    for r in results {
        rows.extend(r?);
    }
    let mismatches = rows.iter().filter(|r| !r.matches).count();
    let cells = rows
        .iter()
        .map(|r| vec![r.kind.to_string(), r.a.clone(), r.b.clone(), r.length.clone(), r.n.to_string(), r.direct.cell(), r.oracle.cell(), verdict(r.matches).to_string()])
        .collect::<Vec<_>>();
    let mut t = table(&["check", "a", "b", "length", "n", "direct", "oracle", "verdict"], &cells);
    t.push_str(&format!("{} rows, {} mismatches\n", rows.len(), mismatches));
    Ok(Outcome::new(&OracleReport { rows, mismatches }, t, mismatches == 0))
}

#[derive(Serialize)]
struct CorpusEntry {
    seed: u64,
    index: usize,
    space: serde_json::Value,
}

pub fn corpus_cmd(seed: u64, count: usize, sizes: &[usize], max_weight: u32) -> Result<Outcome, CliError> {
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(CliError::Usage("sizes must be positive".into()));
    }
    let spaces = corpus(seed, count, sizes, max_weight);
    let entries: Vec<CorpusEntry> = spaces
        .iter()
        .enumerate()
        .map(|(index, m)| CorpusEntry { seed, index, space: serde_json::from_str(&write_metric(m)).expect("round trip") })
        .collect();
    let t = spaces.iter().enumerate().map(|(i, m)| format!("{i}: {}\n", write_metric(m))).collect();
    Ok(Outcome::new(&entries, t, true))
}

// ---- metric graphs ----

#[derive(Serialize)]
struct Breakpoint {
    point: String,
    t: String,
}

#[derive(Serialize)]
struct GeodesicReport {
    length: String,
    edges: Vec<usize>,
    breakpoints: Vec<Breakpoint>,
}

fn geodesic_report(g: &MetricGraph, p: &GeodesicPath) -> GeodesicReport {
    GeodesicReport {
        length: rational_text(&p.length),
        edges: p.segments.iter().map(|s| s.edge).collect(),
        breakpoints: p.breakpoints(g).iter().map(|(x, t)| Breakpoint { point: g.describe(x), t: rational_text(t) }).collect(),
    }
}

fn route(r: &GeodesicReport) -> String {
    let points = r.breakpoints.iter().map(|b| b.point.as_str()).collect::<Vec<_>>().join(" -> ");
    let edges = r.edges.iter().map(|k| format!("e{k}")).collect::<Vec<_>>().join(" ");
    format!("{points} [{edges}]")
}

pub fn graph_point(g: &MetricGraph, text: &str) -> Result<GraphPoint, CliError> {
    Ok(g.parse_point(text)?)
}

#[derive(Serialize)]
struct DistanceReport {
    from: String,
    to: String,
    distance: String,
}

pub fn graph_distance_cmd(g: &MetricGraph, p: &str, q: &str) -> Result<Outcome, CliError> {
    let (x, y) = (graph_point(g, p)?, graph_point(g, q)?);
    let r = DistanceReport { from: g.describe(&x), to: g.describe(&y), distance: rational_text(&graph_distance(g, &x, &y)) };
    let t = format!("d({}, {}) = {}\n", r.from, r.to, r.distance);
    Ok(Outcome::new(&r, t, true))
}

#[derive(Serialize)]
struct GeodesicsReport {
    from: String,
    to: String,
    count: usize,
    geodesics: Vec<GeodesicReport>,
}

pub fn graph_geodesics(g: &MetricGraph, p: &str, q: &str) -> Result<Outcome, CliError> {
    let (x, y) = (graph_point(g, p)?, graph_point(g, q)?);
    let geo: Vec<GeodesicReport> = enumerate_geodesics(g, &x, &y)?.iter().map(|f| geodesic_report(g, f)).collect();
    let r = GeodesicsReport { from: g.describe(&x), to: g.describe(&y), count: geo.len(), geodesics: geo };
    let mut t = format!("{} geodesics from {} to {}\n", r.count, r.from, r.to);
    for (i, f) in r.geodesics.iter().enumerate() {
        t.push_str(&format!("  {i}: {}\n", route(f)));
    }
    Ok(Outcome::new(&r, t, true))
}

#[derive(Serialize)]
struct Pi0Report {
    from: String,
    to: String,
    geodesics: Vec<GeodesicReport>,
    classes: Vec<Vec<usize>>,
    h2_rank: usize,
}

pub fn graph_pi0(g: &MetricGraph, p: &str, q: &str) -> Result<Outcome, CliError> {
    let (x, y) = (graph_point(g, p)?, graph_point(g, q)?);
    let c = pi0_geodesics(g, &x, &y)?;
    let r = Pi0Report {
        from: g.describe(&x),
        to: g.describe(&y),
        geodesics: c.geodesics.iter().map(|f| geodesic_report(g, f)).collect(),
        h2_rank: c.classes.len() - 1,
        classes: c.classes,
    };
    let mut t = format!("{} geodesics in {} classes from {} to {}; rank H_2 = {}\n", r.geodesics.len(), r.classes.len(), r.from, r.to, r.h2_rank);
    for (k, class) in r.classes.iter().enumerate() {
        t.push_str(&format!("  class {k}: {}\n", class.iter().map(|i| route(&r.geodesics[*i])).collect::<Vec<_>>().join(" | ")));
    }
    Ok(Outcome::new(&r, t, true))
}

#[derive(Serialize)]
struct PieceReport {
    from: String,
    to: String,
    case: &'static str,
}

#[derive(Serialize)]
struct TermReport {
    coefficient: i64,
    points: Vec<String>,
    pieces: Vec<PieceReport>,
}

#[derive(Serialize)]
struct NuReport {
    reference: GeodesicReport,
    terms: Vec<TermReport>,
    nu: i64,
}

/// First geodesic from `a` to `b`, in enumeration order, through every `via` point.
pub fn reference_geodesic(g: &MetricGraph, a: &GraphPoint, b: &GraphPoint, via: &[GraphPoint]) -> Result<GeodesicPath, CliError> {
    enumerate_geodesics(g, a, b)?
        .into_iter()
        .find(|f| {
            via.iter().all(|p| {
                let t = graph_distance(g, a, p);
                t <= f.length && f.point_at(g, &t) == *p
            })
        })
        .ok_or_else(|| CliError::Usage("no geodesic passes through every --via point".into()))
}

pub fn graph_nu_f(g: &MetricGraph, gamma: &FormalSum<GraphPoint>, via: &[String]) -> Result<Outcome, CliError> {
    let first: &Chain<GraphPoint> = gamma.terms().next().map(|(c, _)| c).ok_or_else(|| CliError::Usage("empty chain list".into()))?;
    let (a, b) = (first.first().clone(), first.last().clone());
    let via = via.iter().map(|s| graph_point(g, s)).collect::<Result<Vec<_>, _>>()?;
    let f = reference_geodesic(g, &a, &b, &via)?;
    let nu = nu_f(g, &f, gamma)?;
    let mut terms = Vec::new();
    for (c, k) in gamma.terms() {
        let p = c.points();
        let pieces = decompose_f_regular(g, &f, &p[1], &p[2])?
            .iter()
            .map(|x| PieceReport { from: g.describe(&x.from), to: g.describe(&x.to), case: x.case.name() })
            .collect();
        terms.push(TermReport { coefficient: k, points: p.iter().map(|x| g.describe(x)).collect(), pieces });
    }
    let r = NuReport { reference: geodesic_report(g, &f), terms, nu };
    let mut t = format!("reference geodesic {}\n", route(&r.reference));
    for term in &r.terms {
        let cases: Vec<&str> = term.pieces.iter().map(|p| p.case).collect();
        t.push_str(&format!("  {:+} <{}>: {}\n", term.coefficient, term.points.join(", "), cases.join(" ")));
    }
    t.push_str(&format!("nu_f = {}\n", r.nu));
    Ok(Outcome::new(&r, t, true))
}

#[derive(Serialize)]
struct WitnessReport {
    from: String,
    to: String,
    t: String,
    f: GeodesicReport,
    g: GeodesicReport,
}

#[derive(Serialize)]
struct NonBranchingReport {
    pairs_checked: usize,
    pass: bool,
    witness: Option<WitnessReport>,
}

/// Non-branching over the listed pairs, or over all vertex pairs.
pub fn graph_nonbranching(g: &MetricGraph, pairs: &[(String, String)]) -> Result<Outcome, CliError> {
    let list: Vec<(GraphPoint, GraphPoint)> = if pairs.is_empty() {
        let v = g.vertex_points();
        v.iter().flat_map(|p| v.iter().map(move |q| (p.clone(), q.clone()))).collect()
    } else {
        pairs.iter().map(|(p, q)| Ok((graph_point(g, p)?, graph_point(g, q)?))).collect::<Result<_, CliError>>()?
    };
    let w = check_non_branching(g, &list)?;
    let r = NonBranchingReport {
        pairs_checked: list.len(),
        pass: w.is_none(),
        witness: w.map(|w| WitnessReport {
            from: g.describe(&w.from),
            to: g.describe(&w.to),
            t: rational_text(&w.t),
            f: geodesic_report(g, &w.f),
            g: geodesic_report(g, &w.g),
        }),
    };
    let t = match &r.witness {
        None => format!("non-branching holds on {} pairs\n", r.pairs_checked),
        Some(w) => format!(
            "fails between {} and {}: {} and {} meet at t = {}\n",
            w.from,
            w.to,
            route(&w.f),
            route(&w.g),
            w.t
        ),
    };
    Ok(Outcome::new(&r, t, true))
}

#[derive(Serialize)]
struct UniqueReport {
    a: String,
    b: String,
    probes: usize,
    pass: bool,
    witness: Option<(String, String, usize)>,
}

pub fn graph_unique(g: &MetricGraph, a: &str, b: &str, probes: &[String]) -> Result<Outcome, CliError> {
    let (x, y) = (graph_point(g, a)?, graph_point(g, b)?);
    let probes: Vec<GraphPoint> = if probes.is_empty() {
        g.vertex_points()
    } else {
        probes.iter().map(|p| graph_point(g, p)).collect::<Result<_, _>>()?
    };
    let w = check_unique_between_geodesics(g, &x, &y, &probes)?;
    let r = UniqueReport {
        a: g.describe(&x),
        b: g.describe(&y),
        probes: probes.len(),
        pass: w.is_none(),
        witness: w.map(|w| (g.describe(&w.x), g.describe(&w.y), w.count)),
    };
    let t = match &r.witness {
        None => format!("unique geodesics between all probes strictly between {} and {}\n", r.a, r.b),
        Some((p, q, n)) => format!("{n} geodesics from {p} to {q}\n"),
    };
    Ok(Outcome::new(&r, t, true))
}

#[derive(Serialize)]
struct RankReport {
    length: String,
    q: usize,
    degree: usize,
    anchors: Vec<String>,
    start: Option<String>,
    rank: usize,
    scope: &'static str,
}

pub fn graph_gamma_rank(g: &MetricGraph, length: &Rational, q: usize, anchors: &[String], start: Option<&str>) -> Result<Outcome, CliError> {
    let anchors: Vec<GraphPoint> = if anchors.is_empty() {
        g.vertex_points()
    } else {
        anchors.iter().map(|p| graph_point(g, p)).collect::<Result<_, _>>()?
    };
    let start = start.map(|s| graph_point(g, s)).transpose()?;
    let rank = match &start {
        Some(s) => nonbranching_rank_from(g, length, q, &anchors, s)?,
        None => nonbranching_rank(g, length, q, &anchors)?,
    };
    let r = RankReport {
        length: rational_text(length),
        q,
        degree: 2 * q,
        anchors: anchors.iter().map(|p| g.describe(p)).collect(),
        start: start.as_ref().map(|p| g.describe(p)),
        rank,
        scope: "anchor tuples only; exact when the anchors contain every point of every tuple",
    };
    let t = format!("rank over anchor tuples for n = {}, length {}: {}\n", r.degree, r.length, r.rank);
    Ok(Outcome::new(&r, t, true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::{read_graph, read_metric};
    use magnihom_core::rational::int;

    const CUBE: &str = r#"{"vertices":["1","2","3","4","5","6","7","8"],"edges":[
        {"u":"1","v":"2","len":"1"},{"u":"1","v":"4","len":"1"},{"u":"2","v":"6","len":"1"},{"u":"4","v":"6","len":"1"},
        {"u":"4","v":"5","len":"1"},{"u":"6","v":"8","len":"1"},{"u":"5","v":"8","len":"1"},{"u":"1","v":"3","len":"1"},
        {"u":"2","v":"7","len":"1"},{"u":"5","v":"3","len":"1"},{"u":"8","v":"7","len":"1"},{"u":"3","v":"7","len":"1"}]}"#;

    #[test]
    fn cube_commands() {
        let g = read_graph(CUBE).unwrap();
        let out = graph_geodesics(&g, "1", "8").unwrap();
        assert!(out.json.contains("\"count\": 6"));
        let nb = graph_nonbranching(&g, &[]).unwrap();
        assert!(nb.json.contains("\"pass\": false"));
        assert!(nb.table.starts_with("fails between 1 and 8"));
        let gamma = crate::io::read_chains(
            r#"[{"coefficient":1,"points":["1","2","7","8"]},{"coefficient":-1,"points":["1","3","7","8"]},
                {"coefficient":1,"points":["1","3","5","8"]},{"coefficient":-1,"points":["1","4","5","8"]},
                {"coefficient":1,"points":["1","4","6","8"]},{"coefficient":-1,"points":["1","2","6","8"]}]"#,
            &g,
        )
        .unwrap();
        let nu = graph_nu_f(&g, &gamma, &["2".into(), "7".into()]).unwrap();
        assert!(nu.json.contains("\"nu\": -1"), "{}", nu.json);
    }

    #[test]
    fn homology_rows_are_sorted_and_stable() {
        let m = read_metric(r#"{"dist":[["0","1","2"],["1","0","1"],["2","1","0"]]}"#).unwrap();
        let a = homology_cmd(&m, &[1, 2], &Lengths::Spectrum, &Pairs::All).unwrap();
        let b = homology_cmd(&m, &[1, 2], &Lengths::Spectrum, &Pairs::All).unwrap();
        assert_eq!(a.json, b.json);
        let rows: Vec<serde_json::Value> = serde_json::from_str(&a.json).unwrap();
        assert!(rows.iter().all(|r| r["torsion"].as_array().unwrap().is_empty()));
        let one = homology_cmd(&m, &[1], &Lengths::Listed(vec![int(1)]), &Pairs::Listed(vec![("0".into(), "1".into())])).unwrap();
        assert!(one.json.contains("\"rank\": 1"));
    }

    #[test]
    fn oracles_on_a_path() {
        let m = read_metric(r#"{"dist":[["0","1","2","3"],["1","0","1","2"],["2","1","0","1"],["3","2","1","0"]]}"#).unwrap();
        let out = oracles(&m, &Pairs::All, 2).unwrap();
        assert!(out.ok, "{}", out.table);
    }
}
