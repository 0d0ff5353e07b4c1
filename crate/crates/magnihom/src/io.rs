//! JSON documents: metric spaces, metric graphs and chain lists.
//!
//! Every number is exact. Rationals are written as strings `"p/q"` or
//! `"n"`; bare JSON integers are accepted, JSON floats are not.

use std::fmt;

use magnihom_core::graph::{GraphPoint, MetricGraph};
use magnihom_core::rational::{format_rational, parse_rational, Rational};
use magnihom_core::{Chain, FiniteMetricSpace, FormalSum};
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::CliError;

/// A rational read from a JSON string or integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exact(pub Rational);

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Exact;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an exact rational such as \"3/2\" or \"4\"")
            }

            fn visit_str<E: de::Error>(self, s: &str) -> Result<Exact, E> {
                parse_rational(s).map(Exact).map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, n: i64) -> Result<Exact, E> {
                Ok(Exact(Rational::from_integer(n.into())))
            }

            fn visit_u64<E: de::Error>(self, n: u64) -> Result<Exact, E> {
                Ok(Exact(Rational::from_integer(n.into())))
            }

            fn visit_f64<E: de::Error>(self, x: f64) -> Result<Exact, E> {
                Err(E::custom(format!("floating point number {x} is not exact; write it as \"p/q\"")))
            }
        }
        d.deserialize_any(V)
    }
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MetricDocument {
    #[serde(default)]
    pub labels: Option<Vec<String>>,
    pub dist: Vec<Vec<Exact>>,
}

impl MetricDocument {
    pub fn from_space(m: &FiniteMetricSpace) -> Self {
        Self {
            labels: Some(m.labels().to_vec()),
            dist: m.rows().into_iter().map(|r| r.into_iter().map(Exact).collect()).collect(),
        }
    }

    pub fn labels(&self) -> Vec<String> {
        self.labels.clone().unwrap_or_else(|| (0..self.dist.len()).map(|i| i.to_string()).collect())
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.dist.iter().map(|r| r.iter().map(|x| x.0.clone()).collect()).collect()
    }
}

fn json_error(what: &str, e: serde_json::Error) -> CliError {
    CliError::Format { what: what.to_string(), line: e.line(), column: e.column(), message: strip_position(&e) }
}

fn strip_position(e: &serde_json::Error) -> String {
    let text = e.to_string();
    match text.rfind(" at line ") {
        Some(i) => text[..i].to_string(),
        None => text,
    }
}

/// Parses a metric-space document without checking the axioms.
pub fn parse_metric_document(text: &str) -> Result<MetricDocument, CliError> {
    serde_json::from_str(text).map_err(|e| json_error("metric space", e))
}

/// Parses and validates a metric-space document.
pub fn read_metric(text: &str) -> Result<FiniteMetricSpace, CliError> {
    let doc = parse_metric_document(text)?;
    Ok(FiniteMetricSpace::new(doc.labels(), doc.rows())?)
}

pub fn write_metric(m: &FiniteMetricSpace) -> String {
    serde_json::to_string(&MetricDocument::from_space(m)).expect("documents serialize")
}

/// A vertex given by index or label.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum VertexRef {
    Index(usize),
    Label(String),
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDocument {
    pub u: VertexRef,
    pub v: VertexRef,
    pub len: Exact,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDocument>,
}

fn resolve(labels: &[String], r: &VertexRef) -> Result<usize, CliError> {
    match r {
        VertexRef::Index(i) if *i < labels.len() => Ok(*i),
        VertexRef::Index(i) => Err(CliError::Usage(format!("edge endpoint {i} is not a vertex index"))),
        VertexRef::Label(s) => {
            labels.iter().position(|l| l == s).ok_or_else(|| CliError::Usage(format!("edge endpoint {s:?} is not a vertex label")))
        }
    }
}

pub fn read_graph(text: &str) -> Result<MetricGraph, CliError> {
    let doc: GraphDocument = serde_json::from_str(text).map_err(|e| json_error("metric graph", e))?;
    let edges = doc
        .edges
        .iter()
        .map(|e| Ok((resolve(&doc.vertices, &e.u)?, resolve(&doc.vertices, &e.v)?, e.len.0.clone())))
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(MetricGraph::new(doc.vertices, edges)?)
}

/// A graph point as `{"vertex": i}`, `{"edge": k, "t": "p/q"}`, or a string
/// that is a vertex label or `e<k>:<t>`.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum PointDocument {
    Vertex { vertex: usize },
    Edge { edge: usize, t: Exact },
    Text(String),
}

impl PointDocument {
    pub fn from_point(p: &GraphPoint) -> Self {
        match p {
            GraphPoint::Vertex(v) => PointDocument::Vertex { vertex: *v },
            GraphPoint::Edge { edge, t } => PointDocument::Edge { edge: *edge, t: Exact(t.clone()) },
        }
    }

    pub fn resolve(&self, g: &MetricGraph) -> Result<GraphPoint, CliError> {
        Ok(match self {
            PointDocument::Vertex { vertex } => g.vertex(*vertex)?,
            PointDocument::Edge { edge, t } => g.point(*edge, t.0.clone())?,
            PointDocument::Text(s) => g.parse_point(s)?,
        })
    }
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct TermDocument {
    pub coefficient: i64,
    pub points: Vec<PointDocument>,
}

/// Reads a list of `{coefficient, points}` terms as a formal sum.
pub fn read_chains(text: &str, g: &MetricGraph) -> Result<FormalSum<GraphPoint>, CliError> {
    let doc: Vec<TermDocument> = serde_json::from_str(text).map_err(|e| json_error("chain list", e))?;
    let mut out = FormalSum::zero();
    for (i, term) in doc.iter().enumerate() {
        if term.points.is_empty() {
            return Err(CliError::Usage(format!("term {i} has no points")));
        }
        let pts = term.points.iter().map(|p| p.resolve(g)).collect::<Result<Vec<_>, _>>()?;
        out.add_term(Chain::new(pts), term.coefficient);
    }
    Ok(out)
}
