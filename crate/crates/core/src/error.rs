use alloc::string::String;

use crate::metric::MetricViolation;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not a metric: {0}")]
    Metric(MetricViolation),
    #[error("point index {index} out of range for a space of {len} points")]
    PointOutOfRange { index: usize, len: usize },
    #[error("chain is not proper: {0}")]
    ImproperChain(String),
    #[error("expected a chain with {expected} entries, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("face {0} of a boundary is missing from the target basis")]
    InconsistentBases(String),
    #[error("simplicial complex A(a, b) is undefined for a = b")]
    EqualEndpoints,
    #[error("complex B requires length {length} > d(a, b) = {distance}")]
    LengthNotAboveDistance { length: String, distance: String },
    #[error("betweenness fails for {0}")]
    NotBetween(String),
    #[error("metric graph: {0}")]
    Graph(String),
    #[error("geodesic from {from} to {to} is not unique ({count} found)")]
    NonUniqueGeodesic { from: String, to: String, count: usize },
    #[error("non-branching fails between {from} and {to}")]
    NonBranching { from: String, to: String },
    #[error("inadmissible configuration: {0}")]
    Inadmissible(String),
    #[error("chain does not fit the reference geodesic: {0}")]
    ChainMismatch(String),
    #[error("spectral sequence consistency: {0}")]
    Filtration(String),
}
