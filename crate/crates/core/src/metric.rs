//! Finite metric spaces with exact rational distances.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::error::Error;
use crate::rational::{format_rational, is_positive, Rational};

/// Anything that can measure exact distances between its points.
///
/// Chains, betweenness and boundaries are defined over this trait so the same
/// code runs on finite spaces and on points of a metric graph.
pub trait Metric {
    type Point: Clone + Ord + fmt::Debug;

    fn distance(&self, x: &Self::Point, y: &Self::Point) -> Rational;
}

/// Index of a point in a [`FiniteMetricSpace`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointId(pub usize);

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// First violated metric axiom, with witnessing indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MetricViolation {
    NotSquare { rows: usize, row: usize, cols: usize },
    LabelCount { labels: usize, points: usize },
    NonzeroDiagonal { i: usize },
    Asymmetric { i: usize, j: usize },
    NonPositive { i: usize, j: usize },
    Triangle { i: usize, j: usize, k: usize },
}

impl fmt::Display for MetricViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotSquare { rows, row, cols } => {
                write!(f, "row {row} has {cols} entries but there are {rows} rows")
            }
            Self::LabelCount { labels, points } => {
                write!(f, "{labels} labels for {points} points")
            }
            Self::NonzeroDiagonal { i } => write!(f, "nonzero diagonal at ({i},{i})"),
            Self::Asymmetric { i, j } => write!(f, "asymmetry at ({i},{j})"),
            Self::NonPositive { i, j } => write!(f, "nonpositive distance at ({i},{j})"),
            Self::Triangle { i, j, k } => {
                write!(f, "triangle inequality at ({i},{k}) via {j}")
            }
        }
    }
}

/// Checks the metric axioms on a candidate matrix and reports the first failure.
pub fn validate_metric(dist: &[Vec<Rational>]) -> Result<(), MetricViolation> {
    let n = dist.len();
    for (row, entries) in dist.iter().enumerate() {
        if entries.len() != n {
            return Err(MetricViolation::NotSquare { rows: n, row, cols: entries.len() });
        }
    }
    for i in 0..n {
        if !dist[i][i].is_zero() {
            return Err(MetricViolation::NonzeroDiagonal { i });
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if dist[i][j] != dist[j][i] {
                return Err(MetricViolation::Asymmetric { i, j });
            }
            if !is_positive(&dist[i][j]) {
                return Err(MetricViolation::NonPositive { i, j });
            }
        }
    }
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                if dist[i][k] > &dist[i][j] + &dist[j][k] {
                    return Err(MetricViolation::Triangle { i, j, k });
                }
            }
        }
    }
    Ok(())
}

/// A finite set of labelled points with an exact distance matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<Rational>,
    n: usize,
}

impl FiniteMetricSpace {
    pub fn new(labels: Vec<String>, dist: Vec<Vec<Rational>>) -> Result<Self, Error> {
        validate_metric(&dist).map_err(Error::Metric)?;
        if labels.len() != dist.len() {
            return Err(Error::Metric(MetricViolation::LabelCount {
                labels: labels.len(),
                points: dist.len(),
            }));
        }
        let n = dist.len();
        Ok(Self { labels, dist: dist.into_iter().flatten().collect(), n })
    }

    /// Labels the points `0..n`.
    pub fn unlabeled(dist: Vec<Vec<Rational>>) -> Result<Self, Error> {
        let labels = (0..dist.len()).map(|i| alloc::format!("{i}")).collect();
        Self::new(labels, dist)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, p: PointId) -> &str {
        &self.labels[p.0]
    }

    pub fn points(&self) -> impl Iterator<Item = PointId> + Clone {
        (0..self.n).map(PointId)
    }

    pub fn point_by_label(&self, label: &str) -> Option<PointId> {
        self.labels.iter().position(|l| l == label).map(PointId)
    }

    pub fn check_point(&self, p: PointId) -> Result<PointId, Error> {
        if p.0 < self.n {
            Ok(p)
        } else {
            Err(Error::PointOutOfRange { index: p.0, len: self.n })
        }
    }

    #[inline]
    pub fn d(&self, x: PointId, y: PointId) -> &Rational {
        &self.dist[x.0 * self.n + y.0]
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.dist.chunks(self.n.max(1)).take(self.n).map(|r| r.to_vec()).collect()
    }

    /// Applies a permutation: point `i` of `self` becomes point `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let n = self.n;
        let mut dist = alloc::vec![Rational::zero(); n * n];
        let mut labels = alloc::vec![String::new(); n];
        for i in 0..n {
            labels[perm[i]] = self.labels[i].clone();
            for j in 0..n {
                dist[perm[i] * n + perm[j]] = self.dist[i * n + j].clone();
            }
        }
        Self { labels, dist, n }
    }

    /// Subspace on the given points, in the given order.
    pub fn subspace(&self, pts: &[PointId]) -> Self {
        let labels = pts.iter().map(|&p| self.labels[p.0].clone()).collect();
        let dist = pts
            .iter()
            .flat_map(|&x| pts.iter().map(move |&y| (x, y)))
            .map(|(x, y)| self.d(x, y).clone())
            .collect();
        Self { labels, dist, n: pts.len() }
    }

    pub fn describe(&self, p: PointId) -> String {
        self.labels[p.0].clone()
    }

    pub fn distance_text(&self, x: PointId, y: PointId) -> String {
        format_rational(self.d(x, y))
    }
}

impl Metric for FiniteMetricSpace {
    type Point = PointId;

    fn distance(&self, x: &PointId, y: &PointId) -> Rational {
        self.d(*x, *y).clone()
    }
}
