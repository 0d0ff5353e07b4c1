//! Magnitude homology of finite metric spaces and metric graphs, computed
//! with exact rational arithmetic and integral Smith normal forms.
#![no_std]

extern crate alloc;

pub mod chain;
pub mod corpus;
pub mod error;
pub mod graph;
pub mod homology;
pub mod lattice;
pub mod matrix;
pub mod metric;
pub mod rational;
pub mod simplicial;
pub mod snf;
pub mod spectral;
pub mod unionfind;

pub use chain::{between, boundary, boundary_chain, chain_length, frame, is_four_cut, smoothness_count, Chain, FormalSum};
pub use error::Error;
pub use homology::{enumerate_chains, homology, homology_total, length_spectrum, ChainBasis, HomologyGroup};
pub use matrix::IntegerMatrix;
pub use metric::{validate_metric, FiniteMetricSpace, Metric, MetricViolation, PointId};
pub use rational::{format_rational, parse_rational, Rational};
pub use snf::{smith_normal_form, SmithForm};
