//! Exact constructions and certificates for bilipschitz embeddings of
//! recursive graph families.
//!
//! Everything metric is kept exact: shortest-path distances are integers in a
//! per-graph unit, coordinates are arbitrary precision rationals, and every
//! inequality is decided without tolerance. Floating point only shows up in
//! the spectral diagnostics of [`expander`] and in convenience fields of JSON
//! reports.
//!
//! Module map:
//!
//! * [`graph`], [`metric`], [`points`], [`distortion`]: graphs, shortest-path
//!   metrics, normed point sets and bilipschitz constants.
//! * [`families`]: diamond, Laakso, Hamming, lattice and tree generators with
//!   IDs that are stable across recursion levels.
//! * [`gadget`]: the degree-3 reduction (trees at vertices, paths on edges)
//!   and its distance sandwich.
//! * [`cube_l1`]: integer `l1` coordinates for gadgetized Hamming cubes.
//! * [`expander`]: planting an isometric copy inside a regular graph, plus
//!   expansion diagnostics.
//! * [`witness`]: delta-trees, delta-semitrees and the quaternary martingale.
//! * [`io`]: the JSON file formats.

pub mod cube_l1;
pub mod distortion;
pub mod error;
pub mod expander;
pub mod families;
pub mod gadget;
pub mod graph;
pub mod io;
pub mod metric;
pub mod points;
pub mod rational;
pub mod witness;

pub use distortion::{distortion, embedding_distortion, is_isometric, DistortionReport, VertexMap};
pub use error::{Error, Result};
pub use graph::Graph;
pub use metric::{apsp, ScaledMetric};
pub use points::{point_metric, DistanceTable, Norm, PointSet};
pub use rational::Rational;

/// Default cap on the number of vertices any generator will produce.
pub const DEFAULT_VERTEX_CAP: usize = 10_000_000;
