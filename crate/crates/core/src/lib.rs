//! Finite models of hyperbolic spaces: metrics, cones, cone-offs, group
//! actions and Rips homology, plus the workspace format and command layer
//! used by the `coneoff` binary.

pub mod commands;
pub mod cone;
pub mod coneoff;
pub mod document;
pub mod error;
pub mod generate;
pub mod group;
pub mod metric;
pub mod report;
pub mod rips;
pub mod subspace;

pub use cone::{ConePoint, ConeSpace};
pub use coneoff::{Chain, ConeOffPoint, ConeOffSpace};
pub use error::{Error, Result};
pub use group::{GroupAction, RotationFamily, Word};
pub use metric::{DiscreteGeodesic, Edge, FiniteMetricSpace, FourPointMode, PointId, WeightedGraph, SLACK};
pub use rips::RipsComplex;
pub use subspace::{Overlap, Subspace};
