//! Exact random-walk quantities, effective resistances and circle packings
//! on planar graphs, together with the machinery to check cover-time bounds
//! for bounded-degree planar graphs empirically.
//!
//! * [`graph`]: simple graphs, rotation systems, test families and
//!   triangulation completion.
//! * [`packing`]: circle packings of triangulations with three unit outer
//!   disks.
//! * [`electrical`]: effective resistance, Dirichlet energy and variational
//!   lower bounds.
//! * [`walks`]: hitting, commute and difference times, Matthews bounds and
//!   Monte Carlo cover times.
//! * [`separation`]: selection of vertex sets with pairwise resistance
//!   growing like `log |W|`, driven by packing radii.
//! * [`experiments`]: end-to-end runs used by the CLI and acceptance suite.

// `!(x <= tol)` style comparisons are used on purpose so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod electrical;
pub mod error;
pub mod experiments;
pub mod graph;
mod linalg;
pub mod packing;
pub mod separation;
pub mod walks;

pub use electrical::{ElectricalSystem, PotentialFunction, SolveMethod};
pub use error::{Error, Result};
pub use graph::{build_graph, degrees, generate, triangulate, Family, Graph, PlanarGraph, Triangulation};
pub use packing::{compute_packing, diagnostics, CirclePacking, PackingDiagnostics};
pub use separation::{select_separated, SeparatedSet, SeparationConfig};
pub use walks::{CoverTimeEstimate, MatthewsBounds, WalkTimes};

/// Crate version embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
