//! Graphs with incompatibility systems and exact and heuristic searches for
//! compatible powers of Hamilton cycles.
//!
//! An incompatibility system forbids, at each vertex, some pairs of edges that
//! meet there. A subgraph is compatible when it contains no forbidden pair. This
//! crate provides the data model, the space-barrier construction, exact solvers
//! with independently checked witnesses, and an absorption-style embedder.

pub mod constructions;
pub mod error;
pub mod generators;
pub mod graph;
pub mod incompat;
pub mod pipeline;
pub mod search;

pub use constructions::{build_space_barrier, BarrierSpec, InsideGraph, SpaceBarrier};
pub use error::{Error, ReservoirProperty, Result};
pub use graph::{power_edges, BaseSequence, EdgeId, Graph, SequenceKind};
pub use incompat::{gen_color_system, gen_random_system, CompatibilityVerdict, IncompatibilitySystem, Violation};
pub use search::validate::CertificateError;
pub use search::{Budget, KTuple, PowerPathWitness, SolveOutcome, Status, Witness};
