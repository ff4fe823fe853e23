//! Feedback vertex set for geometric intersection graphs of similarly sized
//! fat objects.
//!
//! The pipeline peels degree-one vertices, partitions the graph into
//! connected classes that are unions of few cliques, contracts the classes
//! into a weighted graph, builds a tree decomposition of that graph through
//! its blowup and finally runs a connectivity dynamic program over the
//! decomposition in which every class keeps at most two vertices per clique.

pub mod error;
pub mod geom;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod partition;
pub mod solver;
pub mod sweep;
pub mod td;
mod unionfind;

pub use error::{Error, Result};
pub use geom::{FatObject, GridClassification, ObjectSet, Shape};
pub use graph::{Graph, PeelResult};
pub use oracle::OracleBudget;
pub use partition::{ContractedGraph, KappaPartition, PartitionReport};
pub use solver::{Certificate, Mode, SolveConfig, Solution, Verdict};
pub use td::{BlowupGraph, NiceDecomposition, NiceKind, TreeDecomposition};
