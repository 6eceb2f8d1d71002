//! Shared-memory parallel community detection for weighted undirected graphs.
//!
//! Algorithms:
//!
//! * [`plp`]: label propagation with active-node tracking and an update
//!   threshold.
//! * [`louvain`]: the Louvain method with a parallel move phase and parallel
//!   coarsening, optionally refining every level after prolongation.
//! * [`ensemble`]: several base detectors combined into core communities that
//!   a final detector then solves on the contracted graph.
//!
//! [`quality`] scores partitions (modularity, coverage, graph-structural
//! Rand index), [`io`] reads and writes METIS and edge-list files, and
//! [`gen`] draws planted partition graphs with known ground truth.

pub mod detector;
pub mod ensemble;
pub mod error;
pub mod gen;
pub mod graph;
pub mod io;
pub mod louvain;
pub mod parallel;
pub mod partition;
pub mod plp;
pub mod quality;
pub mod report;

pub use detector::{CommunityDetector, SingletonDetector};
pub use ensemble::{run_epp, Combiner, EnsembleConfig};
pub use error::{Error, Result};
pub use graph::{Edge, EdgeList, Graph, NodeId};
pub use louvain::{run_plm, run_plmr, LouvainConfig};
pub use parallel::Workers;
pub use partition::{CommunityId, Partition};
pub use plp::{run_plp, PlpConfig};
pub use report::RunReport;
