//! Most degree-central shortest paths.
//!
//! The centrality of a path is the number of vertices adjacent to it but not
//! on it. [`mdcsp`] finds, over all vertex pairs of an undirected unweighted
//! graph, a shortest path maximizing that count. [`oracle`] is an exhaustive
//! reference, [`weighted`] covers integer and continuous edge weights,
//! [`reduction`] builds and checks the Max 2-SAT hardness gadget, and
//! [`generators`], [`io`] and [`bench`] drive experiments.

pub mod bench;
pub mod error;
pub mod generators;
pub mod graph;
pub mod io;
pub mod mdcsp;
pub mod oracle;
pub mod par;
pub mod reduction;
pub mod vertex_set;
pub mod weighted;

pub use error::{Error, Result};
pub use graph::{Graph, GraphStats, NeighborRule, Path};
pub use mdcsp::{CentralityResult, Recurrence, SolveOptions};
pub use par::Workers;
pub use vertex_set::VertexSet;
