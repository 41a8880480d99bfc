//! Exact Max-Cut for weighted multigraphs drawn with few crossings.

pub mod branching;
pub mod dual;
pub mod embedding;
pub mod error;
pub mod gadgets;
pub mod geometry;
pub mod graph;
pub mod io;
pub mod matching;
pub mod oracle;
pub mod pipeline;
pub mod recovery;
pub mod rational;

pub use embedding::DrawnInstance;
pub use error::{Diagnostic, Error, Result};
pub use graph::{Bipartition, CutSolution, EdgeId, Multigraph, SolveStats, VertexId};
pub use rational::Rational;
pub use io::{InstanceFile, LoadedInstance, SolveReport};
pub use pipeline::{solve, SolveOptions};
