use thiserror::Error;

use crate::graph::{EdgeId, VertexId};
use crate::rational::Rational;

/// A violated drawing invariant, with its location.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Diagnostic {
    #[error("crossing node {node} has degree {degree}, expected 4")]
    CrossingDegree { node: VertexId, degree: usize },
    #[error("crossing node {node}: segments of edge {edge} are not opposite in the rotation")]
    CrossingNotOpposite { node: VertexId, edge: EdgeId },
    #[error("crossing node {node}: edge {edge} crosses itself")]
    SelfCrossing { node: VertexId, edge: EdgeId },
    #[error("segment {segment}: end missing from or repeated in the rotation of node {node}")]
    DanglingSegmentEnd { segment: u32, node: VertexId },
    #[error("node {node}: rotation refers to unknown or misplaced segment end {segment}")]
    ForeignSegmentEnd { segment: u32, node: VertexId },
    #[error("edge {edge}: segments do not form a path from {u} to {v}")]
    BrokenEdgePath { edge: EdgeId, u: VertexId, v: VertexId },
    #[error("edge {edge}: interior node {node} is not a crossing node")]
    InteriorVertex { edge: EdgeId, node: VertexId },
    #[error("component containing node {node}: V - E + F = {v} - {e} + {f} != 2")]
    Euler { node: VertexId, v: usize, e: usize, f: usize },
    #[error("unknown node {0}")]
    UnknownNode(VertexId),
    #[error("crossing node {0} is also a graph vertex")]
    CrossingIsVertex(VertexId),
    #[error("degenerate geometry: {0}")]
    Degenerate(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("duplicate id {0}")]
    DuplicateId(u32),
    #[error("cannot contract vertex {0} with itself")]
    SelfContraction(VertexId),
    #[error("vertex {0} has no side assigned")]
    Unassigned(VertexId),
    #[error("invalid drawing: {0}")]
    Drawing(#[from] Diagnostic),
    #[error("invalid crossing split for edge {edge}: {reason}")]
    InvalidSplit { edge: EdgeId, reason: String },
    #[error("drawing is not 1-planar (edge {0} has more than one crossing)")]
    NotOnePlanar(EdgeId),
    #[error("crossing {0} has not been preprocessed")]
    NotPreprocessed(VertexId),
    #[error("face of length {0} cannot be triangulated")]
    FaceTooSmall(usize),
    #[error("pseudo-face structure violated: {0}")]
    PseudoFace(String),
    #[error("b-factor instance is infeasible: {0}")]
    Infeasible(String),
    #[error("inconsistent 2-coloring at edge {0}")]
    InconsistentColoring(EdgeId),
    #[error("transform log does not match the instance: {0}")]
    LogMismatch(String),
    #[error("verification failed: reported {reported}, recomputed {recomputed}")]
    Verification { reported: Rational, recomputed: Rational },
    #[error("oracle bound exceeded: {what} = {actual} > {limit}")]
    OracleBound { what: &'static str, actual: usize, limit: usize },
    #[error("arithmetic overflow while {0}")]
    Overflow(&'static str),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
