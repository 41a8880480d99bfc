//! JSON instance files and solve reports.
//!
//! Two formats share one file shape, told apart by the `format` field:
//!
//! ```json
//! {"format": "combinatorial",
//!  "nodes": [{"id": 0, "kind": "vertex", "rotation": [0, 2]}, ...],
//!  "edges": [{"id": 0, "u": 0, "v": 1, "weight": "3/2", "segments": [0]}, ...],
//!  "constraints": [[0, 1]]}
//!
//! {"format": "geometric",
//!  "vertices": [{"id": 0, "x": 0, "y": "1/2"}, ...],
//!  "edges": [{"id": 0, "u": 0, "v": 1, "weight": 1, "bends": [[1, 1]]}, ...]}
//! ```
//!
//! Rotations list segment ids counterclockwise. Numbers are integers or
//! "p/q" strings; decimal literals are read exactly.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::embedding::{DrawnInstance, SegmentId};
use crate::error::{Error, Result};
use crate::geometry::{detect_crossings, GeometricDrawing, GeometricEdge, Point};
use crate::graph::{CutSolution, EdgeId, Multigraph, VertexId};
use crate::rational::{format_rational, parse_rational, Rational};

/// A rational written as a JSON integer when integral, else as "p/q".
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Exact(pub Rational);

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_integer() {
            s.serialize_i64(*self.0.numer())
        } else {
            s.serialize_str(&format_rational(&self.0))
        }
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = match serde_json::Value::deserialize(d)? {
            serde_json::Value::Number(n) => n.to_string(),
            serde_json::Value::String(s) => s,
            other => return Err(D::Error::custom(format!("expected a number or \"p/q\" string, got {other}"))),
        };
        parse_rational(&text).map(Exact).map_err(D::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Vertex,
    Crossing,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub id: u32,
    pub kind: NodeKind,
    pub rotation: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub id: u32,
    pub u: u32,
    pub v: u32,
    pub weight: Exact,
    pub segments: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombinatorialFile {
    pub nodes: Vec<NodeRecord>,
    pub edges: Vec<EdgeRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub constraints: Vec<[u32; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub id: u32,
    pub x: Exact,
    pub y: Exact,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolylineRecord {
    pub id: u32,
    pub u: u32,
    pub v: u32,
    pub weight: Exact,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bends: Vec<[Exact; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometricFile {
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<PolylineRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub constraints: Vec<[u32; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "format", rename_all = "lowercase")]
pub enum InstanceFile {
    Combinatorial(CombinatorialFile),
    Geometric(GeometricFile),
}

/// A parsed instance: its drawing plus any separation constraints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoadedInstance {
    pub drawing: DrawnInstance,
    pub constraints: Vec<(VertexId, VertexId)>,
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<InstanceFile> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance files always serialize");
        s.push('\n');
        s
    }

    pub fn constraints(&self) -> Vec<(VertexId, VertexId)> {
        let list = match self {
            InstanceFile::Combinatorial(c) => &c.constraints,
            InstanceFile::Geometric(g) => &g.constraints,
        };
        list.iter().map(|[a, b]| (VertexId(*a), VertexId(*b))).collect()
    }

    pub fn to_drawing(&self) -> Result<DrawnInstance> {
        match self {
            InstanceFile::Combinatorial(c) => combinatorial_drawing(c),
            InstanceFile::Geometric(g) => detect_crossings(&geometric_drawing(g)?),
        }
    }

    pub fn load(&self) -> Result<LoadedInstance> {
        let drawing = self.to_drawing()?;
        let constraints = self.constraints();
        for &(a, b) in &constraints {
            for v in [a, b] {
                if !drawing.graph().contains_vertex(v) {
                    return Err(Error::UnknownVertex(v));
                }
            }
        }
        Ok(LoadedInstance { drawing, constraints })
    }
}

fn combinatorial_drawing(c: &CombinatorialFile) -> Result<DrawnInstance> {
    let mut graph = Multigraph::new();
    let mut crossing_nodes = BTreeSet::new();
    let mut rotation = BTreeMap::new();
    for n in &c.nodes {
        let id = VertexId(n.id);
        if rotation.contains_key(&id) {
            return Err(Error::DuplicateId(n.id));
        }
        match n.kind {
            NodeKind::Vertex => graph.insert_vertex(id)?,
            NodeKind::Crossing => {
                crossing_nodes.insert(id);
            }
        }
        rotation.insert(id, n.rotation.iter().map(|&s| SegmentId(s)).collect());
    }
    let mut edge_segments = BTreeMap::new();
    for e in &c.edges {
        graph.insert_edge(EdgeId(e.id), VertexId(e.u), VertexId(e.v), e.weight.0)?;
        edge_segments.insert(EdgeId(e.id), e.segments.iter().map(|&s| SegmentId(s)).collect());
    }
    DrawnInstance::from_parts(graph, crossing_nodes, edge_segments, rotation)
}

fn geometric_drawing(g: &GeometricFile) -> Result<GeometricDrawing> {
    let mut out = GeometricDrawing::default();
    for v in &g.vertices {
        if out.vertices.insert(VertexId(v.id), Point::new(v.x.0, v.y.0)).is_some() {
            return Err(Error::DuplicateId(v.id));
        }
    }
    let mut seen = BTreeSet::new();
    for e in &g.edges {
        if !seen.insert(e.id) {
            return Err(Error::DuplicateId(e.id));
        }
        out.edges.push(GeometricEdge {
            id: EdgeId(e.id),
            u: VertexId(e.u),
            v: VertexId(e.v),
            weight: e.weight.0,
            bends: e.bends.iter().map(|[x, y]| Point::new(x.0, y.0)).collect(),
        });
    }
    Ok(out)
}

/// The combinatorial file describing `d`.
pub fn drawing_to_file(d: &DrawnInstance, constraints: &[(VertexId, VertexId)]) -> InstanceFile {
    let mut nodes: Vec<NodeRecord> = d
        .rotations()
        .map(|(n, rot)| NodeRecord {
            id: n.0,
            kind: if d.is_crossing(n) { NodeKind::Crossing } else { NodeKind::Vertex },
            rotation: rot.iter().map(|x| x.segment.0).collect(),
        })
        .collect();
    nodes.sort_by_key(|n| n.id);
    let edges = d
        .graph()
        .edges()
        .map(|(e, edge)| EdgeRecord {
            id: e.0,
            u: edge.u.0,
            v: edge.v.0,
            weight: Exact(edge.weight),
            segments: d.edge_segments(e).iter().map(|s| s.0).collect(),
        })
        .collect();
    InstanceFile::Combinatorial(CombinatorialFile {
        nodes,
        edges,
        constraints: constraints.iter().map(|(a, b)| [a.0, b.0]).collect(),
    })
}

pub fn read_instance(path: &Path) -> Result<InstanceFile> {
    InstanceFile::parse(&fs::read_to_string(path)?)
}

pub fn write_instance(path: &Path, file: &InstanceFile) -> Result<()> {
    Ok(fs::write(path, file.to_json())?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportStats {
    pub n: usize,
    pub k: usize,
    pub branches: u64,
    pub infeasible_branches: u64,
    #[serde(with = "crate::rational::as_text")]
    pub ledger_total: Rational,
    pub wall_ms: u64,
}

/// What `solve` prints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveReport {
    #[serde(with = "crate::rational::as_text")]
    pub value: Rational,
    pub partition: BTreeMap<u32, u8>,
    pub stats: ReportStats,
}

impl SolveReport {
    pub fn new(sol: &CutSolution, wall_ms: u64) -> SolveReport {
        SolveReport {
            value: sol.value,
            partition: sol.side.iter().map(|(v, &s)| (v.0, u8::from(s))).collect(),
            stats: ReportStats {
                n: sol.stats.vertices,
                k: sol.stats.crossings,
                branches: sol.stats.branches,
                infeasible_branches: sol.stats.infeasible_branches,
                ledger_total: sol.stats.ledger_total,
                wall_ms,
            },
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }
}
