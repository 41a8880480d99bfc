//! From a constrained leaf to a maximum-weight b-factor instance.
//!
//! Normal faces are triangulated with zero-weight chords and become dual
//! vertices with b = 2; each pseudo-face (the four triangles around a kept
//! crossing) becomes a single dual vertex with b = 3.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use crate::branching::ConstrainedInstance;
use crate::embedding::{Dart, Face};
use crate::error::{Error, Result};
use crate::gadgets::{normalize_in_place, TransformRecord};
use crate::graph::{EdgeId, Multigraph, VertexId};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DualVertexOrigin {
    /// A normal face, by its boundary walk.
    Face(Vec<Dart>),
    /// Index into the leaf's pseudo-faces.
    PseudoFace(usize),
    /// Instances built directly from a graph.
    Free,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualEdgeOrigin {
    Primal(EdgeId),
    /// The self-loop every dual vertex carries.
    VertexLoop(VertexId),
    Free,
}

/// Dual multigraph with degree targets and back-maps to the primal leaf.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualBFactorInstance {
    pub graph: Multigraph,
    pub b: BTreeMap<VertexId, i64>,
    pub vertex_origin: BTreeMap<VertexId, DualVertexOrigin>,
    pub edge_origin: BTreeMap<EdgeId, DualEdgeOrigin>,
    /// Dual vertex of each pseudo-face, by pseudo-face index.
    pub pseudo_vertices: Vec<VertexId>,
}

impl DualBFactorInstance {
    /// A bare b-factor instance without primal back-maps.
    pub fn from_graph(graph: Multigraph, b: BTreeMap<VertexId, i64>) -> Self {
        let vertex_origin = graph.vertices().map(|v| (v, DualVertexOrigin::Free)).collect();
        let edge_origin = graph.edges().map(|(e, _)| (e, DualEdgeOrigin::Free)).collect();
        DualBFactorInstance { graph, b, vertex_origin, edge_origin, pseudo_vertices: Vec::new() }
    }

    pub fn max_degree(&self) -> usize {
        self.graph.degrees().values().copied().max().unwrap_or(0)
    }

    /// The dual edge standing for primal edge `e`, if any.
    pub fn dual_of(&self, e: EdgeId) -> Option<EdgeId> {
        self.edge_origin
            .iter()
            .find(|(_, o)| **o == DualEdgeOrigin::Primal(e))
            .map(|(d, _)| *d)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    Feasible,
    Infeasible(String),
}

/// Rejects instances where some b is negative or exceeds the degree.
pub fn check_feasibility(inst: &DualBFactorInstance) -> Feasibility {
    let degs = inst.graph.degrees();
    for (&v, &b) in &inst.b {
        let d = degs.get(&v).copied().unwrap_or(0) as i64;
        if b < 0 {
            return Feasibility::Infeasible(format!("b({v}) = {b} < 0"));
        }
        if b > d {
            return Feasibility::Infeasible(format!("b({v}) = {b} > degree {d}"));
        }
    }
    Feasibility::Feasible
}

/// Pseudo-face dual weights (bc*, cd*, da*, loop) for diagonal weights
/// alpha = w(ac) and beta = w(bd).
pub fn pseudo_face_weights(alpha: Rational, beta: Rational) -> [Rational; 4] {
    let three = Rational::from_integer(3);
    [
        (beta - alpha * 2) / three,
        (alpha + beta) / three,
        (alpha - beta * 2) / three,
        (alpha * 2 + beta * 2) / three,
    ]
}

fn touches_crossing(leaf: &ConstrainedInstance, f: &Face) -> bool {
    f.boundary.iter().any(|&d| leaf.drawing.is_crossing(leaf.drawing.node_of(d)))
}

/// Fans every normal face of length > 3 from its smallest-id vertex with
/// zero-weight chords. Faces around kept crossings are left alone.
pub fn triangulate(leaf: &ConstrainedInstance) -> Result<ConstrainedInstance> {
    let mut leaf = leaf.clone();
    triangulate_in_place(&mut leaf)?;
    Ok(leaf)
}

pub(crate) fn triangulate_in_place(leaf: &mut ConstrainedInstance) -> Result<()> {
    let faces = leaf.drawing.faces()?;
    let mut added = Vec::new();
    for f in &faces {
        if touches_crossing(leaf, f) {
            if f.len() != 3 {
                return Err(Error::PseudoFace(format!("region around a crossing has length {}", f.len())));
            }
            continue;
        }
        let l = f.len();
        if l < 3 {
            return Err(Error::FaceTooSmall(l));
        }
        if l == 3 {
            continue;
        }
        let d = &mut leaf.drawing;
        let start = (0..l).min_by_key(|&i| (d.node_of(f.boundary[i]), i)).expect("face is not empty");
        let walk: Vec<Dart> = (0..l).map(|i| f.boundary[(start + i) % l]).collect();
        let mut corner = walk[0];
        for &target in &walk[2..l - 1] {
            let e = d.add_edge_at_corners(corner, target, Rational::zero())?;
            added.push((e, d.node_of(corner), d.node_of(target)));
            corner = Dart::tail(d.edge_segments(e)[0]);
        }
    }
    if !added.is_empty() {
        leaf.log.push(TransformRecord::AddZeroEdges { edges: added });
    }
    Ok(())
}

/// Normalizes short faces, then triangulates: the leaf handed to the dual.
pub fn prepare_leaf(leaf: &ConstrainedInstance) -> Result<ConstrainedInstance> {
    let mut leaf = leaf.clone();
    let protected = leaf.protected_edges();
    let (mut ledger, mut log) = (std::mem::take(&mut leaf.ledger), std::mem::take(&mut leaf.log));
    normalize_in_place(&mut leaf.drawing, &protected, &mut ledger, &mut log)?;
    leaf.ledger = ledger;
    leaf.log = log;
    triangulate_in_place(&mut leaf)?;
    Ok(leaf)
}

/// Builds the dual of a triangulated leaf.
pub fn build_dual(leaf: &ConstrainedInstance) -> Result<DualBFactorInstance> {
    let d = &leaf.drawing;
    let faces = d.faces()?;
    let mut g = Multigraph::new();
    let mut b = BTreeMap::new();
    let mut vertex_origin = BTreeMap::new();
    let mut edge_origin = BTreeMap::new();

    let pseudo_of: BTreeMap<VertexId, usize> =
        leaf.pseudo_faces.iter().enumerate().map(|(i, p)| (p.crossing, i)).collect();
    let mut pseudo_vertices = Vec::with_capacity(leaf.pseudo_faces.len());
    for (i, pf) in leaf.pseudo_faces.iter().enumerate() {
        let v = g.add_vertex();
        b.insert(v, 3);
        vertex_origin.insert(v, DualVertexOrigin::PseudoFace(i));
        let loop_w = pseudo_face_weights(pf.alpha, pf.beta)[3];
        let l = g.add_edge(v, v, loop_w)?;
        edge_origin.insert(l, DualEdgeOrigin::VertexLoop(v));
        pseudo_vertices.push(v);
    }

    let mut face_vertex: HashMap<Dart, VertexId> = HashMap::new();
    let mut is_pseudo: HashMap<Dart, bool> = HashMap::new();
    for f in &faces {
        let crossing = f.boundary.iter().map(|&x| d.node_of(x)).find(|&n| d.is_crossing(n));
        let v = match crossing {
            Some(x) => {
                let i = *pseudo_of
                    .get(&x)
                    .ok_or_else(|| Error::PseudoFace(format!("crossing {x} has no pseudo-face")))?;
                pseudo_vertices[i]
            }
            None => {
                if f.len() != 3 {
                    return Err(Error::FaceTooSmall(f.len()));
                }
                let v = g.add_vertex();
                b.insert(v, 2);
                vertex_origin.insert(v, DualVertexOrigin::Face(f.boundary.clone()));
                let l = g.add_edge(v, v, Rational::zero())?;
                edge_origin.insert(l, DualEdgeOrigin::VertexLoop(v));
                v
            }
        };
        for &x in &f.boundary {
            face_vertex.insert(x, v);
            is_pseudo.insert(x, crossing.is_some());
        }
    }

    // role of each pseudo-face edge: 0 = ab (constrained), 1..=3 = bc, cd, da
    let mut role: BTreeMap<EdgeId, (usize, usize)> = BTreeMap::new();
    let mut diagonal = std::collections::BTreeSet::new();
    for (i, pf) in leaf.pseudo_faces.iter().enumerate() {
        for (j, &e) in pf.cycle_edges.iter().enumerate() {
            role.insert(e, (i, j));
        }
        diagonal.insert(pf.diagonals.0);
        diagonal.insert(pf.diagonals.1);
    }

    for (e, edge) in d.graph().edges() {
        if diagonal.contains(&e) {
            continue;
        }
        let segs = d.edge_segments(e);
        if segs.len() != 1 {
            return Err(Error::PseudoFace(format!("edge {e} is crossed outside a pseudo-face")));
        }
        let (t, h) = (Dart::tail(segs[0]), Dart::head(segs[0]));
        match role.get(&e) {
            Some(&(i, j)) => {
                let (inner, outer) = if is_pseudo[&t] { (t, h) } else { (h, t) };
                if !is_pseudo[&inner] || is_pseudo[&outer] {
                    return Err(Error::PseudoFace(format!("edge {e} is shared by two pseudo-faces")));
                }
                let f = face_vertex[&outer];
                if j == 0 {
                    *b.get_mut(&f).expect("face vertex") -= 1;
                } else {
                    let pf = &leaf.pseudo_faces[i];
                    let w = pseudo_face_weights(pf.alpha, pf.beta)[j - 1];
                    let de = g.add_edge(pseudo_vertices[i], f, w)?;
                    edge_origin.insert(de, DualEdgeOrigin::Primal(e));
                }
            }
            None => {
                let de = g.add_edge(face_vertex[&t], face_vertex[&h], edge.weight)?;
                edge_origin.insert(de, DualEdgeOrigin::Primal(e));
            }
        }
    }
    Ok(DualBFactorInstance { graph: g, b, vertex_origin, edge_origin, pseudo_vertices })
}
