//! The 2^k branching over preprocessed crossings.
//!
//! For a crossing with corners a, b, c, d (counterclockwise, a and c on one
//! edge) every cut either keeps a and b together or separates them. The
//! first case contracts a and b and drops the crossing; the second draws a
//! zero-weight quadrilateral around the crossing and requires a and b to be
//! separated.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::embedding::{Dart, DrawnInstance, NodeId, Segment};
use crate::error::{Error, Result};
use crate::gadgets::{crossing_corners, OffsetLedger, TransformLog, TransformRecord};
use crate::graph::{EdgeId, VertexId};
use crate::rational::Rational;

/// The zero-weight quadrilateral abcd around a surviving crossing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoFace {
    pub crossing: NodeId,
    pub corners: [VertexId; 4],
    /// ab, bc, cd, da; ab is the constrained edge.
    pub cycle_edges: [EdgeId; 4],
    /// ac and bd.
    pub diagonals: (EdgeId, EdgeId),
    pub alpha: Rational,
    pub beta: Rational,
}

impl PseudoFace {
    pub fn constrained_edge(&self) -> EdgeId {
        self.cycle_edges[0]
    }

    pub fn constraint(&self) -> (VertexId, VertexId) {
        (self.corners[0], self.corners[1])
    }
}

/// A drawn instance together with the pseudo-faces and separation
/// constraints introduced by branching, and the branch-local ledger and
/// log.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstrainedInstance {
    pub drawing: DrawnInstance,
    pub pseudo_faces: Vec<PseudoFace>,
    pub constraints: Vec<(VertexId, VertexId)>,
    pub ledger: OffsetLedger,
    pub log: TransformLog,
    /// Bit i set: the i-th crossing (ascending node id) was kept.
    pub mask: u64,
}

impl ConstrainedInstance {
    pub fn root(drawing: DrawnInstance) -> Self {
        ConstrainedInstance {
            drawing,
            pseudo_faces: Vec::new(),
            constraints: Vec::new(),
            ledger: OffsetLedger::new(),
            log: TransformLog::new(),
            mask: 0,
        }
    }

    /// Crossings not yet enclosed by a pseudo-face, ascending.
    pub fn open_crossings(&self) -> Vec<NodeId> {
        let kept: BTreeSet<NodeId> = self.pseudo_faces.iter().map(|p| p.crossing).collect();
        self.drawing.crossing_nodes().iter().copied().filter(|x| !kept.contains(x)).collect()
    }

    /// Cycle edges and diagonals of all pseudo-faces.
    pub fn protected_edges(&self) -> BTreeSet<EdgeId> {
        self.pseudo_faces
            .iter()
            .flat_map(|p| p.cycle_edges.iter().copied().chain([p.diagonals.0, p.diagonals.1]))
            .collect()
    }
}

/// Both children of `inst` at crossing `x`: (a and b merged, a and b
/// separated).
pub fn branch_crossing(inst: &ConstrainedInstance, x: NodeId) -> Result<(ConstrainedInstance, ConstrainedInstance)> {
    let mut merged = inst.clone();
    contract_crossing(&mut merged, x)?;
    let mut kept = inst.clone();
    keep_crossing(&mut kept, x)?;
    Ok((merged, kept))
}

/// Merges corners a and b into a fresh vertex whose rotation is
/// (out_a, out_b, towards c, towards d) and deletes the crossing node.
pub(crate) fn contract_crossing(inst: &mut ConstrainedInstance, x: NodeId) -> Result<()> {
    let d = &mut inst.drawing;
    let [a, b, _, _] = crossing_corners(d, x)?;
    let rot: Vec<Dart> = d.rotation(x).to_vec();
    let outer = |d: &DrawnInstance, p: VertexId, towards_x: Dart| -> Dart {
        *d.rotation(p).iter().find(|&&y| y != towards_x).expect("corner has degree 2")
    };
    let out_a = outer(d, a, rot[0].twin());
    let out_b = outer(d, b, rot[1].twin());

    let v = d.fresh_node_id();
    d.graph.contract_into(a, b, v)?;
    for dart in [rot[0], rot[1]] {
        let e = d.edge_of(dart);
        d.segments.remove(&dart.segment);
        d.edge_segments.get_mut(&e).expect("edge has segments").retain(|&s| s != dart.segment);
    }
    for dart in [rot[2], rot[3], out_a, out_b] {
        set_node(d.segments.get_mut(&dart.segment).expect("segment exists"), dart, v);
    }
    d.rotation.remove(&x);
    d.rotation.remove(&a);
    d.rotation.remove(&b);
    d.rotation.insert(v, vec![out_a, out_b, rot[2], rot[3]]);
    d.crossing_nodes.remove(&x);
    d.validate()?;
    inst.log.push(TransformRecord::Contract { a, b, merged: v });
    Ok(())
}

fn set_node(seg: &mut Segment, dart: Dart, n: NodeId) {
    match dart.end {
        crate::embedding::End::Tail => seg.tail = n,
        crate::embedding::End::Head => seg.head = n,
    }
}

/// Adds the zero-weight cycle ab, bc, cd, da around `x` and records the
/// pseudo-face and the constraint that a and b are separated.
pub(crate) fn keep_crossing(inst: &mut ConstrainedInstance, x: NodeId) -> Result<()> {
    let d = &mut inst.drawing;
    let corners = crossing_corners(d, x)?;
    let rot: Vec<Dart> = d.rotation(x).to_vec();
    let alpha = d.graph.edge(d.edge_of(rot[0]))?.weight;
    let beta = d.graph.edge(d.edge_of(rot[1]))?.weight;
    let diagonals = (d.edge_of(rot[0]), d.edge_of(rot[1]));
    let mut cycle = [EdgeId(0); 4];
    for i in 0..4 {
        let (p, q) = (corners[i], corners[(i + 1) % 4]);
        let (px, qx) = (rot[i].twin(), rot[(i + 1) % 4].twin());
        let e = d.graph.add_edge(p, q, Rational::zero())?;
        let s = d.fresh_segment();
        d.segments.insert(s, Segment { edge: e, tail: p, head: q });
        d.edge_segments.insert(e, vec![s]);
        let rp = d.rotation.get_mut(&p).expect("corner rotation");
        let i_p = rp.iter().position(|&y| y == px).expect("dart towards crossing");
        rp.insert(i_p, Dart::tail(s));
        let rq = d.rotation.get_mut(&q).expect("corner rotation");
        let i_q = rq.iter().position(|&y| y == qx).expect("dart towards crossing");
        rq.insert(i_q + 1, Dart::head(s));
        cycle[i] = e;
    }
    d.validate()?;
    inst.log.push(TransformRecord::AddZeroEdges {
        edges: cycle
            .iter()
            .enumerate()
            .map(|(i, &e)| (e, corners[i], corners[(i + 1) % 4]))
            .collect(),
    });
    inst.pseudo_faces.push(PseudoFace { crossing: x, corners, cycle_edges: cycle, diagonals, alpha, beta });
    inst.constraints.push((corners[0], corners[1]));
    Ok(())
}

/// The leaf selected by `mask` (bit i set keeps the i-th open crossing).
pub fn build_leaf(inst: &ConstrainedInstance, mask: u64) -> Result<ConstrainedInstance> {
    let crossings = inst.open_crossings();
    if crossings.len() < 64 && mask >> crossings.len() != 0 {
        return Err(Error::PseudoFace(format!("mask {mask:#b} has more bits than {} crossings", crossings.len())));
    }
    let mut leaf = inst.clone();
    leaf.mask = mask;
    for (i, &x) in crossings.iter().enumerate() {
        if mask >> i & 1 == 1 {
            keep_crossing(&mut leaf, x)?;
        } else {
            contract_crossing(&mut leaf, x)?;
        }
    }
    Ok(leaf)
}

/// All 2^k leaves, in mask order.
pub fn enumerate_branches(inst: &ConstrainedInstance) -> Result<Vec<ConstrainedInstance>> {
    let k = inst.open_crossings().len();
    if k >= 32 {
        return Err(Error::Overflow("enumerating branches"));
    }
    (0..1u64 << k).map(|mask| build_leaf(inst, mask)).collect()
}
