//! Value-preserving surgeries on drawn instances.
//!
//! Every operation reports an exact offset (how much the maximum cut grew)
//! and a log record that lets `recovery` map a cut of the result back to
//! the input.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::embedding::{Dart, DrawnInstance, NodeId};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Multigraph, VertexId};
use crate::rational::{positive_part, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LedgerTag {
    Subdivide,
    DegreeOne,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LedgerEntry {
    pub tag: LedgerTag,
    pub ids: Vec<u32>,
    pub offset: Rational,
}

/// Exact difference between the optimum of a transformed instance and the
/// optimum of the instance it came from. Entries hold nonnegative offsets;
/// a subdivision raises the optimum by its offset and a degree-one removal
/// lowers it, so `total` is signed and original = transformed - total.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OffsetLedger {
    total: Rational,
    entries: Vec<LedgerEntry>,
}

impl OffsetLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn total(&self) -> Rational {
        self.total
    }

    pub fn entries(&self) -> &[LedgerEntry] {
        &self.entries
    }

    pub fn push(&mut self, tag: LedgerTag, ids: Vec<u32>, offset: Rational) {
        self.total += signed(tag, offset);
        self.entries.push(LedgerEntry { tag, ids, offset });
    }

    pub fn extend(&mut self, other: &OffsetLedger) {
        for e in &other.entries {
            self.push(e.tag, e.ids.clone(), e.offset);
        }
    }

    /// Total equals the sum of the entries.
    pub fn is_consistent(&self) -> bool {
        self.entries.iter().map(|e| signed(e.tag, e.offset)).sum::<Rational>() == self.total
    }
}

fn signed(tag: LedgerTag, offset: Rational) -> Rational {
    match tag {
        LedgerTag::Subdivide => offset,
        LedgerTag::DegreeOne => -offset,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubdivideReason {
    Direct,
    EliminateConflict,
    PreprocessCrossing(NodeId),
    NormalizeFace,
}

/// One reversible step. Ids are the ones assigned when the step ran, so a
/// forward replay reproduces the transformed graph exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TransformRecord {
    /// `edge` (u, v, weight) replaced by the path u, inner.0, inner.1, v.
    Subdivide {
        reason: SubdivideReason,
        edge: EdgeId,
        u: VertexId,
        v: VertexId,
        weight: Rational,
        inner: (VertexId, VertexId),
        pieces: [EdgeId; 3],
    },
    /// Vertex of degree 0 (`edge` is None) or degree 1 removed.
    RemoveDegreeOne { vertex: VertexId, edge: Option<(EdgeId, VertexId, Rational)> },
    /// Branch (1): `a` and `b` merged into `merged`.
    Contract { a: VertexId, b: VertexId, merged: VertexId },
    /// Zero-weight edges that never change a cut value.
    AddZeroEdges { edges: Vec<(EdgeId, VertexId, VertexId)> },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TransformLog {
    pub records: Vec<TransformRecord>,
}

impl TransformLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, r: TransformRecord) {
        self.records.push(r);
    }

    pub fn extend(&mut self, other: &TransformLog) {
        self.records.extend(other.records.iter().cloned());
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Applies the records, in order, to a copy of `g`.
    pub fn replay(&self, g: &Multigraph) -> Result<Multigraph> {
        let mut g = g.clone();
        for r in &self.records {
            match r {
                TransformRecord::Subdivide { edge, u, v, weight, inner, pieces, .. } => {
                    let old = g.remove_edge(*edge)?;
                    if (old.u, old.v) != (*u, *v) || old.weight != *weight {
                        return Err(Error::LogMismatch(format!("edge {edge} differs from its record")));
                    }
                    g.insert_vertex(inner.0)?;
                    g.insert_vertex(inner.1)?;
                    g.insert_edge(pieces[0], *u, inner.0, *weight)?;
                    g.insert_edge(pieces[1], inner.0, inner.1, *weight)?;
                    g.insert_edge(pieces[2], inner.1, *v, *weight)?;
                }
                TransformRecord::RemoveDegreeOne { vertex, edge } => {
                    let removed = g.remove_vertex(*vertex)?;
                    let expected: Vec<EdgeId> = edge.iter().map(|x| x.0).collect();
                    let got: Vec<EdgeId> = removed.iter().map(|x| x.0).collect();
                    if expected != got {
                        return Err(Error::LogMismatch(format!("vertex {vertex} had edges {got:?}")));
                    }
                }
                TransformRecord::Contract { a, b, merged } => g.contract_into(*a, *b, *merged)?,
                TransformRecord::AddZeroEdges { edges } => {
                    for &(e, u, v) in edges {
                        g.insert_edge(e, u, v, Rational::zero())?;
                    }
                }
            }
        }
        Ok(g)
    }
}

/// Everything a gadget pass produces.
pub type GadgetOutput = (DrawnInstance, OffsetLedger, TransformLog);

/// Replaces `e` by the path u-u'-v'-v with three edges of weight w(e).
/// `split` gives the number of e's crossings carried by each of the three
/// new edges, in order from u. The offset is max(0, 2w(e)).
pub fn subdivide_edge(d: &DrawnInstance, e: EdgeId, split: [usize; 3]) -> Result<(DrawnInstance, Rational, TransformRecord)> {
    let mut d = d.clone();
    let rec = subdivide_in_place(&mut d, e, split, SubdivideReason::Direct)?;
    let offset = subdivision_offset(&rec);
    Ok((d, offset, rec))
}

fn subdivision_offset(rec: &TransformRecord) -> Rational {
    match rec {
        TransformRecord::Subdivide { weight, .. } => positive_part(*weight * 2),
        _ => Rational::zero(),
    }
}

pub(crate) fn subdivide_in_place(
    d: &mut DrawnInstance,
    e: EdgeId,
    split: [usize; 3],
    reason: SubdivideReason,
) -> Result<TransformRecord> {
    let edge = *d.graph.edge(e)?;
    let t = d.crossings_on(e);
    if split.iter().sum::<usize>() != t {
        return Err(Error::InvalidSplit {
            edge: e,
            reason: format!("split {split:?} does not account for {t} crossings"),
        });
    }
    let [n1, n2, _] = split;
    let u1 = d.fresh_node_id();
    d.graph.insert_vertex(u1)?;
    let s = d.edge_segments[&e][n1];
    d.split_segment(s, u1);
    let v1 = d.fresh_node_id();
    d.graph.insert_vertex(v1)?;
    let s = d.edge_segments[&e][n1 + 1 + n2];
    d.split_segment(s, v1);

    let list = d.edge_segments.remove(&e).expect("edge has segments");
    d.graph.remove_edge(e)?;
    let e1 = d.graph.add_edge(edge.u, u1, edge.weight)?;
    let e2 = d.graph.add_edge(u1, v1, edge.weight)?;
    let e3 = d.graph.add_edge(v1, edge.v, edge.weight)?;
    let parts = [
        (e1, &list[..n1 + 1]),
        (e2, &list[n1 + 1..n1 + n2 + 2]),
        (e3, &list[n1 + n2 + 2..]),
    ];
    for (id, segs) in parts {
        for s in segs {
            d.segments.get_mut(s).expect("segment exists").edge = id;
        }
        d.edge_segments.insert(id, segs.to_vec());
    }
    Ok(TransformRecord::Subdivide {
        reason,
        edge: e,
        u: edge.u,
        v: edge.v,
        weight: edge.weight,
        inner: (u1, v1),
        pieces: [e1, e2, e3],
    })
}

fn record_subdivision(ledger: &mut OffsetLedger, log: &mut TransformLog, rec: TransformRecord) {
    if let TransformRecord::Subdivide { edge, .. } = &rec {
        ledger.push(LedgerTag::Subdivide, vec![edge.0], subdivision_offset(&rec));
    }
    log.push(rec);
}

/// Subdivides multiply crossed edges until the drawing is 1-planar. The
/// lowest-id offending edge goes first and its t crossings are spread as
/// ((t+2)/3, (t+1)/3, t/3) over the three new edges.
pub fn eliminate_conflicts(d: &DrawnInstance) -> Result<GadgetOutput> {
    let mut d = d.clone();
    let mut ledger = OffsetLedger::new();
    let mut log = TransformLog::new();
    eliminate_conflicts_in_place(&mut d, &mut ledger, &mut log)?;
    Ok((d, ledger, log))
}

pub(crate) fn eliminate_conflicts_in_place(d: &mut DrawnInstance, ledger: &mut OffsetLedger, log: &mut TransformLog) -> Result<()> {
    while let Some(e) = d.edge_segments.iter().find(|(_, s)| s.len() > 2).map(|(e, _)| *e) {
        let t = d.crossings_on(e);
        let rec = subdivide_in_place(d, e, [t.div_ceil(3), (t + 1) / 3, t / 3], SubdivideReason::EliminateConflict)?;
        record_subdivision(ledger, log, rec);
    }
    Ok(())
}

/// Subdivides both edges of every crossing so the crossing sits on two
/// middle edges whose four endpoints are fresh degree-2 vertices.
pub fn preprocess_crossings(d: &DrawnInstance) -> Result<GadgetOutput> {
    let mut d = d.clone();
    let mut ledger = OffsetLedger::new();
    let mut log = TransformLog::new();
    preprocess_in_place(&mut d, &mut ledger, &mut log)?;
    Ok((d, ledger, log))
}

pub(crate) fn preprocess_in_place(d: &mut DrawnInstance, ledger: &mut OffsetLedger, log: &mut TransformLog) -> Result<()> {
    if let Some((e, _)) = d.edge_segments.iter().find(|(_, s)| s.len() > 2) {
        return Err(Error::NotOnePlanar(*e));
    }
    let crossings: Vec<NodeId> = d.crossing_nodes.iter().copied().collect();
    for x in crossings {
        let rot = d.rotation(x);
        let (e1, e2) = (d.edge_of(rot[0]), d.edge_of(rot[1]));
        for e in [e1, e2] {
            let rec = subdivide_in_place(d, e, [0, 1, 0], SubdivideReason::PreprocessCrossing(x))?;
            record_subdivision(ledger, log, rec);
        }
    }
    Ok(())
}

/// The four corners around crossing `x` in counterclockwise order starting
/// from the first dart of its rotation, if `x` has been preprocessed.
pub fn crossing_corners(d: &DrawnInstance, x: NodeId) -> Result<[VertexId; 4]> {
    let rot = d.rotation(x);
    if !d.is_crossing(x) || rot.len() != 4 {
        return Err(Error::NotPreprocessed(x));
    }
    let mut out = [x; 4];
    for (i, &dart) in rot.iter().enumerate() {
        let p = d.node_of(dart.twin());
        if d.is_crossing(p) || d.rotation(p).len() != 2 {
            return Err(Error::NotPreprocessed(x));
        }
        out[i] = p;
    }
    let distinct: BTreeSet<VertexId> = out.iter().copied().collect();
    if distinct.len() != 4 {
        return Err(Error::NotPreprocessed(x));
    }
    Ok(out)
}

/// Repeatedly removes vertices of degree 0 and 1. A removed pendant edge of
/// weight w adds max(0, w): its vertex can always be placed so that the
/// edge is cut when w > 0 and uncut otherwise.
pub fn remove_degree_one(g: &Multigraph) -> Result<(Multigraph, OffsetLedger, TransformLog)> {
    let mut g = g.clone();
    let mut ledger = OffsetLedger::new();
    let mut log = TransformLog::new();
    loop {
        let degs = g.degrees();
        let Some((&v, &deg)) = degs.iter().find(|(_, &k)| k <= 1) else {
            break;
        };
        let removed = g.remove_vertex(v)?;
        let edge = if deg == 1 {
            let (e, edge) = removed[0];
            ledger.push(LedgerTag::DegreeOne, vec![v.0, e.0], positive_part(edge.weight));
            Some((e, edge.other(v), edge.weight))
        } else {
            None
        };
        log.push(TransformRecord::RemoveDegreeOne { vertex: v, edge });
    }
    Ok((g, ledger, log))
}

/// Drawn variant used by the pipeline: removes isolated vertices and
/// pendant vertices whose edge is uncrossed, so the crossing count is kept.
pub fn remove_pendants(d: &DrawnInstance) -> Result<GadgetOutput> {
    let mut d = d.clone();
    let mut ledger = OffsetLedger::new();
    let mut log = TransformLog::new();
    remove_pendants_in_place(&mut d, &mut ledger, &mut log)?;
    Ok((d, ledger, log))
}

pub(crate) fn remove_pendants_in_place(d: &mut DrawnInstance, ledger: &mut OffsetLedger, log: &mut TransformLog) -> Result<()> {
    loop {
        let candidate = d.graph.vertices().find(|&v| {
            let rot = d.rotation(v);
            rot.is_empty() || (rot.len() == 1 && d.edge_segments(d.edge_of(rot[0])).len() == 1)
        });
        let Some(v) = candidate else {
            break;
        };
        let rot = d.rotation.remove(&v).unwrap_or_default();
        let edge = if let Some(&dart) = rot.first() {
            let e = d.edge_of(dart);
            let other = d.node_of(dart.twin());
            let list = d.rotation.get_mut(&other).expect("neighbor has a rotation");
            list.retain(|&x| x != dart.twin());
            d.segments.remove(&dart.segment);
            d.edge_segments.remove(&e);
            let w = d.graph.remove_edge(e)?.weight;
            ledger.push(LedgerTag::DegreeOne, vec![v.0, e.0], positive_part(w));
            Some((e, other, w))
        } else {
            None
        };
        d.graph.remove_vertex(v)?;
        log.push(TransformRecord::RemoveDegreeOne { vertex: v, edge });
    }
    Ok(())
}

/// Subdivides a boundary edge of every face shorter than 3 until none is
/// left. Edges in `protected` are never chosen.
pub fn normalize_small_faces(d: &DrawnInstance) -> Result<GadgetOutput> {
    let mut d = d.clone();
    let mut ledger = OffsetLedger::new();
    let mut log = TransformLog::new();
    normalize_in_place(&mut d, &BTreeSet::new(), &mut ledger, &mut log)?;
    Ok((d, ledger, log))
}

pub(crate) fn normalize_in_place(
    d: &mut DrawnInstance,
    protected: &BTreeSet<EdgeId>,
    ledger: &mut OffsetLedger,
    log: &mut TransformLog,
) -> Result<()> {
    loop {
        let faces = d.faces()?;
        let Some(face) = faces.iter().find(|f| f.len() < 3) else {
            return Ok(());
        };
        let pick: Option<(EdgeId, Dart)> = face
            .boundary
            .iter()
            .map(|&dart| (d.edge_of(dart), dart))
            .filter(|(e, _)| !protected.contains(e))
            .min_by_key(|(e, _)| *e);
        let Some((e, dart)) = pick else {
            return Err(Error::FaceTooSmall(face.len()));
        };
        let t = d.crossings_on(e);
        let i = d.edge_segments(e).iter().position(|&s| s == dart.segment).expect("segment of its edge");
        let rec = subdivide_in_place(d, e, [i, 0, t - i], SubdivideReason::NormalizeFace)?;
        record_subdivision(ledger, log, rec);
    }
}
