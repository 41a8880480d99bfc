//! Combinatorial drawings.
//!
//! A drawing is stored as its planarization: every crossing becomes a
//! degree-4 crossing node, every edge becomes a path of segments through
//! the crossing nodes it passes, and every node carries the
//! counterclockwise cyclic order of the segment ends (darts) leaving it.
//! Faces are traced with the face on the left: after arriving at a node
//! along a dart, leave along the dart that precedes the arrival end in the
//! rotation.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Diagnostic, Error, Result};
use crate::graph::{EdgeId, Multigraph, VertexId};
use crate::rational::Rational;

/// Skeleton node id; vertices and crossing nodes share the id space.
pub type NodeId = VertexId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SegmentId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum End {
    Tail,
    Head,
}

impl End {
    pub fn other(self) -> End {
        match self {
            End::Tail => End::Head,
            End::Head => End::Tail,
        }
    }
}

/// One end of a segment, pointing away from the node it sits at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dart {
    pub segment: SegmentId,
    pub end: End,
}

impl Dart {
    pub fn tail(segment: SegmentId) -> Dart {
        Dart { segment, end: End::Tail }
    }

    pub fn head(segment: SegmentId) -> Dart {
        Dart { segment, end: End::Head }
    }

    pub fn twin(self) -> Dart {
        Dart { segment: self.segment, end: self.end.other() }
    }
}

/// A piece of an edge between two consecutive skeleton nodes, oriented
/// like the edge (from `u` towards `v`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Segment {
    pub edge: EdgeId,
    pub tail: NodeId,
    pub head: NodeId,
}

impl Segment {
    pub fn node(&self, end: End) -> NodeId {
        match end {
            End::Tail => self.tail,
            End::Head => self.head,
        }
    }
}

/// Closed boundary walk; each dart's face lies on its left.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub boundary: Vec<Dart>,
}

impl Face {
    pub fn len(&self) -> usize {
        self.boundary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boundary.is_empty()
    }
}

/// A crossing node with the two edges meeting there and the index of the
/// crossing along each edge (counted from the edge's `u` end).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub node: NodeId,
    pub edges: (EdgeId, EdgeId),
    pub positions: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DrawnInstance {
    pub(crate) graph: Multigraph,
    pub(crate) crossing_nodes: BTreeSet<NodeId>,
    pub(crate) segments: BTreeMap<SegmentId, Segment>,
    pub(crate) edge_segments: BTreeMap<EdgeId, Vec<SegmentId>>,
    pub(crate) rotation: BTreeMap<NodeId, Vec<Dart>>,
    pub(crate) next_segment: u32,
}

impl DrawnInstance {
    /// Builds a drawing from per-edge segment lists and per-node rotations
    /// given as segment ids (a segment whose ends are both at one node is
    /// listed twice there; its first occurrence is taken as the tail).
    pub fn from_parts(
        graph: Multigraph,
        crossing_nodes: BTreeSet<NodeId>,
        edge_segments: BTreeMap<EdgeId, Vec<SegmentId>>,
        rotation: BTreeMap<NodeId, Vec<SegmentId>>,
    ) -> Result<DrawnInstance> {
        for &x in &crossing_nodes {
            if graph.contains_vertex(x) {
                return Err(Diagnostic::CrossingIsVertex(x).into());
            }
        }
        for &n in rotation.keys() {
            if !graph.contains_vertex(n) && !crossing_nodes.contains(&n) {
                return Err(Diagnostic::UnknownNode(n).into());
            }
        }
        // occurrences of each segment id: (node, index in that rotation)
        let mut occ: BTreeMap<SegmentId, Vec<(NodeId, usize)>> = BTreeMap::new();
        for (&n, list) in &rotation {
            for (i, &s) in list.iter().enumerate() {
                occ.entry(s).or_default().push((n, i));
            }
        }
        let mut segments = BTreeMap::new();
        let mut darts: BTreeMap<(NodeId, usize), Dart> = BTreeMap::new();
        for (&e, segs) in &edge_segments {
            let edge = graph.edge(e)?;
            let mut at = edge.u;
            for (k, &s) in segs.iter().enumerate() {
                let places = occ.get(&s).map(Vec::as_slice).unwrap_or(&[]);
                if places.len() != 2 || segments.contains_key(&s) {
                    return Err(Diagnostic::DanglingSegmentEnd { segment: s.0, node: at }.into());
                }
                let tail_idx = places
                    .iter()
                    .position(|&(n, _)| n == at)
                    .ok_or(Diagnostic::BrokenEdgePath { edge: e, u: edge.u, v: edge.v })?;
                let tail = places[tail_idx];
                let head = places[1 - tail_idx];
                if k + 1 < segs.len() && !crossing_nodes.contains(&head.0) {
                    return Err(Diagnostic::InteriorVertex { edge: e, node: head.0 }.into());
                }
                segments.insert(s, Segment { edge: e, tail: tail.0, head: head.0 });
                darts.insert(tail, Dart::tail(s));
                darts.insert(head, Dart::head(s));
                at = head.0;
            }
            if at != edge.v || segs.is_empty() {
                return Err(Diagnostic::BrokenEdgePath { edge: e, u: edge.u, v: edge.v }.into());
            }
        }
        for (e, _) in graph.edges() {
            if !edge_segments.contains_key(&e) {
                let edge = graph.edge(e)?;
                return Err(Diagnostic::BrokenEdgePath { edge: e, u: edge.u, v: edge.v }.into());
            }
        }
        let mut rot = BTreeMap::new();
        for v in graph.vertices().chain(crossing_nodes.iter().copied()) {
            let list = rotation.get(&v).map(Vec::as_slice).unwrap_or(&[]);
            let mut out = Vec::with_capacity(list.len());
            for (i, &s) in list.iter().enumerate() {
                let d = darts
                    .get(&(v, i))
                    .ok_or(Diagnostic::ForeignSegmentEnd { segment: s.0, node: v })?;
                out.push(*d);
            }
            rot.insert(v, out);
        }
        let next_segment = segments.keys().last().map_or(0, |s: &SegmentId| s.0 + 1);
        let mut graph = graph;
        if let Some(x) = crossing_nodes.iter().last() {
            graph.bump_vertex_counter(x.0 + 1);
        }
        let d = DrawnInstance { graph, crossing_nodes, segments, edge_segments, rotation: rot, next_segment };
        d.validate()?;
        Ok(d)
    }

    /// Crossing-free drawing from per-vertex counterclockwise edge orders.
    /// Each edge becomes one segment with the same numeric id; a loop is
    /// listed twice at its vertex.
    pub fn planar(graph: Multigraph, rotation: BTreeMap<VertexId, Vec<EdgeId>>) -> Result<DrawnInstance> {
        let edge_segments = graph.edges().map(|(e, _)| (e, vec![SegmentId(e.0)])).collect();
        let rotation = rotation
            .into_iter()
            .map(|(v, es)| (v, es.into_iter().map(|e| SegmentId(e.0)).collect()))
            .collect();
        DrawnInstance::from_parts(graph, BTreeSet::new(), edge_segments, rotation)
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn crossing_nodes(&self) -> &BTreeSet<NodeId> {
        &self.crossing_nodes
    }

    pub fn is_crossing(&self, n: NodeId) -> bool {
        self.crossing_nodes.contains(&n)
    }

    pub fn crossing_count(&self) -> usize {
        self.crossing_nodes.len()
    }

    pub fn segments(&self) -> impl Iterator<Item = (SegmentId, &Segment)> + '_ {
        self.segments.iter().map(|(s, seg)| (*s, seg))
    }

    pub fn segment(&self, s: SegmentId) -> &Segment {
        &self.segments[&s]
    }

    pub fn segment_count(&self) -> usize {
        self.segments.len()
    }

    pub fn edge_segments(&self, e: EdgeId) -> &[SegmentId] {
        self.edge_segments.get(&e).map(Vec::as_slice).unwrap_or(&[])
    }

    /// All skeleton nodes (vertices and crossing nodes) with their rotation.
    pub fn rotations(&self) -> impl Iterator<Item = (NodeId, &[Dart])> + '_ {
        self.rotation.iter().map(|(n, r)| (*n, r.as_slice()))
    }

    pub fn rotation(&self, n: NodeId) -> &[Dart] {
        self.rotation.get(&n).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Node the dart sits at.
    pub fn node_of(&self, d: Dart) -> NodeId {
        self.segments[&d.segment].node(d.end)
    }

    pub fn edge_of(&self, d: Dart) -> EdgeId {
        self.segments[&d.segment].edge
    }

    /// Nodes along `e` from `u` to `v`, endpoints included.
    pub fn node_sequence(&self, e: EdgeId) -> Vec<NodeId> {
        let segs = self.edge_segments(e);
        let mut out = Vec::with_capacity(segs.len() + 1);
        if let Some(first) = segs.first() {
            out.push(self.segments[first].tail);
        }
        out.extend(segs.iter().map(|s| self.segments[s].head));
        out
    }

    /// Number of crossings on `e`.
    pub fn crossings_on(&self, e: EdgeId) -> usize {
        self.edge_segments(e).len().saturating_sub(1)
    }

    pub fn crossings(&self) -> Vec<Crossing> {
        self.crossing_nodes
            .iter()
            .map(|&x| {
                let rot = self.rotation(x);
                let e1 = self.edge_of(rot[0]);
                let e2 = self.edge_of(rot[1]);
                let pos = |e: EdgeId| {
                    self.node_sequence(e)
                        .iter()
                        .skip(1)
                        .position(|&n| n == x)
                        .unwrap_or(usize::MAX)
                };
                Crossing { node: x, edges: (e1, e2), positions: (pos(e1), pos(e2)) }
            })
            .collect()
    }

    /// True iff no edge is involved in two or more crossings.
    pub fn is_one_planar(&self) -> bool {
        self.edge_segments.values().all(|s| s.len() <= 2)
    }

    pub(crate) fn dart_positions(&self) -> HashMap<Dart, (NodeId, usize)> {
        let mut pos = HashMap::with_capacity(2 * self.segments.len());
        for (&n, rot) in &self.rotation {
            for (i, &d) in rot.iter().enumerate() {
                pos.insert(d, (n, i));
            }
        }
        pos
    }

    /// Traces every face of the rotation system. Each dart is used once.
    pub fn faces(&self) -> Result<Vec<Face>> {
        let pos = self.dart_positions();
        let mut seen: BTreeSet<Dart> = BTreeSet::new();
        let mut faces = Vec::new();
        for &s in self.segments.keys() {
            for start in [Dart::tail(s), Dart::head(s)] {
                if seen.contains(&start) {
                    continue;
                }
                let mut boundary = Vec::new();
                let mut d = start;
                loop {
                    if !seen.insert(d) {
                        let seg = self.segments[&d.segment];
                        return Err(Diagnostic::DanglingSegmentEnd { segment: s.0, node: seg.node(d.end) }.into());
                    }
                    boundary.push(d);
                    let t = d.twin();
                    let &(w, i) = pos.get(&t).ok_or_else(|| Diagnostic::DanglingSegmentEnd {
                        segment: t.segment.0,
                        node: self.segments[&t.segment].node(t.end),
                    })?;
                    let rot = &self.rotation[&w];
                    let next = rot[(i + rot.len() - 1) % rot.len()];
                    if next == start {
                        break;
                    }
                    d = next;
                }
                faces.push(Face { boundary });
            }
        }
        Ok(faces)
    }

    /// Checks every drawing invariant and reports the first violation.
    pub fn validate(&self) -> Result<(), Diagnostic> {
        for &x in &self.crossing_nodes {
            if self.graph.contains_vertex(x) {
                return Err(Diagnostic::CrossingIsVertex(x));
            }
        }
        for v in self.graph.vertices() {
            if !self.rotation.contains_key(&v) {
                return Err(Diagnostic::UnknownNode(v));
            }
        }
        for &n in self.rotation.keys() {
            if !self.graph.contains_vertex(n) && !self.crossing_nodes.contains(&n) {
                return Err(Diagnostic::UnknownNode(n));
            }
        }
        // every dart sits exactly once in the rotation of its own node
        let mut count: HashMap<Dart, usize> = HashMap::new();
        for (&n, rot) in &self.rotation {
            for &d in rot {
                match self.segments.get(&d.segment) {
                    Some(seg) if seg.node(d.end) == n => *count.entry(d).or_default() += 1,
                    _ => return Err(Diagnostic::ForeignSegmentEnd { segment: d.segment.0, node: n }),
                }
            }
        }
        for (&s, seg) in &self.segments {
            for end in [End::Tail, End::Head] {
                if count.get(&Dart { segment: s, end }) != Some(&1) {
                    return Err(Diagnostic::DanglingSegmentEnd { segment: s.0, node: seg.node(end) });
                }
            }
        }
        // edges are paths of segments through crossing nodes
        let mut owned = 0usize;
        for (e, edge) in self.graph.edges() {
            let segs = self.edge_segments(e);
            let broken = Diagnostic::BrokenEdgePath { edge: e, u: edge.u, v: edge.v };
            if segs.is_empty() {
                return Err(broken);
            }
            let mut at = edge.u;
            for (k, s) in segs.iter().enumerate() {
                let seg = self.segments.get(s).ok_or(broken.clone())?;
                if seg.edge != e || seg.tail != at {
                    return Err(broken);
                }
                at = seg.head;
                if k + 1 < segs.len() && !self.crossing_nodes.contains(&at) {
                    return Err(Diagnostic::InteriorVertex { edge: e, node: at });
                }
            }
            if at != edge.v {
                return Err(broken);
            }
            owned += segs.len();
        }
        if owned != self.segments.len() || self.edge_segments.len() != self.graph.edge_count() {
            let (&s, seg) = self
                .segments
                .iter()
                .find(|(s, seg)| !self.edge_segments(seg.edge).contains(s))
                .unwrap_or_else(|| self.segments.iter().next().expect("segments exist"));
            return Err(Diagnostic::DanglingSegmentEnd { segment: s.0, node: seg.tail });
        }
        for &x in &self.crossing_nodes {
            let rot = self.rotation(x);
            if rot.len() != 4 {
                return Err(Diagnostic::CrossingDegree { node: x, degree: rot.len() });
            }
            let es: Vec<EdgeId> = rot.iter().map(|&d| self.edge_of(d)).collect();
            if es.iter().all(|&e| e == es[0]) {
                return Err(Diagnostic::SelfCrossing { node: x, edge: es[0] });
            }
            if es[0] != es[2] || es[1] != es[3] || es[0] == es[1] {
                let edge = if es[0] != es[2] { es[0] } else { es[1] };
                return Err(Diagnostic::CrossingNotOpposite { node: x, edge });
            }
        }
        self.check_euler()
    }

    fn check_euler(&self) -> Result<(), Diagnostic> {
        let faces = self.faces().map_err(|e| match e {
            Error::Drawing(d) => d,
            other => Diagnostic::Degenerate(other.to_string()),
        })?;
        let nodes: Vec<NodeId> = self.rotation.keys().copied().collect();
        let index: HashMap<NodeId, usize> = nodes.iter().enumerate().map(|(i, &n)| (n, i)).collect();
        let mut uf = UnionFind::new(nodes.len());
        for seg in self.segments.values() {
            uf.union(index[&seg.tail], index[&seg.head]);
        }
        let mut stats: BTreeMap<usize, (usize, usize, usize)> = BTreeMap::new();
        for n in &nodes {
            stats.entry(uf.find(index[n])).or_default().0 += 1;
        }
        for seg in self.segments.values() {
            stats.entry(uf.find(index[&seg.tail])).or_default().1 += 1;
        }
        for f in &faces {
            let n = self.node_of(f.boundary[0]);
            stats.entry(uf.find(index[&n])).or_default().2 += 1;
        }
        for (root, (v, e, f)) in stats {
            if e > 0 && v + f != e + 2 {
                return Err(Diagnostic::Euler { node: nodes[root], v, e, f });
            }
        }
        Ok(())
    }

    // ---- surgery primitives shared by the gadget and branching modules ----

    pub(crate) fn fresh_segment(&mut self) -> SegmentId {
        let s = SegmentId(self.next_segment);
        self.next_segment += 1;
        s
    }

    pub(crate) fn position_in_rotation(&self, d: Dart) -> (NodeId, usize) {
        let n = self.node_of(d);
        let i = self.rotation[&n]
            .iter()
            .position(|&x| x == d)
            .expect("dart present in its node's rotation");
        (n, i)
    }

    /// Splits segment `s` at the fresh node `mid`: `s` keeps its tail and
    /// now ends at `mid`, the returned segment runs from `mid` to the old
    /// head. The caller registers `mid` as a vertex or crossing node.
    pub(crate) fn split_segment(&mut self, s: SegmentId, mid: NodeId) -> SegmentId {
        let s2 = self.fresh_segment();
        let seg = self.segments[&s];
        let (head_node, idx) = self.position_in_rotation(Dart::head(s));
        self.rotation.get_mut(&head_node).unwrap()[idx] = Dart::head(s2);
        self.segments.insert(s2, Segment { edge: seg.edge, tail: mid, head: seg.head });
        self.segments.get_mut(&s).unwrap().head = mid;
        self.rotation.insert(mid, vec![Dart::head(s), Dart::tail(s2)]);
        let list = self.edge_segments.get_mut(&seg.edge).unwrap();
        let k = list.iter().position(|&x| x == s).unwrap();
        list.insert(k + 1, s2);
        s2
    }

    /// Inserts a segment from the corner of `from` to the corner of `to`.
    /// A corner is named by the outgoing face dart at that node; the new
    /// end is placed immediately after it in counterclockwise order, so the
    /// segment runs through the face the two corners share.
    pub(crate) fn insert_segment(&mut self, edge: EdgeId, from: Dart, to: Dart) -> SegmentId {
        let s = self.fresh_segment();
        let tail = self.node_of(from);
        let head = self.node_of(to);
        self.segments.insert(s, Segment { edge, tail, head });
        let (_, i) = self.position_in_rotation(from);
        self.rotation.get_mut(&tail).unwrap().insert(i + 1, Dart::tail(s));
        let (_, j) = self.position_in_rotation(to);
        self.rotation.get_mut(&head).unwrap().insert(j + 1, Dart::head(s));
        s
    }

    /// Adds a one-segment edge drawn through the face shared by two corners.
    pub(crate) fn add_edge_at_corners(&mut self, from: Dart, to: Dart, weight: Rational) -> Result<EdgeId> {
        let (u, v) = (self.node_of(from), self.node_of(to));
        let e = self.graph.add_edge(u, v, weight)?;
        let s = self.insert_segment(e, from, to);
        self.edge_segments.insert(e, vec![s]);
        Ok(e)
    }

    /// Fresh id in the shared node space.
    pub(crate) fn fresh_node_id(&mut self) -> NodeId {
        self.graph.reserve_id()
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}
