//! Weighted multigraphs with stable integer ids.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Vertex id. Crossing nodes of a drawing share this id space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub weight: Rational,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    /// The endpoint opposite to `x` (`x` itself for a loop).
    pub fn other(&self, x: VertexId) -> VertexId {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

/// Side assignment: `false` is side 0, `true` is side 1.
pub type Bipartition = BTreeMap<VertexId, bool>;

/// Undirected multigraph with exact weights.
///
/// Ids come from monotone counters and are never reused, so records that
/// mention an id stay meaningful after later transformations. Parallel
/// edges are separate objects. Self-loops are stored like any other edge;
/// callers that forbid them check `Edge::is_loop`.
#[derive(Clone, Debug, Default)]
pub struct Multigraph {
    vertices: BTreeSet<VertexId>,
    edges: BTreeMap<EdgeId, Edge>,
    next_vertex: u32,
    next_edge: u32,
}

impl PartialEq for Multigraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for Multigraph {}

impl Multigraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self) -> VertexId {
        let id = VertexId(self.next_vertex);
        self.next_vertex += 1;
        self.vertices.insert(id);
        id
    }

    /// Inserts a vertex with a caller-chosen id.
    pub fn insert_vertex(&mut self, id: VertexId) -> Result<()> {
        if self.vertices.contains(&id) {
            return Err(Error::DuplicateId(id.0));
        }
        self.vertices.insert(id);
        self.next_vertex = self.next_vertex.max(id.0 + 1);
        Ok(())
    }

    /// Takes an id from the vertex counter without creating a vertex.
    pub fn reserve_id(&mut self) -> VertexId {
        let id = VertexId(self.next_vertex);
        self.next_vertex += 1;
        id
    }

    /// Makes sure future ids are at least `floor`.
    pub fn bump_vertex_counter(&mut self, floor: u32) {
        self.next_vertex = self.next_vertex.max(floor);
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId, weight: Rational) -> Result<EdgeId> {
        let id = EdgeId(self.next_edge);
        self.insert_edge(id, u, v, weight)?;
        Ok(id)
    }

    pub fn insert_edge(&mut self, id: EdgeId, u: VertexId, v: VertexId, weight: Rational) -> Result<()> {
        for x in [u, v] {
            if !self.vertices.contains(&x) {
                return Err(Error::UnknownVertex(x));
            }
        }
        if self.edges.contains_key(&id) {
            return Err(Error::DuplicateId(id.0));
        }
        self.edges.insert(id, Edge { u, v, weight });
        self.next_edge = self.next_edge.max(id.0 + 1);
        Ok(())
    }

    pub fn remove_edge(&mut self, id: EdgeId) -> Result<Edge> {
        self.edges.remove(&id).ok_or(Error::UnknownEdge(id))
    }

    /// Removes a vertex together with its incident edges.
    pub fn remove_vertex(&mut self, v: VertexId) -> Result<Vec<(EdgeId, Edge)>> {
        if !self.vertices.remove(&v) {
            return Err(Error::UnknownVertex(v));
        }
        let incident = self.incident_edges_unchecked(v);
        Ok(incident
            .into_iter()
            .map(|e| (e, self.edges.remove(&e).expect("incident edge exists")))
            .collect())
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, &Edge)> + '_ {
        self.edges.iter().map(|(id, e)| (*id, e))
    }

    pub fn edge(&self, id: EdgeId) -> Result<&Edge> {
        self.edges.get(&id).ok_or(Error::UnknownEdge(id))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of edge-endpoints at `v`; a self-loop counts twice.
    pub fn degree(&self, v: VertexId) -> Result<usize> {
        if !self.vertices.contains(&v) {
            return Err(Error::UnknownVertex(v));
        }
        Ok(self
            .edges
            .values()
            .map(|e| usize::from(e.u == v) + usize::from(e.v == v))
            .sum())
    }

    pub fn degrees(&self) -> BTreeMap<VertexId, usize> {
        let mut deg: BTreeMap<VertexId, usize> = self.vertices.iter().map(|&v| (v, 0)).collect();
        for e in self.edges.values() {
            *deg.get_mut(&e.u).expect("endpoint present") += 1;
            *deg.get_mut(&e.v).expect("endpoint present") += 1;
        }
        deg
    }

    pub fn incident_edges(&self, v: VertexId) -> Result<Vec<EdgeId>> {
        if !self.vertices.contains(&v) {
            return Err(Error::UnknownVertex(v));
        }
        Ok(self.incident_edges_unchecked(v))
    }

    fn incident_edges_unchecked(&self, v: VertexId) -> Vec<EdgeId> {
        self.edges
            .iter()
            .filter(|(_, e)| e.u == v || e.v == v)
            .map(|(id, _)| *id)
            .collect()
    }

    pub fn total_weight(&self) -> Rational {
        self.edges.values().map(|e| e.weight).sum()
    }

    /// Replaces `u` and `v` by one fresh vertex. Edges between them become
    /// self-loops; edge ids and weights are kept.
    pub fn contract(&self, u: VertexId, v: VertexId) -> Result<(Multigraph, VertexId)> {
        let mut g = self.clone();
        let merged = g.contract_in_place(u, v)?;
        Ok((g, merged))
    }

    pub fn contract_in_place(&mut self, u: VertexId, v: VertexId) -> Result<VertexId> {
        let merged = self.reserve_id();
        self.contract_into(u, v, merged)?;
        Ok(merged)
    }

    /// Contraction with a caller-chosen id for the merged vertex.
    pub fn contract_into(&mut self, u: VertexId, v: VertexId, merged: VertexId) -> Result<()> {
        if u == v {
            return Err(Error::SelfContraction(u));
        }
        for x in [u, v] {
            if !self.vertices.contains(&x) {
                return Err(Error::UnknownVertex(x));
            }
        }
        if self.vertices.contains(&merged) {
            return Err(Error::DuplicateId(merged.0));
        }
        self.vertices.remove(&u);
        self.vertices.remove(&v);
        self.vertices.insert(merged);
        self.next_vertex = self.next_vertex.max(merged.0 + 1);
        for e in self.edges.values_mut() {
            if e.u == u || e.u == v {
                e.u = merged;
            }
            if e.v == u || e.v == v {
                e.v = merged;
            }
        }
        Ok(())
    }

    /// Total weight of edges whose endpoints lie on different sides.
    pub fn cut_value(&self, side: &Bipartition) -> Result<Rational> {
        if let Some(v) = self.vertices.iter().find(|v| !side.contains_key(v)) {
            return Err(Error::Unassigned(*v));
        }
        Ok(self
            .edges
            .values()
            .filter(|e| side[&e.u] != side[&e.v])
            .map(|e| e.weight)
            .fold(Rational::zero(), |a, w| a + w))
    }

    /// Vertex sets of the connected components, each sorted.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut adj: BTreeMap<VertexId, Vec<VertexId>> =
            self.vertices.iter().map(|&v| (v, Vec::new())).collect();
        for e in self.edges.values() {
            adj.get_mut(&e.u).unwrap().push(e.v);
            adj.get_mut(&e.v).unwrap().push(e.u);
        }
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &start in &self.vertices {
            if !seen.insert(start) {
                continue;
            }
            let mut comp = vec![start];
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                for &y in &adj[&x] {
                    if seen.insert(y) {
                        comp.push(y);
                        stack.push(y);
                    }
                }
            }
            comp.sort();
            out.push(comp);
        }
        out
    }
}

/// Counters describing one solve.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    pub vertices: usize,
    pub crossings: usize,
    pub branches: u64,
    pub infeasible_branches: u64,
    #[serde(with = "crate::rational::as_text")]
    pub ledger_total: Rational,
    pub best_branch: u64,
}

/// A bipartition with its exact value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutSolution {
    pub side: Bipartition,
    pub value: Rational,
    pub stats: SolveStats,
}

impl CutSolution {
    /// Both sides swapped; the value is unchanged.
    pub fn flipped(&self) -> CutSolution {
        CutSolution {
            side: self.side.iter().map(|(&v, &s)| (v, !s)).collect(),
            value: self.value,
            stats: self.stats.clone(),
        }
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    pub(crate) fn graph_from(n: usize, edges: &[(u32, u32, i64)]) -> Multigraph {
        let mut g = Multigraph::new();
        for _ in 0..n {
            g.add_vertex();
        }
        for &(u, v, w) in edges {
            g.add_edge(VertexId(u), VertexId(v), r(w)).unwrap();
        }
        g
    }

    fn split(g: &Multigraph, ones: &[u32]) -> Bipartition {
        g.vertices().map(|v| (v, ones.contains(&v.0))).collect()
    }

    #[test]
    fn degrees() {
        let tri = graph_from(3, &[(0, 1, 1), (1, 2, 1), (2, 0, 1)]);
        for v in tri.vertices() {
            assert_eq!(tri.degree(v).unwrap(), 2);
        }
        let looped = graph_from(2, &[(0, 0, 1), (0, 1, 1)]);
        assert_eq!(looped.degree(VertexId(0)).unwrap(), 3);
        let mut iso = Multigraph::new();
        let v = iso.add_vertex();
        assert_eq!(iso.degree(v).unwrap(), 0);
        assert!(matches!(iso.degree(VertexId(7)), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn contraction_examples() {
        let path = graph_from(3, &[(0, 1, 1), (1, 2, 1)]);
        let (g, m) = path.contract(VertexId(0), VertexId(2)).unwrap();
        assert_eq!(g.vertex_count(), 2);
        let parallel: Vec<_> = g.edges().filter(|(_, e)| e.other(m) == VertexId(1)).collect();
        assert_eq!(parallel.len(), 2);
        assert!(parallel.iter().all(|(_, e)| e.weight == r(1)));

        let single = graph_from(2, &[(0, 1, 4)]);
        let (g, m) = single.contract(VertexId(0), VertexId(1)).unwrap();
        let (_, e) = g.edges().next().unwrap();
        assert!(e.is_loop() && e.u == m);

        let k4 = graph_from(4, &[(0, 1, 1), (0, 2, 1), (0, 3, 1), (1, 2, 1), (1, 3, 1), (2, 3, 1)]);
        let (g, m) = k4.contract(VertexId(0), VertexId(1)).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 6);
        assert_eq!(g.edges().filter(|(_, e)| !e.is_loop()).count(), 5);
        assert_eq!(g.edges().filter(|(_, e)| e.is_loop() && e.u == m).count(), 1);

        assert!(matches!(k4.contract(VertexId(1), VertexId(1)), Err(Error::SelfContraction(_))));
        assert!(matches!(k4.contract(VertexId(1), VertexId(9)), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn cut_value_examples() {
        let e = graph_from(2, &[(0, 1, 3)]);
        assert_eq!(e.cut_value(&split(&e, &[0])).unwrap(), r(3));
        assert_eq!(e.cut_value(&split(&e, &[])).unwrap(), r(0));
        let c5 = graph_from(5, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 0, 1)]);
        assert_eq!(c5.cut_value(&split(&c5, &[1, 3])).unwrap(), r(4));
        let partial: Bipartition = [(VertexId(0), true)].into_iter().collect();
        assert!(matches!(c5.cut_value(&partial), Err(Error::Unassigned(VertexId(1)))));
    }

    #[test]
    fn ids_are_not_reused() {
        let mut g = graph_from(2, &[(0, 1, 1)]);
        let e = g.edges().next().unwrap().0;
        g.remove_edge(e).unwrap();
        let e2 = g.add_edge(VertexId(0), VertexId(1), r(1)).unwrap();
        assert_ne!(e, e2);
        let (g2, m) = g.contract(VertexId(0), VertexId(1)).unwrap();
        assert!(m.0 >= 2);
        assert!(!g2.contains_vertex(VertexId(0)));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_graph() -> impl Strategy<Value = Multigraph> {
            (1usize..8).prop_flat_map(|n| {
                let edge = (0..n as u32, 0..n as u32, -5i64..=5);
                proptest::collection::vec(edge, 0..14).prop_map(move |es| {
                    let loop_free: Vec<_> = es.into_iter().filter(|(u, v, _)| u != v).collect();
                    graph_from(n, &loop_free)
                })
            })
        }

        proptest! {
            #[test]
            fn contraction_preserves_count_and_weight(g in arb_graph(), a in 0u32..8, step in 1u32..8) {
                let n = g.vertex_count() as u32;
                prop_assume!(n >= 2);
                let (a, b) = (VertexId(a % n), VertexId((a % n + 1 + step % (n - 1)) % n));
                let (h, _) = g.contract(a, b).unwrap();
                prop_assert_eq!(h.edge_count(), g.edge_count());
                prop_assert_eq!(h.total_weight(), g.total_weight());
            }

            #[test]
            fn cut_value_flip_symmetry(g in arb_graph(), mask in 0u32..256) {
                let side: Bipartition = g.vertices().map(|v| (v, mask >> v.0 & 1 == 1)).collect();
                let flipped: Bipartition = side.iter().map(|(&v, &s)| (v, !s)).collect();
                prop_assert_eq!(g.cut_value(&side).unwrap(), g.cut_value(&flipped).unwrap());
                let same: Bipartition = g.vertices().map(|v| (v, false)).collect();
                prop_assert_eq!(g.cut_value(&same).unwrap(), Rational::zero());
            }
        }
    }
}
