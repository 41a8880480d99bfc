//! Turning a b-factor back into a cut of the original graph.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_traits::Zero;

use crate::branching::ConstrainedInstance;
use crate::dual::{DualBFactorInstance, DualEdgeOrigin};
use crate::error::{Error, Result};
use crate::gadgets::{OffsetLedger, TransformLog, TransformRecord};
use crate::graph::{Bipartition, CutSolution, EdgeId, Multigraph};
use crate::matching::FactorSolution;
use crate::rational::Rational;

/// Which edges a factor uses at a pseudo-face vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseTag {
    /// da and the loop: ac is cut.
    DaLoop,
    /// cd and the loop: both diagonals are cut.
    CdLoop,
    /// bc and the loop: bd is cut.
    BcLoop,
    /// bc, cd and da: neither diagonal is cut.
    AllThree,
}

impl CaseTag {
    /// (ac cut, bd cut)
    pub fn diagonals(self) -> (bool, bool) {
        match self {
            CaseTag::DaLoop => (true, false),
            CaseTag::CdLoop => (true, true),
            CaseTag::BcLoop => (false, true),
            CaseTag::AllThree => (false, false),
        }
    }
}

/// Reads off the case at pseudo-face `i`.
pub fn pseudo_face_case(
    leaf: &ConstrainedInstance,
    dual: &DualBFactorInstance,
    sol: &FactorSolution,
    i: usize,
) -> Result<CaseTag> {
    let pf = &leaf.pseudo_faces[i];
    let pv = dual.pseudo_vertices[i];
    let chosen = |e: EdgeId| dual.dual_of(e).is_some_and(|de| sol.edges.contains(&de));
    let [_, bc, cd, da] = pf.cycle_edges;
    let looped = sol.edges.iter().any(|de| dual.edge_origin.get(de) == Some(&DualEdgeOrigin::VertexLoop(pv)));
    match (chosen(bc), chosen(cd), chosen(da), looped) {
        (false, false, true, true) => Ok(CaseTag::DaLoop),
        (false, true, false, true) => Ok(CaseTag::CdLoop),
        (true, false, false, true) => Ok(CaseTag::BcLoop),
        (true, true, true, false) => Ok(CaseTag::AllThree),
        other => Err(Error::PseudoFace(format!("crossing {} uses {other:?}", pf.crossing))),
    }
}

/// Primal edges of the leaf that the factor cuts: chosen dual edges, every
/// constrained edge, and the diagonals each pseudo-face case demands.
pub fn cut_edges(leaf: &ConstrainedInstance, dual: &DualBFactorInstance, sol: &FactorSolution) -> Result<BTreeSet<EdgeId>> {
    let mut x = BTreeSet::new();
    for de in &sol.edges {
        if let Some(DualEdgeOrigin::Primal(e)) = dual.edge_origin.get(de) {
            x.insert(*e);
        }
    }
    for (i, pf) in leaf.pseudo_faces.iter().enumerate() {
        x.insert(pf.constrained_edge());
        let (ac, bd) = pseudo_face_case(leaf, dual, sol, i)?.diagonals();
        if ac {
            x.insert(pf.diagonals.0);
        }
        if bd {
            x.insert(pf.diagonals.1);
        }
    }
    Ok(x)
}

/// 2-colors the leaf so that exactly the edges of the cut set change side.
/// The smallest vertex of every component goes to side false.
pub fn lift_factor_to_cut(leaf: &ConstrainedInstance, dual: &DualBFactorInstance, sol: &FactorSolution) -> Result<Bipartition> {
    let x = cut_edges(leaf, dual, sol)?;
    color_by_cut(leaf.drawing.graph(), &x)
}

pub fn color_by_cut(g: &Multigraph, x: &BTreeSet<EdgeId>) -> Result<Bipartition> {
    let mut adj: BTreeMap<_, Vec<(EdgeId, _)>> = g.vertices().map(|v| (v, Vec::new())).collect();
    for (e, edge) in g.edges() {
        adj.get_mut(&edge.u).expect("endpoint").push((e, edge.v));
        adj.get_mut(&edge.v).expect("endpoint").push((e, edge.u));
    }
    let mut side = Bipartition::new();
    for start in g.vertices() {
        if side.contains_key(&start) {
            continue;
        }
        side.insert(start, false);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let su = side[&u];
            for &(e, w) in &adj[&u] {
                let want = su ^ x.contains(&e);
                match side.get(&w) {
                    Some(&sw) if sw != want => return Err(Error::InconsistentColoring(e)),
                    Some(_) => {}
                    None => {
                        side.insert(w, want);
                        queue.push_back(w);
                    }
                }
            }
        }
    }
    Ok(side)
}

/// Walks the log backwards, mapping a partition of the transformed graph
/// to one of the graph the log started from.
pub fn undo_transforms(side: &Bipartition, log: &TransformLog) -> Result<Bipartition> {
    let mut side = side.clone();
    for r in log.records.iter().rev() {
        match r {
            TransformRecord::Subdivide { inner, .. } => {
                side.remove(&inner.0);
                side.remove(&inner.1);
            }
            TransformRecord::RemoveDegreeOne { vertex, edge } => {
                let s = match edge {
                    None => false,
                    Some((_, nb, w)) => {
                        let sn = *side.get(nb).ok_or(Error::Unassigned(*nb))?;
                        // cut the edge exactly when that gains weight
                        if *w >= Rational::zero() {
                            !sn
                        } else {
                            sn
                        }
                    }
                };
                side.insert(*vertex, s);
            }
            TransformRecord::Contract { a, b, merged } => {
                let s = side.remove(merged).ok_or(Error::Unassigned(*merged))?;
                side.insert(*a, s);
                side.insert(*b, s);
            }
            TransformRecord::AddZeroEdges { .. } => {}
        }
    }
    Ok(side)
}

/// Lifts a leaf optimum through the leaf log; the value drops by the leaf
/// ledger.
pub fn undo_leaf(side: &Bipartition, value: Rational, log: &TransformLog, ledger: &OffsetLedger) -> Result<(Bipartition, Rational)> {
    Ok((undo_transforms(side, log)?, value - ledger.total()))
}

/// Recomputes the cut value on `g` and checks it against the reported one.
pub fn verify_solution(g: &Multigraph, sol: &CutSolution) -> Result<()> {
    for v in g.vertices() {
        if !sol.side.contains_key(&v) {
            return Err(Error::Unassigned(v));
        }
    }
    let recomputed = g.cut_value(&sol.side)?;
    if recomputed != sol.value {
        return Err(Error::Verification { reported: sol.value, recomputed });
    }
    Ok(())
}
