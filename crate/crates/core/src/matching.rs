//! Maximum-weight b-factors through perfect matching.
//!
//! Each dual vertex v is replaced by d(v) external slots (one per edge end;
//! a loop owns two) and d(v) - b(v) internal vertices joined to every slot
//! by zero-weight edges. Perfect matchings of the result correspond to
//! b-factors of the same weight.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::dual::{check_feasibility, DualBFactorInstance, Feasibility};
use crate::error::{Error, Result};
use crate::graph::EdgeId;
use crate::rational::{common_denominator, scaled_integer, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatchEdgeOrigin {
    /// A dual edge or loop.
    Dual(EdgeId),
    /// Gadget edge between a slot and an internal vertex.
    Internal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingInstance {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize, Rational)>,
    pub origin: Vec<MatchEdgeOrigin>,
}

/// A b-factor: the chosen dual edges (loops included) and their weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorSolution {
    pub edges: BTreeSet<EdgeId>,
    pub cost: Rational,
    pub matching_weight: Rational,
}

pub fn gabow_reduce(inst: &DualBFactorInstance) -> Result<MatchingInstance> {
    if let Feasibility::Infeasible(why) = check_feasibility(inst) {
        return Err(Error::Infeasible(why));
    }
    let mut slots: BTreeMap<crate::graph::VertexId, Vec<usize>> = inst.graph.vertices().map(|v| (v, Vec::new())).collect();
    let mut n = 0usize;
    let mut edges = Vec::new();
    let mut origin = Vec::new();
    for (e, edge) in inst.graph.edges() {
        let (i, j) = (n, n + 1);
        n += 2;
        slots.get_mut(&edge.u).expect("endpoint").push(i);
        slots.get_mut(&edge.v).expect("endpoint").push(j);
        edges.push((i, j, edge.weight));
        origin.push(MatchEdgeOrigin::Dual(e));
    }
    for (v, ext) in &slots {
        let b = inst.b.get(v).copied().unwrap_or(0);
        let internal = ext.len() as i64 - b;
        for _ in 0..internal {
            let k = n;
            n += 1;
            for &s in ext {
                edges.push((s, k, Rational::zero()));
                origin.push(MatchEdgeOrigin::Internal);
            }
        }
    }
    Ok(MatchingInstance { vertex_count: n, edges, origin })
}

/// Maximum-weight perfect matching; returns the indices of the matched
/// edges and their total weight, or `None` if no perfect matching exists.
pub fn max_weight_perfect_matching(n: usize, edges: &[(usize, usize, Rational)]) -> Result<Option<(Vec<usize>, Rational)>> {
    if n % 2 == 1 {
        return Ok(None);
    }
    if n == 0 {
        return Ok(Some((Vec::new(), Rational::zero())));
    }
    // integers, shifted to be nonnegative (every perfect matching has n/2
    // edges, so a common shift does not change the optimum), then doubled
    let scale = common_denominator(edges.iter().map(|e| &e.2));
    let mut ints = Vec::with_capacity(edges.len());
    for &(_, _, w) in edges {
        ints.push(scaled_integer(&w, scale).ok_or(Error::Overflow("scaling matching weights"))?);
    }
    let shift = ints.iter().copied().min().unwrap_or(0).min(0);
    let mut scaled = Vec::with_capacity(edges.len());
    for (k, &(i, j, _)) in edges.iter().enumerate() {
        let w = ints[k]
            .checked_sub(shift)
            .and_then(|w| w.checked_mul(2))
            .filter(|w| *w < 1 << 40)
            .ok_or(Error::Overflow("shifting matching weights"))?;
        if i == j {
            return Err(Error::Infeasible(format!("matching edge {k} is a loop")));
        }
        scaled.push((i, j, w));
    }
    let mate = Blossom::new(n, &scaled).solve();
    if mate.iter().any(|m| m.is_none()) {
        return Ok(None);
    }
    // recover edge indices; with parallel edges pick the heaviest
    let mut best: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (k, &(i, j, w)) in scaled.iter().enumerate() {
        let key = (i.min(j), i.max(j));
        match best.get(&key) {
            Some(&old) if scaled[old].2 >= w => {}
            _ => {
                best.insert(key, k);
            }
        }
    }
    let mut chosen = Vec::with_capacity(n / 2);
    let mut total = Rational::zero();
    for (v, m) in mate.iter().enumerate() {
        let u = m.expect("perfect");
        if v < u {
            let k = best[&(v, u)];
            chosen.push(k);
            total += edges[k].2;
        }
    }
    chosen.sort_unstable();
    Ok(Some((chosen, total)))
}

/// Maximum-weight b-factor, or `None` when the instance has none.
pub fn solve_bfactor(inst: &DualBFactorInstance) -> Result<Option<FactorSolution>> {
    let m = match gabow_reduce(inst) {
        Ok(m) => m,
        Err(Error::Infeasible(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let Some((chosen, weight)) = max_weight_perfect_matching(m.vertex_count, &m.edges)? else {
        return Ok(None);
    };
    let mut edges = BTreeSet::new();
    let mut cost = Rational::zero();
    for k in chosen {
        if let MatchEdgeOrigin::Dual(e) = m.origin[k] {
            edges.insert(e);
            cost += m.edges[k].2;
        }
    }
    Ok(Some(FactorSolution { edges, cost, matching_weight: weight }))
}

/// Degree of every dual vertex in `sol` equals its b (loops count 2).
pub fn is_exact_factor(inst: &DualBFactorInstance, sol: &FactorSolution) -> bool {
    let mut deg: BTreeMap<crate::graph::VertexId, i64> = inst.graph.vertices().map(|v| (v, 0)).collect();
    for e in &sol.edges {
        let Ok(edge) = inst.graph.edge(*e) else {
            return false;
        };
        *deg.get_mut(&edge.u).expect("endpoint") += 1;
        *deg.get_mut(&edge.v).expect("endpoint") += 1;
    }
    deg.iter().all(|(v, d)| inst.b.get(v).copied().unwrap_or(0) == *d)
}

/// Edmonds' weighted blossom algorithm with primal-dual updates, in the
/// formulation of van Rantwijk's `mwmatching`, restricted to maximum
/// cardinality. Weights are nonnegative even integers.
struct Blossom<'a> {
    nvertex: usize,
    edges: &'a [(usize, usize, i64)],
    endpoint: Vec<usize>,
    neighbend: Vec<Vec<usize>>,
    mate: Vec<Option<usize>>,
    label: Vec<u8>,
    labelend: Vec<Option<usize>>,
    inblossom: Vec<usize>,
    blossomparent: Vec<Option<usize>>,
    blossomchilds: Vec<Vec<usize>>,
    blossombase: Vec<Option<usize>>,
    blossomendps: Vec<Vec<usize>>,
    bestedge: Vec<Option<usize>>,
    blossombestedges: Vec<Option<Vec<usize>>>,
    unusedblossoms: Vec<usize>,
    dualvar: Vec<i64>,
    allowedge: Vec<bool>,
    queue: Vec<usize>,
}

fn at<T: Copy>(v: &[T], i: isize) -> T {
    v[i.rem_euclid(v.len() as isize) as usize]
}

impl<'a> Blossom<'a> {
    fn new(nvertex: usize, edges: &'a [(usize, usize, i64)]) -> Self {
        let nedge = edges.len();
        let maxweight = edges.iter().map(|e| e.2).max().unwrap_or(0).max(0);
        let mut endpoint = Vec::with_capacity(2 * nedge);
        for &(i, j, _) in edges {
            endpoint.push(i);
            endpoint.push(j);
        }
        let mut neighbend = vec![Vec::new(); nvertex];
        for (k, &(i, j, _)) in edges.iter().enumerate() {
            neighbend[i].push(2 * k + 1);
            neighbend[j].push(2 * k);
        }
        let mut blossombase: Vec<Option<usize>> = (0..nvertex).map(Some).collect();
        blossombase.extend(std::iter::repeat_n(None, nvertex));
        let mut dualvar = vec![maxweight; nvertex];
        dualvar.extend(std::iter::repeat_n(0, nvertex));
        Blossom {
            nvertex,
            edges,
            endpoint,
            neighbend,
            mate: vec![None; nvertex],
            label: vec![0; 2 * nvertex],
            labelend: vec![None; 2 * nvertex],
            inblossom: (0..nvertex).collect(),
            blossomparent: vec![None; 2 * nvertex],
            blossomchilds: vec![Vec::new(); 2 * nvertex],
            blossombase,
            blossomendps: vec![Vec::new(); 2 * nvertex],
            bestedge: vec![None; 2 * nvertex],
            blossombestedges: vec![None; 2 * nvertex],
            unusedblossoms: (nvertex..2 * nvertex).collect(),
            dualvar,
            allowedge: vec![false; nedge],
            queue: Vec::new(),
        }
    }

    fn slack(&self, k: usize) -> i64 {
        let (i, j, w) = self.edges[k];
        self.dualvar[i] + self.dualvar[j] - 2 * w
    }

    fn leaves(&self, b: usize, out: &mut Vec<usize>) {
        if b < self.nvertex {
            out.push(b);
        } else {
            for &t in &self.blossomchilds[b] {
                self.leaves(t, out);
            }
        }
    }

    fn blossom_leaves(&self, b: usize) -> Vec<usize> {
        let mut out = Vec::new();
        self.leaves(b, &mut out);
        out
    }

    fn assign_label(&mut self, w: usize, t: u8, p: Option<usize>) {
        let b = self.inblossom[w];
        debug_assert!(self.label[w] == 0 && self.label[b] == 0);
        self.label[w] = t;
        self.label[b] = t;
        self.labelend[w] = p;
        self.labelend[b] = p;
        self.bestedge[w] = None;
        self.bestedge[b] = None;
        if t == 1 {
            let l = self.blossom_leaves(b);
            self.queue.extend(l);
        } else if t == 2 {
            let base = self.blossombase[b].expect("blossom has a base");
            let m = self.mate[base].expect("T-blossom base is matched");
            self.assign_label(self.endpoint[m], 1, Some(m ^ 1));
        }
    }

    fn scan_blossom(&mut self, v: usize, w: usize) -> Option<usize> {
        let mut path = Vec::new();
        let mut base = None;
        let (mut v, mut w) = (Some(v), Some(w));
        while let Some(vv) = v {
            let b = self.inblossom[vv];
            if self.label[b] & 4 != 0 {
                base = self.blossombase[b];
                break;
            }
            debug_assert_eq!(self.label[b], 1);
            path.push(b);
            self.label[b] = 5;
            match self.labelend[b] {
                None => v = None,
                Some(le) => {
                    let t = self.endpoint[le];
                    let bt = self.inblossom[t];
                    debug_assert_eq!(self.label[bt], 2);
                    v = Some(self.endpoint[self.labelend[bt].expect("T-blossom has a label end")]);
                }
            }
            if w.is_some() {
                std::mem::swap(&mut v, &mut w);
            }
        }
        for b in path {
            self.label[b] = 1;
        }
        base
    }

    fn add_blossom(&mut self, base: usize, k: usize) {
        let (mut v, mut w, _) = self.edges[k];
        let bb = self.inblossom[base];
        let mut bv = self.inblossom[v];
        let mut bw = self.inblossom[w];
        let b = self.unusedblossoms.pop().expect("free blossom slot");
        self.blossombase[b] = Some(base);
        self.blossomparent[b] = None;
        self.blossomparent[bb] = Some(b);
        let mut path = Vec::new();
        let mut endps = Vec::new();
        while bv != bb {
            self.blossomparent[bv] = Some(b);
            path.push(bv);
            let le = self.labelend[bv].expect("label end");
            endps.push(le);
            v = self.endpoint[le];
            bv = self.inblossom[v];
        }
        path.push(bb);
        path.reverse();
        endps.reverse();
        endps.push(2 * k);
        while bw != bb {
            self.blossomparent[bw] = Some(b);
            path.push(bw);
            let le = self.labelend[bw].expect("label end");
            endps.push(le ^ 1);
            w = self.endpoint[le];
            bw = self.inblossom[w];
        }
        debug_assert_eq!(self.label[bb], 1);
        self.label[b] = 1;
        self.labelend[b] = self.labelend[bb];
        self.dualvar[b] = 0;
        self.blossomchilds[b] = path.clone();
        self.blossomendps[b] = endps;
        for v in self.blossom_leaves(b) {
            if self.label[self.inblossom[v]] == 2 {
                self.queue.push(v);
            }
            self.inblossom[v] = b;
        }
        let mut bestedgeto: Vec<Option<usize>> = vec![None; 2 * self.nvertex];
        for &bv in &path {
            let nblists: Vec<Vec<usize>> = match self.blossombestedges[bv].take() {
                None => self
                    .blossom_leaves(bv)
                    .into_iter()
                    .map(|v| self.neighbend[v].iter().map(|p| p / 2).collect())
                    .collect(),
                Some(list) => vec![list],
            };
            for nblist in nblists {
                for k in nblist {
                    let (mut i, mut j, _) = self.edges[k];
                    if self.inblossom[j] == b {
                        std::mem::swap(&mut i, &mut j);
                    }
                    let _ = i;
                    let bj = self.inblossom[j];
                    if bj != b
                        && self.label[bj] == 1
                        && bestedgeto[bj].is_none_or(|old| self.slack(k) < self.slack(old))
                    {
                        bestedgeto[bj] = Some(k);
                    }
                }
            }
            self.bestedge[bv] = None;
        }
        let list: Vec<usize> = bestedgeto.into_iter().flatten().collect();
        let mut best = None;
        for &k in &list {
            if best.is_none_or(|old| self.slack(k) < self.slack(old)) {
                best = Some(k);
            }
        }
        self.blossombestedges[b] = Some(list);
        self.bestedge[b] = best;
    }

    fn expand_blossom(&mut self, b: usize, endstage: bool) {
        let childs = self.blossomchilds[b].clone();
        for &s in &childs {
            self.blossomparent[s] = None;
            if s < self.nvertex {
                self.inblossom[s] = s;
            } else if endstage && self.dualvar[s] == 0 {
                self.expand_blossom(s, endstage);
            } else {
                for v in self.blossom_leaves(s) {
                    self.inblossom[v] = s;
                }
            }
        }
        if !endstage && self.label[b] == 2 {
            let le = self.labelend[b].expect("T-blossom label end");
            let entrychild = self.inblossom[self.endpoint[le ^ 1]];
            let len = childs.len() as isize;
            let mut j = childs.iter().position(|&c| c == entrychild).expect("entry child") as isize;
            let (jstep, endptrick): (isize, usize) = if j & 1 == 1 {
                j -= len;
                (1, 0)
            } else {
                (-1, 1)
            };
            let endps = self.blossomendps[b].clone();
            let mut p = le;
            while j != 0 {
                self.label[self.endpoint[p ^ 1]] = 0;
                let q = at(&endps, j - endptrick as isize);
                self.label[self.endpoint[q ^ endptrick ^ 1]] = 0;
                self.assign_label(self.endpoint[p ^ 1], 2, Some(p));
                self.allowedge[q / 2] = true;
                j += jstep;
                p = at(&endps, j - endptrick as isize) ^ endptrick;
                self.allowedge[p / 2] = true;
                j += jstep;
            }
            let bv = at(&childs, j);
            self.label[self.endpoint[p ^ 1]] = 2;
            self.label[bv] = 2;
            self.labelend[self.endpoint[p ^ 1]] = Some(p);
            self.labelend[bv] = Some(p);
            self.bestedge[bv] = None;
            j += jstep;
            while at(&childs, j) != entrychild {
                let bv = at(&childs, j);
                if self.label[bv] == 1 {
                    j += jstep;
                    continue;
                }
                let leaves = self.blossom_leaves(bv);
                if let Some(&v) = leaves.iter().find(|&&v| self.label[v] != 0) {
                    debug_assert_eq!(self.label[v], 2);
                    debug_assert_eq!(self.inblossom[v], bv);
                    self.label[v] = 0;
                    let base = self.blossombase[bv].expect("base");
                    let m = self.mate[base].expect("matched base");
                    self.label[self.endpoint[m]] = 0;
                    let lv = self.labelend[v];
                    self.assign_label(v, 2, lv);
                }
                j += jstep;
            }
        }
        self.label[b] = 0;
        self.labelend[b] = None;
        self.blossomchilds[b].clear();
        self.blossomendps[b].clear();
        self.blossombase[b] = None;
        self.blossombestedges[b] = None;
        self.bestedge[b] = None;
        self.unusedblossoms.push(b);
    }

    fn augment_blossom(&mut self, b: usize, v: usize) {
        let mut t = v;
        while self.blossomparent[t] != Some(b) {
            t = self.blossomparent[t].expect("v lies inside b");
        }
        if t >= self.nvertex {
            self.augment_blossom(t, v);
        }
        let childs = self.blossomchilds[b].clone();
        let endps = self.blossomendps[b].clone();
        let len = childs.len() as isize;
        let i = childs.iter().position(|&c| c == t).expect("child") as isize;
        let mut j = i;
        let (jstep, endptrick): (isize, usize) = if i & 1 == 1 {
            j -= len;
            (1, 0)
        } else {
            (-1, 1)
        };
        while j != 0 {
            j += jstep;
            let t = at(&childs, j);
            let p = at(&endps, j - endptrick as isize) ^ endptrick;
            if t >= self.nvertex {
                self.augment_blossom(t, self.endpoint[p]);
            }
            j += jstep;
            let t = at(&childs, j);
            if t >= self.nvertex {
                self.augment_blossom(t, self.endpoint[p ^ 1]);
            }
            self.mate[self.endpoint[p]] = Some(p ^ 1);
            self.mate[self.endpoint[p ^ 1]] = Some(p);
        }
        let i = i as usize;
        let mut c = childs[i..].to_vec();
        c.extend_from_slice(&childs[..i]);
        let mut e = endps[i..].to_vec();
        e.extend_from_slice(&endps[..i]);
        self.blossombase[b] = self.blossombase[c[0]];
        self.blossomchilds[b] = c;
        self.blossomendps[b] = e;
        debug_assert_eq!(self.blossombase[b], Some(v));
    }

    fn augment_matching(&mut self, k: usize) {
        let (v, w, _) = self.edges[k];
        for (mut s, mut p) in [(v, 2 * k + 1), (w, 2 * k)] {
            loop {
                let bs = self.inblossom[s];
                debug_assert_eq!(self.label[bs], 1);
                if bs >= self.nvertex {
                    self.augment_blossom(bs, s);
                }
                self.mate[s] = Some(p);
                let Some(le) = self.labelend[bs] else {
                    break;
                };
                let t = self.endpoint[le];
                let bt = self.inblossom[t];
                debug_assert_eq!(self.label[bt], 2);
                let lt = self.labelend[bt].expect("T-blossom label end");
                s = self.endpoint[lt];
                let j = self.endpoint[lt ^ 1];
                debug_assert_eq!(self.blossombase[bt], Some(t));
                if bt >= self.nvertex {
                    self.augment_blossom(bt, j);
                }
                self.mate[j] = Some(lt);
                p = lt ^ 1;
            }
        }
    }

    /// Returns the partner of every vertex (None if unmatched).
    fn solve(mut self) -> Vec<Option<usize>> {
        let n = self.nvertex;
        if self.edges.is_empty() {
            return vec![None; n];
        }
        for _ in 0..n {
            self.label.iter_mut().for_each(|x| *x = 0);
            self.bestedge.iter_mut().for_each(|x| *x = None);
            for x in &mut self.blossombestedges[n..] {
                *x = None;
            }
            self.allowedge.iter_mut().for_each(|x| *x = false);
            self.queue.clear();
            for v in 0..n {
                if self.mate[v].is_none() && self.label[self.inblossom[v]] == 0 {
                    self.assign_label(v, 1, None);
                }
            }
            let mut augmented = false;
            loop {
                while let Some(v) = (!augmented).then(|| self.queue.pop()).flatten() {
                    debug_assert_eq!(self.label[self.inblossom[v]], 1);
                    for idx in 0..self.neighbend[v].len() {
                        let p = self.neighbend[v][idx];
                        let k = p / 2;
                        let w = self.endpoint[p];
                        if self.inblossom[v] == self.inblossom[w] {
                            continue;
                        }
                        let mut kslack = 0;
                        if !self.allowedge[k] {
                            kslack = self.slack(k);
                            if kslack <= 0 {
                                self.allowedge[k] = true;
                            }
                        }
                        if self.allowedge[k] {
                            if self.label[self.inblossom[w]] == 0 {
                                self.assign_label(w, 2, Some(p ^ 1));
                            } else if self.label[self.inblossom[w]] == 1 {
                                match self.scan_blossom(v, w) {
                                    Some(base) => self.add_blossom(base, k),
                                    None => {
                                        self.augment_matching(k);
                                        augmented = true;
                                        break;
                                    }
                                }
                            } else if self.label[w] == 0 {
                                debug_assert_eq!(self.label[self.inblossom[w]], 2);
                                self.label[w] = 2;
                                self.labelend[w] = Some(p ^ 1);
                            }
                        } else if self.label[self.inblossom[w]] == 1 {
                            let b = self.inblossom[v];
                            if self.bestedge[b].is_none_or(|old| kslack < self.slack(old)) {
                                self.bestedge[b] = Some(k);
                            }
                        } else if self.label[w] == 0 && self.bestedge[w].is_none_or(|old| kslack < self.slack(old)) {
                            self.bestedge[w] = Some(k);
                        }
                    }
                }
                if augmented {
                    break;
                }
                // dual update
                let mut deltatype = 0u8;
                let mut delta = 0i64;
                let mut deltaedge = None;
                let mut deltablossom = None;
                for v in 0..n {
                    if self.label[self.inblossom[v]] == 0 {
                        if let Some(be) = self.bestedge[v] {
                            let d = self.slack(be);
                            if deltatype == 0 || d < delta {
                                delta = d;
                                deltatype = 2;
                                deltaedge = Some(be);
                            }
                        }
                    }
                }
                for b in 0..2 * n {
                    if self.blossomparent[b].is_none() && self.label[b] == 1 {
                        if let Some(be) = self.bestedge[b] {
                            let kslack = self.slack(be);
                            debug_assert_eq!(kslack % 2, 0);
                            let d = kslack / 2;
                            if deltatype == 0 || d < delta {
                                delta = d;
                                deltatype = 3;
                                deltaedge = Some(be);
                            }
                        }
                    }
                }
                for b in n..2 * n {
                    if self.blossombase[b].is_some()
                        && self.blossomparent[b].is_none()
                        && self.label[b] == 2
                        && (deltatype == 0 || self.dualvar[b] < delta)
                    {
                        delta = self.dualvar[b];
                        deltatype = 4;
                        deltablossom = Some(b);
                    }
                }
                if deltatype == 0 {
                    // no further progress possible: optimum reached
                    deltatype = 1;
                    delta = self.dualvar[..n].iter().copied().min().unwrap_or(0).max(0);
                }
                for v in 0..n {
                    match self.label[self.inblossom[v]] {
                        1 => self.dualvar[v] -= delta,
                        2 => self.dualvar[v] += delta,
                        _ => {}
                    }
                }
                for b in n..2 * n {
                    if self.blossombase[b].is_some() && self.blossomparent[b].is_none() {
                        match self.label[b] {
                            1 => self.dualvar[b] += delta,
                            2 => self.dualvar[b] -= delta,
                            _ => {}
                        }
                    }
                }
                match deltatype {
                    1 => break,
                    2 => {
                        let k = deltaedge.expect("edge");
                        self.allowedge[k] = true;
                        let (mut i, j, _) = self.edges[k];
                        if self.label[self.inblossom[i]] == 0 {
                            i = j;
                        }
                        debug_assert_eq!(self.label[self.inblossom[i]], 1);
                        self.queue.push(i);
                    }
                    3 => {
                        let k = deltaedge.expect("edge");
                        self.allowedge[k] = true;
                        let (i, _, _) = self.edges[k];
                        debug_assert_eq!(self.label[self.inblossom[i]], 1);
                        self.queue.push(i);
                    }
                    _ => self.expand_blossom(deltablossom.expect("blossom"), false),
                }
            }
            if !augmented {
                break;
            }
            for b in n..2 * n {
                if self.blossomparent[b].is_none()
                    && self.blossombase[b].is_some()
                    && self.label[b] == 1
                    && self.dualvar[b] == 0
                {
                    self.expand_blossom(b, true);
                }
            }
        }
        self.mate.iter().map(|m| m.map(|p| self.endpoint[p])).collect()
    }
}
