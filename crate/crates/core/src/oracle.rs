//! Brute-force references and random instance generators.
//!
//! Everything here is exponential and meant for small inputs only; sizes
//! are checked against configurable bounds.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dual::DualBFactorInstance;
use crate::embedding::{Dart, DrawnInstance, End, SegmentId};
use crate::error::{Error, Result};
use crate::graph::{Bipartition, Multigraph, VertexId};
use crate::rational::{common_denominator, scaled_integer, Rational};

pub const DEFAULT_MAX_VERTICES: usize = 20;
pub const DEFAULT_MAX_EDGES: usize = 24;

/// Size limits for the exhaustive searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBounds {
    pub max_vertices: usize,
    pub max_edges: usize,
}

impl Default for OracleBounds {
    fn default() -> Self {
        OracleBounds { max_vertices: DEFAULT_MAX_VERTICES, max_edges: DEFAULT_MAX_EDGES }
    }
}

impl OracleBounds {
    /// Defaults overridden by `MAXCUT_ORACLE_MAX_VERTICES` and
    /// `MAXCUT_ORACLE_MAX_EDGES` when set.
    pub fn from_env() -> Self {
        let get = |key: &str, default: usize| {
            std::env::var(key).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(default)
        };
        OracleBounds {
            max_vertices: get("MAXCUT_ORACLE_MAX_VERTICES", DEFAULT_MAX_VERTICES),
            max_edges: get("MAXCUT_ORACLE_MAX_EDGES", DEFAULT_MAX_EDGES),
        }
    }
}

/// Integer weights (scaled by a common denominator) of the non-loop edges,
/// as adjacency lists over vertex indices.
struct Scaled {
    ids: Vec<VertexId>,
    adj: Vec<Vec<(usize, i64)>>,
    scale: i64,
}

fn scale_graph(g: &Multigraph) -> Result<Scaled> {
    let ids: Vec<VertexId> = g.vertices().collect();
    let index: BTreeMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let weights: Vec<Rational> = g.edges().map(|(_, e)| e.weight).collect();
    let scale = common_denominator(&weights);
    let mut adj = vec![Vec::new(); ids.len()];
    for (_, e) in g.edges() {
        if e.is_loop() {
            continue;
        }
        let w = scaled_integer(&e.weight, scale).ok_or(Error::Overflow("scaling weights"))?;
        let (i, j) = (index[&e.u], index[&e.v]);
        adj[i].push((j, w));
        adj[j].push((i, w));
    }
    Ok(Scaled { ids, adj, scale })
}

/// Maximum cut by enumerating all bipartitions with the first vertex fixed.
pub fn brute_mc(g: &Multigraph) -> Result<Rational> {
    brute_mc_bounded(g, DEFAULT_MAX_VERTICES)
}

pub fn brute_mc_bounded(g: &Multigraph, max_vertices: usize) -> Result<Rational> {
    brute_mc_with_side(g, max_vertices).map(|(v, _)| v)
}

/// Maximum cut together with one optimal bipartition.
pub fn brute_mc_with_side(g: &Multigraph, max_vertices: usize) -> Result<(Rational, Bipartition)> {
    let out = brute_cmc_with_side(g, &[], max_vertices)?;
    Ok(out.expect("an unconstrained cut always exists"))
}

/// Maximum cut separating every pair in `pairs`, or `None` when no cut
/// separates them all.
pub fn brute_cmc(g: &Multigraph, pairs: &[(VertexId, VertexId)]) -> Result<Option<Rational>> {
    Ok(brute_cmc_with_side(g, pairs, DEFAULT_MAX_VERTICES)?.map(|(v, _)| v))
}

pub fn brute_cmc_bounded(g: &Multigraph, pairs: &[(VertexId, VertexId)], max_vertices: usize) -> Result<Option<Rational>> {
    Ok(brute_cmc_with_side(g, pairs, max_vertices)?.map(|(v, _)| v))
}

pub fn brute_cmc_with_side(
    g: &Multigraph,
    pairs: &[(VertexId, VertexId)],
    max_vertices: usize,
) -> Result<Option<(Rational, Bipartition)>> {
    let n = g.vertex_count();
    if n > max_vertices {
        return Err(Error::OracleBound { what: "vertices", actual: n, limit: max_vertices });
    }
    let s = scale_graph(g)?;
    let index: BTreeMap<VertexId, usize> = s.ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();

    // parity union-find: parity[i] is the side of i relative to its root
    let mut parent: Vec<usize> = (0..n).collect();
    let mut parity = vec![false; n];
    fn find(parent: &mut [usize], parity: &mut [bool], x: usize) -> (usize, bool) {
        if parent[x] == x {
            return (x, false);
        }
        let (r, p) = find(parent, parity, parent[x]);
        parent[x] = r;
        parity[x] ^= p;
        (r, parity[x])
    }
    for &(a, b) in pairs {
        let ia = *index.get(&a).ok_or(Error::UnknownVertex(a))?;
        let ib = *index.get(&b).ok_or(Error::UnknownVertex(b))?;
        let (ra, pa) = find(&mut parent, &mut parity, ia);
        let (rb, pb) = find(&mut parent, &mut parity, ib);
        if ra == rb {
            if pa == pb {
                return Ok(None);
            }
        } else {
            parent[rb] = ra;
            parity[rb] = !(pa ^ pb);
        }
    }
    let mut class_of = vec![0usize; n];
    let mut rel = vec![false; n];
    let mut roots: Vec<usize> = Vec::new();
    let mut root_class: BTreeMap<usize, usize> = BTreeMap::new();
    for i in 0..n {
        let (r, p) = find(&mut parent, &mut parity, i);
        let c = *root_class.entry(r).or_insert_with(|| {
            roots.push(r);
            roots.len() - 1
        });
        class_of[i] = c;
        rel[i] = p;
    }
    let classes = roots.len();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); classes];
    for i in 0..n {
        members[class_of[i]].push(i);
    }
    let mut side: Vec<bool> = rel.clone();
    let mut value: i64 = 0;
    for i in 0..n {
        for &(j, w) in &s.adj[i] {
            if i < j && side[i] != side[j] {
                value += w;
            }
        }
    }
    let mut best = value;
    let mut best_side = side.clone();
    if classes > 1 {
        let total: u64 = 1u64 << (classes - 1);
        for gray in 1..total {
            let c = gray.trailing_zeros() as usize + 1;
            let mut delta = 0i64;
            for &v in &members[c] {
                for &(j, w) in &s.adj[v] {
                    if class_of[j] != c {
                        delta += if side[v] == side[j] { w } else { -w };
                    }
                }
            }
            for &v in &members[c] {
                side[v] = !side[v];
            }
            value += delta;
            if value > best {
                best = value;
                best_side.clone_from(&side);
            }
        }
    }
    let part = s.ids.iter().zip(best_side).map(|(&v, b)| (v, b)).collect();
    Ok(Some((Rational::new(best, s.scale), part)))
}

/// Maximum-weight b-factor of a dual instance by exhaustive search.
pub fn brute_bfactor(inst: &DualBFactorInstance) -> Result<Option<Rational>> {
    brute_bfactor_graph(&inst.graph, &inst.b, DEFAULT_MAX_EDGES)
}

pub fn brute_bfactor_bounded(inst: &DualBFactorInstance, max_edges: usize) -> Result<Option<Rational>> {
    brute_bfactor_graph(&inst.graph, &inst.b, max_edges)
}

/// Maximum total weight over edge subsets in which every vertex `v` has
/// degree exactly `b[v]` (loops count 2), or `None` if there is none.
///
/// Exhaustive include/exclude search over the edges, memoized on the
/// residual demands of the vertices that still have edges on both sides
/// of the current position. Vertices are visited breadth-first and each
/// edge is placed at its later endpoint, which keeps that frontier small.
pub fn brute_bfactor_graph(g: &Multigraph, b: &BTreeMap<VertexId, i64>, max_edges: usize) -> Result<Option<Rational>> {
    if g.edge_count() > max_edges {
        return Err(Error::OracleBound { what: "edges", actual: g.edge_count(), limit: max_edges });
    }
    let ids = bfs_order(g);
    let index: BTreeMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut need: Vec<i64> = ids.iter().map(|v| b.get(v).copied().unwrap_or(0)).collect();
    let weights: Vec<Rational> = g.edges().map(|(_, e)| e.weight).collect();
    let scale = common_denominator(&weights);
    let mut order: Vec<(usize, usize, i64)> = Vec::with_capacity(g.edge_count());
    for (_, e) in g.edges() {
        let w = scaled_integer(&e.weight, scale).ok_or(Error::Overflow("scaling weights"))?;
        let (i, j) = (index[&e.u], index[&e.v]);
        order.push((i.min(j), i.max(j), w));
    }
    order.sort_by_key(|&(i, j, _)| (j, i));
    let n = ids.len();
    let m = order.len();
    let mut cap = vec![0i64; n];
    let mut first = vec![usize::MAX; n];
    let mut last = vec![0usize; n];
    for (k, &(i, j, _)) in order.iter().enumerate() {
        cap[i] += 1;
        cap[j] += 1;
        for v in [i, j] {
            first[v] = first[v].min(k);
            last[v] = k;
        }
    }
    if need.iter().zip(&cap).any(|(&n, &c)| n < 0 || n > c) {
        return Ok(None);
    }
    // vertices with edges both before and at-or-after position k
    let active: Vec<Vec<usize>> =
        (0..=m).map(|k| (0..n).filter(|&v| first[v] < k && last[v] >= k).collect()).collect();

    struct Search<'a> {
        order: &'a [(usize, usize, i64)],
        active: &'a [Vec<usize>],
        memo: std::collections::HashMap<(usize, Vec<i64>), Option<i64>>,
    }
    fn go(s: &mut Search, k: usize, need: &mut [i64], cap: &mut [i64]) -> Option<i64> {
        if k == s.order.len() {
            return Some(0);
        }
        let key = (k, s.active[k].iter().map(|&v| need[v]).collect::<Vec<_>>());
        if let Some(&hit) = s.memo.get(&key) {
            return hit;
        }
        let (i, j, w) = s.order[k];
        cap[i] -= 1;
        cap[j] -= 1;
        let mut best: Option<i64> = None;
        need[i] -= 1;
        need[j] -= 1;
        if need[i] >= 0 && need[j] >= 0 && need[i] <= cap[i] && need[j] <= cap[j] {
            best = go(s, k + 1, need, cap).map(|r| r + w);
        }
        need[i] += 1;
        need[j] += 1;
        if need[i] <= cap[i] && need[j] <= cap[j] {
            if let Some(r) = go(s, k + 1, need, cap) {
                best = Some(best.map_or(r, |b| b.max(r)));
            }
        }
        cap[i] += 1;
        cap[j] += 1;
        s.memo.insert(key, best);
        best
    }
    let mut search = Search { order: &order, active: &active, memo: Default::default() };
    let best = go(&mut search, 0, &mut need, &mut cap);
    Ok(best.map(|b| Rational::new(b, scale)))
}

/// Vertices in breadth-first order, components by smallest id.
fn bfs_order(g: &Multigraph) -> Vec<VertexId> {
    let mut adj: BTreeMap<VertexId, Vec<VertexId>> = g.vertices().map(|v| (v, Vec::new())).collect();
    for (_, e) in g.edges() {
        adj.get_mut(&e.u).expect("endpoint").push(e.v);
        adj.get_mut(&e.v).expect("endpoint").push(e.u);
    }
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::with_capacity(adj.len());
    for start in g.vertices() {
        if !seen.insert(start) {
            continue;
        }
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            out.push(u);
            for &w in &adj[&u] {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
    }
    out
}

/// Maximum-weight perfect matching by exhaustive search; `None` when the
/// graph has no perfect matching.
pub fn brute_perfect_matching(n: usize, edges: &[(usize, usize, Rational)]) -> Option<Rational> {
    fn go(n: usize, edges: &[(usize, usize, Rational)], matched: &mut Vec<bool>) -> Option<Rational> {
        let Some(v) = (0..n).find(|&v| !matched[v]) else {
            return Some(Rational::zero());
        };
        let mut best: Option<Rational> = None;
        for &(a, b, w) in edges {
            let other = if a == v { b } else if b == v { a } else { continue };
            if other == v || matched[other] {
                continue;
            }
            matched[v] = true;
            matched[other] = true;
            if let Some(rest) = go(n, edges, matched) {
                if best.is_none_or(|x| rest + w > x) {
                    best = Some(rest + w);
                }
            }
            matched[v] = false;
            matched[other] = false;
        }
        best
    }
    if n % 2 == 1 {
        return None;
    }
    go(n, edges, &mut vec![false; n])
}

/// Parameters of the random drawing generator.
#[derive(Clone, Debug, PartialEq)]
pub struct RandomConfig {
    pub vertices: usize,
    pub crossings: usize,
    /// Inclusive integer weight range.
    pub weight_range: (i64, i64),
    /// Upper bound on the number of chords added to the random tree.
    pub extra_edges: usize,
    /// Chance that a new vertex starts a new component.
    pub component_prob: f64,
    /// Only cross edges that are not crossed yet.
    pub one_planar: bool,
    /// Chance of crossing an edge that is already crossed (when allowed).
    pub conflict_bias: f64,
}

impl RandomConfig {
    pub fn new(vertices: usize, crossings: usize) -> Self {
        RandomConfig {
            vertices,
            crossings,
            weight_range: (-5, 5),
            extra_edges: vertices,
            component_prob: 0.0,
            one_planar: true,
            conflict_bias: 0.0,
        }
    }
}

/// Reproducible random drawing with exactly `cfg.crossings` crossings:
/// a random plane forest, random chords inside faces, then crossings
/// planted one at a time by routing a new edge through a split segment.
///
/// Needs at least two vertices when crossings are requested.
pub fn random_drawn_instance(seed: u64, cfg: &RandomConfig) -> DrawnInstance {
    assert!(cfg.crossings == 0 || cfg.vertices >= 2, "crossings need two vertices");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = DrawnInstance::planar(Multigraph::new(), BTreeMap::new()).expect("empty drawing");
    let weight = |rng: &mut ChaCha8Rng| Rational::from_integer(rng.gen_range(cfg.weight_range.0..=cfg.weight_range.1));

    for i in 0..cfg.vertices {
        let v = d.graph.add_vertex();
        d.rotation.insert(v, Vec::new());
        if i == 0 || rng.gen_bool(cfg.component_prob) {
            continue;
        }
        let u = VertexId(rng.gen_range(0..i as u32));
        let w = weight(&mut rng);
        attach_leaf(&mut d, u, v, w, &mut rng);
    }
    let chords = if cfg.extra_edges == 0 { 0 } else { rng.gen_range(0..=cfg.extra_edges) };
    for _ in 0..chords {
        let w = weight(&mut rng);
        add_random_chord(&mut d, &mut rng, w);
    }
    let mut planted = 0;
    while planted < cfg.crossings {
        let mut attempt = d.clone();
        let w = weight(&mut rng);
        if plant_crossing(&mut attempt, cfg, &mut rng, w) {
            d = attempt;
            planted += 1;
        } else {
            // not enough room: add an uncrossed edge and try again
            if !add_random_chord(&mut d, &mut rng, w) {
                let (a, b) = (VertexId(0), VertexId(1));
                attach_edge_anywhere(&mut d, a, b, w, &mut rng);
            }
        }
    }
    debug_assert!(d.validate().is_ok());
    d
}

fn attach_leaf(d: &mut DrawnInstance, u: VertexId, v: VertexId, w: Rational, rng: &mut ChaCha8Rng) {
    let e = d.graph.add_edge(u, v, w).expect("vertices exist");
    let s = d.fresh_segment();
    d.segments.insert(s, crate::embedding::Segment { edge: e, tail: u, head: v });
    d.edge_segments.insert(e, vec![s]);
    let ru = d.rotation.get_mut(&u).unwrap();
    let at = if ru.is_empty() { 0 } else { rng.gen_range(0..ru.len()) + 1 };
    ru.insert(at, Dart::tail(s));
    d.rotation.get_mut(&v).unwrap().insert(0, Dart::head(s));
}

/// Joins two vertices that share no face by making `b` a leaf of `a` when
/// `b` is isolated; otherwise routes through a common face if there is one.
fn attach_edge_anywhere(d: &mut DrawnInstance, a: VertexId, b: VertexId, w: Rational, rng: &mut ChaCha8Rng) {
    if d.rotation(b).is_empty() {
        attach_leaf(d, a, b, w, rng);
    } else if d.rotation(a).is_empty() {
        attach_leaf(d, b, a, w, rng);
    } else {
        let faces = d.faces().expect("valid drawing");
        for f in faces {
            let da = f.boundary.iter().find(|&&x| d.node_of(x) == a);
            let db = f.boundary.iter().find(|&&x| d.node_of(x) == b);
            if let (Some(&da), Some(&db)) = (da, db) {
                d.add_edge_at_corners(da, db, w).expect("corners exist");
                return;
            }
        }
        panic!("vertices {a} and {b} share no face");
    }
}

/// Adds an edge between two distinct vertex corners of a random face.
fn add_random_chord(d: &mut DrawnInstance, rng: &mut ChaCha8Rng, w: Rational) -> bool {
    let faces = d.faces().expect("valid drawing");
    let mut candidates: Vec<(Dart, Dart)> = Vec::new();
    for f in &faces {
        let corners: Vec<Dart> = f.boundary.iter().copied().filter(|&x| !d.is_crossing(d.node_of(x))).collect();
        for (i, &p) in corners.iter().enumerate() {
            for &q in &corners[i + 1..] {
                if d.node_of(p) != d.node_of(q) {
                    candidates.push((p, q));
                }
            }
        }
    }
    let Some(&(p, q)) = candidates.choose(rng) else {
        return false;
    };
    d.add_edge_at_corners(p, q, w).expect("corners exist");
    true
}

fn plant_crossing(d: &mut DrawnInstance, cfg: &RandomConfig, rng: &mut ChaCha8Rng, w: Rational) -> bool {
    let all: Vec<SegmentId> = d.segments.keys().copied().collect();
    let uncrossed: Vec<SegmentId> = all.iter().copied().filter(|&s| d.edge_segments(d.edge_of(Dart::tail(s))).len() == 1).collect();
    let crossed: Vec<SegmentId> = all.iter().copied().filter(|&s| d.edge_segments(d.edge_of(Dart::tail(s))).len() > 1).collect();
    let pool = if cfg.one_planar {
        &uncrossed
    } else if !crossed.is_empty() && rng.gen_bool(cfg.conflict_bias) {
        &crossed
    } else {
        &all
    };
    let Some(&s) = pool.choose(rng) else {
        return false;
    };
    let x = d.fresh_node_id();
    d.crossing_nodes.insert(x);
    let s2 = d.split_segment(s, x);
    let faces = d.faces().expect("valid drawing");
    let face_of = |dart: Dart| faces.iter().find(|f| f.boundary.contains(&dart)).expect("dart in a face").clone();
    let left = face_of(Dart::tail(s2));
    let ps: Vec<Dart> = left.boundary.iter().copied().filter(|&y| !d.is_crossing(d.node_of(y))).collect();
    let Some(&p) = ps.choose(rng) else {
        return false;
    };
    let e = d.graph.add_edge(d.node_of(p), d.node_of(p), w).expect("vertex exists");
    let n1 = d.insert_segment(e, p, Dart::tail(s2));
    let faces = d.faces().expect("valid drawing");
    let right = faces.iter().find(|f| f.boundary.contains(&Dart::head(s))).expect("dart in a face");
    let qs: Vec<Dart> = right
        .boundary
        .iter()
        .copied()
        .filter(|&y| !d.is_crossing(d.node_of(y)) && d.node_of(y) != d.node_of(p))
        .collect();
    let Some(&q) = qs.choose(rng) else {
        return false;
    };
    let n2 = d.insert_segment(e, Dart::head(s), q);
    let (pu, qv) = (d.node_of(p), d.node_of(q));
    d.graph.remove_edge(e).expect("just added");
    d.graph.insert_edge(e, pu, qv, w).expect("endpoints exist");
    d.edge_segments.insert(e, vec![n1, n2]);
    debug_assert_eq!(d.segment(n2).node(End::Tail), x);
    d.validate().is_ok()
}

/// Reproducible random b-factor instance on at most `max_vertices`
/// vertices, loops included, with `b` at most the degree.
pub fn random_bfactor_instance(seed: u64, max_vertices: usize, max_edges: usize) -> DualBFactorInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_vertices.max(1));
    let mut g = Multigraph::new();
    let vs: Vec<VertexId> = (0..n).map(|_| g.add_vertex()).collect();
    let m = rng.gen_range(0..=max_edges);
    for _ in 0..m {
        let u = *vs.choose(&mut rng).unwrap();
        let v = if rng.gen_bool(0.2) { u } else { *vs.choose(&mut rng).unwrap() };
        let w = Rational::new(rng.gen_range(-9..=9), rng.gen_range(1..=3));
        g.add_edge(u, v, w).unwrap();
    }
    let degs = g.degrees();
    let b = degs.iter().map(|(&v, &d)| (v, rng.gen_range(0..=d as i64))).collect();
    DualBFactorInstance::from_graph(g, b)
}

/// Reproducible random multigraph without a drawing.
pub fn random_graph(seed: u64, n: usize, m: usize, weight_range: (i64, i64)) -> Multigraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Multigraph::new();
    for _ in 0..n {
        g.add_vertex();
    }
    if n >= 2 {
        for _ in 0..m {
            let u = rng.gen_range(0..n as u32);
            let mut v = rng.gen_range(0..n as u32 - 1);
            if v >= u {
                v += 1;
            }
            let w = Rational::from_integer(rng.gen_range(weight_range.0..=weight_range.1));
            g.add_edge(VertexId(u), VertexId(v), w).unwrap();
        }
    }
    g
}

/// The mixed family used by end-to-end checks: 2 to 10 vertices, up to 4
/// crossings, weights in [-5, 5]; every other seed may be disconnected.
pub fn suite_instance(seed: u64) -> DrawnInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_5eed);
    let n = rng.gen_range(2..=10);
    let k = if n < 4 { 0 } else { rng.gen_range(0..=4) };
    let mut cfg = RandomConfig::new(n, k);
    cfg.component_prob = if seed % 2 == 1 { 0.3 } else { 0.0 };
    random_drawn_instance(seed, &cfg)
}

/// True when `side` separates every pair.
pub fn separates_all(side: &Bipartition, pairs: &[(VertexId, VertexId)]) -> bool {
    pairs.iter().all(|(a, b)| side.get(a) != side.get(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::{graph_from, r};
    use proptest::prelude::*;

    fn complete(n: u32) -> Multigraph {
        let edges: Vec<(u32, u32, i64)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j, 1))).collect();
        graph_from(n as usize, &edges)
    }

    #[test]
    fn mc_examples() {
        assert_eq!(brute_mc(&complete(5)).unwrap(), r(6));
        let c5 = graph_from(5, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 0, 1)]);
        assert_eq!(brute_mc(&c5).unwrap(), r(4));
        assert_eq!(brute_mc(&graph_from(2, &[(0, 1, -3)])).unwrap(), r(0));
        let big = graph_from(21, &[]);
        assert!(matches!(brute_mc(&big), Err(Error::OracleBound { .. })));
        let mut thirds = graph_from(2, &[]);
        thirds.add_edge(VertexId(0), VertexId(1), Rational::new(2, 3)).unwrap();
        assert_eq!(brute_mc(&thirds).unwrap(), Rational::new(2, 3));
    }

    #[test]
    fn cmc_examples() {
        let t = graph_from(3, &[(0, 1, 1), (1, 2, 1), (2, 0, 1)]);
        let (a, b, c) = (VertexId(0), VertexId(1), VertexId(2));
        assert_eq!(brute_cmc(&t, &[(a, b)]).unwrap(), Some(r(2)));
        assert_eq!(brute_cmc(&t, &[(a, b), (b, c), (c, a)]).unwrap(), None);
        assert_eq!(brute_cmc(&t, &[]).unwrap(), Some(brute_mc(&t).unwrap()));
        // forced separation of a heavy negative edge
        let g = graph_from(2, &[(0, 1, -4)]);
        assert_eq!(brute_cmc(&g, &[(a, b)]).unwrap(), Some(r(-4)));
    }

    #[test]
    fn bfactor_examples() {
        let c4 = graph_from(4, &[(0, 1, 1), (1, 2, 2), (2, 3, 1), (3, 0, 2)]);
        let b1 = c4.vertices().map(|v| (v, 1)).collect();
        assert_eq!(brute_bfactor_graph(&c4, &b1, 24).unwrap(), Some(r(4)));
        let b2 = c4.vertices().map(|v| (v, 2)).collect();
        assert_eq!(brute_bfactor_graph(&c4, &b2, 24).unwrap(), Some(r(6)));
        let b3 = c4.vertices().map(|v| (v, 3)).collect();
        assert_eq!(brute_bfactor_graph(&c4, &b3, 24).unwrap(), None);
        // a loop counts twice
        let l = graph_from(1, &[(0, 0, 7)]);
        let b = [(VertexId(0), 2)].into_iter().collect();
        assert_eq!(brute_bfactor_graph(&l, &b, 24).unwrap(), Some(r(7)));
        let b = [(VertexId(0), 1)].into_iter().collect();
        assert_eq!(brute_bfactor_graph(&l, &b, 24).unwrap(), None);
    }

    #[test]
    fn perfect_matching_examples() {
        let p4 = [(0, 1, r(1)), (1, 2, r(5)), (2, 3, r(1))];
        assert_eq!(brute_perfect_matching(4, &p4), Some(r(2)));
        let k4 = [(0, 1, r(1)), (2, 3, r(1)), (0, 2, r(2)), (1, 3, r(2)), (0, 3, r(5)), (1, 2, r(5))];
        assert_eq!(brute_perfect_matching(4, &k4), Some(r(10)));
        assert_eq!(brute_perfect_matching(3, &[(0, 1, r(1))]), None);
    }

    #[test]
    fn generator_contract() {
        let cfg = RandomConfig::new(8, 2);
        let a = random_drawn_instance(1, &cfg);
        let b = random_drawn_instance(1, &cfg);
        assert_eq!(a, b);
        assert_eq!(a.crossing_count(), 2);
        assert!(a.is_one_planar());
        let planar = random_drawn_instance(5, &RandomConfig::new(8, 0));
        assert_eq!(planar.crossing_count(), 0);
        let loose = RandomConfig { component_prob: 0.5, ..RandomConfig::new(10, 3) };
        for seed in 0..30 {
            let d = random_drawn_instance(seed, &loose);
            assert!(d.validate().is_ok());
            assert_eq!(d.crossing_count(), 3);
        }
        let conflicted = RandomConfig { one_planar: false, conflict_bias: 0.9, ..RandomConfig::new(6, 4) };
        assert!((0..20).any(|s| !random_drawn_instance(s, &conflicted).is_one_planar()));
    }

    proptest! {
        #[test]
        fn mc_is_relabeling_invariant(seed in 0u64..5000) {
            let g = random_graph(seed, 7, 10, (-3, 4));
            let mut h = Multigraph::new();
            let map: BTreeMap<VertexId, VertexId> = g.vertices().map(|v| (v, VertexId(100 - v.0))).collect();
            for v in g.vertices() {
                h.insert_vertex(map[&v]).unwrap();
            }
            for (_, e) in g.edges() {
                h.add_edge(map[&e.u], map[&e.v], e.weight).unwrap();
            }
            let m = brute_mc(&g).unwrap();
            prop_assert!(!num_traits::Signed::is_negative(&m));
            prop_assert_eq!(m, brute_mc(&h).unwrap());
        }

        #[test]
        fn cmc_without_pairs_is_mc(seed in 0u64..5000) {
            let g = random_graph(seed, 6, 9, (-3, 3));
            prop_assert_eq!(brute_cmc(&g, &[]).unwrap(), Some(brute_mc(&g).unwrap()));
        }
    }
}
