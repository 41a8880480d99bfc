//! Ingestion of straight-line and polyline drawings.
//!
//! All predicates are evaluated on exact rationals. Degenerate input is
//! rejected with a diagnostic instead of being perturbed, since a
//! perturbation could change the number of crossings.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::embedding::{Dart, DrawnInstance, End, NodeId, Segment, SegmentId};
use crate::error::{Diagnostic, Error, Result};
use crate::graph::{EdgeId, Multigraph, VertexId};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Point {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Point {
        Point { x: Rational::from_integer(x), y: Rational::from_integer(y) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometricEdge {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
    pub weight: Rational,
    pub bends: Vec<Point>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GeometricDrawing {
    pub vertices: BTreeMap<VertexId, Point>,
    pub edges: Vec<GeometricEdge>,
}

type Q = BigRational;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct P {
    x: Q,
    y: Q,
}

fn big(r: &Rational) -> Q {
    Q::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

impl From<&Point> for P {
    fn from(p: &Point) -> P {
        P { x: big(&p.x), y: big(&p.y) }
    }
}

fn sub(a: &P, b: &P) -> P {
    P { x: &a.x - &b.x, y: &a.y - &b.y }
}

fn cross(a: &P, b: &P) -> Q {
    &a.x * &b.y - &a.y * &b.x
}

fn dot(a: &P, b: &P) -> Q {
    &a.x * &b.x + &a.y * &b.y
}

fn orient(a: &P, b: &P, c: &P) -> Ordering {
    cross(&sub(b, a), &sub(c, a)).cmp(&Q::zero())
}

/// `p` on the closed segment `ab` (assumes `a != b`).
fn on_segment(a: &P, b: &P, p: &P) -> bool {
    orient(a, b, p) == Ordering::Equal && {
        let t = dot(&sub(p, a), &sub(b, a));
        !t.is_negative() && t <= dot(&sub(b, a), &sub(b, a))
    }
}

/// Parameter of `p` along `ab`, in [0, 1] when `p` is on the segment.
fn param(a: &P, b: &P, p: &P) -> Q {
    dot(&sub(p, a), &sub(b, a)) / dot(&sub(b, a), &sub(b, a))
}

/// Counterclockwise angular order starting at the positive x axis.
fn angle_cmp(a: &P, b: &P) -> Ordering {
    let half = |p: &P| -> u8 {
        if p.y.is_positive() || (p.y.is_zero() && p.x.is_positive()) {
            0
        } else {
            1
        }
    };
    half(a).cmp(&half(b)).then_with(|| Q::zero().cmp(&cross(a, b)))
}

struct Piece {
    edge_idx: usize,
    index: usize,
    a: P,
    b: P,
}

struct Hit {
    point: P,
    /// (edge index, piece index, parameter) for both edges
    on: [(usize, usize, Q); 2],
}

fn degenerate(msg: String) -> Error {
    Diagnostic::Degenerate(msg).into()
}

/// Planarizes a geometric drawing: one crossing node per proper interior
/// intersection, rotations from exact angular order, crossing order along
/// each edge from geometric order.
pub fn detect_crossings(drawing: &GeometricDrawing) -> Result<DrawnInstance> {
    let mut graph = Multigraph::new();
    for &v in drawing.vertices.keys() {
        graph.insert_vertex(v)?;
    }
    let mut seen_pos: BTreeMap<P, VertexId> = BTreeMap::new();
    for (&v, p) in &drawing.vertices {
        if let Some(w) = seen_pos.insert(P::from(p), v) {
            return Err(degenerate(format!("vertices {w} and {v} share a position")));
        }
    }
    let mut polylines: Vec<Vec<P>> = Vec::with_capacity(drawing.edges.len());
    for e in &drawing.edges {
        let pu = drawing.vertices.get(&e.u).ok_or(Error::UnknownVertex(e.u))?;
        let pv = drawing.vertices.get(&e.v).ok_or(Error::UnknownVertex(e.v))?;
        graph.insert_edge(e.id, e.u, e.v, e.weight)?;
        let mut pts = vec![P::from(pu)];
        pts.extend(e.bends.iter().map(P::from));
        pts.push(P::from(pv));
        if pts.windows(2).any(|w| w[0] == w[1]) {
            return Err(degenerate(format!("edge {} has a zero-length piece", e.id)));
        }
        if e.u == e.v && pts.len() < 4 {
            return Err(degenerate(format!("loop edge {} needs at least two bends", e.id)));
        }
        polylines.push(pts);
    }

    let pieces: Vec<Piece> = polylines
        .iter()
        .enumerate()
        .flat_map(|(ei, pts)| {
            pts.windows(2)
                .enumerate()
                .map(move |(k, w)| Piece { edge_idx: ei, index: k, a: w[0].clone(), b: w[1].clone() })
        })
        .collect();

    // vertices may only touch the edges they are an endpoint of, and only there
    for piece in &pieces {
        let e = &drawing.edges[piece.edge_idx];
        let last = polylines[piece.edge_idx].len() - 2;
        for (&w, pw) in &drawing.vertices {
            let p = P::from(pw);
            if !on_segment(&piece.a, &piece.b, &p) {
                continue;
            }
            let at_start = piece.index == 0 && p == piece.a && w == e.u;
            let at_end = piece.index == last && p == piece.b && w == e.v;
            if !(at_start || at_end) {
                return Err(degenerate(format!("vertex {w} lies on edge {}", e.id)));
            }
        }
    }

    let mut hits: Vec<Hit> = Vec::new();
    for i in 0..pieces.len() {
        for j in i + 1..pieces.len() {
            let (p, q) = (&pieces[i], &pieces[j]);
            let o1 = orient(&p.a, &p.b, &q.a);
            let o2 = orient(&p.a, &p.b, &q.b);
            let o3 = orient(&q.a, &q.b, &p.a);
            let o4 = orient(&q.a, &q.b, &p.b);
            let (ep, eq) = (&drawing.edges[p.edge_idx], &drawing.edges[q.edge_idx]);
            if o1 != Ordering::Equal && o2 != Ordering::Equal && o1 != o2 && o3 != Ordering::Equal && o4 != Ordering::Equal && o3 != o4 {
                if p.edge_idx == q.edge_idx {
                    return Err(degenerate(format!("edge {} crosses itself", ep.id)));
                }
                // proper crossing; intersection point from the parameter on p
                let d1 = sub(&p.b, &p.a);
                let d2 = sub(&q.b, &q.a);
                let t = cross(&sub(&q.a, &p.a), &d2) / cross(&d1, &d2);
                let point = P { x: &p.a.x + &d1.x * &t, y: &p.a.y + &d1.y * &t };
                let s = param(&q.a, &q.b, &point);
                hits.push(Hit { point, on: [(p.edge_idx, p.index, t), (q.edge_idx, q.index, s)] });
                continue;
            }
            // touching or collinear contact
            let mut contacts: BTreeSet<P> = BTreeSet::new();
            for (x, seg) in [(&q.a, p), (&q.b, p)] {
                if on_segment(&seg.a, &seg.b, x) {
                    contacts.insert(x.clone());
                }
            }
            for (x, seg) in [(&p.a, q), (&p.b, q)] {
                if on_segment(&seg.a, &seg.b, x) {
                    contacts.insert(x.clone());
                }
            }
            if contacts.is_empty() {
                continue;
            }
            if contacts.len() > 1 {
                return Err(degenerate(format!("edges {} and {} overlap along a segment", ep.id, eq.id)));
            }
            let c = contacts.into_iter().next().unwrap();
            let endpoint_of_both = (c == p.a || c == p.b) && (c == q.a || c == q.b);
            let consecutive_bend = p.edge_idx == q.edge_idx && q.index == p.index + 1 && c == p.b;
            let shared_vertex = drawing.vertices.iter().any(|(_, pw)| P::from(pw) == c);
            if !(endpoint_of_both && (consecutive_bend || shared_vertex)) {
                return Err(degenerate(format!("edges {} and {} touch without crossing", ep.id, eq.id)));
            }
        }
    }

    let mut at_point: BTreeSet<P> = BTreeSet::new();
    for h in &hits {
        if !at_point.insert(h.point.clone()) {
            return Err(degenerate(format!(
                "three or more edges meet at ({}, {})",
                h.point.x, h.point.y
            )));
        }
    }
    hits.sort_by(|a, b| a.point.cmp(&b.point));

    // crossing nodes get ids above every vertex id
    let base = drawing.vertices.keys().last().map_or(0, |v| v.0 + 1);
    graph.bump_vertex_counter(base);
    let mut crossing_nodes = BTreeSet::new();
    // per edge: (piece, parameter, node)
    let mut along: Vec<Vec<(usize, Q, NodeId)>> = vec![Vec::new(); drawing.edges.len()];
    for h in &hits {
        let x = graph.reserve_id();
        crossing_nodes.insert(x);
        for (ei, pi, t) in &h.on {
            along[*ei].push((*pi, t.clone(), x));
        }
    }
    let point_of: BTreeMap<NodeId, P> = hits
        .iter()
        .zip(crossing_nodes.iter())
        .map(|(h, &x)| (x, h.point.clone()))
        .collect();

    let mut order: Vec<usize> = (0..drawing.edges.len()).collect();
    order.sort_by_key(|&i| drawing.edges[i].id);
    let mut segments = BTreeMap::new();
    let mut edge_segments = BTreeMap::new();
    let mut spokes: BTreeMap<NodeId, Vec<(P, Dart)>> = BTreeMap::new();
    let mut next_seg = 0u32;
    for ei in order {
        let e = &drawing.edges[ei];
        let pts = &polylines[ei];
        let last_piece = pts.len() - 2;
        let mut stops: Vec<(usize, Q, NodeId)> = vec![(0, Q::zero(), e.u)];
        let mut mids = along[ei].clone();
        mids.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        stops.extend(mids);
        stops.push((last_piece, Q::from_integer(BigInt::from(1)), e.v));
        let mut segs = Vec::new();
        for w in stops.windows(2) {
            let (ref i1, _, n1) = w[0];
            let (ref i2, _, n2) = w[1];
            let s = SegmentId(next_seg);
            next_seg += 1;
            let pos = |n: NodeId| point_of.get(&n).cloned().unwrap_or_else(|| P::from(&drawing.vertices[&n]));
            let (p1, p2) = (pos(n1), pos(n2));
            let after_tail = if i1 == i2 { p2.clone() } else { pts[i1 + 1].clone() };
            let before_head = if i1 == i2 { p1.clone() } else { pts[*i2].clone() };
            spokes.entry(n1).or_default().push((sub(&after_tail, &p1), Dart::tail(s)));
            spokes.entry(n2).or_default().push((sub(&before_head, &p2), Dart::head(s)));
            segments.insert(s, Segment { edge: e.id, tail: n1, head: n2 });
            segs.push(s);
        }
        edge_segments.insert(e.id, segs);
    }

    let mut rotation = BTreeMap::new();
    for v in graph.vertices().chain(crossing_nodes.iter().copied()) {
        let mut list = spokes.remove(&v).unwrap_or_default();
        list.sort_by(|a, b| angle_cmp(&a.0, &b.0));
        for w in list.windows(2) {
            if angle_cmp(&w[0].0, &w[1].0) == Ordering::Equal {
                return Err(degenerate(format!("two edges leave node {v} in the same direction")));
            }
        }
        if list.len() >= 2 && angle_cmp(&list[0].0, &list[list.len() - 1].0) == Ordering::Equal {
            return Err(degenerate(format!("two edges leave node {v} in the same direction")));
        }
        rotation.insert(v, list.into_iter().map(|(_, d)| d).collect::<Vec<Dart>>());
    }
    let d = DrawnInstance { graph, crossing_nodes, segments, edge_segments, rotation, next_segment: next_seg };
    d.validate()?;
    debug_assert!(d.segments().all(|(s, seg)| d.node_of(Dart { segment: s, end: End::Tail }) == seg.tail));
    Ok(d)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn straight(coords: &[(i64, i64)], edges: &[(u32, u32, i64)]) -> GeometricDrawing {
        GeometricDrawing {
            vertices: coords
                .iter()
                .enumerate()
                .map(|(i, &(x, y))| (VertexId(i as u32), Point::from_ints(x, y)))
                .collect(),
            edges: edges
                .iter()
                .enumerate()
                .map(|(i, &(u, v, w))| GeometricEdge {
                    id: EdgeId(i as u32),
                    u: VertexId(u),
                    v: VertexId(v),
                    weight: Rational::from_integer(w),
                    bends: vec![],
                })
                .collect(),
        }
    }

    pub(crate) fn complete_edges(n: u32) -> Vec<(u32, u32, i64)> {
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j, 1))).collect()
    }

    /// Brute-force count of proper crossings between straight segments,
    /// in floating point; only used on well-separated coordinates.
    fn float_crossings(coords: &[(f64, f64)], edges: &[(u32, u32, i64)]) -> usize {
        let o = |a: (f64, f64), b: (f64, f64), c: (f64, f64)| (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0);
        let mut n = 0;
        for i in 0..edges.len() {
            for j in i + 1..edges.len() {
                let (a, b) = (coords[edges[i].0 as usize], coords[edges[i].1 as usize]);
                let (c, d) = (coords[edges[j].0 as usize], coords[edges[j].1 as usize]);
                let shared = [edges[i].0, edges[i].1].iter().any(|x| *x == edges[j].0 || *x == edges[j].1);
                if !shared && o(a, b, c) * o(a, b, d) < 0.0 && o(c, d, a) * o(c, d, b) < 0.0 {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn single_crossing_at_center() {
        let g = straight(&[(0, 0), (2, 2), (0, 2), (2, 0)], &[(0, 1, 1), (2, 3, 1)]);
        let d = detect_crossings(&g).unwrap();
        assert_eq!(d.crossing_count(), 1);
        let x = *d.crossing_nodes().iter().next().unwrap();
        assert_eq!(x, VertexId(4));
        assert_eq!(d.faces().unwrap().len(), 1);
        assert!(d.validate().is_ok());
    }

    #[test]
    fn planar_k4_has_no_crossing() {
        let g = straight(&[(0, 0), (6, 0), (3, 6), (3, 2)], &complete_edges(4));
        let d = detect_crossings(&g).unwrap();
        assert_eq!(d.crossing_count(), 0);
        let mut lens: Vec<usize> = d.faces().unwrap().iter().map(|f| f.len()).collect();
        lens.sort();
        assert_eq!(lens, vec![3, 3, 3, 3]);
    }

    #[test]
    fn pentagon_k5_crossings_match_enumeration() {
        // integer approximation of a regular pentagon, scaled
        let coords = [(0, 1000), (951, 309), (588, -809), (-588, -809), (-951, 309)];
        let edges = complete_edges(5);
        let fl: Vec<(f64, f64)> = coords.iter().map(|&(x, y)| (x as f64, y as f64)).collect();
        let expected = float_crossings(&fl, &edges);
        assert_eq!(expected, 5);
        let d = detect_crossings(&straight(&coords, &edges)).unwrap();
        assert_eq!(d.crossing_count(), expected);
        assert!(!d.is_one_planar());
    }

    #[test]
    fn degenerate_inputs_are_rejected() {
        // collinear overlap
        let g = straight(&[(0, 0), (2, 0), (1, 0), (3, 0)], &[(0, 1, 1), (2, 3, 1)]);
        assert!(matches!(detect_crossings(&g), Err(Error::Drawing(Diagnostic::Degenerate(_)))));
        // vertex in the interior of an edge
        let g = straight(&[(0, 0), (2, 0), (1, 0), (1, 1)], &[(0, 1, 1), (2, 3, 1)]);
        assert!(detect_crossings(&g).is_err());
        // three segments through one point
        let g = straight(
            &[(-1, 0), (1, 0), (0, -1), (0, 1), (-1, -1), (1, 1)],
            &[(0, 1, 1), (2, 3, 1), (4, 5, 1)],
        );
        let err = detect_crossings(&g).unwrap_err().to_string();
        assert!(err.contains("three or more"), "{err}");
    }

    #[test]
    fn polyline_bends_route_around() {
        // edge 0-1 bent over the top avoids crossing 2-3
        let mut g = straight(&[(0, 0), (4, 0), (2, -1), (2, 1)], &[(0, 1, 1), (2, 3, 1)]);
        assert_eq!(detect_crossings(&g).unwrap().crossing_count(), 1);
        g.edges[0].bends = vec![Point::from_ints(0, 3), Point::from_ints(4, 3)];
        let d = detect_crossings(&g).unwrap();
        assert_eq!(d.crossing_count(), 0);
        // bent edge crossing twice
        g.edges[1].bends = vec![Point::from_ints(3, -1), Point::from_ints(3, 4), Point::from_ints(2, 4)];
        let d = detect_crossings(&g).unwrap();
        assert_eq!(d.crossing_count(), 2);
        assert!(!d.is_one_planar());
    }
}
