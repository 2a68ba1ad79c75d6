//! Regular edge labellings of 4-completed graphs.
//!
//! Each interior edge is either vertical (T1, directed south to north) or
//! horizontal (T2, directed west to east). Around every room the edges
//! read, counter-clockwise: T1 out, T2 in, T1 in, T2 out, each group
//! non-empty.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use sha2::{Digest, Sha256};

use super::AugmentedGraph;
use crate::embedding::PlanarEmbedding;
use crate::graph::Edge;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    T1,
    T2,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RegularEdgeLabelling {
    /// Number of rooms; poles are `rooms..rooms + 4` in N, E, S, W order.
    pub rooms: usize,
    pub t1: BTreeSet<(usize, usize)>,
    pub t2: BTreeSet<(usize, usize)>,
}

impl RegularEdgeLabelling {
    pub fn label(&self, a: usize, b: usize) -> Option<(Family, bool)> {
        if self.t1.contains(&(a, b)) {
            Some((Family::T1, true))
        } else if self.t1.contains(&(b, a)) {
            Some((Family::T1, false))
        } else if self.t2.contains(&(a, b)) {
            Some((Family::T2, true))
        } else if self.t2.contains(&(b, a)) {
            Some((Family::T2, false))
        } else {
            None
        }
    }

    /// Hex digest of the labelling, stable across runs.
    pub fn hash_hex(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("{}|{:?}|{:?}", self.rooms, self.t1, self.t2));
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Local role of an edge at a vertex, in counter-clockwise block order.
const UP: u8 = 0;
const LEFT: u8 = 1;
const DOWN: u8 = 2;
const RIGHT: u8 = 3;

/// Edge states relative to `Edge(lo, hi)`.
const T1_UP: u8 = 0; // T1 lo -> hi
const T1_DOWN: u8 = 1; // T1 hi -> lo
const T2_UP: u8 = 2; // T2 lo -> hi
const T2_DOWN: u8 = 3; // T2 hi -> lo

fn role(state: u8, at_lo: bool) -> u8 {
    let leaving = matches!((state, at_lo), (T1_UP, true) | (T1_DOWN, false) | (T2_UP, true) | (T2_DOWN, false));
    match (state < 2, leaving) {
        (true, true) => UP,
        (true, false) => DOWN,
        (false, true) => RIGHT,
        (false, false) => LEFT,
    }
}

fn state_of(family: Family, from: usize, to: usize) -> u8 {
    match (family, from < to) {
        (Family::T1, true) => T1_UP,
        (Family::T1, false) => T1_DOWN,
        (Family::T2, true) => T2_UP,
        (Family::T2, false) => T2_DOWN,
    }
}

/// Whether a cyclic sequence of partially known roles can be completed to
/// the pattern UP+ LEFT+ DOWN+ RIGHT+.
fn completable(roles: &[Option<u8>]) -> bool {
    let d = roles.len();
    let known: Vec<(usize, u8)> = roles
        .iter()
        .enumerate()
        .filter_map(|(i, r)| r.map(|r| (i, r)))
        .collect();
    if d < 4 {
        return false;
    }
    if known.is_empty() {
        return true;
    }
    let mut total = 0;
    let mut widest_same = 0;
    for i in 0..known.len() {
        let (p, x) = known[i];
        let (q, y) = known[(i + 1) % known.len()];
        let gap = if known.len() == 1 {
            d - 1
        } else {
            (q + d - p) % d - 1
        };
        let step = ((y + 4 - x) % 4) as usize;
        if step > 0 && gap + 1 < step {
            return false;
        }
        if step == 0 {
            widest_same = widest_same.max(gap);
        }
        total += step;
    }
    match total {
        0 => widest_same >= 3,
        4 => true,
        _ => false,
    }
}

/// Interior edges (all but the four pole-to-pole edges) and, per room,
/// the interior edges in counter-clockwise order.
struct Frame {
    edges: Vec<Edge>,
    around: Vec<Vec<usize>>,
    rooms: usize,
}

impl Frame {
    fn new(aug: &AugmentedGraph) -> Frame {
        let n = aug.rooms;
        let g = aug.emb.graph();
        let edges: Vec<Edge> = g
            .edges()
            .into_iter()
            .filter(|e| !(e.0 >= n && e.1 >= n))
            .collect();
        let index: BTreeMap<Edge, usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let around = (0..n)
            .map(|v| {
                aug.emb
                    .rotation(v)
                    .iter()
                    .map(|&w| index[&Edge::new(v, w)])
                    .collect()
            })
            .collect();
        Frame {
            edges,
            around,
            rooms: n,
        }
    }

    /// States forced on pole edges.
    fn pole_state(&self, e: Edge) -> Option<u8> {
        let n = self.rooms;
        if e.1 < n {
            return None;
        }
        let (v, p) = (e.0, e.1);
        Some(match p - n {
            0 => state_of(Family::T1, v, p),
            1 => state_of(Family::T2, v, p),
            2 => state_of(Family::T1, p, v),
            _ => state_of(Family::T2, p, v),
        })
    }

    fn vertex_ok(&self, v: usize, states: &[Option<u8>]) -> bool {
        let roles: Vec<Option<u8>> = self.around[v]
            .iter()
            .map(|&ei| states[ei].map(|s| role(s, self.edges[ei].0 == v)))
            .collect();
        completable(&roles)
    }

    fn to_rel(&self, states: &[u8]) -> RegularEdgeLabelling {
        let mut rel = RegularEdgeLabelling {
            rooms: self.rooms,
            t1: BTreeSet::new(),
            t2: BTreeSet::new(),
        };
        for (e, &s) in self.edges.iter().zip(states) {
            match s {
                T1_UP => rel.t1.insert((e.0, e.1)),
                T1_DOWN => rel.t1.insert((e.1, e.0)),
                T2_UP => rel.t2.insert((e.0, e.1)),
                _ => rel.t2.insert((e.1, e.0)),
            };
        }
        rel
    }

    fn states_of(&self, rel: &RegularEdgeLabelling) -> Option<Vec<u8>> {
        self.edges
            .iter()
            .map(|e| rel.label(e.0, e.1).map(|(f, fwd)| {
                let (a, b) = if fwd { (e.0, e.1) } else { (e.1, e.0) };
                state_of(f, a, b)
            }))
            .collect()
    }
}

/// Checks every condition of a regular edge labelling.
pub fn validate_rel(aug: &AugmentedGraph, rel: &RegularEdgeLabelling) -> Result<(), String> {
    let frame = Frame::new(aug);
    if rel.rooms != aug.rooms {
        return Err("room count mismatch".into());
    }
    if rel.t1.len() + rel.t2.len() != frame.edges.len() {
        return Err(format!(
            "{} labelled edges, {} interior edges",
            rel.t1.len() + rel.t2.len(),
            frame.edges.len()
        ));
    }
    let states = frame
        .states_of(rel)
        .ok_or_else(|| "an interior edge has no label".to_string())?;
    for (e, &s) in frame.edges.iter().zip(&states) {
        if let Some(want) = frame.pole_state(*e) {
            if want != s {
                return Err(format!("pole edge {e:?} has the wrong label"));
            }
        }
    }
    let known: Vec<Option<u8>> = states.iter().map(|&s| Some(s)).collect();
    for v in 0..aug.rooms {
        if !frame.vertex_ok(v, &known) {
            return Err(format!("edges around room {v} are out of order"));
        }
    }
    Ok(())
}

/// A regular edge labelling found by constraint search over edge states.
pub fn compute_rel(aug: &AugmentedGraph) -> Option<RegularEdgeLabelling> {
    let frame = Frame::new(aug);
    let mut states: Vec<Option<u8>> = frame.edges.iter().map(|&e| frame.pole_state(e)).collect();
    if !(0..aug.rooms).all(|v| frame.vertex_ok(v, &states)) {
        return None;
    }
    if search(&frame, &mut states) {
        let done: Vec<u8> = states.into_iter().map(|s| s.unwrap()).collect();
        Some(frame.to_rel(&done))
    } else {
        None
    }
}

fn domain(frame: &Frame, states: &mut [Option<u8>], ei: usize) -> Vec<u8> {
    let e = frame.edges[ei];
    let mut out = Vec::with_capacity(4);
    for s in 0..4u8 {
        states[ei] = Some(s);
        if frame.vertex_ok(e.0, states) && frame.vertex_ok(e.1, states) {
            out.push(s);
        }
    }
    states[ei] = None;
    out
}

fn search(frame: &Frame, states: &mut Vec<Option<u8>>) -> bool {
    // most constrained open edge first
    let mut best: Option<(usize, Vec<u8>)> = None;
    for ei in 0..states.len() {
        if states[ei].is_some() {
            continue;
        }
        let d = domain(frame, states, ei);
        if d.is_empty() {
            return false;
        }
        if best.as_ref().is_none_or(|b| d.len() < b.1.len()) {
            let single = d.len() == 1;
            best = Some((ei, d));
            if single {
                break;
            }
        }
    }
    let Some((ei, dom)) = best else { return true };
    for s in dom {
        states[ei] = Some(s);
        if search(frame, states) {
            return true;
        }
    }
    states[ei] = None;
    false
}

/// A 4-cycle with the interior edges it encloses.
struct FlipCycle {
    inner: Vec<usize>,
}

fn flip_cycles(aug: &AugmentedGraph, frame: &Frame) -> Vec<FlipCycle> {
    let emb: &PlanarEmbedding = &aug.emb;
    let g = emb.graph();
    let n = g.vertex_count();
    let mut seen: HashSet<Vec<Edge>> = HashSet::new();
    let mut out = Vec::new();
    let dart_face = emb.dart_faces();
    let outer_face = emb.outer_index();
    for a in 0..n {
        for c in a + 1..n {
            let common: Vec<usize> = g.neighbors(a).filter(|&x| g.has_edge(x, c)).collect();
            for i in 0..common.len() {
                for j in i + 1..common.len() {
                    let (b, d) = (common[i], common[j]);
                    let mut key = vec![
                        Edge::new(a, b),
                        Edge::new(b, c),
                        Edge::new(c, d),
                        Edge::new(d, a),
                    ];
                    key.sort();
                    if !seen.insert(key.clone()) {
                        continue;
                    }
                    if [a, b, c, d].iter().all(|&v| v >= aug.rooms) {
                        continue;
                    }
                    let on_cycle: HashSet<Edge> = key.into_iter().collect();
                    // faces reachable from the outer face without crossing the cycle
                    let mut outside = vec![false; emb.faces().len()];
                    outside[outer_face] = true;
                    let mut queue = VecDeque::from([outer_face]);
                    while let Some(f) = queue.pop_front() {
                        let face = &emb.faces()[f];
                        for k in 0..face.len() {
                            let (u, v) = (face[k], face[(k + 1) % face.len()]);
                            if on_cycle.contains(&Edge::new(u, v)) {
                                continue;
                            }
                            let other = dart_face[&(v, u)];
                            if !outside[other] {
                                outside[other] = true;
                                queue.push_back(other);
                            }
                        }
                    }
                    let inner: Vec<usize> = frame
                        .edges
                        .iter()
                        .enumerate()
                        .filter(|(_, e)| {
                            !on_cycle.contains(e)
                                && !outside[dart_face[&(e.0, e.1)]]
                                && !outside[dart_face[&(e.1, e.0)]]
                        })
                        .map(|(i, _)| i)
                        .collect();
                    if !inner.is_empty() {
                        out.push(FlipCycle { inner });
                    }
                }
            }
        }
    }
    out
}

/// Rotates the labels inside a cycle by a quarter turn.
fn rotate(states: &[u8], inner: &[usize], clockwise: bool) -> Vec<u8> {
    let mut s = states.to_vec();
    for &ei in inner {
        s[ei] = match (s[ei], clockwise) {
            // T1 a->b becomes T2 a->b; T2 a->b becomes T1 b->a
            (T1_UP, true) => T2_UP,
            (T1_DOWN, true) => T2_DOWN,
            (T2_UP, true) => T1_DOWN,
            (T2_DOWN, true) => T1_UP,
            // T1 a->b becomes T2 b->a; T2 a->b becomes T1 a->b
            (T1_UP, false) => T2_DOWN,
            (T1_DOWN, false) => T2_UP,
            (T2_UP, false) => T1_UP,
            (_, false) => T1_DOWN,
            (other, _) => other,
        };
    }
    s
}

/// All regular edge labellings, reached from [`compute_rel`] by quarter
/// turns of the labels inside 4-cycles. Ordered by discovery.
pub fn enumerate_rels(aug: &AugmentedGraph) -> Vec<RegularEdgeLabelling> {
    let Some(start) = compute_rel(aug) else {
        return Vec::new();
    };
    let frame = Frame::new(aug);
    let cycles = flip_cycles(aug, &frame);
    let first = frame.states_of(&start).unwrap();
    let mut seen: HashSet<Vec<u8>> = HashSet::from([first.clone()]);
    let mut order = vec![first.clone()];
    let mut queue = VecDeque::from([first]);
    while let Some(cur) = queue.pop_front() {
        for c in &cycles {
            for cw in [true, false] {
                let next = rotate(&cur, &c.inner, cw);
                if seen.contains(&next) {
                    continue;
                }
                let known: Vec<Option<u8>> = next.iter().map(|&s| Some(s)).collect();
                if (0..aug.rooms).all(|v| frame.vertex_ok(v, &known)) {
                    seen.insert(next.clone());
                    order.push(next.clone());
                    queue.push_back(next);
                }
            }
        }
    }
    order.iter().map(|s| frame.to_rel(s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::planar_embed;
    use crate::graph::AdjacencyGraph;
    use crate::rectdual::{enumerate_corner_assignments, four_complete};

    fn augmented(n: usize, edges: &[(usize, usize)], pick: usize) -> AugmentedGraph {
        let e = planar_embed(&AdjacencyGraph::new(n, edges).unwrap()).unwrap();
        let ca = &enumerate_corner_assignments(&e).unwrap()[pick];
        four_complete(&e, ca).unwrap()
    }

    #[test]
    fn completable_patterns() {
        let k = |v: &[u8]| v.iter().map(|&x| Some(x)).collect::<Vec<_>>();
        assert!(completable(&k(&[0, 1, 2, 3])));
        assert!(completable(&k(&[1, 2, 3, 0])));
        assert!(!completable(&k(&[0, 2, 1, 3])));
        assert!(!completable(&k(&[0, 1, 2, 3, 0, 1, 2, 3])));
        assert!(completable(&[Some(0), None, None, None]));
        assert!(!completable(&[Some(0), Some(0), None, None]));
        assert!(completable(&[Some(0), Some(0), None, None, None]));
        assert!(!completable(&[Some(0), Some(2), None, Some(3)]));
        assert!(completable(&[Some(0), None, Some(2), Some(3)]));
        assert!(completable(&[Some(0), None, None, Some(3)]));
        assert!(!completable(&[None, None, None]));
    }

    #[test]
    fn single_room_is_forced() {
        let aug = augmented(1, &[], 0);
        let rel = compute_rel(&aug).unwrap();
        assert!(rel.t1.contains(&(0, 1)) && rel.t1.contains(&(3, 0)));
        assert!(rel.t2.contains(&(0, 2)) && rel.t2.contains(&(4, 0)));
        assert_eq!(enumerate_rels(&aug).len(), 1);
    }

    #[test]
    fn triangle_labellings_validate() {
        for pick in 0..12 {
            let aug = augmented(3, &[(0, 1), (1, 2), (2, 0)], pick);
            let rels = enumerate_rels(&aug);
            assert!(!rels.is_empty());
            for r in &rels {
                validate_rel(&aug, r).unwrap();
            }
        }
    }

    #[test]
    fn validator_rejects_swapped_family() {
        let aug = augmented(2, &[(0, 1)], 0);
        let mut rel = compute_rel(&aug).unwrap();
        validate_rel(&aug, &rel).unwrap();
        let e = *rel.t2.iter().find(|(a, b)| *a < 2 && *b < 2).unwrap();
        rel.t2.remove(&e);
        rel.t1.insert(e);
        assert!(validate_rel(&aug, &rel).is_err());
    }
}
