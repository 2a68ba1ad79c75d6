//! Rooms as unions of axis-aligned rectangles, and checks on them.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::graph::AdjacencyGraph;

/// Geometric tolerance for coordinate comparisons.
pub const GEOM_EPS: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl Rect {
    pub fn new(x: f64, y: f64, w: f64, h: f64) -> Self {
        Rect { x, y, w, h }
    }

    pub fn right(&self) -> f64 {
        self.x + self.w
    }

    pub fn top(&self) -> f64 {
        self.y + self.h
    }

    pub fn area(&self) -> f64 {
        self.w * self.h
    }

    /// Positive-area intersection.
    pub fn overlaps(&self, o: &Rect) -> bool {
        overlap_len(self.x, self.right(), o.x, o.right()) > GEOM_EPS
            && overlap_len(self.y, self.top(), o.y, o.top()) > GEOM_EPS
    }

    /// Length of the wall shared with `o` (0 if they only touch at a point).
    pub fn shared_wall(&self, o: &Rect) -> f64 {
        if close(self.right(), o.x) || close(o.right(), self.x) {
            return overlap_len(self.y, self.top(), o.y, o.top());
        }
        if close(self.top(), o.y) || close(o.top(), self.y) {
            return overlap_len(self.x, self.right(), o.x, o.right());
        }
        0.0
    }

    pub fn contains_rect(&self, o: &Rect) -> bool {
        o.x >= self.x - GEOM_EPS
            && o.y >= self.y - GEOM_EPS
            && o.right() <= self.right() + GEOM_EPS
            && o.top() <= self.top() + GEOM_EPS
    }
}

pub fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= GEOM_EPS
}

pub fn overlap_len(a0: f64, a1: f64, b0: f64, b1: f64) -> f64 {
    (a1.min(b1) - a0.max(b0)).max(0.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Room {
    pub id: String,
    pub label: Option<String>,
    pub rects: Vec<Rect>,
    /// Helper room that must be merged away or is padding.
    pub extra: bool,
    /// Room grew by absorbing extra rooms.
    pub merged: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    /// Corner vertices u0..u3, clockwise from the north-west.
    pub corners: Vec<usize>,
    pub rel_hash: String,
    /// Subdivided edges and the room each extra vertex was merged into.
    pub transform: Vec<TransformStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformStep {
    pub extra: usize,
    pub edge: (usize, usize),
    pub merged_into: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Floorplan {
    pub rooms: Vec<Room>,
    pub bbox: Rect,
    pub provenance: Provenance,
}

impl Floorplan {
    /// All parts as (room index, part index, rect).
    pub fn parts(&self) -> Vec<(usize, usize, Rect)> {
        let mut out = Vec::new();
        for (ri, r) in self.rooms.iter().enumerate() {
            for (pi, rect) in r.rects.iter().enumerate() {
                out.push((ri, pi, *rect));
            }
        }
        out
    }

    pub fn room_by_id(&self, id: &str) -> Option<&Room> {
        self.rooms.iter().find(|r| r.id == id)
    }

    /// Rooms that are not extra, in order.
    pub fn real_rooms(&self) -> impl Iterator<Item = &Room> {
        self.rooms.iter().filter(|r| !r.extra)
    }
}

/// Weak dual over `rooms` in order: rooms are adjacent iff they share a wall
/// of positive length.
pub fn weak_dual(rooms: &[Room]) -> AdjacencyGraph {
    let mut g = AdjacencyGraph::new(rooms.len(), &[]).unwrap();
    for a in 0..rooms.len() {
        for b in a + 1..rooms.len() {
            if rooms_adjacent(&rooms[a], &rooms[b]) {
                g.add_edge(a, b).unwrap();
            }
        }
    }
    g
}

pub fn rooms_adjacent(a: &Room, b: &Room) -> bool {
    a.rects
        .iter()
        .any(|p| b.rects.iter().any(|q| p.shared_wall(q) > GEOM_EPS))
}

/// Adjacency graph over the non-extra rooms only, in order.
pub fn real_weak_dual(f: &Floorplan) -> AdjacencyGraph {
    let real: Vec<Room> = f.real_rooms().cloned().collect();
    weak_dual(&real)
}

/// Checks that parts are pairwise interior-disjoint and lie inside the
/// bounding box. With `full`, their areas must also add up to the box.
pub fn check_tiling(f: &Floorplan, full: bool) -> Result<(), String> {
    let parts = f.parts();
    for (ri, pi, r) in &parts {
        if r.w <= GEOM_EPS || r.h <= GEOM_EPS {
            return Err(format!("room {} part {pi} has no area", f.rooms[*ri].id));
        }
        if !f.bbox.contains_rect(r) {
            return Err(format!("room {} part {pi} leaves the bbox", f.rooms[*ri].id));
        }
    }
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            if parts[i].2.overlaps(&parts[j].2) {
                return Err(format!(
                    "rooms {} and {} overlap",
                    f.rooms[parts[i].0].id, f.rooms[parts[j].0].id
                ));
            }
        }
    }
    if full {
        let sum: f64 = parts.iter().map(|p| p.2.area()).sum();
        let want = f.bbox.area();
        if (sum - want).abs() > GEOM_EPS * want.max(1.0) {
            return Err(format!("parts cover area {sum}, bbox has {want}"));
        }
    }
    Ok(())
}

/// Whether the union of `rects` is connected (through shared walls) and has
/// no holes.
pub fn is_simple_union(rects: &[Rect]) -> bool {
    if rects.is_empty() {
        return false;
    }
    let xs = coords(rects.iter().flat_map(|r| [r.x, r.right()]));
    let ys = coords(rects.iter().flat_map(|r| [r.y, r.top()]));
    // cell grid with a one-cell border of empty space
    let (nx, ny) = (xs.len() + 1, ys.len() + 1);
    let mut filled = vec![false; nx * ny];
    for r in rects {
        let (x0, x1) = (index_of(&xs, r.x), index_of(&xs, r.right()));
        let (y0, y1) = (index_of(&ys, r.y), index_of(&ys, r.top()));
        for cx in x0..x1 {
            for cy in y0..y1 {
                filled[(cy + 1) * nx + cx + 1] = true;
            }
        }
    }
    let count = |want: bool| {
        let mut seen = vec![false; nx * ny];
        let mut comps = 0;
        for s in 0..nx * ny {
            if seen[s] || filled[s] != want {
                continue;
            }
            comps += 1;
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(c) = stack.pop() {
                let (cx, cy) = (c % nx, c / nx);
                let mut nb = Vec::with_capacity(4);
                if cx > 0 {
                    nb.push(c - 1);
                }
                if cx + 1 < nx {
                    nb.push(c + 1);
                }
                if cy > 0 {
                    nb.push(c - nx);
                }
                if cy + 1 < ny {
                    nb.push(c + nx);
                }
                for d in nb {
                    if !seen[d] && filled[d] == want {
                        seen[d] = true;
                        stack.push(d);
                    }
                }
            }
        }
        comps
    };
    count(true) == 1 && count(false) == 1
}

fn coords(it: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = it.collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v.dedup_by(|a, b| close(*a, *b));
    v
}

fn index_of(v: &[f64], x: f64) -> usize {
    v.iter().position(|&c| close(c, x)).unwrap()
}

/// Horizontal and vertical adjacency pairs between parts, by geometry.
/// `t2` pairs are (left, right) and `t1` pairs are (below, above).
pub fn part_adjacencies(rects: &[Rect]) -> (BTreeSet<(usize, usize)>, BTreeSet<(usize, usize)>) {
    let mut t1 = BTreeSet::new();
    let mut t2 = BTreeSet::new();
    for a in 0..rects.len() {
        for b in 0..rects.len() {
            if a == b {
                continue;
            }
            let (p, q) = (&rects[a], &rects[b]);
            if close(p.right(), q.x) && overlap_len(p.y, p.top(), q.y, q.top()) > GEOM_EPS {
                t2.insert((a, b));
            }
            if close(p.top(), q.y) && overlap_len(p.x, p.right(), q.x, q.right()) > GEOM_EPS {
                t1.insert((a, b));
            }
        }
    }
    (t1, t2)
}

/// Room-level side adjacencies: for each room pair, which sides touch.
pub fn side_adjacency(f: &Floorplan) -> BTreeMap<(usize, usize), (bool, bool)> {
    let parts = f.parts();
    let rects: Vec<Rect> = parts.iter().map(|p| p.2).collect();
    let (t1, t2) = part_adjacencies(&rects);
    let mut out: BTreeMap<(usize, usize), (bool, bool)> = BTreeMap::new();
    for &(a, b) in &t1 {
        let (ra, rb) = (parts[a].0, parts[b].0);
        if ra != rb {
            out.entry((ra, rb)).or_default().0 = true;
        }
    }
    for &(a, b) in &t2 {
        let (ra, rb) = (parts[a].0, parts[b].0);
        if ra != rb {
            out.entry((ra, rb)).or_default().1 = true;
        }
    }
    out
}
