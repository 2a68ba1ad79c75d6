//! Minimum partition of a rectilinear cell region into rectangles.
//!
//! The count is `concave - independent_chords + 1 - holes`. Chords join two
//! concave vertices through the interior; a largest set of pairwise
//! disjoint chords comes from a maximum matching between horizontal and
//! vertical chords. Remaining concave vertices are resolved by vertical
//! cuts.

use std::collections::{BTreeSet, HashSet};

/// Axis-aligned block of grid cells; `(x, y)` is the lower-left cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellRect {
    pub x: usize,
    pub y: usize,
    pub w: usize,
    pub h: usize,
}

impl CellRect {
    pub fn contains(&self, cx: usize, cy: usize) -> bool {
        cx >= self.x && cx < self.x + self.w && cy >= self.y && cy < self.y + self.h
    }
}

struct Region {
    cells: HashSet<(i64, i64)>,
}

impl Region {
    fn has(&self, x: i64, y: i64) -> bool {
        self.cells.contains(&(x, y))
    }

    /// Cells around grid point (x, y): NE, NW, SW, SE.
    fn quad(&self, x: i64, y: i64) -> [bool; 4] {
        [
            self.has(x, y),
            self.has(x - 1, y),
            self.has(x - 1, y - 1),
            self.has(x, y - 1),
        ]
    }

    /// Horizontal and vertical directions leading into the interior from a
    /// concave point, as unit steps.
    fn concave_dirs(&self, x: i64, y: i64) -> Option<(i64, i64)> {
        let q = self.quad(x, y);
        if q.iter().filter(|&&b| b).count() != 3 {
            return None;
        }
        // the missing quadrant points away from the interior directions
        Some(match q.iter().position(|&b| !b).unwrap() {
            0 => (-1, -1),
            1 => (1, -1),
            2 => (1, 1),
            _ => (-1, 1),
        })
    }

    /// Whether the unit segment from (x, y) one step along `dx` or `dy` has
    /// room cells on both sides.
    fn interior_step(&self, x: i64, y: i64, dx: i64, dy: i64) -> bool {
        if dy == 0 {
            let cx = if dx > 0 { x } else { x - 1 };
            self.has(cx, y) && self.has(cx, y - 1)
        } else {
            let cy = if dy > 0 { y } else { y - 1 };
            self.has(x, cy) && self.has(x - 1, cy)
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Chord {
    from: (i64, i64),
    to: (i64, i64),
}

impl Chord {
    fn crosses(&self, v: &Chord) -> bool {
        let (x0, x1) = (self.from.0.min(self.to.0), self.from.0.max(self.to.0));
        let y = self.from.1;
        let (y0, y1) = (v.from.1.min(v.to.1), v.from.1.max(v.to.1));
        let x = v.from.0;
        x0 <= x && x <= x1 && y0 <= y && y <= y1
    }
}

/// Walks from a concave point along one axis while the path stays inside,
/// returning the concave point reached, if any.
fn chord_from(r: &Region, concave: &HashSet<(i64, i64)>, p: (i64, i64), d: (i64, i64)) -> Option<(i64, i64)> {
    let (mut x, mut y) = p;
    loop {
        if !r.interior_step(x, y, d.0, d.1) {
            return None;
        }
        x += d.0;
        y += d.1;
        if concave.contains(&(x, y)) {
            return Some((x, y));
        }
    }
}

/// Augmenting-path bipartite matching; returns, for each right vertex, its
/// matched left vertex.
fn max_matching(adj: &[Vec<usize>], right: usize) -> Vec<Option<usize>> {
    fn augment(u: usize, adj: &[Vec<usize>], seen: &mut [bool], mate: &mut [Option<usize>]) -> bool {
        for &v in &adj[u] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if mate[v].is_none_or(|w| augment(w, adj, seen, mate)) {
                mate[v] = Some(u);
                return true;
            }
        }
        false
    }
    let mut mate = vec![None; right];
    for u in 0..adj.len() {
        let mut seen = vec![false; right];
        augment(u, adj, &mut seen, &mut mate);
    }
    mate
}

/// Largest set of pairwise disjoint chords (Kőnig: complement of a minimum
/// vertex cover of the crossing graph).
fn independent_chords(h: &[Chord], v: &[Chord]) -> Vec<Chord> {
    let adj: Vec<Vec<usize>> = h
        .iter()
        .map(|a| (0..v.len()).filter(|&j| a.crosses(&v[j])).collect())
        .collect();
    let mate = max_matching(&adj, v.len());
    let mut left_mate = vec![None; h.len()];
    for (j, m) in mate.iter().enumerate() {
        if let Some(i) = m {
            left_mate[*i] = Some(j);
        }
    }
    // alternating reachability from unmatched left vertices
    let mut zl = vec![false; h.len()];
    let mut zr = vec![false; v.len()];
    let mut stack: Vec<usize> = (0..h.len()).filter(|&i| left_mate[i].is_none()).collect();
    for &i in &stack {
        zl[i] = true;
    }
    while let Some(i) = stack.pop() {
        for &j in &adj[i] {
            if zr[j] {
                continue;
            }
            zr[j] = true;
            if let Some(k) = mate[j] {
                if !zl[k] {
                    zl[k] = true;
                    stack.push(k);
                }
            }
        }
    }
    let mut out: Vec<Chord> = (0..h.len()).filter(|&i| zl[i]).map(|i| h[i]).collect();
    out.extend((0..v.len()).filter(|&j| !zr[j]).map(|j| v[j]));
    out
}

/// Minimum set of rectangles whose union is exactly `cells`.
pub fn min_rect_partition(cells: &[(usize, usize)]) -> Vec<CellRect> {
    if cells.is_empty() {
        return Vec::new();
    }
    let r = Region {
        cells: cells.iter().map(|&(x, y)| (x as i64, y as i64)).collect(),
    };
    let xmax = r.cells.iter().map(|c| c.0).max().unwrap() + 1;
    let ymax = r.cells.iter().map(|c| c.1).max().unwrap() + 1;
    let mut concave: BTreeSet<(i64, i64)> = BTreeSet::new();
    for x in 0..=xmax {
        for y in 0..=ymax {
            if r.concave_dirs(x, y).is_some() {
                concave.insert((x, y));
            }
        }
    }
    let lookup: HashSet<(i64, i64)> = concave.iter().copied().collect();
    let mut hs = Vec::new();
    let mut vs = Vec::new();
    for &p in &concave {
        let (dx, dy) = r.concave_dirs(p.0, p.1).unwrap();
        if let Some(q) = chord_from(&r, &lookup, p, (dx, 0)) {
            if p < q {
                hs.push(Chord { from: p, to: q });
            }
        }
        if let Some(q) = chord_from(&r, &lookup, p, (0, dy)) {
            if p < q {
                vs.push(Chord { from: p, to: q });
            }
        }
    }
    // walls between cells: vertical ones left of cell (x, y), horizontal
    // ones below it
    let mut vwall: HashSet<(i64, i64)> = HashSet::new();
    let mut hwall: HashSet<(i64, i64)> = HashSet::new();
    let mut resolved: HashSet<(i64, i64)> = HashSet::new();
    for c in independent_chords(&hs, &vs) {
        resolved.insert(c.from);
        resolved.insert(c.to);
        if c.from.1 == c.to.1 {
            for x in c.from.0..c.to.0 {
                hwall.insert((x, c.from.1));
            }
        } else {
            for y in c.from.1..c.to.1 {
                vwall.insert((c.from.0, y));
            }
        }
    }
    // remaining concave points, top row first, cut vertically
    let mut rest: Vec<(i64, i64)> = concave.iter().copied().filter(|p| !resolved.contains(p)).collect();
    rest.sort_by_key(|&(x, y)| (-y, x));
    for p in rest {
        let (_, dy) = r.concave_dirs(p.0, p.1).unwrap();
        let (x, mut y) = p;
        loop {
            if !r.interior_step(x, y, 0, dy) {
                break;
            }
            let cy = if dy > 0 { y } else { y - 1 };
            if vwall.contains(&(x, cy)) {
                break;
            }
            vwall.insert((x, cy));
            y += dy;
            // stop on reaching the boundary or another cut
            let touches = r.quad(x, y).iter().any(|&b| !b)
                || hwall.contains(&(x, y))
                || hwall.contains(&(x - 1, y))
                || vwall.contains(&(x, if dy > 0 { y } else { y - 1 }));
            if touches {
                break;
            }
        }
    }
    pieces(&r, &vwall, &hwall)
}

/// Connected pieces after cutting, each split into rectangles if needed.
fn pieces(r: &Region, vwall: &HashSet<(i64, i64)>, hwall: &HashSet<(i64, i64)>) -> Vec<CellRect> {
    let mut seen: HashSet<(i64, i64)> = HashSet::new();
    let mut order: Vec<(i64, i64)> = r.cells.iter().copied().collect();
    order.sort_by_key(|&(x, y)| (y, x));
    let mut out = Vec::new();
    for &s in &order {
        if seen.contains(&s) {
            continue;
        }
        let mut comp = vec![s];
        seen.insert(s);
        let mut i = 0;
        while i < comp.len() {
            let (x, y) = comp[i];
            i += 1;
            let steps = [
                ((x + 1, y), !vwall.contains(&(x + 1, y))),
                ((x - 1, y), !vwall.contains(&(x, y))),
                ((x, y + 1), !hwall.contains(&(x, y + 1))),
                ((x, y - 1), !hwall.contains(&(x, y))),
            ];
            for (c, open) in steps {
                if open && r.has(c.0, c.1) && seen.insert(c) {
                    comp.push(c);
                }
            }
        }
        out.extend(greedy_rects(&comp));
    }
    out.sort();
    out
}

/// Rectangles covering a cell set: the exact box when it is one,
/// otherwise maximal runs grown upward.
fn greedy_rects(comp: &[(i64, i64)]) -> Vec<CellRect> {
    let set: HashSet<(i64, i64)> = comp.iter().copied().collect();
    let mut left: Vec<(i64, i64)> = comp.to_vec();
    left.sort_by_key(|&(x, y)| (y, x));
    let mut used: HashSet<(i64, i64)> = HashSet::new();
    let mut out = Vec::new();
    for &(x, y) in &left {
        if used.contains(&(x, y)) {
            continue;
        }
        let mut w = 1;
        while set.contains(&(x + w, y)) && !used.contains(&(x + w, y)) {
            w += 1;
        }
        let mut h = 1;
        while (0..w).all(|i| set.contains(&(x + i, y + h)) && !used.contains(&(x + i, y + h))) {
            h += 1;
        }
        for i in 0..w {
            for j in 0..h {
                used.insert((x + i, y + j));
            }
        }
        out.push(CellRect {
            x: x as usize,
            y: y as usize,
            w: w as usize,
            h: h as usize,
        });
    }
    out
}
