//! Fixtures and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use gplan_core::dimension::simplex::{LinearProgram, RowKind};
use gplan_core::floorplan::{Floorplan, Rect};
use gplan_core::rectdual::{AugmentedGraph, RegularEdgeLabelling};
use gplan_core::AdjacencyGraph;

pub fn graph(n: usize, edges: &[(usize, usize)]) -> AdjacencyGraph {
    AdjacencyGraph::new(n, edges).unwrap()
}

pub fn four_face_sample() -> AdjacencyGraph {
    graph(
        7,
        &[(5, 0), (5, 4), (5, 1), (0, 1), (1, 6), (1, 2), (6, 2), (2, 3), (2, 4), (3, 4)],
    )
}

pub fn octahedral_sample() -> AdjacencyGraph {
    graph(
        6,
        &[
            (0, 2),
            (0, 1),
            (0, 3),
            (0, 5),
            (2, 1),
            (2, 5),
            (2, 4),
            (1, 4),
            (1, 3),
            (3, 5),
            (3, 4),
            (5, 4),
        ],
    )
}

pub fn many_cips_sample() -> AdjacencyGraph {
    graph(
        10,
        &[
            (9, 1),
            (9, 4),
            (1, 8),
            (1, 4),
            (1, 0),
            (1, 2),
            (8, 0),
            (0, 7),
            (0, 2),
            (7, 2),
            (2, 6),
            (2, 3),
            (2, 4),
            (6, 3),
            (3, 5),
            (3, 4),
            (5, 4),
        ],
    )
}

/// Square 0-1-2-3 around hub 4 with one more vertex 5 inside triangle
/// 0-1-4, so 0-1-4 separates 5 from the rest.
pub fn one_separating_triangle() -> AdjacencyGraph {
    graph(
        6,
        &[
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 0),
            (0, 4),
            (1, 4),
            (2, 4),
            (3, 4),
            (5, 0),
            (5, 1),
            (5, 4),
        ],
    )
}

/// Twelve-cycle 0..11 with shortcuts (0,2), (2,4), ..., (10,0) and a hub 12
/// joined to the even vertices. Every odd vertex is the inside of one corner
/// implying path, so there are six, and no triangle separates.
pub fn six_cips() -> AdjacencyGraph {
    let mut e = Vec::new();
    for i in 0..12 {
        e.push((i, (i + 1) % 12));
    }
    for k in 0..6 {
        e.push((2 * k, (2 * k + 2) % 12));
        e.push((12, 2 * k));
    }
    graph(13, &e)
}

/// Ten rooms: a 3x3 block of triangulated rooms with one more on top.
pub fn ten_rooms() -> AdjacencyGraph {
    // grid vertices r*3+c, diagonals from (r,c) to (r+1,c+1); room 9 on top
    let mut e = Vec::new();
    for r in 0..3 {
        for c in 0..3 {
            let v = r * 3 + c;
            if c < 2 {
                e.push((v, v + 1));
            }
            if r < 2 {
                e.push((v, v + 3));
            }
            if r < 2 && c < 2 {
                e.push((v, v + 4));
            }
        }
    }
    e.extend([(9, 6), (9, 7), (9, 8)]);
    graph(10, &e)
}

/// Canonical form under vertex relabelling, by brute force.
pub fn canonical(g: &AdjacencyGraph) -> Vec<(usize, usize)> {
    let n = g.vertex_count();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<(usize, usize)>> = None;
    permute(&mut perm, 0, &mut |p| {
        let mut es: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .map(|e| {
                let (a, b) = (p[e.0], p[e.1]);
                (a.min(b), a.max(b))
            })
            .collect();
        es.sort();
        if best.as_ref().is_none_or(|b| es < *b) {
            best = Some(es);
        }
    });
    best.unwrap()
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

/// Every connected graph on `n` vertices up to isomorphism.
pub fn connected_graphs(n: usize) -> Vec<AdjacencyGraph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let es: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        let g = graph(n, &es);
        if !g.is_connected() {
            continue;
        }
        if seen.insert(canonical(&g)) {
            out.push(g);
        }
    }
    out
}

/// Whether `rel` is a regular edge labelling of `aug`, checked directly:
/// every interior edge labelled once, pole edges point the right way, and
/// around every room the labels read, counter-clockwise, T1 out, T2 in,
/// T1 in, T2 out as four non-empty runs.
pub fn is_rel(aug: &AugmentedGraph, rel: &RegularEdgeLabelling) -> bool {
    let n = aug.rooms;
    let g = aug.emb.graph();
    let (pn, pe, ps, pw) = (n, n + 1, n + 2, n + 3);
    let mut labelled = 0;
    for e in g.edges() {
        if e.0 >= n && e.1 >= n {
            continue;
        }
        let hits = [(e.0, e.1), (e.1, e.0)]
            .iter()
            .map(|p| rel.t1.contains(p) as usize + rel.t2.contains(p) as usize)
            .sum::<usize>();
        if hits != 1 {
            return false;
        }
        labelled += 1;
    }
    if labelled != rel.t1.len() + rel.t2.len() {
        return false;
    }
    for v in 0..n {
        let checks = [
            (pn, rel.t1.contains(&(v, pn))),
            (pe, rel.t2.contains(&(v, pe))),
            (ps, rel.t1.contains(&(ps, v))),
            (pw, rel.t2.contains(&(pw, v))),
        ];
        if checks.iter().any(|&(p, ok)| g.has_edge(v, p) && !ok) {
            return false;
        }
    }
    for v in 0..n {
        let code: Vec<u8> = aug
            .emb
            .rotation(v)
            .iter()
            .map(|&w| {
                if rel.t1.contains(&(v, w)) {
                    0
                } else if rel.t2.contains(&(w, v)) {
                    1
                } else if rel.t1.contains(&(w, v)) {
                    2
                } else {
                    3
                }
            })
            .collect();
        let d = code.len();
        let Some(start) = (0..d).find(|&i| code[i] == 0 && code[(i + d - 1) % d] != 0) else {
            return false;
        };
        let mut runs = Vec::new();
        for i in 0..d {
            let c = code[(start + i) % d];
            if runs.last() != Some(&c) {
                runs.push(c);
            }
        }
        if runs != [0, 1, 2, 3] {
            return false;
        }
    }
    true
}

/// All regular edge labellings by exhaustive assignment of the room-room
/// edges (pole edges have a single admissible label).
pub fn brute_force_rels(aug: &AugmentedGraph) -> Vec<RegularEdgeLabelling> {
    let n = aug.rooms;
    let g = aug.emb.graph();
    let mut base = RegularEdgeLabelling {
        rooms: n,
        t1: BTreeSet::new(),
        t2: BTreeSet::new(),
    };
    let mut free = Vec::new();
    for e in g.edges() {
        match (e.0 < n, e.1 < n) {
            (true, true) => free.push((e.0, e.1)),
            (true, false) => {
                let (v, p) = (e.0, e.1);
                match p - n {
                    0 => base.t1.insert((v, p)),
                    1 => base.t2.insert((v, p)),
                    2 => base.t1.insert((p, v)),
                    _ => base.t2.insert((p, v)),
                };
            }
            _ => {}
        }
    }
    let mut out = Vec::new();
    for code in 0..4usize.pow(free.len() as u32) {
        let mut rel = base.clone();
        let mut c = code;
        for &(a, b) in &free {
            match c % 4 {
                0 => rel.t1.insert((a, b)),
                1 => rel.t1.insert((b, a)),
                2 => rel.t2.insert((a, b)),
                _ => rel.t2.insert((b, a)),
            };
            c /= 4;
        }
        if is_rel(aug, &rel) {
            out.push(rel);
        }
    }
    out
}

/// Room pairs by family, unordered: (side by side, stacked).
pub fn rel_adjacency(rel: &RegularEdgeLabelling) -> (BTreeSet<(usize, usize)>, BTreeSet<(usize, usize)>) {
    let n = rel.rooms;
    let un = |s: &BTreeSet<(usize, usize)>| {
        s.iter()
            .filter(|&&(a, b)| a < n && b < n)
            .map(|&(a, b)| (a.min(b), a.max(b)))
            .collect()
    };
    (un(&rel.t2), un(&rel.t1))
}

/// Geometric adjacency of rooms: (side by side, stacked) unordered pairs.
pub fn geometric_adjacency(f: &Floorplan) -> (BTreeSet<(usize, usize)>, BTreeSet<(usize, usize)>) {
    let tol = 1e-6;
    let mut side = BTreeSet::new();
    let mut stacked = BTreeSet::new();
    for (i, a) in f.rooms.iter().enumerate() {
        for (j, b) in f.rooms.iter().enumerate() {
            if i >= j {
                continue;
            }
            for p in &a.rects {
                for q in &b.rects {
                    let ov_y = p.y.max(q.y) < (p.y + p.h).min(q.y + q.h) - tol;
                    let ov_x = p.x.max(q.x) < (p.x + p.w).min(q.x + q.w) - tol;
                    if ov_y && ((p.x + p.w - q.x).abs() < tol || (q.x + q.w - p.x).abs() < tol) {
                        side.insert((i, j));
                    }
                    if ov_x && ((p.y + p.h - q.y).abs() < tol || (q.y + q.h - p.y).abs() < tol) {
                        stacked.insert((i, j));
                    }
                }
            }
        }
    }
    (side, stacked)
}

/// Tiling, overlap and weak-dual checks written against raw rectangles.
pub fn check_floorplan(f: &Floorplan, g: &AdjacencyGraph) -> Result<(), String> {
    let tol = 1e-6;
    let rects: Vec<(usize, Rect)> = f
        .rooms
        .iter()
        .enumerate()
        .flat_map(|(i, r)| r.rects.iter().map(move |&x| (i, x)))
        .collect();
    let area: f64 = rects.iter().map(|(_, r)| r.w * r.h).sum();
    if (area - f.bbox.w * f.bbox.h).abs() > tol {
        return Err(format!("area {area} vs bbox {}", f.bbox.w * f.bbox.h));
    }
    for (i, (_, p)) in rects.iter().enumerate() {
        if p.x < f.bbox.x - tol
            || p.y < f.bbox.y - tol
            || p.x + p.w > f.bbox.x + f.bbox.w + tol
            || p.y + p.h > f.bbox.y + f.bbox.h + tol
        {
            return Err("part outside bbox".into());
        }
        for (_, q) in &rects[i + 1..] {
            let ox = (p.x + p.w).min(q.x + q.w) - p.x.max(q.x);
            let oy = (p.y + p.h).min(q.y + q.h) - p.y.max(q.y);
            if ox > tol && oy > tol {
                return Err("parts overlap".into());
            }
        }
    }
    if f.rooms.len() != g.vertex_count() {
        return Err(format!("{} rooms for {} vertices", f.rooms.len(), g.vertex_count()));
    }
    let (side, stacked) = geometric_adjacency(f);
    let got: BTreeSet<(usize, usize)> = side.union(&stacked).copied().collect();
    let want: BTreeSet<(usize, usize)> = g.edges().iter().map(|e| (e.0, e.1)).collect();
    if got != want {
        return Err(format!("adjacency {got:?}, expected {want:?}"));
    }
    Ok(())
}

/// Optimum of a small LP by enumerating basic solutions: every choice of
/// `nvars` tight constraints (equalities always tight) is solved and the
/// best feasible point kept.
pub fn vertex_enumeration(lp: &LinearProgram) -> Option<f64> {
    let nv = lp.var_count();
    // constraint rows as (coeffs dense, rhs, kind); sign constraints last
    let mut rows: Vec<(Vec<f64>, f64, RowKind)> = lp
        .rows
        .iter()
        .map(|r| {
            let mut a = vec![0.0; nv];
            for &(j, c) in &r.coeffs {
                a[j] += c;
            }
            (a, r.rhs, r.kind)
        })
        .collect();
    for j in 0..nv {
        let mut a = vec![0.0; nv];
        a[j] = 1.0;
        rows.push((a, 0.0, RowKind::Ge));
    }
    let eq: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].2 == RowKind::Eq).collect();
    let ineq: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].2 != RowKind::Eq).collect();
    let eq_rows: Vec<Vec<f64>> = eq.iter().map(|&i| rows[i].0.clone()).collect();
    let need = nv - rank(&eq_rows, nv);
    let feasible = |x: &[f64]| {
        rows.iter().all(|(a, b, k)| {
            let lhs: f64 = a.iter().zip(x).map(|(p, q)| p * q).sum();
            match k {
                RowKind::Le => lhs <= b + 1e-7,
                RowKind::Ge => lhs >= b - 1e-7,
                RowKind::Eq => (lhs - b).abs() <= 1e-7,
            }
        })
    };
    let mut best: Option<f64> = None;
    let mut pick = Vec::new();
    choose(&ineq, need, 0, &mut pick, &mut |tight| {
        let idx: Vec<usize> = eq.iter().chain(tight.iter()).copied().collect();
        let a: Vec<Vec<f64>> = idx.iter().map(|&i| rows[i].0.clone()).collect();
        let b: Vec<f64> = idx.iter().map(|&i| rows[i].1).collect();
        if let Some(x) = least_squares_exact(&a, &b, nv) {
            if feasible(&x) {
                let v: f64 = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
                if best.is_none_or(|b| v < b) {
                    best = Some(v);
                }
            }
        }
    });
    best
}

fn choose(pool: &[usize], k: usize, from: usize, pick: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if pick.len() == k {
        f(pick);
        return;
    }
    for i in from..pool.len() {
        if pool.len() - i < k - pick.len() {
            break;
        }
        pick.push(pool[i]);
        choose(pool, k, i + 1, pick, f);
        pick.pop();
    }
}

fn rank(a: &[Vec<f64>], nv: usize) -> usize {
    let mut m = a.to_vec();
    let mut r = 0;
    for c in 0..nv {
        let Some(p) = (r..m.len()).find(|&i| m[i][c].abs() > 1e-10) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            let f = m[i][c] / m[r][c];
            for j in 0..nv {
                m[i][j] -= f * m[r][j];
            }
        }
        r += 1;
    }
    r
}

/// Unique solution of `a x = b` when `a` has full column rank and the
/// system is consistent.
fn least_squares_exact(a: &[Vec<f64>], b: &[f64], nv: usize) -> Option<Vec<f64>> {
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(r, &v)| {
            let mut r = r.clone();
            r.push(v);
            r
        })
        .collect();
    let rows = m.len();
    let mut r = 0;
    for c in 0..nv {
        let p = (r..rows).max_by(|&i, &j| m[i][c].abs().partial_cmp(&m[j][c].abs()).unwrap())?;
        if m[p][c].abs() < 1e-10 {
            return None;
        }
        m.swap(r, p);
        let piv = m[r][c];
        for x in m[r].iter_mut() {
            *x /= piv;
        }
        for i in 0..rows {
            if i != r {
                let f = m[i][c];
                if f != 0.0 {
                    for j in 0..=nv {
                        m[i][j] -= f * m[r][j];
                    }
                }
            }
        }
        r += 1;
    }
    if m[r..].iter().any(|row| row[nv].abs() > 1e-7) {
        return None;
    }
    Some((0..nv).map(|i| m[i][nv]).collect())
}

/// Grows a plane triangulated graph from a triangle. Each step either
/// attaches a vertex to `1 + span` consecutive outer vertices (keeping at
/// least one off it) or, when `inside`, drops a vertex into a bounded face.
/// `at` picks the outer position or the face. The result is biconnected with
/// every bounded face a triangle.
pub fn grow_ptg(steps: &[(bool, usize, usize)]) -> AdjacencyGraph {
    grow_ptg_with_faces(steps).0
}

/// Like `grow_ptg`, also returning the bounded faces and the outer cycle.
pub fn grow_ptg_with_faces(steps: &[(bool, usize, usize)]) -> (AdjacencyGraph, Vec<[usize; 3]>, Vec<usize>) {
    let mut edges = vec![(0, 1), (1, 2), (2, 0)];
    let mut outer: Vec<usize> = vec![0, 1, 2];
    let mut faces: Vec<[usize; 3]> = vec![[0, 1, 2]];
    let mut n = 3;
    for &(inside, at, span) in steps {
        let v = n;
        n += 1;
        if inside {
            let [a, b, c] = faces.swap_remove(at % faces.len());
            edges.extend([(v, a), (v, b), (v, c)]);
            faces.extend([[a, b, v], [b, c, v], [c, a, v]]);
        } else {
            let len = outer.len();
            let span = 1 + span % (len - 2).max(1);
            let start = at % len;
            let run: Vec<usize> = (0..=span).map(|k| outer[(start + k) % len]).collect();
            for w in &run {
                edges.push((v, *w));
            }
            for p in run.windows(2) {
                faces.push([p[0], p[1], v]);
            }
            // the run's inner vertices leave the boundary; v takes their place
            let keep: Vec<usize> = (0..len)
                .map(|k| outer[(start + span + k) % len])
                .take(len - span + 1)
                .collect();
            outer = keep;
            outer.push(v);
        }
    }
    (graph(n, &edges), faces, outer)
}

/// Every 3-cycle that is neither a bounded face nor the outer face.
pub fn non_facial_triangles(g: &AdjacencyGraph, faces: &[[usize; 3]], outer: &[usize]) -> BTreeSet<[usize; 3]> {
    let sorted = |mut t: [usize; 3]| {
        t.sort();
        t
    };
    let mut facial: BTreeSet<[usize; 3]> = faces.iter().map(|&f| sorted(f)).collect();
    if outer.len() == 3 {
        facial.insert(sorted([outer[0], outer[1], outer[2]]));
    }
    let n = g.vertex_count();
    let mut out = BTreeSet::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(a, c) && !facial.contains(&[a, b, c]) {
                    out.insert([a, b, c]);
                }
            }
        }
    }
    out
}

/// Whether deleting the three vertices disconnects the rest.
pub fn splits(g: &AdjacencyGraph, cut: [usize; 3]) -> bool {
    let n = g.vertex_count();
    let Some(start) = (0..n).find(|v| !cut.contains(v)) else {
        return false;
    };
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::from([start]);
    seen[start] = true;
    let mut reached = 1;
    while let Some(v) = queue.pop_front() {
        for w in 0..n {
            if !seen[w] && !cut.contains(&w) && g.has_edge(v, w) {
                seen[w] = true;
                reached += 1;
                queue.push_back(w);
            }
        }
    }
    reached < n - 3
}
