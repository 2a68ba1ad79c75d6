//! Combinatorial planar embeddings.
//!
//! Rotations list neighbours counter-clockwise. Faces are traced so that
//! after the dart `u -> v` comes `v -> w`, where `w` precedes `u` in the
//! rotation at `v`. Under that rule bounded faces come out counter-clockwise
//! and the outer face clockwise.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use crate::graph::{blocks, AdjacencyGraph, Edge};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EmbedError {
    #[error("graph is not planar (block containing vertices {block:?})")]
    NotPlanar { block: Vec<usize> },
    #[error("graph has no vertices")]
    Empty,
    #[error("rotation system is inconsistent: {0}")]
    BadRotation(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarEmbedding {
    graph: AdjacencyGraph,
    rotation: Vec<Vec<usize>>,
    faces: Vec<Vec<usize>>,
    outer: usize,
    /// Outer face of every connected component, `outer` first.
    component_outer: Vec<usize>,
}

impl PlanarEmbedding {
    /// Builds an embedding from a rotation system. The outer face is the
    /// face containing the dart `outer_dart` if given, otherwise chosen by
    /// [`default_outer`].
    pub fn from_rotation(
        graph: AdjacencyGraph,
        rotation: Vec<Vec<usize>>,
        outer_dart: Option<(usize, usize)>,
    ) -> Result<Self, EmbedError> {
        let n = graph.vertex_count();
        if n == 0 {
            return Err(EmbedError::Empty);
        }
        if rotation.len() != n {
            return Err(EmbedError::BadRotation("wrong vertex count".into()));
        }
        for v in 0..n {
            let listed: BTreeSet<usize> = rotation[v].iter().copied().collect();
            let actual: BTreeSet<usize> = graph.neighbors(v).collect();
            if listed != actual || listed.len() != rotation[v].len() {
                return Err(EmbedError::BadRotation(format!(
                    "rotation at {v} does not match its neighbours"
                )));
            }
        }
        let faces = trace_faces(&rotation);
        let comp = component_ids(&graph);
        let mut emb = PlanarEmbedding {
            graph,
            rotation,
            faces,
            outer: 0,
            component_outer: Vec::new(),
        };
        let dart_face = emb.dart_faces();
        let pinned = outer_dart.and_then(|d| dart_face.get(&d).copied());
        let comp_count = comp.iter().copied().max().map_or(0, |c| c + 1);
        let mut per_comp = Vec::with_capacity(comp_count);
        for c in 0..comp_count {
            let candidates: Vec<usize> = (0..emb.faces.len())
                .filter(|&f| comp[emb.faces[f][0]] == c)
                .collect();
            let pick = match pinned {
                Some(f) if comp[emb.faces[f][0]] == c => f,
                _ => default_outer(&emb.faces, &candidates),
            };
            per_comp.push(pick);
        }
        if let Some(f) = pinned {
            let pos = per_comp.iter().position(|&x| x == f).unwrap();
            per_comp.swap(0, pos);
        }
        emb.outer = per_comp[0];
        emb.component_outer = per_comp;
        Ok(emb)
    }

    pub fn graph(&self) -> &AdjacencyGraph {
        &self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn rotations(&self) -> &[Vec<usize>] {
        &self.rotation
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn outer_index(&self) -> usize {
        self.outer
    }

    /// Outer face in clockwise order, starting at its smallest vertex.
    pub fn outer_face(&self) -> &[usize] {
        &self.faces[self.outer]
    }

    pub(crate) fn component_outer(&self) -> &[usize] {
        &self.component_outer
    }

    /// Neighbour following `w` counter-clockwise around `v`.
    pub fn next_ccw(&self, v: usize, w: usize) -> usize {
        let r = &self.rotation[v];
        let i = r.iter().position(|&x| x == w).expect("not a neighbour");
        r[(i + 1) % r.len()]
    }

    /// Neighbour following `w` clockwise around `v`.
    pub fn next_cw(&self, v: usize, w: usize) -> usize {
        let r = &self.rotation[v];
        let i = r.iter().position(|&x| x == w).expect("not a neighbour");
        r[(i + r.len() - 1) % r.len()]
    }

    /// Map from dart `(u, v)` to the index of the face it borders.
    pub fn dart_faces(&self) -> HashMap<(usize, usize), usize> {
        let mut out = HashMap::new();
        for (fi, f) in self.faces.iter().enumerate() {
            if f.len() < 2 {
                continue;
            }
            for i in 0..f.len() {
                out.insert((f[i], f[(i + 1) % f.len()]), fi);
            }
        }
        out
    }

    /// `n - m + f` for this embedding; equals 2 on connected graphs.
    pub fn euler_characteristic(&self) -> i64 {
        self.graph.vertex_count() as i64 - self.graph.edge_count() as i64
            + self.faces.len() as i64
    }

    /// Same embedding reflected: all rotations reversed.
    pub fn mirrored(&self) -> PlanarEmbedding {
        let rotation = self
            .rotation
            .iter()
            .map(|r| r.iter().rev().copied().collect())
            .collect();
        let outer = self.outer_face();
        let dart = if outer.len() >= 2 {
            Some((outer[1], outer[0]))
        } else {
            None
        };
        PlanarEmbedding::from_rotation(self.graph.clone(), rotation, dart)
            .expect("mirror of a valid embedding")
    }

    /// Whether `outer_face` vertex `v` lies on the outer boundary.
    pub fn on_outer(&self, v: usize) -> bool {
        self.outer_face().contains(&v)
    }
}

/// Default outer face among `candidates`: the unique non-triangular face if
/// there is exactly one, otherwise the longest, ties broken by the smallest
/// vertex sequence.
pub fn default_outer(faces: &[Vec<usize>], candidates: &[usize]) -> usize {
    let non_tri: Vec<usize> = candidates
        .iter()
        .copied()
        .filter(|&f| faces[f].len() != 3)
        .collect();
    if non_tri.len() == 1 {
        return non_tri[0];
    }
    let key = |f: usize| {
        let mut s = faces[f].clone();
        s.sort();
        (std::cmp::Reverse(faces[f].len()), s)
    };
    *candidates
        .iter()
        .min_by_key(|&&f| key(f))
        .expect("at least one face")
}

fn component_ids(g: &AdjacencyGraph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut comp = vec![usize::MAX; n];
    let mut next = 0;
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = next;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for w in g.neighbors(v) {
                if comp[w] == usize::MAX {
                    comp[w] = next;
                    stack.push(w);
                }
            }
        }
        next += 1;
    }
    comp
}

/// Traces all faces of a rotation system. Each face starts at its smallest
/// vertex; faces are sorted. Isolated vertices get a one-vertex face.
pub fn trace_faces(rotation: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let pos: Vec<HashMap<usize, usize>> = rotation
        .iter()
        .map(|r| r.iter().enumerate().map(|(i, &w)| (w, i)).collect())
        .collect();
    let mut seen: Vec<Vec<bool>> = rotation.iter().map(|r| vec![false; r.len()]).collect();
    let mut faces = Vec::new();
    for u in 0..rotation.len() {
        if rotation[u].is_empty() {
            faces.push(vec![u]);
            continue;
        }
        for i in 0..rotation[u].len() {
            if seen[u][i] {
                continue;
            }
            let mut face = Vec::new();
            let (mut a, mut ai) = (u, i);
            while !seen[a][ai] {
                seen[a][ai] = true;
                face.push(a);
                let b = rotation[a][ai];
                let back = pos[b][&a];
                let len = rotation[b].len();
                let next = (back + len - 1) % len;
                a = b;
                ai = next;
            }
            faces.push(canonical_cycle(face));
        }
    }
    faces.sort();
    faces
}

/// Rotates a cycle so it starts at its smallest element, keeping direction.
pub fn canonical_cycle(mut c: Vec<usize>) -> Vec<usize> {
    if let Some(i) = c.iter().enumerate().min_by_key(|p| p.1).map(|p| p.0) {
        c.rotate_left(i);
    }
    c
}

/// Embeds `g`. Graphs admitting an embedding in which every bounded face is
/// a triangle get that embedding; other planar graphs get whatever the
/// path-addition procedure produces.
pub fn planar_embed(g: &AdjacencyGraph) -> Result<PlanarEmbedding, EmbedError> {
    if g.vertex_count() == 0 {
        return Err(EmbedError::Empty);
    }
    let (cuts, blks) = blocks(g);
    let cut_set: BTreeSet<usize> = cuts.into_iter().collect();

    let mut generic = Vec::with_capacity(blks.len());
    for b in &blks {
        generic.push(dmp_block(g, b)?);
    }

    let mut disks = Vec::with_capacity(blks.len());
    for b in &blks {
        match disk_block(g, b, &cut_set) {
            Some(r) => disks.push(r),
            None => break,
        }
    }
    let use_disks = disks.len() == blks.len();
    let parts = if use_disks { disks } else { generic };

    let mut rotation: Vec<Vec<usize>> = vec![Vec::new(); g.vertex_count()];
    let mut outer_dart = None;
    for part in &parts {
        for (v, r) in part.rotation.iter() {
            rotation[*v].extend(r.iter().copied());
        }
        if outer_dart.is_none() {
            outer_dart = part.outer_dart;
        }
    }
    let emb = PlanarEmbedding::from_rotation(g.clone(), rotation, None)?;
    if !use_disks {
        return Ok(emb);
    }
    // pin the outer face to the one the disk builder designated
    let comp = component_ids(g);
    let dart_face = emb.dart_faces();
    let mut per_comp: BTreeMap<usize, usize> = BTreeMap::new();
    for part in &parts {
        if let Some(d) = part.outer_dart {
            let f = dart_face[&d];
            per_comp.entry(comp[d.0]).or_insert(f);
        }
    }
    let mut emb = emb;
    for (c, slot) in emb.component_outer.iter_mut().enumerate() {
        if let Some(&f) = per_comp.get(&c) {
            *slot = f;
        }
    }
    emb.outer = emb.component_outer[0];
    Ok(emb)
}

/// Rotation contribution of one block plus a dart on its outer face.
struct BlockEmbedding {
    rotation: BTreeMap<usize, Vec<usize>>,
    outer_dart: Option<(usize, usize)>,
}

fn block_edges(g: &AdjacencyGraph, block: &[usize]) -> Vec<Edge> {
    let set: BTreeSet<usize> = block.iter().copied().collect();
    let mut out = Vec::new();
    for &a in block {
        for b in g.neighbors(a) {
            if a < b && set.contains(&b) {
                out.push(Edge(a, b));
            }
        }
    }
    out
}

fn rotation_from_faces(faces: &[Vec<usize>]) -> BTreeMap<usize, Vec<usize>> {
    // face triple (u, v, w) means w is followed by u counter-clockwise at v
    let mut succ: BTreeMap<usize, HashMap<usize, usize>> = BTreeMap::new();
    for f in faces {
        let l = f.len();
        for i in 0..l {
            let (u, v, w) = (f[i], f[(i + 1) % l], f[(i + 2) % l]);
            succ.entry(v).or_default().insert(w, u);
        }
    }
    let mut out = BTreeMap::new();
    for (v, s) in succ {
        let start = *s.keys().min().unwrap();
        let mut r = vec![start];
        let mut cur = s[&start];
        while cur != start {
            r.push(cur);
            cur = s[&cur];
        }
        out.insert(v, r);
    }
    out
}

fn trivial_block(block: &[usize]) -> BlockEmbedding {
    let mut rotation = BTreeMap::new();
    if block.len() == 2 {
        rotation.insert(block[0], vec![block[1]]);
        rotation.insert(block[1], vec![block[0]]);
        BlockEmbedding {
            rotation,
            outer_dart: Some((block[0], block[1])),
        }
    } else {
        rotation.insert(block[0], vec![]);
        BlockEmbedding {
            rotation,
            outer_dart: None,
        }
    }
}

/// Demoucron-Malgrange-Pertuiset path addition on one biconnected block.
fn dmp_block(g: &AdjacencyGraph, block: &[usize]) -> Result<BlockEmbedding, EmbedError> {
    if block.len() < 3 {
        return Ok(trivial_block(block));
    }
    let in_block: BTreeSet<usize> = block.iter().copied().collect();
    let edges = block_edges(g, block);
    let nbrs = |v: usize| g.neighbors(v).filter(|w| in_block.contains(w));

    // initial cycle: edge (u, v) closed by a shortest path avoiding it
    let u = block[0];
    let v = nbrs(u).next().unwrap();
    let mut prev: HashMap<usize, usize> = HashMap::new();
    let mut queue = VecDeque::from([u]);
    prev.insert(u, u);
    while let Some(x) = queue.pop_front() {
        for y in nbrs(x) {
            if (x == u && y == v) || prev.contains_key(&y) {
                continue;
            }
            prev.insert(y, x);
            queue.push_back(y);
        }
    }
    let mut cycle = vec![v];
    let mut cur = v;
    while cur != u {
        cur = prev[&cur];
        cycle.push(cur);
    }
    let mut in_h: BTreeSet<usize> = cycle.iter().copied().collect();
    let mut h_edges: BTreeSet<Edge> = BTreeSet::new();
    for i in 0..cycle.len() {
        h_edges.insert(Edge::new(cycle[i], cycle[(i + 1) % cycle.len()]));
    }
    let mut rev = cycle.clone();
    rev.reverse();
    let mut faces = vec![cycle, rev];

    loop {
        // fragments: (attachments, inner vertices)
        let mut frags: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        for e in &edges {
            if !h_edges.contains(e) && in_h.contains(&e.0) && in_h.contains(&e.1) {
                frags.push((vec![e.0, e.1], vec![]));
            }
        }
        let mut seen: BTreeSet<usize> = BTreeSet::new();
        for &s in block {
            if in_h.contains(&s) || seen.contains(&s) {
                continue;
            }
            let mut comp = vec![s];
            let mut att = BTreeSet::new();
            seen.insert(s);
            let mut i = 0;
            while i < comp.len() {
                let x = comp[i];
                i += 1;
                for y in nbrs(x) {
                    if in_h.contains(&y) {
                        att.insert(y);
                    } else if seen.insert(y) {
                        comp.push(y);
                    }
                }
            }
            frags.push((att.into_iter().collect(), comp));
        }
        if frags.is_empty() {
            break;
        }
        let mut chosen = None;
        for (fi, (att, _)) in frags.iter().enumerate() {
            let admissible: Vec<usize> = (0..faces.len())
                .filter(|&f| att.iter().all(|a| faces[f].contains(a)))
                .collect();
            if admissible.is_empty() {
                return Err(EmbedError::NotPlanar {
                    block: block.to_vec(),
                });
            }
            if admissible.len() == 1 {
                chosen = Some((fi, admissible[0]));
                break;
            }
            if chosen.is_none() {
                chosen = Some((fi, admissible[0]));
            }
        }
        let (fi, face_idx) = chosen.unwrap();
        let (att, inner) = &frags[fi];
        let a = att[0];
        let b = att[1];
        let path = if inner.is_empty() {
            vec![a, b]
        } else {
            let inner_set: BTreeSet<usize> = inner.iter().copied().collect();
            let mut prev: HashMap<usize, usize> = HashMap::new();
            let mut queue = VecDeque::new();
            for y in nbrs(a) {
                if inner_set.contains(&y) && !prev.contains_key(&y) {
                    prev.insert(y, a);
                    queue.push_back(y);
                }
            }
            let mut end = None;
            while let Some(x) = queue.pop_front() {
                if g.has_edge(x, b) {
                    end = Some(x);
                    break;
                }
                for y in nbrs(x) {
                    if inner_set.contains(&y) && !prev.contains_key(&y) {
                        prev.insert(y, x);
                        queue.push_back(y);
                    }
                }
            }
            let mut p = vec![b];
            let mut cur = end.expect("fragment connects its attachments");
            while cur != a {
                p.push(cur);
                cur = prev[&cur];
            }
            p.push(a);
            p.reverse();
            p
        };
        let face = faces.swap_remove(face_idx);
        let ia = face.iter().position(|&x| x == a).unwrap();
        let mut f = face;
        f.rotate_left(ia);
        let ib = f.iter().position(|&x| x == b).unwrap();
        let inner_path = &path[1..path.len() - 1];
        let mut f1: Vec<usize> = f[..=ib].to_vec();
        f1.extend(inner_path.iter().rev());
        let mut f2: Vec<usize> = f[ib..].to_vec();
        f2.push(a);
        f2.extend(inner_path.iter());
        faces.push(f1);
        faces.push(f2);
        for w in path.windows(2) {
            h_edges.insert(Edge::new(w[0], w[1]));
            in_h.insert(w[0]);
            in_h.insert(w[1]);
        }
    }
    Ok(BlockEmbedding {
        rotation: rotation_from_faces(&faces),
        outer_dart: None,
    })
}

/// Embeds a block as a triangulated disk if possible: every bounded face a
/// triangle and every cut vertex of the whole graph on the boundary.
fn disk_block(
    g: &AdjacencyGraph,
    block: &[usize],
    cuts: &BTreeSet<usize>,
) -> Option<BlockEmbedding> {
    if block.len() < 3 {
        return Some(trivial_block(block));
    }
    let edges = block_edges(g, block);
    let nb = block.len() as i64;
    let mb = edges.len() as i64;
    let k = 3 * nb - 3 - mb;
    if k < 3 {
        return None;
    }
    let in_block: BTreeSet<usize> = block.iter().copied().collect();
    let tris: Vec<[usize; 3]> = g
        .triangles()
        .into_iter()
        .filter(|t| t.iter().all(|v| in_block.contains(v)))
        .collect();
    let block_cuts: Vec<usize> = block.iter().copied().filter(|v| cuts.contains(v)).collect();
    let target = (mb - nb + 1) as usize;

    if nb == 3 {
        return orient_disk(g, block, &tris, &block_cuts);
    }
    if k == 3 {
        // maximal planar: faces are the triangles whose removal keeps the
        // block connected; one of them is left out as the outer face
        let sub = g.induced(block);
        let local: HashMap<usize, usize> = block.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let facial: Vec<[usize; 3]> = tris
            .iter()
            .copied()
            .filter(|t| sub.components_without(&t.map(|v| local[&v])) <= 1)
            .collect();
        if facial.len() != target + 1 {
            return None;
        }
        for skip in 0..facial.len() {
            if !block_cuts.iter().all(|c| facial[skip].contains(c)) {
                continue;
            }
            let interior: Vec<[usize; 3]> = facial
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, t)| *t)
                .collect();
            if let Some(r) = orient_disk(g, block, &interior, &block_cuts) {
                return Some(r);
            }
        }
        return None;
    }
    search_disk(g, block, &edges, &tris, target, &block_cuts)
}

/// Backtracking choice of which triangles are bounded faces.
fn search_disk(
    g: &AdjacencyGraph,
    block: &[usize],
    edges: &[Edge],
    tris: &[[usize; 3]],
    target: usize,
    block_cuts: &[usize],
) -> Option<BlockEmbedding> {
    let edge_idx: HashMap<Edge, usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let tri_edges: Vec<[usize; 3]> = tris
        .iter()
        .map(|t| {
            [
                edge_idx[&Edge::new(t[0], t[1])],
                edge_idx[&Edge::new(t[1], t[2])],
                edge_idx[&Edge::new(t[0], t[2])],
            ]
        })
        .collect();
    let mut edge_tris: Vec<Vec<usize>> = vec![Vec::new(); edges.len()];
    for (ti, es) in tri_edges.iter().enumerate() {
        for &e in es {
            edge_tris[e].push(ti);
        }
    }
    if edge_tris.iter().any(|t| t.is_empty()) {
        return None;
    }
    let ctx = SearchCtx {
        g,
        block,
        tris,
        tri_edges: &tri_edges,
        edge_tris: &edge_tris,
        target,
        block_cuts,
    };
    let state = vec![UNKNOWN; tris.len()];
    ctx.run(state)
}

const UNKNOWN: i8 = -1;

struct SearchCtx<'a> {
    g: &'a AdjacencyGraph,
    block: &'a [usize],
    tris: &'a [[usize; 3]],
    tri_edges: &'a [[usize; 3]],
    edge_tris: &'a [Vec<usize>],
    target: usize,
    block_cuts: &'a [usize],
}

impl SearchCtx<'_> {
    fn propagate(&self, state: &mut [i8]) -> bool {
        loop {
            let mut changed = false;
            for ts in self.edge_tris {
                let chosen = ts.iter().filter(|&&t| state[t] == 1).count();
                let open: Vec<usize> = ts.iter().copied().filter(|&t| state[t] == UNKNOWN).collect();
                if chosen > 2 || chosen + open.len() == 0 {
                    return false;
                }
                if chosen == 2 && !open.is_empty() {
                    for t in open {
                        state[t] = 0;
                    }
                    changed = true;
                } else if chosen == 0 && open.len() == 1 {
                    state[open[0]] = 1;
                    changed = true;
                }
            }
            let chosen = state.iter().filter(|&&s| s == 1).count();
            let open = state.iter().filter(|&&s| s == UNKNOWN).count();
            if chosen > self.target || chosen + open < self.target {
                return false;
            }
            if chosen == self.target && open > 0 {
                for s in state.iter_mut() {
                    if *s == UNKNOWN {
                        *s = 0;
                    }
                }
                changed = true;
            } else if chosen + open == self.target && open > 0 {
                for s in state.iter_mut() {
                    if *s == UNKNOWN {
                        *s = 1;
                    }
                }
                changed = true;
            }
            if !changed {
                return true;
            }
        }
    }

    fn run(&self, mut state: Vec<i8>) -> Option<BlockEmbedding> {
        if !self.propagate(&mut state) {
            return None;
        }
        // branch on an open triangle sharing the most constrained edge
        let pick = self
            .tri_edges
            .iter()
            .enumerate()
            .filter(|(t, _)| state[*t] == UNKNOWN)
            .min_by_key(|(_, es)| {
                es.iter()
                    .map(|&e| {
                        self.edge_tris[e]
                            .iter()
                            .filter(|&&t| state[t] == UNKNOWN)
                            .count()
                    })
                    .min()
                    .unwrap()
            })
            .map(|(t, _)| t);
        match pick {
            None => {
                let chosen: Vec<[usize; 3]> = (0..self.tris.len())
                    .filter(|&t| state[t] == 1)
                    .map(|t| self.tris[t])
                    .collect();
                orient_disk(self.g, self.block, &chosen, self.block_cuts)
            }
            Some(t) => {
                let mut with = state.clone();
                with[t] = 1;
                if let Some(r) = self.run(with) {
                    return Some(r);
                }
                state[t] = 0;
                self.run(state)
            }
        }
    }
}

/// Checks that `faces` (unoriented triangles) form a disk covering the
/// block, orients them consistently and returns the rotation system.
fn orient_disk(
    g: &AdjacencyGraph,
    block: &[usize],
    faces: &[[usize; 3]],
    block_cuts: &[usize],
) -> Option<BlockEmbedding> {
    if faces.is_empty() {
        return None;
    }
    let mut edge_faces: BTreeMap<Edge, Vec<usize>> = BTreeMap::new();
    for (i, t) in faces.iter().enumerate() {
        for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])] {
            edge_faces.entry(Edge::new(a, b)).or_default().push(i);
        }
    }
    if edge_faces.values().any(|f| f.len() > 2) {
        return None;
    }
    if edge_faces.len() != block_edges(g, block).len() {
        return None;
    }
    // vertex links must be a single path or cycle
    let mut boundary_vertex: BTreeSet<usize> = BTreeSet::new();
    for &v in block {
        let mut link: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for t in faces.iter().filter(|t| t.contains(&v)) {
            let o: Vec<usize> = t.iter().copied().filter(|&x| x != v).collect();
            link.entry(o[0]).or_default().push(o[1]);
            link.entry(o[1]).or_default().push(o[0]);
        }
        if link.is_empty() || link.values().any(|l| l.len() > 2) {
            return None;
        }
        let ends = link.values().filter(|l| l.len() == 1).count();
        if ends != 0 && ends != 2 {
            return None;
        }
        let start = *link.keys().next().unwrap();
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for &y in &link[&x] {
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        if seen.len() != link.len() {
            return None;
        }
        if ends == 2 {
            boundary_vertex.insert(v);
        }
    }
    if block_cuts.iter().any(|c| !boundary_vertex.contains(c)) {
        return None;
    }
    // orientation by BFS; the first face keeps sorted order
    let mut oriented: Vec<Option<[usize; 3]>> = vec![None; faces.len()];
    oriented[0] = Some(faces[0]);
    let mut queue = VecDeque::from([0usize]);
    let mut reached = 1;
    while let Some(i) = queue.pop_front() {
        let t = oriented[i].unwrap();
        for k in 0..3 {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            for &j in &edge_faces[&Edge::new(a, b)] {
                if j == i {
                    continue;
                }
                let s = faces[j];
                let c = *s.iter().find(|&&x| x != a && x != b).unwrap();
                let want = [b, a, c];
                match oriented[j] {
                    None => {
                        oriented[j] = Some(want);
                        reached += 1;
                        queue.push_back(j);
                    }
                    Some(o) => {
                        if !same_cycle(&o, &want) {
                            return None;
                        }
                    }
                }
            }
        }
    }
    if reached != faces.len() {
        return None;
    }
    // boundary edges must form one cycle through the boundary vertices
    let boundary: Vec<Edge> = edge_faces
        .iter()
        .filter(|(_, f)| f.len() == 1)
        .map(|(e, _)| *e)
        .collect();
    let bset: BTreeSet<usize> = boundary.iter().flat_map(|e| [e.0, e.1]).collect();
    if bset != boundary_vertex || boundary.len() != bset.len() {
        return None;
    }

    let mut succ: BTreeMap<usize, BTreeMap<usize, usize>> = BTreeMap::new();
    for t in oriented.iter().map(|o| o.unwrap()) {
        for k in 0..3 {
            let (u, v, w) = (t[k], t[(k + 1) % 3], t[(k + 2) % 3]);
            succ.entry(v).or_default().insert(w, u);
        }
    }
    let mut rotation = BTreeMap::new();
    let mut outer_dart = None;
    for &v in block {
        let s = &succ[&v];
        let preds: BTreeSet<usize> = s.values().copied().collect();
        let start = if boundary_vertex.contains(&v) {
            *s.keys().find(|k| !preds.contains(k)).unwrap()
        } else {
            *s.keys().next().unwrap()
        };
        let mut r = vec![start];
        let mut cur = start;
        while let Some(&nx) = s.get(&cur) {
            if nx == start {
                break;
            }
            r.push(nx);
            cur = nx;
        }
        if boundary_vertex.contains(&v) && outer_dart.is_none() {
            // the wedge from the last to the first neighbour is outside:
            // the dart first -> v lies on the outer face
            outer_dart = Some((r[0], v));
        }
        rotation.insert(v, r);
    }
    Some(BlockEmbedding {
        rotation,
        outer_dart,
    })
}

fn same_cycle(a: &[usize; 3], b: &[usize; 3]) -> bool {
    (0..3).any(|r| (0..3).all(|i| a[(i + r) % 3] == b[i]))
}
