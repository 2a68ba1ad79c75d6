//! Rectangular duals: corner choice, the four poles, edge labellings and
//! rectangle realization.

mod realize;
mod rel;

pub use realize::{realize_rectangles, rel_to_stgraphs, room_floorplan};
pub use rel::{compute_rel, enumerate_rels, validate_rel, Family, RegularEdgeLabelling};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedding::PlanarEmbedding;
use crate::graph::AdjacencyGraph;
use crate::structure::{complex_triangles, separating_triangles, shortcuts_and_cips};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RectDualError {
    #[error("{0} corner implying paths, at most 4 allowed")]
    TooManyCips(usize),
    #[error("graph has no rectangular dual: {0}")]
    NoDual(String),
    #[error("no corner assignment matches the requested choice")]
    NoSuchChoice,
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
}

/// Corners `u0..u3` clockwise and the boundary paths between them; path
/// `i` runs from `u_i` to `u_{i+1}` and touches pole `i` (N, E, S, W).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CornerAssignment {
    pub corners: [usize; 4],
    pub paths: [Vec<usize>; 4],
}

impl CornerAssignment {
    fn from_segments(segs: [Vec<usize>; 4], rotation: usize) -> Self {
        let paths: [Vec<usize>; 4] = std::array::from_fn(|j| segs[(j + rotation) % 4].clone());
        let corners = std::array::from_fn(|j| paths[j][0]);
        CornerAssignment { corners, paths }
    }
}

/// Segments of the clockwise outer cycle `outer` cut at positions `idx`.
fn segments(outer: &[usize], idx: [usize; 4]) -> [Vec<usize>; 4] {
    let k = outer.len();
    std::array::from_fn(|j| {
        let (from, to) = (idx[j], idx[(j + 1) % 4]);
        let mut p = vec![outer[from]];
        let mut i = from;
        while i != to {
            i = (i + 1) % k;
            p.push(outer[i]);
        }
        p
    })
}

/// Every corner set and rotation whose 4-completion has no separating
/// triangle, in a fixed order.
pub fn enumerate_corner_assignments(
    e: &PlanarEmbedding,
) -> Result<Vec<CornerAssignment>, RectDualError> {
    let n = e.vertex_count();
    let outer = e.outer_face().to_vec();
    match n {
        1 => {
            let v = vec![0];
            return Ok(vec![CornerAssignment::from_segments(
                [v.clone(), v.clone(), v.clone(), v],
                0,
            )]);
        }
        2 => {
            let segs = [vec![0, 1], vec![1], vec![1, 0], vec![0]];
            return Ok((0..4)
                .map(|r| CornerAssignment::from_segments(segs.clone(), r))
                .collect());
        }
        3 if outer.len() == 3 => {
            let mut out = Vec::new();
            for i in 0..3 {
                let (x, y, z) = (outer[i], outer[(i + 1) % 3], outer[(i + 2) % 3]);
                let segs = [vec![x, y], vec![y, z], vec![z, x], vec![x]];
                for r in 0..4 {
                    out.push(CornerAssignment::from_segments(segs.clone(), r));
                }
            }
            return Ok(out);
        }
        _ => {}
    }
    let tri = complex_triangles(e);
    if !tri.is_empty() {
        return Err(RectDualError::NoDual(format!("separating triangles {tri:?}")));
    }
    let (shortcuts, cips) = shortcuts_and_cips(e);
    if cips.len() > 4 {
        return Err(RectDualError::TooManyCips(cips.len()));
    }
    let k = outer.len();
    let pos: Vec<usize> = {
        let mut p = vec![usize::MAX; n];
        for (i, &v) in outer.iter().enumerate() {
            p[v] = i;
        }
        p
    };
    // both arcs of every shortcut must hold a corner strictly inside
    let arcs: Vec<(usize, usize)> = shortcuts
        .iter()
        .flat_map(|&(a, b)| [(pos[a], pos[b]), (pos[b], pos[a])])
        .collect();
    let strictly_inside = |from: usize, to: usize, i: usize| {
        let d = (i + k - from) % k;
        d > 0 && d < (to + k - from) % k
    };
    let mut out = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            for c in b + 1..k {
                for d in c + 1..k {
                    let idx = [a, b, c, d];
                    let ok = arcs
                        .iter()
                        .all(|&(f, t)| idx.iter().any(|&i| strictly_inside(f, t, i)));
                    if !ok {
                        continue;
                    }
                    let segs = segments(&outer, idx);
                    for r in 0..4 {
                        out.push(CornerAssignment::from_segments(segs.clone(), r));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Picks one corner assignment: exactly one corner strictly inside each
/// corner implying path, the rest off every such path, rotated so the
/// smallest corner comes first. `choice` indexes the admissible list.
pub fn select_corners(
    e: &PlanarEmbedding,
    choice: Option<usize>,
) -> Result<CornerAssignment, RectDualError> {
    let all = enumerate_corner_assignments(e)?;
    let (_, cips) = shortcuts_and_cips(e);
    let interiors: Vec<&[usize]> = cips.iter().map(|c| &c[1..c.len() - 1]).collect();
    let mut good: Vec<CornerAssignment> = all
        .into_iter()
        .filter(|ca| {
            let distinct: std::collections::BTreeSet<usize> = ca.corners.iter().copied().collect();
            let per_cip = interiors
                .iter()
                .all(|inner| distinct.iter().filter(|c| inner.contains(c)).count() == 1);
            let loose = distinct
                .iter()
                .filter(|c| !interiors.iter().any(|inner| inner.contains(c)))
                .count();
            per_cip && loose + interiors.len() >= distinct.len()
        })
        .filter(|ca| {
            let min = *ca.corners.iter().min().unwrap();
            ca.corners[0] == min
        })
        .collect();
    good.sort_by(|a, b| {
        let mut ka = a.corners.to_vec();
        let mut kb = b.corners.to_vec();
        ka.sort();
        kb.sort();
        ka.cmp(&kb).then_with(|| a.cmp(b))
    });
    good.into_iter()
        .nth(choice.unwrap_or(0))
        .ok_or(RectDualError::NoSuchChoice)
}

/// A graph with the four poles added around it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentedGraph {
    pub emb: PlanarEmbedding,
    pub rooms: usize,
    pub corners: CornerAssignment,
}

impl AugmentedGraph {
    /// Pole vertex ids N, E, S, W.
    pub fn poles(&self) -> [usize; 4] {
        let n = self.rooms;
        [n, n + 1, n + 2, n + 3]
    }

    pub fn is_pole(&self, v: usize) -> bool {
        v >= self.rooms
    }
}

/// Adds poles N, E, S, W joined to the boundary paths, and the four edges
/// between consecutive poles.
pub fn four_complete(
    e: &PlanarEmbedding,
    c: &CornerAssignment,
) -> Result<AugmentedGraph, RectDualError> {
    let base = e.graph();
    let n = base.vertex_count();
    let poles = [n, n + 1, n + 2, n + 3];
    let mut labels: Vec<Option<String>> = (0..n).map(|v| base.label(v).map(String::from)).collect();
    labels.extend(["N", "E", "S", "W"].iter().map(|s| Some(s.to_string())));
    let mut edges: Vec<(usize, usize)> = base.edges().iter().map(|e| (e.0, e.1)).collect();
    for (j, p) in c.paths.iter().enumerate() {
        for &v in p {
            edges.push((v, poles[j]));
        }
    }
    for j in 0..4 {
        edges.push((poles[j], poles[(j + 1) % 4]));
    }
    let g = AdjacencyGraph::with_labels(n + 4, &edges, labels)
        .map_err(|err| RectDualError::InternalInvariantViolation(err.to_string()))?;

    let mut rotation: Vec<Vec<usize>> = e.rotations().to_vec();
    rotation.resize(n + 4, Vec::new());
    let outer = e.outer_face();
    let k = outer.len();
    for v in 0..n {
        let member: Vec<usize> = (0..4).filter(|&j| c.paths[j].contains(&v)).collect();
        if member.is_empty() {
            continue;
        }
        // paths through v in walk order: start after a gap in the cycle
        let order: Vec<usize> = if member.len() == 4 {
            vec![3, 2, 1, 0]
        } else {
            let s = *member
                .iter()
                .find(|&&j| !member.contains(&((j + 3) % 4)))
                .unwrap();
            let mut o: Vec<usize> = (0..member.len()).map(|i| (s + i) % 4).collect();
            o.reverse();
            o
        };
        let inserted: Vec<usize> = order.iter().map(|&j| poles[j]).collect();
        if rotation[v].is_empty() {
            rotation[v] = inserted;
            continue;
        }
        let i = outer.iter().position(|&x| x == v).ok_or_else(|| {
            RectDualError::InternalInvariantViolation(format!("path vertex {v} is not on the outer face"))
        })?;
        let pred = outer[(i + k - 1) % k];
        let at = rotation[v].iter().position(|&x| x == pred).unwrap();
        let at = if at == 0 { rotation[v].len() } else { at };
        rotation[v].splice(at..at, inserted);
    }
    let [pn, pe, ps, pw] = poles;
    rotation[pn] = [pe, pw].into_iter().chain(c.paths[0].iter().copied()).collect();
    rotation[pe] = std::iter::once(pn)
        .chain(c.paths[1].iter().copied())
        .chain([ps])
        .collect();
    rotation[ps] = std::iter::once(pe)
        .chain(c.paths[2].iter().copied())
        .chain([pw])
        .collect();
    rotation[pw] = std::iter::once(ps)
        .chain(c.paths[3].iter().copied())
        .chain([pn])
        .collect();
    let emb = PlanarEmbedding::from_rotation(g, rotation, Some((pn, pe)))
        .map_err(|err| RectDualError::InternalInvariantViolation(err.to_string()))?;
    if emb.euler_characteristic() != 2 || emb.outer_face() != [pn, pe, ps, pw] {
        return Err(RectDualError::InternalInvariantViolation(
            "augmented embedding is not a disk bounded by the poles".into(),
        ));
    }
    if emb.faces().iter().enumerate().any(|(i, f)| i != emb.outer_index() && f.len() != 3) {
        return Err(RectDualError::InternalInvariantViolation(
            "augmented graph has a non-triangular face".into(),
        ));
    }
    let st = separating_triangles(&emb);
    if !st.is_empty() {
        return Err(RectDualError::InternalInvariantViolation(format!(
            "4-completion created separating triangles {st:?}"
        )));
    }
    Ok(AugmentedGraph {
        emb,
        rooms: n,
        corners: c.clone(),
    })
}
