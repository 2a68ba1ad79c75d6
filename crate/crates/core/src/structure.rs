//! Structural predicates and the rectangular-dual existence check.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::embedding::{planar_embed, EmbedError, PlanarEmbedding};
use crate::graph::{blocks, AdjacencyGraph, Edge};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Reason {
    Degenerate,
    NotPlanar,
    NotTriangulated,
    NotBiconnected,
    SeparatingTriangle,
    TooManyCips,
    TriangularOuterFace,
    Ok,
}

impl Reason {
    pub fn describe(self) -> &'static str {
        match self {
            Reason::Degenerate => "fewer than three rooms",
            Reason::NotPlanar => "graph is not planar",
            Reason::NotTriangulated => "not triangulated",
            Reason::NotBiconnected => "not biconnected",
            Reason::SeparatingTriangle => "separating triangle exists",
            Reason::TooManyCips => "more than four corner implying paths",
            Reason::TriangularOuterFace => "outer face is a triangle",
            Reason::Ok => "rectangular floorplan exists",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub planar: bool,
    pub triangulated: bool,
    pub biconnected: bool,
    pub cut_vertices: Vec<usize>,
    pub separating_triangles: Vec<[usize; 3]>,
    pub shortcuts: Vec<(usize, usize)>,
    pub cips: Vec<Vec<usize>>,
    pub outer_face: Vec<usize>,
    pub outer_face_length: usize,
    pub non_triangular_faces: Vec<Vec<usize>>,
    pub rfp_exists: bool,
    pub reason: Reason,
}

impl StructureReport {
    fn empty(reason: Reason) -> Self {
        StructureReport {
            planar: false,
            triangulated: false,
            biconnected: false,
            cut_vertices: Vec::new(),
            separating_triangles: Vec::new(),
            shortcuts: Vec::new(),
            cips: Vec::new(),
            outer_face: Vec::new(),
            outer_face_length: 0,
            non_triangular_faces: Vec::new(),
            rfp_exists: false,
            reason,
        }
    }
}

/// Whether every bounded face is a triangle; returns the offending faces.
pub fn check_ptg(e: &PlanarEmbedding) -> (bool, Vec<Vec<usize>>) {
    let outer: BTreeSet<usize> = e.component_outer().iter().copied().collect();
    let bad: Vec<Vec<usize>> = e
        .faces()
        .iter()
        .enumerate()
        .filter(|(i, f)| !outer.contains(i) && f.len() != 3)
        .map(|(_, f)| f.clone())
        .collect();
    (bad.is_empty(), bad)
}

/// Cut vertices, and whether the graph is biconnected (connected, no cut
/// vertex, at least three vertices).
pub fn biconnectivity(g: &AdjacencyGraph) -> (bool, Vec<usize>) {
    let (cuts, _) = blocks(g);
    let ok = cuts.is_empty() && g.vertex_count() >= 3 && g.is_connected();
    (ok, cuts)
}

/// 3-cycles that are not faces of the embedding, so they have vertices
/// strictly on both sides.
pub fn separating_triangles(e: &PlanarEmbedding) -> Vec<[usize; 3]> {
    let faces: BTreeSet<[usize; 3]> = e
        .faces()
        .iter()
        .filter(|f| f.len() == 3)
        .map(|f| {
            let mut t = [f[0], f[1], f[2]];
            t.sort();
            t
        })
        .collect();
    e.graph()
        .triangles()
        .into_iter()
        .filter(|t| !faces.contains(t))
        .collect()
}

/// Separating triangles plus a triangular outer face enclosing other
/// vertices. Either one rules out a rectangular dual.
pub fn complex_triangles(e: &PlanarEmbedding) -> Vec<[usize; 3]> {
    let mut out = separating_triangles(e);
    let outer = e.outer_face();
    if outer.len() == 3 && e.vertex_count() > 3 {
        let mut t = [outer[0], outer[1], outer[2]];
        t.sort();
        out.push(t);
        out.sort();
    }
    out
}

/// Shortcuts (non-boundary edges between two outer vertices) and corner
/// implying paths. Each path runs along the outer boundary between the ends
/// of a shortcut, starting at the smaller end.
pub fn shortcuts_and_cips(e: &PlanarEmbedding) -> (Vec<(usize, usize)>, Vec<Vec<usize>>) {
    let outer = e.outer_face();
    let k = outer.len();
    if k < 3 {
        return (Vec::new(), Vec::new());
    }
    let pos: std::collections::HashMap<usize, usize> =
        outer.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let boundary: BTreeSet<Edge> = (0..k)
        .map(|i| Edge::new(outer[i], outer[(i + 1) % k]))
        .collect();
    let shortcuts: Vec<Edge> = e
        .graph()
        .edges()
        .into_iter()
        .filter(|ed| pos.contains_key(&ed.0) && pos.contains_key(&ed.1) && !boundary.contains(ed))
        .collect();
    let ends: BTreeSet<usize> = shortcuts.iter().flat_map(|s| [s.0, s.1]).collect();
    let mut cips = Vec::new();
    for s in &shortcuts {
        let (ia, ib) = (pos[&s.0], pos[&s.1]);
        for (from, to) in [(ia, ib), (ib, ia)] {
            let mut path = vec![outer[from]];
            let mut i = (from + 1) % k;
            while i != to {
                path.push(outer[i]);
                i = (i + 1) % k;
            }
            path.push(outer[to]);
            if path[1..path.len() - 1].iter().all(|v| !ends.contains(v)) {
                if path[0] > path[path.len() - 1] {
                    path.reverse();
                }
                cips.push(path);
            }
        }
    }
    cips.sort();
    cips.dedup();
    (shortcuts.iter().map(|s| (s.0, s.1)).collect(), cips)
}

/// Runs the checks in order and reports the first failure.
pub fn rfp_check(g: &AdjacencyGraph) -> StructureReport {
    if g.vertex_count() < 3 {
        return StructureReport::empty(Reason::Degenerate);
    }
    let emb = match planar_embed(g) {
        Ok(e) => e,
        Err(EmbedError::NotPlanar { .. }) | Err(_) => {
            return StructureReport::empty(Reason::NotPlanar);
        }
    };
    report_for(&emb)
}

/// Same as [`rfp_check`] on an already-embedded graph.
pub fn report_for(emb: &PlanarEmbedding) -> StructureReport {
    let g = emb.graph();
    let mut r = StructureReport::empty(Reason::Ok);
    if g.vertex_count() < 3 {
        r.reason = Reason::Degenerate;
        return r;
    }
    r.planar = true;
    r.outer_face = emb.outer_face().to_vec();
    r.outer_face_length = r.outer_face.len();
    let (tri, bad) = check_ptg(emb);
    r.triangulated = tri;
    r.non_triangular_faces = bad;
    let (bi, cuts) = biconnectivity(g);
    r.biconnected = bi;
    r.cut_vertices = cuts;
    if tri {
        r.separating_triangles = complex_triangles(emb);
    }
    if bi {
        let (s, c) = shortcuts_and_cips(emb);
        r.shortcuts = s;
        r.cips = c;
    }
    r.reason = if !tri {
        Reason::NotTriangulated
    } else if !bi {
        Reason::NotBiconnected
    } else if !r.separating_triangles.is_empty() {
        Reason::SeparatingTriangle
    } else if r.cips.len() > 4 {
        Reason::TooManyCips
    } else if r.outer_face_length == 3 && g.vertex_count() > 3 {
        Reason::TriangularOuterFace
    } else {
        Reason::Ok
    };
    r.rfp_exists = r.reason == Reason::Ok;
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn four_face_sample() -> AdjacencyGraph {
        AdjacencyGraph::new(
            7,
            &[
                (5, 0),
                (5, 4),
                (5, 1),
                (0, 1),
                (1, 6),
                (1, 2),
                (6, 2),
                (2, 3),
                (2, 4),
                (3, 4),
            ],
        )
        .unwrap()
    }

    fn octahedral_sample() -> AdjacencyGraph {
        AdjacencyGraph::new(
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
        .unwrap()
    }

    fn many_cips_sample() -> AdjacencyGraph {
        AdjacencyGraph::new(
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
        .unwrap()
    }

    #[test]
    fn sample_verdicts() {
        assert_eq!(rfp_check(&four_face_sample()).reason, Reason::NotTriangulated);
        assert_eq!(rfp_check(&octahedral_sample()).reason, Reason::SeparatingTriangle);
        assert_eq!(rfp_check(&many_cips_sample()).reason, Reason::TooManyCips);
    }

    #[test]
    fn four_face_sample_reports_non_triangular_face() {
        let e = planar_embed(&four_face_sample()).unwrap();
        let (ok, bad) = check_ptg(&e);
        assert!(!ok);
        assert!(!bad.is_empty());
    }

    #[test]
    fn many_cips_sample_lists_minimal_paths() {
        let e = planar_embed(&many_cips_sample()).unwrap();
        assert!(check_ptg(&e).0);
        let (s, cips) = shortcuts_and_cips(&e);
        assert_eq!(s.len(), 7);
        assert_eq!(
            cips,
            vec![
                vec![0, 7, 2],
                vec![0, 8, 1],
                vec![1, 9, 4],
                vec![2, 6, 3],
                vec![3, 5, 4]
            ]
        );
    }

    #[test]
    fn two_shortcut_example() {
        let g = AdjacencyGraph::new(
            7,
            &[
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 5),
                (5, 0),
                (1, 5),
                (2, 4),
                (6, 1),
                (6, 2),
                (6, 4),
                (6, 5),
            ],
        )
        .unwrap();
        let e = planar_embed(&g).unwrap();
        let (s, cips) = shortcuts_and_cips(&e);
        assert_eq!(s, vec![(1, 5), (2, 4)]);
        assert!(cips.contains(&vec![1, 0, 5]));
        assert_eq!(cips.len(), 2);
    }

    #[test]
    fn triangle_is_fine() {
        let g = AdjacencyGraph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let r = rfp_check(&g);
        assert!(r.rfp_exists);
        assert!(r.shortcuts.is_empty() && r.cips.is_empty());
    }

    #[test]
    fn k4_outer_triangle_is_a_face() {
        let g = AdjacencyGraph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let e = planar_embed(&g).unwrap();
        assert!(separating_triangles(&e).is_empty());
        assert_eq!(rfp_check(&g).reason, Reason::SeparatingTriangle);
    }

    #[test]
    fn path_of_triangles_has_cut_vertices() {
        // triangles 0-1-3, 3-4 bridge, 4-5-6
        let g = AdjacencyGraph::new(
            7,
            &[(0, 1), (1, 3), (3, 0), (3, 4), (4, 5), (5, 6), (6, 4), (2, 0), (2, 1)],
        )
        .unwrap();
        let (ok, cuts) = biconnectivity(&g);
        assert!(!ok);
        assert_eq!(cuts, vec![3, 4]);
        let r = rfp_check(&g);
        assert_eq!(r.reason, Reason::NotBiconnected);
    }

    #[test]
    fn small_graphs_are_degenerate() {
        let g = AdjacencyGraph::new(2, &[(0, 1)]).unwrap();
        assert_eq!(rfp_check(&g).reason, Reason::Degenerate);
    }

    #[test]
    fn disconnected_triangles_are_not_biconnected() {
        let g = AdjacencyGraph::new(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert_eq!(rfp_check(&g).reason, Reason::NotBiconnected);
    }
}
