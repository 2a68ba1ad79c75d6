//! Extra vertices that turn a graph without a rectangular dual into one
//! with a dual. Every fix subdivides one edge; the new vertex later merges
//! into one of the edge's ends.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::embedding::PlanarEmbedding;
use crate::graph::AdjacencyGraph;
use crate::rectdual::RectDualError;
use crate::structure::{report_for, separating_triangles, shortcuts_and_cips, Reason};

/// What an extra vertex was added to resolve.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construct {
    OuterFace,
    SeparatingTriangle([usize; 3]),
    ExcessCip(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExtraVertex {
    pub id: usize,
    /// The subdivided edge; its ends are the merge candidates.
    pub edge: (usize, usize),
    pub construct: Construct,
}

impl ExtraVertex {
    pub fn candidates(&self) -> [usize; 2] {
        [self.edge.0, self.edge.1]
    }
}

/// Edge subdivisions in application order. Extra vertex ids continue from
/// the graph's vertex count.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TransformPlan {
    pub steps: Vec<ExtraVertex>,
}

impl TransformPlan {
    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn outer_face_fix(&self) -> Option<&ExtraVertex> {
        self.steps
            .iter()
            .find(|s| s.construct == Construct::OuterFace)
    }
}

/// Replaces edge `(u, v)` by a new vertex joined to `u`, `v` and the third
/// vertex of each triangle on the edge.
pub fn subdivide(e: &PlanarEmbedding, u: usize, v: usize) -> Result<PlanarEmbedding, RectDualError> {
    let bad = |m: String| RectDualError::InternalInvariantViolation(m);
    let g = e.graph();
    if !g.has_edge(u, v) {
        return Err(bad(format!("({u}, {v}) is not an edge")));
    }
    let n = g.vertex_count();
    let w = n;
    // a: left of u->v, b: left of v->u
    let a = e.next_cw(v, u);
    let b = e.next_cw(u, v);
    let outer = e.outer_face();
    let k = outer.len();
    let on_outer_dart = |x: usize, y: usize| (0..k).any(|i| outer[i] == x && outer[(i + 1) % k] == y);
    let left_a = !on_outer_dart(u, v) && e.next_ccw(a, u) == v;
    let left_b = !on_outer_dart(v, u) && e.next_ccw(b, v) == u;
    if !left_a && !left_b {
        return Err(bad(format!("({u}, {v}) borders no triangle")));
    }

    let mut labels: Vec<Option<String>> = (0..n).map(|x| g.label(x).map(String::from)).collect();
    labels.push(None);
    let mut edges: Vec<(usize, usize)> = g
        .edges()
        .into_iter()
        .filter(|ed| !(ed.contains(u) && ed.contains(v)))
        .map(|ed| (ed.0, ed.1))
        .collect();
    edges.push((u, w));
    edges.push((v, w));
    let mut rot: Vec<Vec<usize>> = e.rotations().to_vec();
    for x in rot[u].iter_mut().filter(|x| **x == v) {
        *x = w;
    }
    for x in rot[v].iter_mut().filter(|x| **x == u) {
        *x = w;
    }
    let mut around_w = vec![v];
    if left_a {
        edges.push((a, w));
        let i = rot[a].iter().position(|&x| x == u).unwrap();
        rot[a].insert(i + 1, w);
        around_w.push(a);
    }
    around_w.push(u);
    if left_b {
        edges.push((b, w));
        let i = rot[b].iter().position(|&x| x == v).unwrap();
        rot[b].insert(i + 1, w);
        around_w.push(b);
    }
    rot.push(around_w);
    let graph = AdjacencyGraph::with_labels(n + 1, &edges, labels).map_err(|x| bad(x.to_string()))?;
    let dart = (0..k)
        .map(|i| (outer[i], outer[(i + 1) % k]))
        .find(|&(x, y)| !((x == u && y == v) || (x == v && y == u)))
        .or(Some((w, u)));
    let out = PlanarEmbedding::from_rotation(graph, rot, dart).map_err(|x| bad(x.to_string()))?;
    if out.euler_characteristic() != 2 {
        return Err(bad("subdivision broke the embedding".into()));
    }
    Ok(out)
}

/// Replays a plan, returning the final embedding.
pub fn apply_transform(
    e: &PlanarEmbedding,
    p: &TransformPlan,
) -> Result<PlanarEmbedding, RectDualError> {
    let mut cur = e.clone();
    for s in &p.steps {
        if s.id != cur.vertex_count() {
            return Err(RectDualError::InternalInvariantViolation(format!(
                "extra vertex {} applied out of order",
                s.id
            )));
        }
        cur = subdivide(&cur, s.edge.0, s.edge.1)?;
    }
    if !p.is_empty() {
        let r = report_for(&cur);
        if r.reason != Reason::Ok {
            return Err(RectDualError::InternalInvariantViolation(format!(
                "transformed graph fails the check: {}",
                r.reason.describe()
            )));
        }
    }
    Ok(cur)
}

/// Vertices strictly inside the triangle, away from the outer face.
fn inside_count(e: &PlanarEmbedding, t: [usize; 3]) -> usize {
    let g = e.graph();
    let n = g.vertex_count();
    let Some(&start) = e.outer_face().iter().find(|v| !t.contains(v)) else {
        return 0;
    };
    let mut seen = vec![false; n];
    for &v in &t {
        seen[v] = true;
    }
    seen[start] = true;
    let mut stack = vec![start];
    let mut reached = 1;
    while let Some(v) = stack.pop() {
        for w in g.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                reached += 1;
                stack.push(w);
            }
        }
    }
    n - 3 - reached
}

/// Separating triangle with the fewest vertices inside; none of the others
/// can lie within it.
fn innermost(e: &PlanarEmbedding) -> Option<[usize; 3]> {
    separating_triangles(e)
        .into_iter()
        .min_by_key(|&t| (inside_count(e, t), t))
}

/// Index sets of the CIPs to keep when there are more than four, in
/// lexicographic order. Empty when no choice is needed.
pub fn excess_cip_choices(e: &PlanarEmbedding) -> Vec<[usize; 4]> {
    let (_, cips) = shortcuts_and_cips(e);
    combinations4(cips.len())
}

fn combinations4(k: usize) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    if k <= 4 {
        return out;
    }
    for a in 0..k {
        for b in a + 1..k {
            for c in b + 1..k {
                for d in c + 1..k {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

/// Every way of adding extra vertices so that a rectangular dual exists.
/// A triangular outer face is opened first, then separating triangles are
/// broken innermost first (three edges each), then excess CIPs are cut
/// (choosing which four to keep). Plans with the same subdivided edges are
/// reported once.
pub fn plan_transforms(e: &PlanarEmbedding) -> Vec<TransformPlan> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    expand(e, &mut Vec::new(), &mut out, &mut seen);
    out
}

fn expand(
    e: &PlanarEmbedding,
    steps: &mut Vec<ExtraVertex>,
    out: &mut Vec<TransformPlan>,
    seen: &mut BTreeSet<Vec<(usize, usize)>>,
) {
    let report = report_for(e);
    match report.reason {
        Reason::Ok => {
            let mut key: Vec<(usize, usize)> = steps.iter().map(|s| s.edge).collect();
            key.sort();
            if seen.insert(key) {
                out.push(TransformPlan {
                    steps: steps.clone(),
                });
            }
            return;
        }
        Reason::SeparatingTriangle | Reason::TooManyCips | Reason::TriangularOuterFace => {}
        _ => return,
    }
    let outer = e.outer_face().to_vec();
    let mut branch = |edge: (usize, usize), construct: Construct, steps: &mut Vec<ExtraVertex>| {
        let Ok(next) = subdivide(e, edge.0, edge.1) else {
            return;
        };
        steps.push(ExtraVertex {
            id: e.vertex_count(),
            edge,
            construct,
        });
        expand(&next, steps, out, seen);
        steps.pop();
    };
    if outer.len() == 3 && e.vertex_count() > 3 {
        let mut t = [outer[0], outer[1], outer[2]];
        t.sort();
        for (a, b) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
            branch((a, b), Construct::OuterFace, steps);
        }
        return;
    }
    if let Some(t) = innermost(e) {
        for (a, b) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
            branch((a, b), Construct::SeparatingTriangle(t), steps);
        }
        return;
    }
    let (_, cips) = shortcuts_and_cips(e);
    for keep in combinations4(cips.len()) {
        let depth = steps.len();
        let mut cur = e.clone();
        let mut cut = BTreeSet::new();
        let mut ok = true;
        for (i, c) in cips.iter().enumerate() {
            if keep.contains(&i) {
                continue;
            }
            let edge = (c[0], c[c.len() - 1]);
            let edge = (edge.0.min(edge.1), edge.0.max(edge.1));
            if !cut.insert(edge) {
                continue;
            }
            match subdivide(&cur, edge.0, edge.1) {
                Ok(next) => {
                    steps.push(ExtraVertex {
                        id: cur.vertex_count(),
                        edge,
                        construct: Construct::ExcessCip(c.clone()),
                    });
                    cur = next;
                }
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            expand(&cur, steps, out, seen);
        }
        steps.truncate(depth);
    }
}
