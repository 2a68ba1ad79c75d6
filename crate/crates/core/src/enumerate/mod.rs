//! Enumeration of topologically distinct floorplans.
//!
//! Rectangular floorplans come from every corner assignment and every
//! edge labelling of it. When no rectangular floorplan exists, each
//! transform plan adds extra rooms, and every way of merging them back
//! yields an orthogonal floorplan.

mod merge;
mod transform;

pub use merge::{choice_bits, merge_extra_rooms, merge_targets, merge_with, MergeRejected};
pub use transform::{
    apply_transform, excess_cip_choices, plan_transforms, subdivide, Construct, ExtraVertex,
    TransformPlan,
};

use std::collections::{BTreeSet, HashSet};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedding::{planar_embed, PlanarEmbedding};
use crate::floorplan::{side_adjacency, Floorplan};
use crate::graph::AdjacencyGraph;
use crate::rectdual::{
    enumerate_corner_assignments, enumerate_rels, four_complete, realize_rectangles,
    AugmentedGraph, CornerAssignment, RegularEdgeLabelling,
};
use crate::structure::{report_for, Reason};

/// Horizontal (side by side) and vertical (stacked) room adjacencies, as
/// unordered pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LayoutKey {
    pub horizontal: BTreeSet<(usize, usize)>,
    pub vertical: BTreeSet<(usize, usize)>,
}

impl LayoutKey {
    /// Key of a labelling once every vertex `v` is replaced by `target[v]`.
    /// Poles and pairs inside one room are dropped.
    pub fn from_rel(rel: &RegularEdgeLabelling, target: &[usize]) -> LayoutKey {
        let pair = |a: usize, b: usize| -> Option<(usize, usize)> {
            if a >= rel.rooms || b >= rel.rooms {
                return None;
            }
            let (a, b) = (target[a], target[b]);
            (a != b).then_some((a.min(b), a.max(b)))
        };
        LayoutKey {
            vertical: rel.t1.iter().filter_map(|&(a, b)| pair(a, b)).collect(),
            horizontal: rel.t2.iter().filter_map(|&(a, b)| pair(a, b)).collect(),
        }
    }

    /// Key read off the geometry, over the rooms in order.
    pub fn of_floorplan(f: &Floorplan) -> LayoutKey {
        let mut k = LayoutKey::default();
        for ((a, b), (vertical, horizontal)) in side_adjacency(f) {
            let p = (a.min(b), a.max(b));
            if vertical {
                k.vertical.insert(p);
            }
            if horizontal {
                k.horizontal.insert(p);
            }
        }
        k
    }
}

#[derive(Debug, Clone, Default)]
pub struct EnumOptions {
    pub limit: Option<usize>,
    pub allow_ofp: bool,
    pub deadline: Option<Instant>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumError {
    #[error("graph is not a valid input: {}", .0.describe())]
    Invalid(Reason),
    #[error("no rectangular floorplan ({}); orthogonal floorplans not allowed", .0.describe())]
    NeedsOfp(Reason),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Exhausted,
    Limit,
    Deadline,
}

struct Route {
    emb: PlanarEmbedding,
    extras: Vec<ExtraVertex>,
    corners: Option<Vec<CornerAssignment>>,
}

struct Current {
    aug: AugmentedGraph,
    rels: Vec<RegularEdgeLabelling>,
    rel: usize,
    merge: usize,
    realized: Option<Floorplan>,
}

/// Lazy, deterministic stream of distinct floorplans.
pub struct FloorplanStream {
    graph: AdjacencyGraph,
    routes: Vec<Route>,
    route: usize,
    corner: usize,
    current: Option<Current>,
    seen: HashSet<LayoutKey>,
    emitted: usize,
    opts: EnumOptions,
    stop: Option<StopReason>,
    ofp: bool,
}

impl FloorplanStream {
    /// Why the stream ended, once it has.
    pub fn stop_reason(&self) -> Option<StopReason> {
        self.stop
    }

    /// Whether floorplans come from transformed graphs.
    pub fn is_ofp(&self) -> bool {
        self.ofp
    }

    pub fn emitted(&self) -> usize {
        self.emitted
    }

    fn finish(&mut self, why: StopReason) -> Option<Floorplan> {
        self.stop = Some(why);
        None
    }
}

impl Iterator for FloorplanStream {
    type Item = Floorplan;

    fn next(&mut self) -> Option<Floorplan> {
        if self.stop.is_some() {
            return None;
        }
        let n = self.graph.vertex_count();
        loop {
            if self.opts.limit.is_some_and(|l| self.emitted >= l) {
                return self.finish(StopReason::Limit);
            }
            if self.opts.deadline.is_some_and(|d| Instant::now() >= d) {
                return self.finish(StopReason::Deadline);
            }
            let Some(route) = self.routes.get_mut(self.route) else {
                return self.finish(StopReason::Exhausted);
            };
            let corners = route
                .corners
                .get_or_insert_with(|| enumerate_corner_assignments(&route.emb).unwrap_or_default());
            if self.current.is_none() {
                let Some(ca) = corners.get(self.corner) else {
                    route.corners = None;
                    self.route += 1;
                    self.corner = 0;
                    continue;
                };
                let Ok(aug) = four_complete(&route.emb, ca) else {
                    self.corner += 1;
                    continue;
                };
                let rels = enumerate_rels(&aug);
                self.current = Some(Current {
                    aug,
                    rels,
                    rel: 0,
                    merge: 0,
                    realized: None,
                });
            }
            let cur = self.current.as_mut().unwrap();
            let extras = &route.extras;
            if cur.rel >= cur.rels.len() {
                self.current = None;
                self.corner += 1;
                continue;
            }
            if cur.merge >= 1usize << extras.len() {
                cur.rel += 1;
                cur.merge = 0;
                cur.realized = None;
                continue;
            }
            let choice = choice_bits(cur.merge, extras.len());
            cur.merge += 1;
            let rel = &cur.rels[cur.rel];
            let target = merge_targets(n, extras, &choice).expect("choice fits the extras");
            let key = LayoutKey::from_rel(rel, &target);
            if self.seen.contains(&key) {
                continue;
            }
            let base = cur
                .realized
                .get_or_insert_with(|| {
                    let mut f = realize_rectangles(&cur.aug, rel);
                    for r in f.rooms.iter_mut().skip(n) {
                        r.extra = true;
                    }
                    f
                });
            let f = if extras.is_empty() {
                base.clone()
            } else {
                match merge_with(base, &self.graph, extras, &choice) {
                    Ok(f) => f,
                    Err(_) => continue,
                }
            };
            self.seen.insert(key);
            self.emitted += 1;
            return Some(f);
        }
    }
}

/// Streams every distinct floorplan of `g`: rectangular ones when a dual
/// exists, otherwise (with `allow_ofp`) orthogonal ones built through
/// extra rooms.
pub fn enumerate_floorplans(
    g: &AdjacencyGraph,
    opts: EnumOptions,
) -> Result<FloorplanStream, EnumError> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(EnumError::Invalid(Reason::Degenerate));
    }
    let emb = planar_embed(g).map_err(|_| EnumError::Invalid(Reason::NotPlanar))?;
    let mut ofp = false;
    let routes = if n <= 2 {
        if !g.is_connected() {
            return Err(EnumError::Invalid(Reason::NotBiconnected));
        }
        vec![(emb, Vec::new())]
    } else {
        match report_for(&emb).reason {
            Reason::Ok => vec![(emb, Vec::new())],
            r @ (Reason::SeparatingTriangle | Reason::TooManyCips | Reason::TriangularOuterFace) => {
                if !opts.allow_ofp {
                    return Err(EnumError::NeedsOfp(r));
                }
                ofp = true;
                plan_transforms(&emb)
                    .into_iter()
                    .filter_map(|p| {
                        let t = apply_transform(&emb, &p).ok()?;
                        Some((t, p.steps))
                    })
                    .collect()
            }
            r => return Err(EnumError::Invalid(r)),
        }
    };
    Ok(FloorplanStream {
        graph: g.clone(),
        routes: routes
            .into_iter()
            .map(|(emb, extras)| Route {
                emb,
                extras,
                corners: None,
            })
            .collect(),
        route: 0,
        corner: 0,
        current: None,
        seen: HashSet::new(),
        emitted: 0,
        opts,
        stop: None,
        ofp,
    })
}
