//! Sizing floorplans with one linear program per axis.
//!
//! Along the x axis every room has an origin `x` and a width `w`. Each
//! left-to-right adjacency `a -> b` fixes `x_b = x_a + w_a`; rooms on the west
//! side start at 0 and rooms on the east side end at the total width.
//! Each bottom-to-top adjacency between `a` and `b` demands that their
//! x-intervals overlap by at least `eps`, so the shared wall survives. The
//! y axis is the mirror image. Widths are pushed towards their minimum.

pub mod simplex;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::floorplan::{close, overlap_len, part_adjacencies, Floorplan, Rect, GEOM_EPS};
use simplex::{LinearProgram, LpError, RowKind};

/// Upper bound used for rooms without constraints.
pub const LARGE: f64 = 1e4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SizeBounds {
    pub wmin: f64,
    pub wmax: f64,
    pub hmin: f64,
    pub hmax: f64,
}

impl SizeBounds {
    pub fn new(wmin: f64, wmax: f64, hmin: f64, hmax: f64) -> Self {
        SizeBounds {
            wmin,
            wmax,
            hmin,
            hmax,
        }
    }

    pub fn square(lo: f64, hi: f64) -> Self {
        SizeBounds::new(lo, hi, lo, hi)
    }

    pub fn is_valid(&self) -> bool {
        let ok = |a: f64, b: f64| a.is_finite() && b.is_finite() && a >= 0.0 && a <= b;
        ok(self.wmin, self.wmax) && ok(self.hmin, self.hmax)
    }

    fn along(&self, axis: Axis) -> (f64, f64) {
        match axis {
            Axis::X => (self.wmin, self.wmax),
            Axis::Y => (self.hmin, self.hmax),
        }
    }
}

/// Which edge of a part lies on a shared line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Side {
    Low,
    High,
}

/// Horizontal and vertical st-graphs over parts `0..count`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StGraphs {
    pub count: usize,
    /// below -> above
    pub t1: Vec<(usize, usize)>,
    /// left -> right
    pub t2: Vec<(usize, usize)>,
    pub south: Vec<usize>,
    pub north: Vec<usize>,
    pub west: Vec<usize>,
    pub east: Vec<usize>,
    /// Groups of part edges that must stay on one vertical line.
    pub ties_x: Vec<Vec<(usize, Side)>>,
    /// Groups of part edges that must stay on one horizontal line.
    pub ties_y: Vec<Vec<(usize, Side)>>,
}

impl StGraphs {
    fn along(&self, axis: Axis) -> (&[(usize, usize)], &[(usize, usize)], &[usize], &[usize]) {
        match axis {
            Axis::X => (&self.t2, &self.t1, &self.west, &self.east),
            Axis::Y => (&self.t1, &self.t2, &self.south, &self.north),
        }
    }

    /// Digraph for one family with the two poles appended: vertices
    /// `count` (source) and `count + 1` (sink).
    pub fn digraph(&self, family: Axis) -> Vec<Vec<usize>> {
        // X family = t2 (west to east), Y family = t1 (south to north)
        let (arcs, _, low, high) = self.along(family);
        let n = self.count;
        let mut adj = vec![Vec::new(); n + 2];
        for &(a, b) in arcs {
            adj[a].push(b);
        }
        for &v in low {
            adj[n].push(v);
        }
        for &v in high {
            adj[v].push(n + 1);
        }
        adj
    }

    /// True if the family's digraph is acyclic with the low pole as its only
    /// source and the high pole as its only sink.
    pub fn is_st(&self, family: Axis) -> bool {
        let adj = self.digraph(family);
        let n = adj.len();
        let mut indeg = vec![0; n];
        for out in &adj {
            for &w in out {
                indeg[w] += 1;
            }
        }
        let sources: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let sinks: Vec<usize> = (0..n).filter(|&v| adj[v].is_empty()).collect();
        if sources != [n - 2] || sinks != [n - 1] {
            return false;
        }
        let mut stack = sources;
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for &w in &adj[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    stack.push(w);
                }
            }
        }
        seen == n
    }
}

/// Optimization target for an axis program.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// Sum of (size - max size).
    Slack,
    /// Sum of sizes.
    Sum,
}

#[derive(Debug, Clone)]
pub struct AxisLp {
    pub axis: Axis,
    pub lp: LinearProgram,
    pub origin: Vec<usize>,
    pub size: Vec<usize>,
    pub total: usize,
    /// Constant added to the program's objective.
    pub offset: f64,
    pub equalities: usize,
    pub overlaps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxisSolution {
    pub origin: Vec<f64>,
    pub size: Vec<f64>,
    pub total: f64,
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DimError {
    #[error("infeasible along the {axis} axis: {}", .conflicts.join(", "))]
    Infeasible { axis: Axis, conflicts: Vec<String> },
    #[error("no bounds given for room {0}")]
    MissingBounds(String),
    #[error("invalid bounds for room {0}")]
    BadBounds(String),
    #[error("solver failure along the {0} axis")]
    Solver(Axis),
}

pub fn build_axis_lp(
    st: &StGraphs,
    bounds: &[SizeBounds],
    names: &[String],
    axis: Axis,
    eps: f64,
    objective: Objective,
) -> AxisLp {
    let (o, s) = match axis {
        Axis::X => ("x", "w"),
        Axis::Y => ("y", "h"),
    };
    let mut lp = LinearProgram::default();
    let mut origin = Vec::with_capacity(st.count);
    let mut size = Vec::with_capacity(st.count);
    let mut offset = 0.0;
    for i in 0..st.count {
        origin.push(lp.add_var(format!("{o}[{}]", names[i]), 0.0));
        size.push(lp.add_var(format!("{s}[{}]", names[i]), 1.0));
        if objective == Objective::Slack {
            offset -= bounds[i].along(axis).1;
        }
    }
    let total = lp.add_var(format!("{s}[total]"), 0.0);
    let (along, cross, low, high) = st.along(axis);
    let mut equalities = 0;
    for &(a, b) in along {
        lp.add_row(
            format!("{} next to {}", names[a], names[b]),
            vec![(origin[b], 1.0), (origin[a], -1.0), (size[a], -1.0)],
            RowKind::Eq,
            0.0,
        );
        equalities += 1;
    }
    for &v in low {
        lp.add_row(
            format!("{} on the low side", names[v]),
            vec![(origin[v], 1.0)],
            RowKind::Eq,
            0.0,
        );
        equalities += 1;
    }
    for &v in high {
        lp.add_row(
            format!("{} on the high side", names[v]),
            vec![(origin[v], 1.0), (size[v], 1.0), (total, -1.0)],
            RowKind::Eq,
            0.0,
        );
        equalities += 1;
    }
    let ties = match axis {
        Axis::X => &st.ties_x,
        Axis::Y => &st.ties_y,
    };
    let edge = |(p, side): (usize, Side)| match side {
        Side::Low => vec![(origin[p], 1.0)],
        Side::High => vec![(origin[p], 1.0), (size[p], 1.0)],
    };
    for group in ties {
        for &other in &group[1..] {
            let mut c = edge(other);
            c.extend(edge(group[0]).into_iter().map(|(j, a)| (j, -a)));
            lp.add_row(
                format!("{} aligned with {}", names[other.0], names[group[0].0]),
                c,
                RowKind::Eq,
                0.0,
            );
        }
    }
    let mut overlaps = 0;
    for &(a, b) in cross {
        let wall = format!("wall {}/{}", names[a], names[b]);
        lp.add_row(
            wall.clone(),
            vec![(origin[a], 1.0), (size[a], 1.0), (origin[b], -1.0)],
            RowKind::Ge,
            eps,
        );
        lp.add_row(
            wall,
            vec![(origin[b], 1.0), (size[b], 1.0), (origin[a], -1.0)],
            RowKind::Ge,
            eps,
        );
        overlaps += 2;
    }
    for i in 0..st.count {
        let (lo, hi) = bounds[i].along(axis);
        lp.add_row(format!("{s}[{}] >= {lo}", names[i]), vec![(size[i], 1.0)], RowKind::Ge, lo);
        lp.add_row(format!("{s}[{}] <= {hi}", names[i]), vec![(size[i], 1.0)], RowKind::Le, hi);
    }
    AxisLp {
        axis,
        lp,
        origin,
        size,
        total,
        offset,
        equalities,
        overlaps,
    }
}

pub fn solve_axis_lp(alp: &AxisLp) -> Result<AxisSolution, DimError> {
    match alp.lp.solve() {
        Ok(sol) => Ok(AxisSolution {
            origin: alp.origin.iter().map(|&j| sol.x[j]).collect(),
            size: alp.size.iter().map(|&j| sol.x[j]).collect(),
            total: sol.x[alp.total],
            objective: sol.objective + alp.offset,
        }),
        Err(LpError::Infeasible { mut conflicts }) => {
            conflicts.dedup();
            Err(DimError::Infeasible {
                axis: alp.axis,
                conflicts,
            })
        }
        Err(LpError::Unbounded) => Err(DimError::Solver(alp.axis)),
    }
}

/// Solves both axes and returns one rectangle per part plus the box.
pub fn dimension_st(
    st: &StGraphs,
    bounds: &[SizeBounds],
    names: &[String],
    eps: f64,
) -> Result<(Vec<Rect>, Rect), DimError> {
    let x = solve_axis_lp(&build_axis_lp(st, bounds, names, Axis::X, eps, Objective::Slack))?;
    let y = solve_axis_lp(&build_axis_lp(st, bounds, names, Axis::Y, eps, Objective::Slack))?;
    let rects = (0..st.count)
        .map(|i| Rect::new(x.origin[i], y.origin[i], x.size[i], y.size[i]))
        .collect();
    Ok((rects, Rect::new(0.0, 0.0, x.total, y.total)))
}

/// Largest deviation from flow conservation: for every part, the lengths
/// of the walls shared with its neighbours below add up to its width, and
/// likewise above; sideways neighbours add up to its height.
pub fn flow_residual(st: &StGraphs, rects: &[Rect]) -> f64 {
    let n = st.count;
    let mut below = vec![0.0; n];
    let mut above = vec![0.0; n];
    let mut left = vec![0.0; n];
    let mut right = vec![0.0; n];
    for &(a, b) in &st.t1 {
        let l = overlap_len(rects[a].x, rects[a].right(), rects[b].x, rects[b].right());
        above[a] += l;
        below[b] += l;
    }
    for &(a, b) in &st.t2 {
        let l = overlap_len(rects[a].y, rects[a].top(), rects[b].y, rects[b].top());
        right[a] += l;
        left[b] += l;
    }
    for &v in &st.south {
        below[v] += rects[v].w;
    }
    for &v in &st.north {
        above[v] += rects[v].w;
    }
    for &v in &st.west {
        left[v] += rects[v].h;
    }
    for &v in &st.east {
        right[v] += rects[v].h;
    }
    (0..n)
        .flat_map(|i| {
            [
                (below[i] - rects[i].w).abs(),
                (above[i] - rects[i].w).abs(),
                (left[i] - rects[i].h).abs(),
                (right[i] - rects[i].h).abs(),
            ]
        })
        .fold(0.0, f64::max)
}

/// St-graphs of a rectangle tiling read off its geometry, including ties
/// that keep collinear wall pieces collinear.
pub fn arrangement_stgraphs(rects: &[Rect], bbox: &Rect) -> StGraphs {
    let (t1, t2) = part_adjacencies(rects);
    let mut st = StGraphs {
        count: rects.len(),
        t1: t1.into_iter().collect(),
        t2: t2.into_iter().collect(),
        ..Default::default()
    };
    for (i, r) in rects.iter().enumerate() {
        if close(r.x, bbox.x) {
            st.west.push(i);
        }
        if close(r.right(), bbox.right()) {
            st.east.push(i);
        }
        if close(r.y, bbox.y) {
            st.south.push(i);
        }
        if close(r.top(), bbox.top()) {
            st.north.push(i);
        }
    }
    st.ties_x = collinear_groups(rects, bbox, Axis::X);
    st.ties_y = collinear_groups(rects, bbox, Axis::Y);
    st
}

fn collinear_groups(rects: &[Rect], bbox: &Rect, axis: Axis) -> Vec<Vec<(usize, Side)>> {
    // (line coordinate, span start, span end, part, side)
    let mut pieces: Vec<(f64, f64, f64, usize, Side)> = Vec::new();
    for (i, r) in rects.iter().enumerate() {
        let (lo, hi, s0, s1) = match axis {
            Axis::X => (r.x, r.right(), r.y, r.top()),
            Axis::Y => (r.y, r.top(), r.x, r.right()),
        };
        pieces.push((lo, s0, s1, i, Side::Low));
        pieces.push((hi, s0, s1, i, Side::High));
    }
    let (edge_lo, edge_hi) = match axis {
        Axis::X => (bbox.x, bbox.right()),
        Axis::Y => (bbox.y, bbox.top()),
    };
    pieces.retain(|p| !close(p.0, edge_lo) && !close(p.0, edge_hi));
    pieces.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap()
            .then(a.1.partial_cmp(&b.1).unwrap())
            .then(a.3.cmp(&b.3))
    });
    let mut groups = Vec::new();
    let mut i = 0;
    while i < pieces.len() {
        let mut j = i;
        while j < pieces.len() && close(pieces[j].0, pieces[i].0) {
            j += 1;
        }
        // merge spans on this line that overlap or touch
        let line = &pieces[i..j];
        let mut cur: Vec<(usize, Side)> = Vec::new();
        let mut reach = f64::NEG_INFINITY;
        for p in line {
            if !cur.is_empty() && p.1 > reach + GEOM_EPS {
                groups.push(std::mem::take(&mut cur));
            }
            cur.push((p.3, p.4));
            reach = reach.max(p.2);
        }
        if !cur.is_empty() {
            groups.push(cur);
        }
        i = j;
    }
    groups.retain(|g| g.len() > 1);
    groups
}

/// Bounds keyed by room id, or by "room/part" for one rectangle of a room.
pub type BoundsTable = BTreeMap<String, SizeBounds>;

/// Looks up the bounds of part `part` of a room with `parts` rectangles.
pub fn part_bounds(
    table: &BoundsTable,
    room: &str,
    part: usize,
    parts: usize,
) -> Option<SizeBounds> {
    if let Some(b) = table.get(&format!("{room}/{part}")) {
        return Some(*b);
    }
    if parts == 1 {
        return table.get(room).copied();
    }
    None
}

/// Sizes every part of `f` within its bounds, keeping the arrangement of
/// parts. Extra rooms without bounds get `[eps, LARGE]`.
pub fn dimension_floorplan(
    f: &Floorplan,
    table: &BoundsTable,
    eps: f64,
) -> Result<Floorplan, DimError> {
    let parts = f.parts();
    let mut bounds = Vec::with_capacity(parts.len());
    let mut names = Vec::with_capacity(parts.len());
    for &(ri, pi, _) in &parts {
        let room = &f.rooms[ri];
        let b = match part_bounds(table, &room.id, pi, room.rects.len()) {
            Some(b) => b,
            None if room.extra => SizeBounds::square(eps, LARGE),
            None if room.rects.len() > 1 => {
                return Err(DimError::MissingBounds(format!("{}/{pi}", room.id)))
            }
            None => return Err(DimError::MissingBounds(room.id.clone())),
        };
        if !b.is_valid() {
            return Err(DimError::BadBounds(room.id.clone()));
        }
        bounds.push(b);
        names.push(if room.rects.len() > 1 {
            format!("{}/{pi}", room.id)
        } else {
            room.id.clone()
        });
    }
    let rects: Vec<Rect> = parts.iter().map(|p| p.2).collect();
    let st = arrangement_stgraphs(&rects, &f.bbox);
    let (sized, bbox) = dimension_st(&st, &bounds, &names, eps)?;
    let mut out = f.clone();
    out.bbox = bbox;
    for (k, &(ri, pi, _)) in parts.iter().enumerate() {
        out.rooms[ri].rects[pi] = sized[k];
    }
    Ok(out)
}
