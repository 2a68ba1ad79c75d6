//! One line per acceptance check, printed in order. Exits non-zero if any
//! check fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::*;
use gplan_core::dimension::{
    build_axis_lp, dimension_st, solve_axis_lp, arrangement_stgraphs, Axis, DimError, Objective,
    SizeBounds, StGraphs,
};
use gplan_core::enumerate::{
    enumerate_floorplans, excess_cip_choices, plan_transforms, EnumOptions, LayoutKey,
};
use gplan_core::floorplan::{Floorplan, Rect};
use gplan_core::formats::parse_bounds;
use gplan_core::ifp::{dimension_ifp, min_rect_partition, parse_layout};
use gplan_core::rectdual::{enumerate_corner_assignments, four_complete};
use gplan_core::structure::report_for;
use gplan_core::{planar_embed, rfp_check, AdjacencyGraph, Reason};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const LAYOUT: &str = include_str!("../../core/tests/fixtures/irregular10.txt");
const BOUNDS: &str = include_str!("../../core/tests/fixtures/irregular10.bounds.json");

struct Report {
    failed: Vec<&'static str>,
}

impl Report {
    fn line(&mut self, name: &'static str, ok: bool, measured: String) {
        println!("{} {name} ({measured})", if ok { "PASS" } else { "FAIL" });
        if !ok {
            self.failed.push(name);
        }
    }
}

fn ms(d: Duration) -> String {
    format!("{:.2} ms", d.as_secs_f64() * 1e3)
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn main() {
    let mut r = Report { failed: Vec::new() };
    println!("\nacceptance checks");
    printed_samples(&mut r);
    triangle_boundaries(&mut r);
    extra_room_arity(&mut r);
    completeness(&mut r);
    round_trip(&mut r);
    dimensioning(&mut r);
    objective_offset(&mut r);
    min_partition(&mut r);
    irregular_layout(&mut r);
    throughput(&mut r);
    if r.failed.is_empty() {
        println!("all checks passed");
    } else {
        println!("{} check(s) failed: {}", r.failed.len(), r.failed.join(", "));
        std::process::exit(1);
    }
}

fn printed_samples(r: &mut Report) {
    let cases = [
        (four_face_sample(), Reason::NotTriangulated),
        (octahedral_sample(), Reason::SeparatingTriangle),
        (many_cips_sample(), Reason::TooManyCips),
    ];
    let mut ok = true;
    let mut notes = Vec::new();
    for (g, want) in cases {
        let (rep, t) = timed(|| rfp_check(&g));
        ok &= rep.reason == want && t < Duration::from_millis(10);
        notes.push(format!("{:?} in {}", rep.reason, ms(t)));
    }
    let cips = rfp_check(&many_cips_sample()).cips.len();
    ok &= cips == 6;
    notes.push(format!("cips = {cips}, printed 6"));
    r.line("printed sample verdicts", ok, notes.join("; "));
}

fn triangle_boundaries(r: &mut Report) {
    let e = planar_embed(&graph(3, &[(0, 1), (1, 2), (2, 0)])).unwrap();
    let (all, t) = timed(|| enumerate_corner_assignments(&e).unwrap());
    let distinct: BTreeSet<_> = all.iter().collect();
    r.line(
        "three-room boundaries",
        all.len() == 12 && distinct.len() == 12 && t < Duration::from_millis(10),
        format!("{} assignments in {}", all.len(), ms(t)),
    );
}

fn extra_room_arity(r: &mut Report) {
    let e = planar_embed(&one_separating_triangle()).unwrap();
    let sts = report_for(&e).separating_triangles.len();
    let plans = plan_transforms(&e).len();
    let e6 = planar_embed(&six_cips()).unwrap();
    let cips = report_for(&e6).cips.len();
    let choices = excess_cip_choices(&e6).len();
    r.line(
        "extra-room arity",
        sts == 1 && plans == 3 && cips == 6 && choices == 15,
        format!("{sts} triangle -> {plans} plans; {cips} cips -> {choices} choices"),
    );
}

fn completeness(r: &mut Report) {
    let start = Instant::now();
    let mut graphs = 0;
    let mut mismatches = 0;
    for n in 1..=5 {
        for g in connected_graphs(n) {
            let Ok(stream) = enumerate_floorplans(&g, EnumOptions::default()) else {
                continue;
            };
            graphs += 1;
            let got: Vec<LayoutKey> = stream.map(|f| LayoutKey::of_floorplan(&f)).collect();
            let got_set: BTreeSet<LayoutKey> = got.iter().cloned().collect();
            let e = planar_embed(&g).unwrap();
            let ident: Vec<usize> = (0..n + 4).collect();
            let mut want = BTreeSet::new();
            for ca in enumerate_corner_assignments(&e).unwrap() {
                let aug = four_complete(&e, &ca).unwrap();
                for rel in brute_force_rels(&aug) {
                    want.insert(LayoutKey::from_rel(&rel, &ident));
                }
            }
            if got.len() != want.len() || got_set != want {
                mismatches += 1;
            }
        }
    }
    let t = start.elapsed();
    r.line(
        "enumeration completeness up to five rooms",
        mismatches == 0 && t < Duration::from_secs(60),
        format!("{graphs} graphs, {mismatches} mismatches, {:.2} s", t.as_secs_f64()),
    );
}

fn random_steps(rng: &mut StdRng) -> Vec<(bool, usize, usize)> {
    let extra = rng.gen_range(1..=9);
    (0..extra)
        .map(|_| (rng.gen_bool(0.25), rng.gen_range(0..64), rng.gen_range(0..4)))
        .collect()
}

fn round_trip(r: &mut Report) {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut graphs: Vec<AdjacencyGraph> = vec![octahedral_sample(), many_cips_sample()];
    while graphs.len() < 202 {
        graphs.push(grow_ptg(&random_steps(&mut rng)));
    }
    let mut layouts = 0;
    let mut failures = 0;
    let mut empty = 0;
    for g in &graphs {
        let opts = EnumOptions {
            limit: Some(20),
            allow_ofp: true,
            ..Default::default()
        };
        let fs: Vec<Floorplan> = enumerate_floorplans(g, opts).unwrap().collect();
        if fs.is_empty() {
            empty += 1;
        }
        for f in &fs {
            layouts += 1;
            if exact_tiling(f).is_err() || check_floorplan(f, g).is_err() {
                failures += 1;
            }
        }
    }
    r.line(
        "round trip on random graphs",
        failures == 0 && empty == 0,
        format!("{} graphs, {layouts} layouts, {failures} failures, {empty} without layouts", graphs.len()),
    );
}

/// Area sum equals the box area exactly; rectangles from the realizer sit
/// on integer coordinates.
fn exact_tiling(f: &Floorplan) -> Result<(), ()> {
    let area: f64 = f.rooms.iter().flat_map(|r| &r.rects).map(|p| p.w * p.h).sum();
    if area == f.bbox.w * f.bbox.h {
        Ok(())
    } else {
        Err(())
    }
}

struct LpFixture {
    st: StGraphs,
    bounds: Vec<SizeBounds>,
}

/// Arrangements of every layout with one to three rooms, each with a few
/// bound tables.
fn lp_fixtures() -> Vec<LpFixture> {
    let graphs = [
        graph(1, &[]),
        graph(2, &[(0, 1)]),
        graph(3, &[(0, 1), (1, 2), (2, 0)]),
    ];
    let tables: [&[(f64, f64, f64, f64)]; 3] = [
        &[(2.0, 4.0, 1.0, 3.0), (3.0, 5.0, 2.0, 2.5), (1.0, 6.0, 1.0, 6.0)],
        &[(4.0, 4.0, 2.0, 5.0), (1.0, 3.0, 3.0, 4.0), (2.5, 3.5, 1.5, 2.0)],
        &[(1.0, 1.5, 1.0, 9.0), (6.0, 8.0, 1.0, 2.0), (2.0, 9.0, 4.0, 4.0)],
    ];
    let mut out = Vec::new();
    for g in &graphs {
        for f in enumerate_floorplans(g, EnumOptions::default()).unwrap() {
            let rects: Vec<Rect> = f.parts().iter().map(|p| p.2).collect();
            let st = arrangement_stgraphs(&rects, &f.bbox);
            for t in tables {
                let bounds = (0..st.count)
                    .map(|i| {
                        let (a, b, c, d) = t[i];
                        SizeBounds::new(a, b, c, d)
                    })
                    .collect();
                out.push(LpFixture { st: st.clone(), bounds });
            }
        }
    }
    out
}

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("r{i}")).collect()
}

/// Conservation on each part: walls below (or the box floor) add up to the
/// width, walls above to the width, walls left and right to the height.
fn conservation_residual(rects: &[Rect], bbox: &Rect) -> f64 {
    let ov = |a0: f64, a1: f64, b0: f64, b1: f64| (a1.min(b1) - a0.max(b0)).max(0.0);
    let near = |a: f64, b: f64| (a - b).abs() < 1e-7;
    let mut worst: f64 = 0.0;
    for p in rects {
        let mut s = [0.0f64; 4];
        for q in rects {
            if near(q.y + q.h, p.y) {
                s[0] += ov(p.x, p.x + p.w, q.x, q.x + q.w);
            }
            if near(q.y, p.y + p.h) {
                s[1] += ov(p.x, p.x + p.w, q.x, q.x + q.w);
            }
            if near(q.x + q.w, p.x) {
                s[2] += ov(p.y, p.y + p.h, q.y, q.y + q.h);
            }
            if near(q.x, p.x + p.w) {
                s[3] += ov(p.y, p.y + p.h, q.y, q.y + q.h);
            }
        }
        if near(p.y, bbox.y) {
            s[0] += p.w;
        }
        if near(p.y + p.h, bbox.y + bbox.h) {
            s[1] += p.w;
        }
        if near(p.x, bbox.x) {
            s[2] += p.h;
        }
        if near(p.x + p.w, bbox.x + bbox.w) {
            s[3] += p.h;
        }
        for (k, v) in s.iter().enumerate() {
            let want = if k < 2 { p.w } else { p.h };
            worst = worst.max((v - want).abs());
        }
    }
    worst
}

fn dimensioning(r: &mut Report) {
    let eps = 0.5;
    let mut lps = 0;
    let mut worst_gap: f64 = 0.0;
    let mut worst_flow: f64 = 0.0;
    let mut bounds_ok = true;
    let mut feasible = 0;
    for fx in lp_fixtures() {
        let nm = names(fx.st.count);
        for axis in [Axis::X, Axis::Y] {
            let alp = build_axis_lp(&fx.st, &fx.bounds, &nm, axis, eps, Objective::Slack);
            assert!(alp.lp.var_count() <= 8);
            lps += 1;
            let oracle = vertex_enumeration(&alp.lp);
            match (solve_axis_lp(&alp), oracle) {
                (Ok(s), Some(o)) => worst_gap = worst_gap.max((s.objective - alp.offset - o).abs()),
                (Err(_), None) => {}
                _ => worst_gap = f64::INFINITY,
            }
        }
        if let Ok((rects, bbox)) = dimension_st(&fx.st, &fx.bounds, &nm, eps) {
            feasible += 1;
            for (p, b) in rects.iter().zip(&fx.bounds) {
                bounds_ok &= p.w >= b.wmin - 1e-6 && p.w <= b.wmax + 1e-6;
                bounds_ok &= p.h >= b.hmin - 1e-6 && p.h <= b.hmax + 1e-6;
            }
            worst_flow = worst_flow.max(conservation_residual(&rects, &bbox));
        }
    }
    let stacked = StGraphs {
        count: 2,
        t1: vec![(0, 1)],
        south: vec![0],
        north: vec![1],
        west: vec![0, 1],
        east: vec![0, 1],
        ..Default::default()
    };
    let disjoint = [SizeBounds::new(1.0, 2.0, 1.0, 2.0), SizeBounds::new(5.0, 6.0, 1.0, 2.0)];
    let infeasible = matches!(
        dimension_st(&stacked, &disjoint, &names(2), eps),
        Err(DimError::Infeasible { axis: Axis::X, .. })
    );
    r.line(
        "dimensioning against vertex enumeration",
        worst_gap <= 1e-6 && worst_flow <= 1e-6 && bounds_ok && infeasible && feasible > 0,
        format!(
            "{lps} programs, max gap {worst_gap:.1e}, {feasible} feasible, max flow residual {worst_flow:.1e}, stacked pair infeasible on x: {infeasible}"
        ),
    );
}

fn objective_offset(r: &mut Report) {
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    for fx in lp_fixtures() {
        let nm = names(fx.st.count);
        for axis in [Axis::X, Axis::Y] {
            let a = solve_axis_lp(&build_axis_lp(&fx.st, &fx.bounds, &nm, axis, 0.5, Objective::Slack));
            let b = solve_axis_lp(&build_axis_lp(&fx.st, &fx.bounds, &nm, axis, 0.5, Objective::Sum));
            let max: f64 = fx
                .bounds
                .iter()
                .map(|s| if axis == Axis::X { s.wmax } else { s.hmax })
                .sum();
            match (a, b) {
                (Ok(a), Ok(b)) => {
                    checked += 1;
                    worst = worst.max((b.objective - a.objective - max).abs());
                }
                (Err(_), Err(_)) => {}
                _ => worst = f64::INFINITY,
            }
        }
    }
    r.line(
        "objective offset",
        checked > 0 && worst <= 1e-9,
        format!("{checked} feasible programs, max deviation {worst:.1e}"),
    );
}

/// Smallest number of rectangles tiling `cells` (a bit set on a 4x4 grid).
fn exhaustive_partition(cells: u16) -> usize {
    fn go(left: u16, used: usize, best: &mut usize) {
        if left == 0 {
            *best = (*best).min(used);
            return;
        }
        if used + 1 >= *best {
            return;
        }
        // lowest row first, then leftmost: that cell is a rectangle's corner
        let first = left.trailing_zeros() as usize;
        let (x0, y0) = (first % 4, first / 4);
        for h in 1..=4 - y0 {
            for w in 1..=4 - x0 {
                let mut mask = 0u16;
                for y in y0..y0 + h {
                    for x in x0..x0 + w {
                        mask |= 1 << (y * 4 + x);
                    }
                }
                if left & mask == mask {
                    go(left & !mask, used + 1, best);
                }
            }
        }
    }
    let mut best = usize::MAX;
    go(cells, 0, &mut best);
    best
}

fn is_simple_polyomino(cells: u16) -> bool {
    let on = |x: i32, y: i32| (0..4).contains(&x) && (0..4).contains(&y) && cells & (1 << (y * 4 + x)) != 0;
    // connected
    let start = cells.trailing_zeros() as i32;
    let mut seen = 1u16 << start;
    let mut stack = vec![(start % 4, start / 4)];
    while let Some((x, y)) = stack.pop() {
        for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
            let (nx, ny) = (x + dx, y + dy);
            if on(nx, ny) && seen & (1 << (ny * 4 + nx)) == 0 {
                seen |= 1 << (ny * 4 + nx);
                stack.push((nx, ny));
            }
        }
    }
    if seen != cells {
        return false;
    }
    // every empty cell reaches the outside
    let mut outside = [[false; 6]; 6];
    let mut stack = vec![(0i32, 0i32)];
    outside[0][0] = true;
    while let Some((x, y)) = stack.pop() {
        for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
            let (nx, ny) = (x + dx, y + dy);
            if !(0..6).contains(&nx) || !(0..6).contains(&ny) || outside[ny as usize][nx as usize] {
                continue;
            }
            if on(nx - 1, ny - 1) {
                continue;
            }
            outside[ny as usize][nx as usize] = true;
            stack.push((nx, ny));
        }
    }
    for y in 0..4 {
        for x in 0..4 {
            if !on(x, y) && !outside[(y + 1) as usize][(x + 1) as usize] {
                return false;
            }
        }
    }
    // no two cells meeting only at a corner
    for y in -1..4 {
        for x in -1..4 {
            let (a, b, c, d) = (on(x, y), on(x + 1, y), on(x, y + 1), on(x + 1, y + 1));
            if (a && d && !b && !c) || (b && c && !a && !d) {
                return false;
            }
        }
    }
    true
}

fn min_partition(r: &mut Report) {
    let mut shapes = 0;
    let mut mismatches = 0;
    for cells in 1..=u16::MAX {
        if !is_simple_polyomino(cells) {
            continue;
        }
        shapes += 1;
        let list: Vec<(usize, usize)> = (0..16).filter(|i| cells & (1 << i) != 0).map(|i| (i % 4, i / 4)).collect();
        let parts = min_rect_partition(&list);
        let mut cover = 0u16;
        let mut disjoint = true;
        for p in &parts {
            for y in p.y..p.y + p.h {
                for x in p.x..p.x + p.w {
                    let bit = 1u16 << (y * 4 + x);
                    disjoint &= cover & bit == 0;
                    cover |= bit;
                }
            }
        }
        if !disjoint || cover != cells || parts.len() != exhaustive_partition(cells) {
            mismatches += 1;
        }
    }
    r.line(
        "minimum rectangle partition on a 4x4 grid",
        mismatches == 0 && shapes > 0,
        format!("{shapes} shapes, {mismatches} mismatches"),
    );
}

fn irregular_layout(r: &mut Report) {
    let layout = parse_layout(LAYOUT).unwrap();
    let bounds = parse_bounds(BOUNDS).unwrap();
    let (res, t) = timed(|| dimension_ifp(&layout, &bounds, 1.0));
    let Ok(f) = res else {
        r.line("irregular ten-room layout", false, format!("{:?}", res.err()));
        return;
    };
    let mut in_bounds = true;
    for room in &f.rooms {
        for (pi, p) in room.rects.iter().enumerate() {
            let key = if room.rects.len() == 1 { room.id.clone() } else { format!("{}/{pi}", room.id) };
            if let Some(b) = bounds.get(&key) {
                in_bounds &= p.w >= b.wmin - 1e-6 && p.w <= b.wmax + 1e-6;
                in_bounds &= p.h >= b.hmin - 1e-6 && p.h <= b.hmax + 1e-6;
            }
        }
    }
    let no_pads = f.rooms.iter().all(|r| !r.extra) && f.rooms.len() == layout.rooms.len();
    let drawn: BTreeSet<(String, String)> = layout
        .adjacencies()
        .into_iter()
        .map(|(a, b)| ordered(&layout.rooms[a], &layout.rooms[b]))
        .collect();
    let (side, stacked) = geometric_adjacency(&f);
    let got: BTreeSet<(String, String)> = side
        .union(&stacked)
        .map(|&(a, b)| ordered(&f.rooms[a].id, &f.rooms[b].id))
        .collect();
    let kept = got == drawn;
    r.line(
        "irregular ten-room layout",
        in_bounds && no_pads && kept && t < Duration::from_secs(1),
        format!(
            "bounds {in_bounds}, no padding {no_pads}, {} of {} adjacencies, {}",
            got.intersection(&drawn).count(),
            drawn.len(),
            ms(t)
        ),
    );
}

fn ordered(a: &str, b: &str) -> (String, String) {
    if a < b {
        (a.into(), b.into())
    } else {
        (b.into(), a.into())
    }
}

fn throughput(r: &mut Report) {
    let g = ten_rooms();
    let opts = EnumOptions {
        limit: Some(100),
        ..Default::default()
    };
    let (fs, t) = timed(|| enumerate_floorplans(&g, opts).map(|s| s.collect::<Vec<_>>()));
    let fs = fs.unwrap_or_default();
    let valid = fs.iter().filter(|f| check_floorplan(f, &g).is_ok()).count();
    let distinct: BTreeSet<LayoutKey> = fs.iter().map(LayoutKey::of_floorplan).collect();
    r.line(
        "ten-room throughput",
        valid >= 100 && distinct.len() == fs.len() && t < Duration::from_secs(10),
        format!("{valid} valid distinct layouts in {:.2} s", t.as_secs_f64()),
    );
}
