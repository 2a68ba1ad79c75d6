use super::{AugmentedGraph, RegularEdgeLabelling};
use crate::dimension::{dimension_st, SizeBounds, StGraphs, LARGE};
use crate::floorplan::{Floorplan, Provenance, Rect, Room};

/// Room-to-room arcs of each family plus the rooms on each side.
pub fn rel_to_stgraphs(rel: &RegularEdgeLabelling) -> StGraphs {
    let n = rel.rooms;
    let (pn, pe, ps, pw) = (n, n + 1, n + 2, n + 3);
    let mut st = StGraphs {
        count: n,
        ..Default::default()
    };
    for &(a, b) in &rel.t1 {
        if a < n && b < n {
            st.t1.push((a, b));
        } else if b == pn {
            st.north.push(a);
        } else if a == ps {
            st.south.push(b);
        }
    }
    for &(a, b) in &rel.t2 {
        if a < n && b < n {
            st.t2.push((a, b));
        } else if b == pe {
            st.east.push(a);
        } else if a == pw {
            st.west.push(b);
        }
    }
    st
}

/// Dimensionless rectangles for a labelling: every room between 1 and n
/// units on each side, shared walls at least one unit long.
pub fn realize_rectangles(aug: &AugmentedGraph, rel: &RegularEdgeLabelling) -> Floorplan {
    let st = rel_to_stgraphs(rel);
    let n = rel.rooms;
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let tight = vec![SizeBounds::square(1.0, n.max(1) as f64); n];
    let (rects, bbox) = dimension_st(&st, &tight, &names, 1.0)
        .or_else(|_| {
            let loose = vec![SizeBounds::square(1.0, LARGE); n];
            dimension_st(&st, &loose, &names, 1.0)
        })
        .expect("a regular edge labelling always has a realization");
    let g = aug.emb.graph();
    let rooms = rects
        .into_iter()
        .enumerate()
        .map(|(i, r)| Room {
            id: i.to_string(),
            label: g.label(i).map(String::from),
            rects: vec![r],
            extra: false,
            merged: false,
        })
        .collect();
    Floorplan {
        rooms,
        bbox,
        provenance: Provenance {
            corners: aug.corners.corners.to_vec(),
            rel_hash: rel.hash_hex(),
            transform: Vec::new(),
        },
    }
}

/// A one-room floorplan of the given size.
pub fn room_floorplan(id: &str, w: f64, h: f64) -> Floorplan {
    Floorplan {
        rooms: vec![Room {
            id: id.to_string(),
            label: None,
            rects: vec![Rect::new(0.0, 0.0, w, h)],
            extra: false,
            merged: false,
        }],
        bbox: Rect::new(0.0, 0.0, w, h),
        provenance: Provenance::default(),
    }
}
