use thiserror::Error;

use super::transform::ExtraVertex;
use crate::floorplan::{is_simple_union, weak_dual, Floorplan, Room, TransformStep};
use crate::graph::AdjacencyGraph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MergeRejected {
    #[error("room {0} would not be a simple rectilinear polygon")]
    NotSimple(String),
    #[error("merged rooms do not reproduce the input adjacencies")]
    AdjacencyChanged,
    #[error("merge choice does not match the extra rooms")]
    BadChoice,
}

/// Final room of every vertex when extra vertex `extras[i]` goes to its
/// candidate `choice[i]`. Chains through earlier extras are followed.
pub fn merge_targets(rooms: usize, extras: &[ExtraVertex], choice: &[usize]) -> Option<Vec<usize>> {
    if extras.len() != choice.len() {
        return None;
    }
    let total = rooms + extras.len();
    let mut target: Vec<usize> = (0..total).collect();
    for (x, &c) in extras.iter().zip(choice) {
        if x.id >= total || c > 1 {
            return None;
        }
        target[x.id] = x.candidates()[c];
    }
    for v in 0..total {
        let mut t = target[v];
        while t >= rooms {
            t = target[t];
        }
        target[v] = t;
    }
    Some(target)
}

/// Merges every extra room of `f` into its chosen candidate. `original`
/// is the input graph; merged rooms must be simple and must reproduce it.
pub fn merge_with(
    f: &Floorplan,
    original: &AdjacencyGraph,
    extras: &[ExtraVertex],
    choice: &[usize],
) -> Result<Floorplan, MergeRejected> {
    let n = original.vertex_count();
    let target = merge_targets(n, extras, choice).ok_or(MergeRejected::BadChoice)?;
    if f.rooms.len() != target.len() {
        return Err(MergeRejected::BadChoice);
    }
    let mut rooms: Vec<Room> = f.rooms[..n].to_vec();
    for (v, room) in f.rooms.iter().enumerate().skip(n) {
        let t = &mut rooms[target[v]];
        t.rects.extend(room.rects.iter().copied());
        t.merged = true;
    }
    for r in rooms.iter().filter(|r| r.merged) {
        if !is_simple_union(&r.rects) {
            return Err(MergeRejected::NotSimple(r.id.clone()));
        }
    }
    if weak_dual(&rooms).edges() != original.edges() {
        return Err(MergeRejected::AdjacencyChanged);
    }
    let mut provenance = f.provenance.clone();
    provenance.transform = extras
        .iter()
        .zip(choice)
        .map(|(x, &c)| TransformStep {
            extra: x.id,
            edge: x.edge,
            merged_into: Some(x.candidates()[c]),
        })
        .collect();
    Ok(Floorplan {
        rooms,
        bbox: f.bbox,
        provenance,
    })
}

/// All merge choices in order, skipping rejected ones.
pub fn merge_extra_rooms(
    f: &Floorplan,
    original: &AdjacencyGraph,
    extras: &[ExtraVertex],
) -> Vec<Floorplan> {
    (0..1usize << extras.len())
        .filter_map(|bits| merge_with(f, original, extras, &choice_bits(bits, extras.len())).ok())
        .collect()
}

/// Choice vector for the `bits`-th merge assignment; the first extra varies
/// slowest.
pub fn choice_bits(bits: usize, len: usize) -> Vec<usize> {
    (0..len).map(|i| (bits >> (len - 1 - i)) & 1).collect()
}
