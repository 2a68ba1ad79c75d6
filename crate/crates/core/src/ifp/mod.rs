//! Dimensioned irregular floorplans from a drawn raster layout.
//!
//! Rooms are split into as few rectangles as possible, the empty part of
//! the bounding box is filled with padding rectangles, the whole tiling is
//! dimensioned like a rectangular floorplan, and the padding is dropped.

mod partition;

pub use partition::{min_rect_partition, CellRect};

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::dimension::{arrangement_stgraphs, dimension_floorplan, BoundsTable, DimError, StGraphs};
use crate::floorplan::{Floorplan, Provenance, Rect, Room};

pub const EMPTY: char = '.';

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LayoutError {
    #[error("layout has no rooms")]
    EmptyLayout,
    #[error("room {0} is not connected")]
    DisconnectedRoom(String),
    #[error("room {0} encloses empty cells")]
    RoomWithHole(String),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IfpError {
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error(transparent)]
    Dimension(#[from] DimError),
}

/// A raster of room cells. Cell `(x, y)` has `y = 0` on the bottom row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridLayout {
    pub width: usize,
    pub height: usize,
    /// Room index per cell, row-major from the bottom row.
    pub cells: Vec<Option<usize>>,
    /// Room ids in order of first appearance, reading from the top row.
    pub rooms: Vec<String>,
}

impl GridLayout {
    pub fn at(&self, x: usize, y: usize) -> Option<usize> {
        self.cells[y * self.width + x]
    }

    pub fn room_cells(&self, room: usize) -> Vec<(usize, usize)> {
        (0..self.height)
            .flat_map(|y| (0..self.width).map(move |x| (x, y)))
            .filter(|&(x, y)| self.at(x, y) == Some(room))
            .collect()
    }

    /// Room index pairs sharing at least one cell side.
    pub fn adjacencies(&self) -> Vec<(usize, usize)> {
        let mut out = std::collections::BTreeSet::new();
        for y in 0..self.height {
            for x in 0..self.width {
                let Some(a) = self.at(x, y) else { continue };
                for (nx, ny) in [(x + 1, y), (x, y + 1)] {
                    if nx < self.width && ny < self.height {
                        if let Some(b) = self.at(nx, ny) {
                            if a != b {
                                out.insert((a.min(b), a.max(b)));
                            }
                        }
                    }
                }
            }
        }
        out.into_iter().collect()
    }
}

/// Reads a raster: optional legend lines `c=id` first, then one line per
/// row, top row first, one character per cell, `.` for empty. Blank lines
/// and lines starting with `#` are skipped.
pub fn parse_layout(text: &str) -> Result<GridLayout, LayoutError> {
    let mut legend: HashMap<char, String> = HashMap::new();
    let mut rows: Vec<(usize, Vec<char>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim_end();
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some((k, v)) = line.split_once('=') {
            let mut ks = k.trim().chars();
            let (Some(c), None) = (ks.next(), ks.next()) else {
                return Err(LayoutError::Syntax {
                    line: i + 1,
                    msg: "legend key must be one character".into(),
                });
            };
            if !rows.is_empty() {
                return Err(LayoutError::Syntax {
                    line: i + 1,
                    msg: "legend after grid rows".into(),
                });
            }
            if c == EMPTY || v.trim().is_empty() {
                return Err(LayoutError::Syntax {
                    line: i + 1,
                    msg: format!("bad legend entry for {c:?}"),
                });
            }
            legend.insert(c, v.trim().to_string());
            continue;
        }
        rows.push((i + 1, line.chars().collect()));
    }
    let height = rows.len();
    let width = rows.iter().map(|r| r.1.len()).max().unwrap_or(0);
    if let Some((line, _)) = rows.iter().find(|r| r.1.len() != width) {
        return Err(LayoutError::Syntax {
            line: *line,
            msg: format!("row width differs from {width}"),
        });
    }
    let mut rooms: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut cells = vec![None; width * height];
    for (r, (line, chars)) in rows.iter().enumerate() {
        let y = height - 1 - r;
        for (x, &c) in chars.iter().enumerate() {
            if c == EMPTY {
                continue;
            }
            if c.is_whitespace() {
                return Err(LayoutError::Syntax {
                    line: *line,
                    msg: "whitespace inside a row".into(),
                });
            }
            let id = legend.get(&c).cloned().unwrap_or_else(|| c.to_string());
            let k = *index.entry(id.clone()).or_insert_with(|| {
                rooms.push(id);
                rooms.len() - 1
            });
            cells[y * width + x] = Some(k);
        }
    }
    let layout = GridLayout {
        width,
        height,
        cells,
        rooms,
    };
    validate(&layout)?;
    Ok(layout)
}

/// Cells reachable by side steps from `start` within `allowed`; the grid is
/// padded by one cell on every side, so coordinates are shifted by one.
fn flood(w: usize, h: usize, start: (usize, usize), allowed: impl Fn(usize, usize) -> bool) -> Vec<bool> {
    let mut seen = vec![false; w * h];
    seen[start.1 * w + start.0] = true;
    let mut stack = vec![start];
    while let Some((x, y)) = stack.pop() {
        let mut nb = Vec::with_capacity(4);
        if x > 0 {
            nb.push((x - 1, y));
        }
        if y > 0 {
            nb.push((x, y - 1));
        }
        if x + 1 < w {
            nb.push((x + 1, y));
        }
        if y + 1 < h {
            nb.push((x, y + 1));
        }
        for (a, b) in nb {
            if !seen[b * w + a] && allowed(a, b) {
                seen[b * w + a] = true;
                stack.push((a, b));
            }
        }
    }
    seen
}

pub fn validate(l: &GridLayout) -> Result<(), LayoutError> {
    if l.cells.iter().all(|c| c.is_none()) {
        return Err(LayoutError::EmptyLayout);
    }
    let (w, h) = (l.width + 2, l.height + 2);
    let room_at = |x: usize, y: usize| {
        if x == 0 || y == 0 || x > l.width || y > l.height {
            None
        } else {
            l.at(x - 1, y - 1)
        }
    };
    for (k, id) in l.rooms.iter().enumerate() {
        let cells = l.room_cells(k);
        let (sx, sy) = cells[0];
        let reach = flood(w, h, (sx + 1, sy + 1), |x, y| room_at(x, y) == Some(k));
        if cells.iter().any(|&(x, y)| !reach[(y + 1) * w + x + 1]) {
            return Err(LayoutError::DisconnectedRoom(id.clone()));
        }
        let outside = flood(w, h, (0, 0), |x, y| room_at(x, y) != Some(k));
        let holed = (0..h).any(|y| {
            (0..w).any(|x| !outside[y * w + x] && room_at(x, y).is_none())
        });
        if holed {
            return Err(LayoutError::RoomWithHole(id.clone()));
        }
    }
    Ok(())
}

/// Rectangles of every room, in cell units.
pub fn partition_rooms(l: &GridLayout) -> Vec<Vec<CellRect>> {
    (0..l.rooms.len())
        .map(|k| min_rect_partition(&l.room_cells(k)))
        .collect()
}

/// Rectangles filling the empty cells of the bounding box, one padding room
/// each.
pub fn padding(l: &GridLayout) -> Vec<CellRect> {
    let (w, h) = (l.width, l.height);
    let mut done = vec![false; w * h];
    let mut out = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if done[y * w + x] || l.at(x, y).is_some() {
                continue;
            }
            let reach = flood(w, h, (x, y), |a, b| l.at(a, b).is_none());
            let comp: Vec<(usize, usize)> = (0..w * h)
                .filter(|&i| reach[i])
                .map(|i| (i % w, i / w))
                .collect();
            for &(a, b) in &comp {
                done[b * w + a] = true;
            }
            out.extend(min_rect_partition(&comp));
        }
    }
    out.sort();
    out
}

fn to_rect(c: &CellRect) -> Rect {
    Rect::new(c.x as f64, c.y as f64, c.w as f64, c.h as f64)
}

/// The layout as a rectangular tiling: real rooms split into parts plus
/// padding rooms `pad0, pad1, ...` flagged as extra.
pub fn pad_to_rectangle(l: &GridLayout) -> Floorplan {
    let mut rooms: Vec<Room> = partition_rooms(l)
        .iter()
        .zip(&l.rooms)
        .map(|(parts, id)| Room {
            id: id.clone(),
            label: None,
            rects: parts.iter().map(to_rect).collect(),
            extra: false,
            merged: false,
        })
        .collect();
    for (i, p) in padding(l).iter().enumerate() {
        rooms.push(Room {
            id: format!("pad{i}"),
            label: None,
            rects: vec![to_rect(p)],
            extra: true,
            merged: false,
        });
    }
    Floorplan {
        rooms,
        bbox: Rect::new(0.0, 0.0, l.width as f64, l.height as f64),
        provenance: Provenance::default(),
    }
}

/// St-graphs over all parts of a padded tiling, in [`Floorplan::parts`]
/// order.
pub fn arrangement_to_stgraphs(f: &Floorplan) -> StGraphs {
    let rects: Vec<Rect> = f.parts().iter().map(|p| p.2).collect();
    arrangement_stgraphs(&rects, &f.bbox)
}

/// Sizes a drawn layout within `bounds` (keyed by room id, or "id/part"
/// for rooms drawn as several rectangles) and returns it without padding.
pub fn dimension_ifp(l: &GridLayout, bounds: &BoundsTable, eps: f64) -> Result<Floorplan, IfpError> {
    validate(l)?;
    let padded = pad_to_rectangle(l);
    let sized = dimension_floorplan(&padded, bounds, eps)?;
    let rooms: Vec<Room> = sized.rooms.into_iter().filter(|r| !r.extra).collect();
    let mut bbox: Option<(f64, f64, f64, f64)> = None;
    for r in rooms.iter().flat_map(|r| &r.rects) {
        let b = bbox.get_or_insert((r.x, r.y, r.right(), r.top()));
        *b = (b.0.min(r.x), b.1.min(r.y), b.2.max(r.right()), b.3.max(r.top()));
    }
    let (x0, y0, x1, y1) = bbox.unwrap();
    Ok(Floorplan {
        rooms,
        bbox: Rect::new(x0, y0, x1 - x0, y1 - y0),
        provenance: Provenance::default(),
    })
}

/// Part count per room id, for building bounds tables.
pub fn part_counts(l: &GridLayout) -> BTreeMap<String, usize> {
    partition_rooms(l)
        .iter()
        .zip(&l.rooms)
        .map(|(p, id)| (id.clone(), p.len()))
        .collect()
}
