//! JSON documents for graphs, bounds and floorplans, and SVG output.

mod svg;

pub use svg::{emit_svg, SvgOptions};

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dimension::{BoundsTable, SizeBounds};
use crate::floorplan::Floorplan;
use crate::graph::{AdjacencyGraph, GraphError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("room id {0:?} appears twice")]
    DuplicateId(String),
    #[error("edge refers to unknown room {0:?}")]
    UnknownId(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("bad bounds for {0:?}: need 0 <= min <= max")]
    BadBounds(String),
}

/// Room id written either as a string or as a bare number.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum IdRepr {
    Text(String),
    Number(u64),
}

impl From<IdRepr> for String {
    fn from(v: IdRepr) -> String {
        match v {
            IdRepr::Text(s) => s,
            IdRepr::Number(n) => n.to_string(),
        }
    }
}

fn id_from<'de, D: serde::Deserializer<'de>>(d: D) -> Result<String, D::Error> {
    IdRepr::deserialize(d).map(String::from)
}

fn pair_from<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Vec<[String; 2]>, D::Error> {
    let raw: Vec<[IdRepr; 2]> = Vec::deserialize(d)?;
    Ok(raw
        .into_iter()
        .map(|[a, b]| [String::from(a), String::from(b)])
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoomEntry {
    #[serde(deserialize_with = "id_from")]
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub rooms: Vec<RoomEntry>,
    #[serde(deserialize_with = "pair_from")]
    pub edges: Vec<[String; 2]>,
}

impl GraphDocument {
    /// Rooms `0..n` with numeric ids.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> GraphDocument {
        GraphDocument {
            rooms: (0..n)
                .map(|i| RoomEntry {
                    id: i.to_string(),
                    label: None,
                })
                .collect(),
            edges: edges
                .iter()
                .map(|&(a, b)| [a.to_string(), b.to_string()])
                .collect(),
        }
    }

    pub fn parse(text: &str) -> Result<GraphDocument, FormatError> {
        let doc: GraphDocument = serde_json::from_str(text)?;
        doc.to_graph()?;
        Ok(doc)
    }

    /// The graph with vertex `i` standing for `rooms[i]`.
    pub fn to_graph(&self) -> Result<AdjacencyGraph, FormatError> {
        let mut index = HashMap::new();
        for (i, r) in self.rooms.iter().enumerate() {
            if index.insert(r.id.as_str(), i).is_some() {
                return Err(FormatError::DuplicateId(r.id.clone()));
            }
        }
        let mut edges = Vec::with_capacity(self.edges.len());
        for [a, b] in &self.edges {
            let ia = *index.get(a.as_str()).ok_or_else(|| FormatError::UnknownId(a.clone()))?;
            let ib = *index.get(b.as_str()).ok_or_else(|| FormatError::UnknownId(b.clone()))?;
            edges.push((ia, ib));
        }
        let labels = self.rooms.iter().map(|r| r.label.clone()).collect();
        Ok(AdjacencyGraph::with_labels(self.rooms.len(), &edges, labels)?)
    }

    pub fn ids(&self) -> Vec<String> {
        self.rooms.iter().map(|r| r.id.clone()).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph documents serialize")
    }
}

pub type BoundsDocument = BoundsTable;

pub fn parse_bounds(text: &str) -> Result<BoundsDocument, FormatError> {
    let b: BoundsDocument = serde_json::from_str(text)?;
    check_bounds(&b)?;
    Ok(b)
}

pub fn check_bounds(b: &BoundsDocument) -> Result<(), FormatError> {
    match b.iter().find(|(_, v)| !SizeBounds::is_valid(v)) {
        Some((k, _)) => Err(FormatError::BadBounds(k.clone())),
        None => Ok(()),
    }
}

pub type FloorplanDocument = Floorplan;

pub fn parse_floorplan(text: &str) -> Result<FloorplanDocument, FormatError> {
    Ok(serde_json::from_str(text)?)
}

pub fn floorplan_json(f: &FloorplanDocument) -> String {
    serde_json::to_string_pretty(f).expect("floorplans serialize")
}

/// Replaces vertex-index room ids ("0", "1", ...) by the document's ids and
/// fills in missing labels.
pub fn with_room_ids(mut f: Floorplan, doc: &GraphDocument) -> Floorplan {
    for r in f.rooms.iter_mut() {
        let Ok(i) = r.id.parse::<usize>() else { continue };
        if let Some(entry) = doc.rooms.get(i) {
            r.id = entry.id.clone();
            if r.label.is_none() {
                r.label = entry.label.clone();
            }
        }
    }
    f
}
