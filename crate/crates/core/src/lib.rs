//! Floorplan synthesis from room-adjacency graphs.
//!
//! The pipeline: check that the graph admits a rectangular dual, pick
//! corners and add the four poles, label edges into horizontal and vertical
//! families, realize rectangles, and size them with a pair of linear
//! programs. Graphs without a rectangular dual are routed through extra
//! rooms that are later merged into orthogonal rooms.

pub mod dimension;
pub mod embedding;
pub mod enumerate;
pub mod floorplan;
pub mod formats;
pub mod graph;
pub mod ifp;
pub mod rectdual;
pub mod structure;

pub use embedding::{planar_embed, EmbedError, PlanarEmbedding};
pub use graph::{AdjacencyGraph, Edge, GraphError};
pub use structure::{rfp_check, Reason, StructureReport};
