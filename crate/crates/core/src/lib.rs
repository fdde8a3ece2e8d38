//! Saturation numbers of complete tripartite patterns in tripartite hosts.

mod bits;
pub mod constructions;
pub mod containment;
pub mod formulas;
pub mod graph;
pub mod search;
pub mod verifier;

pub use containment::{contains, contains_after, contains_naive, Embedding, PatternSpec};
pub use graph::{Edge, PartSizes, TripartiteGraph, VertexRef};
