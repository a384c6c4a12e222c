//! Cross-language concept alignment over the interlanguage-link graph.

mod concept;
mod graph;
pub mod store;

pub use concept::{
    adjust_single_language_fraction, clarity, concept_align, concepts_from_components, AlignStats, Concept, ConceptId,
    ConceptTable, Member,
};
pub use graph::{build_ill_graph, GraphStats, IllGraph, Node};
