//! Explicit Semantic Analysis: texts become weighted vectors over the
//! articles of a knowledge base, compared by cosine.

pub mod index;
pub mod select;
pub mod text;

pub use index::{build_index, BuildOptions, EsaIndex, IndexOptions, InterpretationVector};
pub use select::{select_intersection_concepts, select_random_concepts, KbMember, KnowledgeBase, SelectionDescriptor};
pub use text::{Stemmer, TextPipeline};
