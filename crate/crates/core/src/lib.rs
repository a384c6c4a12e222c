//! Multilingual concept alignment, knowledge-diversity census, sub-concept
//! overlap and Explicit Semantic Analysis relatedness over Wikipedia-style
//! dumps.
//!
//! The pipeline runs in stages, each persisting its output:
//!
//! 1. [`ingest`] parses a dump into an [`ArticleSet`] and resolves redirects.
//! 2. [`align`] builds the interlanguage-link graph and labels its connected
//!    components as concepts ([`ConceptTable`]).
//! 3. [`census`] measures concept coverage across languages; [`oc`] measures
//!    outlink agreement between articles on the same concept.
//! 4. [`esa`] builds per-language relatedness indices and [`experiment`]
//!    correlates their scores across languages.
//!
//! [`synth`] generates seeded corpora with a ground-truth ledger for testing
//! every stage.

pub mod align;
pub mod census;
pub mod config;
pub mod error;
pub mod esa;
pub mod experiment;
pub mod ingest;
pub mod lang;
pub mod manifest;
pub mod oc;
pub mod scalar;
pub mod stats;
pub mod synth;

pub use align::{Concept, ConceptId, ConceptTable};
pub use config::ToolConfig;
pub use error::{Error, Result};
pub use ingest::{Article, ArticleKind, ArticleSet};
pub use lang::{ArticleRef, LanguageCode};
pub use scalar::Scalar;

/// Double-precision ESA index, the default for reports.
pub type EsaIndex = esa::EsaIndex<f64>;
/// Single-precision ESA index for large knowledge bases.
pub type EsaIndexF32 = esa::EsaIndex<f32>;
pub type InterpretationVector = esa::InterpretationVector<f64>;
