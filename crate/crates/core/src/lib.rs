//! Topic modeling toolkit for diachronic corpora.
//!
//! The pipeline runs from raw documents to per-period topic trajectories:
//!
//! 1. [`ingest`] loads corpora and drops documents written in a foreign language.
//! 2. [`preprocess`] reduces documents to lemma lists and builds a bag-of-words corpus.
//! 3. [`lda`] trains a topic model by collapsed Gibbs sampling.
//! 4. [`diachrony`] bins documents into time slots and averages topic probabilities per slot.
//! 5. [`align`] scores topic pairs between two models through a bilingual lexicon.
//!
//! [`chart`] renders the resulting series as standalone SVG.

pub mod align;
pub mod chart;
pub mod diachrony;
mod error;
pub mod ingest;
pub mod lda;
pub mod preprocess;
pub mod rng;
pub mod synth;

pub use error::{Error, ErrorKind, Result};
