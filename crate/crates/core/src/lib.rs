//! Corpus perturbation and minimal-pair evaluation.
//!
//! The pipeline reads annotated corpora, applies the REPLACE.WORD and
//! SHUFFLE.ORDER training-data ablations, trains Kneser–Ney n-gram models,
//! generates semantic and agreement minimal pairs, scores them, and
//! summarizes accuracy with regressions and training trajectories.

pub mod analysis;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod experiment;
pub mod ingest;
pub mod pairgen;
pub mod perturb;
pub mod rng;
pub mod scorer;
pub mod stats;
pub mod tagger;

pub use error::{Error, Result};
