//! Post-processing of hand-written text recognition output for civil-registry
//! death certificates: corpus inventory, document ingestion, entity
//! extraction, lexicon-based name correction, record linking and evaluation.

pub mod document;
pub mod extract;
pub mod inventory;
pub mod lexicon;
pub mod text;
pub mod linking;
pub mod eval;
pub mod jsonio;
pub mod pipeline;
pub mod synth;
