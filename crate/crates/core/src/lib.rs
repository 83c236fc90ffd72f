//! Question answering over dependency graphs enriched with derivational
//! morphology.
//!
//! The crate builds a sense-aware derivational resource from a machine
//! dictionary ([`morphogen`], [`derivfilter`]), parses and disambiguates a
//! text base ([`depgraph`], [`wsd`]), simulates rephrasings of every
//! sentence with synonyms and derivation patterns ([`rephrase`]) and
//! answers questions by matching their dependencies ([`qaengine`]).

pub mod config;
pub mod depgraph;
pub mod derivfilter;
pub mod error;
pub mod exec;
pub mod lexica;
pub mod morphogen;
pub mod pipeline;
pub mod qaengine;
pub mod rephrase;
pub mod wsd;

pub use config::PipelineConfig;
pub use error::{Error, Result};
pub use exec::Execution;
pub use pipeline::Pipeline;
