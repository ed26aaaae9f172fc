//! Ontology-driven decision support.
//!
//! Ontologies are written in a small functional text format, classified by
//! an EL saturation reasoner, and used to recommend the most specific
//! treatments for an edited instance and to generate the form describing
//! which fields to show for it.

pub mod decision;
pub mod error;
pub mod form;
pub mod ontology;
pub mod portal;
pub mod query;
pub mod reasoner;

pub use error::{Error, ModelError, ParseError, Result};
