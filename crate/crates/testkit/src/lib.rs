//! Test support: a naive reference reasoner and random ontology generation.

pub mod gen;
pub mod oracle;
pub mod reference;

pub use gen::{query_expressions, random_assertion, random_ontology};
pub use oracle::NaiveReasoner;
pub use reference::{reference_expressions, reference_recommendation, reference_visible};
