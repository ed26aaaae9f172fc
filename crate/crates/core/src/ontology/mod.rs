//! Ontology data model and the HFS text format.

mod merge;
mod model;
mod parser;
mod serialize;
pub(crate) mod syntax;

pub use merge::merge;
pub use model::{
    is_valid_name, ABox, Axiom, ClassExpr, Facet, Literal, NameKind, Number, ObjectAssertion, Ontology, THING,
};
pub use parser::{parse_literal, parse_ontology, DEFAULT_ONTOLOGY_NAME};
pub use serialize::serialize_ontology;

pub(crate) use model::write_quoted;
