//! Completion-rule saturation over the EL fragment.
//!
//! An ontology is first flattened into four normal forms over atomic names
//! ([`normalize`]), then closed under the completion rules ([`saturate`]).
//! The resulting [`Taxonomy`] answers subsumption and instance queries.

mod normalize;
mod saturate;
mod taxonomy;

pub use normalize::{normalize, Concept, ConceptKind, FacetProxy, NormalAxiom, NormalizedOntology, Role, Signature};
pub use saturate::saturate;
pub use taxonomy::{HierarchyNode, Taxonomy};

use crate::ontology::Ontology;

/// Normalizes and saturates in one step.
pub fn classify(o: &Ontology) -> Taxonomy {
    saturate(&normalize(o))
}
