use std::fmt::Write;

use crate::ontology::model::Ontology;

/// Writes an ontology as an HFS document.
///
/// Declarations come first, grouped by kind and sorted by name; axioms and
/// assertions follow in insertion order. One construct per line, LF endings.
pub fn serialize_ontology(o: &Ontology) -> String {
    let mut out = String::new();
    // writing into a String cannot fail
    let _ = writeln!(out, "Ontology({})", o.name);
    for c in &o.classes {
        let _ = writeln!(out, "Class({c})");
    }
    for p in &o.object_props {
        let _ = writeln!(out, "ObjectProperty({p})");
    }
    for p in &o.data_props {
        let _ = writeln!(out, "DataProperty({p})");
    }
    for ax in &o.axioms {
        let _ = writeln!(out, "{ax}");
    }
    for (c, i) in &o.abox.class_assertions {
        let _ = writeln!(out, "ClassAssertion({c} {i})");
    }
    for a in &o.abox.object_assertions {
        let _ = writeln!(out, "ObjectPropertyAssertion({} {} {})", a.prop, a.subject, a.object);
    }
    for ((p, i), v) in &o.abox.data_assertions {
        let _ = writeln!(out, "DataPropertyAssertion({p} {i} {v})");
    }
    out
}
