use crate::error::ModelError;
use crate::ontology::model::{NameKind, Ontology};

/// Unions `extension` into a copy of `base`.
///
/// Names may be redeclared with the same kind. Axioms and assertions keep
/// base order followed by extension order; duplicates collapse. The merged
/// ontology keeps the base name.
pub fn merge(base: &Ontology, extension: &Ontology) -> Result<Ontology, ModelError> {
    let mut out = base.clone();
    let decls = [
        (NameKind::Class, &extension.classes),
        (NameKind::ObjectProperty, &extension.object_props),
        (NameKind::DataProperty, &extension.data_props),
        (NameKind::Individual, &extension.abox.individuals),
    ];
    for (kind, names) in decls {
        for name in names {
            out.ensure_declared(kind, name)?;
        }
    }
    for ax in &extension.axioms {
        out.add_axiom(ax.clone())?;
    }
    for (c, i) in &extension.abox.class_assertions {
        out.assert_class(c.clone(), i)?;
    }
    for a in &extension.abox.object_assertions {
        out.assert_object(&a.prop, &a.subject, &a.object)?;
    }
    for ((p, i), v) in &extension.abox.data_assertions {
        out.assert_data(p, i, v.clone())?;
    }
    Ok(out)
}
