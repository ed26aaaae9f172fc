//! Treatment recommendation: the most specific treatment classes `T` such
//! that the edited instance is entailed to be in `∃reco.T`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ontology::{Axiom, ClassExpr, Ontology};
use crate::reasoner::{ConceptKind, Taxonomy};

/// The distinguished names the recommendation procedure works with.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecisionConfig {
    pub patient_class: String,
    pub treatment_class: String,
    pub reco_prop: String,
}

impl Default for DecisionConfig {
    fn default() -> Self {
        DecisionConfig {
            patient_class: "Patient".into(),
            treatment_class: "Treatment".into(),
            reco_prop: "reco".into(),
        }
    }
}

impl DecisionConfig {
    pub fn validate(&self, t: &Taxonomy) -> Result<()> {
        let sig = t.signature();
        for class in [&self.patient_class, &self.treatment_class] {
            match sig.class(class) {
                Some(c) if sig.kind(c) == ConceptKind::Class => {}
                _ => return Err(Error::DecisionConfig(format!("`{class}` is not a declared class"))),
            }
        }
        if sig.role(&self.reco_prop).is_none() {
            return Err(Error::DecisionConfig(format!(
                "`{}` is not a declared object property",
                self.reco_prop
            )));
        }
        Ok(())
    }
}

/// One equivalence class of minimal recommended treatments, members sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct TreatmentGroup {
    pub classes: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Recommendation {
    pub groups: Vec<TreatmentGroup>,
}

impl Recommendation {
    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn contains(&self, class: &str) -> bool {
        self.groups.iter().any(|g| g.classes.iter().any(|c| c == class))
    }

    /// Compact JSON array of groups, e.g. `[["GentleChemo"]]`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("recommendation serializes")
    }
}

/// Every declared treatment class `T` with `T ⊑ treatment_class` and
/// `(∃reco.T)(individual)` entailed, before minimization.
pub fn entailed_treatments(t: &Taxonomy, cfg: &DecisionConfig, individual: &str) -> Result<BTreeSet<String>> {
    cfg.validate(t)?;
    let mut out = BTreeSet::new();
    for class in t.class_names() {
        if !t.entails_subclass(class, &cfg.treatment_class)? {
            continue;
        }
        let expr = ClassExpr::some(cfg.reco_prop.clone(), ClassExpr::Atomic(class.to_string()));
        if t.entails_instance(&expr, individual)? {
            out.insert(class.to_string());
        }
    }
    Ok(out)
}

/// Minimal entailed treatments grouped by equivalence.
pub fn recommend(t: &Taxonomy, cfg: &DecisionConfig, individual: &str) -> Result<Recommendation> {
    let entailed = entailed_treatments(t, cfg, individual)?;
    let below = |a: &str, b: &str| t.entails_subclass(a, b).expect("declared class");

    let minimal: Vec<&String> = entailed
        .iter()
        .filter(|c| !entailed.iter().any(|d| d != *c && below(d, c) && !below(c, d)))
        .collect();

    let mut groups: Vec<TreatmentGroup> = Vec::new();
    for c in minimal {
        match groups.iter_mut().find(|g| below(&g.classes[0], c) && below(c, &g.classes[0])) {
            Some(g) => g.classes.push(c.clone()),
            None => groups.push(TreatmentGroup { classes: vec![c.clone()] }),
        }
    }
    // members arrive in sorted order, so classes[0] is the smallest
    groups.sort_by(|a, b| a.classes[0].cmp(&b.classes[0]));
    Ok(Recommendation { groups })
}

fn conjuncts<'a>(e: &'a ClassExpr, out: &mut Vec<&'a ClassExpr>) {
    match e {
        ClassExpr::IntersectionOf(parts) => parts.iter().for_each(|p| conjuncts(p, out)),
        other => out.push(other),
    }
}

/// Patient classes whose axioms `P ⊑ ∃reco.T'` (with `T' ⊑ treatment`)
/// apply to the individual and account for a recommended treatment.
pub fn explain(
    t: &Taxonomy,
    o: &Ontology,
    cfg: &DecisionConfig,
    individual: &str,
    treatment: &str,
) -> Result<Vec<String>> {
    if !recommend(t, cfg, individual)?.contains(treatment) {
        return Err(Error::NotRecommended(treatment.to_string()));
    }
    let mut found = BTreeSet::new();
    let mut consider = |lhs: &ClassExpr, rhs: &ClassExpr| -> Result<()> {
        let ClassExpr::Atomic(patient) = lhs else { return Ok(()) };
        let mut parts = Vec::new();
        conjuncts(rhs, &mut parts);
        for part in parts {
            let ClassExpr::ObjectSome(prop, filler) = part else { continue };
            let ClassExpr::Atomic(target) = filler.as_ref() else { continue };
            if prop == &cfg.reco_prop
                && t.entails_subclass(target, treatment)?
                && t.entails_instance(lhs, individual)?
            {
                found.insert(patient.clone());
            }
        }
        Ok(())
    };
    for ax in o.axioms() {
        match ax {
            Axiom::SubClassOf(a, b) => consider(a, b)?,
            Axiom::EquivalentClasses(a, b) => {
                consider(a, b)?;
                consider(b, a)?;
            }
            _ => {}
        }
    }
    Ok(found.into_iter().collect())
}
