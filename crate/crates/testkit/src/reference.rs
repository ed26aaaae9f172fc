//! Decision and form answers computed from the naive reasoner alone.

use hibou_core::ontology::{ClassExpr, Ontology};

use crate::oracle::NaiveReasoner;

/// Expressions the reference procedures below query; register them with the
/// oracle before use.
pub fn reference_expressions(o: &Ontology, reco: &str) -> Vec<ClassExpr> {
    let mut out: Vec<ClassExpr> = o
        .classes()
        .iter()
        .map(|c| ClassExpr::some(reco, ClassExpr::Atomic(c.clone())))
        .collect();
    for p in o.object_properties().iter().chain(o.data_properties()) {
        out.push(o.effective_domain(p));
    }
    out
}

/// Minimal entailed treatments, grouped by equivalence, as sorted name lists.
pub fn reference_recommendation(
    r: &NaiveReasoner,
    o: &Ontology,
    treatment: &str,
    reco: &str,
    individual: &str,
) -> Vec<Vec<String>> {
    let entailed: Vec<&String> = o
        .classes()
        .iter()
        .filter(|t| r.subsumes(t, treatment) && r.instance(&ClassExpr::some(reco, ClassExpr::Atomic((*t).clone())), individual))
        .collect();
    let strictly_below = |a: &str, b: &str| r.subsumes(a, b) && !r.subsumes(b, a);
    let mut groups: Vec<Vec<String>> = Vec::new();
    for t in entailed.iter().filter(|t| !entailed.iter().any(|u| strictly_below(u, t))) {
        match groups.iter_mut().find(|g| r.subsumes(&g[0], t) && r.subsumes(t, &g[0])) {
            Some(g) => g.push((*t).clone()),
            None => groups.push(vec![(*t).clone()]),
        }
    }
    for g in &mut groups {
        g.sort();
    }
    groups.sort();
    groups
}

/// Properties whose domain the individual is entailed to belong to, sorted.
pub fn reference_visible(r: &NaiveReasoner, o: &Ontology, individual: &str) -> Vec<String> {
    o.object_properties()
        .iter()
        .chain(o.data_properties())
        .filter(|p| r.instance(&o.effective_domain(p), individual))
        .cloned()
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect()
}
