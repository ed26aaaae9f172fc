use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ontology::{ClassExpr, Facet, Literal, THING};
use crate::reasoner::normalize::{Concept, ConceptKind, Role, Signature};

/// One node of the class hierarchy: a set of equivalent classes and its
/// direct parents (each named by the smallest member of its node).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HierarchyNode {
    pub classes: Vec<String>,
    pub parents: Vec<String>,
}

/// Result of saturation: the subsumer sets `S(A)` and role edges for every
/// atomic name, together with the class hierarchy derived from them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Taxonomy {
    signature: Signature,
    subsumers: Vec<BTreeSet<Concept>>,
    edges: Vec<BTreeSet<(Role, Concept)>>,
    hierarchy: Vec<HierarchyNode>,
}

impl Taxonomy {
    pub(crate) fn new(
        signature: Signature,
        subsumers: Vec<BTreeSet<Concept>>,
        edges: Vec<BTreeSet<(Role, Concept)>>,
    ) -> Taxonomy {
        let hierarchy = build_hierarchy(&signature, &subsumers);
        Taxonomy {
            signature,
            subsumers,
            edges,
            hierarchy,
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn subsumers(&self, c: Concept) -> &BTreeSet<Concept> {
        &self.subsumers[c.idx()]
    }

    pub fn edges(&self, c: Concept) -> &BTreeSet<(Role, Concept)> {
        &self.edges[c.idx()]
    }

    /// Equivalence classes with their direct parents. The node holding
    /// `Thing` comes first, the rest are sorted by smallest member.
    pub fn hierarchy(&self) -> &[HierarchyNode] {
        &self.hierarchy
    }

    fn class(&self, name: &str) -> Result<Concept> {
        self.signature
            .class(name)
            .ok_or_else(|| Error::UnknownClass(name.to_string()))
    }

    fn individual(&self, name: &str) -> Result<Concept> {
        self.signature
            .individual(name)
            .ok_or_else(|| Error::UnknownIndividual(name.to_string()))
    }

    /// Declared class names, sorted, without `Thing`.
    pub fn class_names(&self) -> impl Iterator<Item = &str> {
        let mut names: Vec<&str> = self
            .signature
            .concepts()
            .filter(|&c| self.signature.kind(c) == ConceptKind::Class)
            .map(|c| self.signature.name(c))
            .collect();
        names.sort_unstable();
        names.into_iter()
    }

    pub fn individual_names(&self) -> impl Iterator<Item = &str> {
        self.signature.individuals().map(|(n, _)| n)
    }

    pub fn entails_subclass(&self, sub: &str, sup: &str) -> Result<bool> {
        let a = self.class(sub)?;
        let b = self.class(sup)?;
        Ok(self.subsumers[a.idx()].contains(&b))
    }

    /// Declared classes (and `Thing`) that subsume `name`, sorted.
    pub fn superclasses(&self, name: &str) -> Result<Vec<&str>> {
        let a = self.class(name)?;
        Ok(self.original_names(&self.subsumers[a.idx()]))
    }

    fn original_names(&self, set: &BTreeSet<Concept>) -> Vec<&str> {
        let mut names: Vec<&str> = set
            .iter()
            .filter(|&&c| matches!(self.signature.kind(c), ConceptKind::Class | ConceptKind::Thing))
            .map(|&c| self.signature.name(c))
            .collect();
        names.sort_unstable();
        names
    }

    /// Declared classes (and `Thing`) the individual is entailed to belong to.
    pub fn types_of(&self, individual: &str) -> Result<Vec<&str>> {
        let n = self.individual(individual)?;
        Ok(self.original_names(&self.subsumers[n.idx()]))
    }

    pub fn entails_instance(&self, expr: &ClassExpr, individual: &str) -> Result<bool> {
        let n = self.individual(individual)?;
        self.check_expr(expr)?;
        Ok(self.holds(n, expr))
    }

    fn check_expr(&self, expr: &ClassExpr) -> Result<()> {
        match expr {
            ClassExpr::Thing => Ok(()),
            ClassExpr::Atomic(name) => self.class(name).map(|_| ()),
            ClassExpr::IntersectionOf(parts) => parts.iter().try_for_each(|p| self.check_expr(p)),
            ClassExpr::ObjectSome(r, filler) => {
                self.signature
                    .role(r)
                    .ok_or_else(|| Error::UnknownProperty(r.clone()))?;
                self.check_expr(filler)
            }
            ClassExpr::DataSome(p, _) if self.signature.is_data_property(p) => Ok(()),
            ClassExpr::DataSome(p, _) => Err(Error::UnknownProperty(p.clone())),
        }
    }

    /// Structural check of `expr` at a saturated node.
    pub(crate) fn holds(&self, node: Concept, expr: &ClassExpr) -> bool {
        match expr {
            ClassExpr::Thing => true,
            ClassExpr::Atomic(name) => self
                .signature
                .class(name)
                .is_some_and(|c| self.subsumers[node.idx()].contains(&c)),
            ClassExpr::IntersectionOf(parts) => parts.iter().all(|p| self.holds(node, p)),
            ClassExpr::ObjectSome(r, filler) => {
                let Some(role) = self.signature.role(r) else { return false };
                self.edges[node.idx()]
                    .iter()
                    .any(|&(er, target)| er == role && self.holds(target, filler))
            }
            ClassExpr::DataSome(p, facet) => self.holds_facet(node, p, facet),
        }
    }

    fn holds_facet(&self, node: Concept, prop: &str, facet: &Facet) -> bool {
        let via_proxy = self.subsumers[node.idx()].iter().any(|&c| {
            self.signature
                .facet_proxy(c)
                .is_some_and(|fp| fp.prop == prop && fp.facet.implies(facet))
        });
        via_proxy
            || self
                .signature
                .data_values(node)
                .iter()
                .any(|(p, v)| p == prop && facet.satisfied_by(v))
    }

    /// Individuals linked from `subject` by `prop` through saturated edges.
    pub fn related_individuals(&self, subject: &str, prop: &str) -> Result<BTreeSet<&str>> {
        let n = self.individual(subject)?;
        let Some(role) = self.signature.role(prop) else {
            return Ok(BTreeSet::new());
        };
        Ok(self.edges[n.idx()]
            .iter()
            .filter(|&&(r, _)| r == role)
            .filter_map(|&(_, t)| self.signature.individual_name(t))
            .collect())
    }

    pub fn data_values(&self, individual: &str) -> Result<&[(String, Literal)]> {
        let n = self.individual(individual)?;
        Ok(self.signature.data_values(n))
    }

    /// Renders the hierarchy one node per line: `A = B: P1, P2`.
    pub fn hierarchy_text(&self) -> String {
        let mut out = String::new();
        for node in &self.hierarchy {
            out.push_str(&node.classes.join(" = "));
            if !node.parents.is_empty() {
                out.push_str(": ");
                out.push_str(&node.parents.join(", "));
            }
            out.push('\n');
        }
        out
    }

    pub fn hierarchy_json(&self) -> String {
        serde_json::to_string(&self.hierarchy).expect("hierarchy serializes")
    }
}

fn build_hierarchy(sig: &Signature, subsumers: &[BTreeSet<Concept>]) -> Vec<HierarchyNode> {
    let classes: Vec<Concept> = sig
        .concepts()
        .filter(|&c| matches!(sig.kind(c), ConceptKind::Class | ConceptKind::Thing))
        .collect();
    let sup = |c: Concept, d: Concept| subsumers[c.idx()].contains(&d);

    // representative = smallest name among equivalents
    let mut rep_of: BTreeMap<Concept, &str> = BTreeMap::new();
    let mut members: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for &c in &classes {
        let rep = classes
            .iter()
            .filter(|&&d| sup(c, d) && sup(d, c))
            .map(|&d| sig.name(d))
            .min()
            .expect("a class is equivalent to itself");
        rep_of.insert(c, rep);
        members.entry(rep).or_default().push(sig.name(c));
    }
    let rep_concept: BTreeMap<&str, Concept> = rep_of.iter().filter(|(c, r)| sig.name(**c) == **r).map(|(c, r)| (*r, *c)).collect();

    let strict_supers = |rep: &str| -> BTreeSet<&str> {
        let c = rep_concept[rep];
        classes
            .iter()
            .filter(|&&d| sup(c, d) && rep_of[&d] != rep)
            .map(|d| rep_of[d])
            .collect()
    };

    let mut nodes: Vec<HierarchyNode> = members
        .iter()
        .map(|(rep, ms)| {
            let supers = strict_supers(rep);
            let parents = supers
                .iter()
                .filter(|p| !supers.iter().any(|q| q != *p && strict_supers(q).contains(*p)))
                .map(|p| p.to_string())
                .collect();
            let mut classes: Vec<String> = ms.iter().map(|m| m.to_string()).collect();
            classes.sort();
            HierarchyNode { classes, parents }
        })
        .collect();
    nodes.sort_by_key(|n| (!n.classes.iter().any(|c| c == THING), n.classes[0].clone()));
    nodes
}
