use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::ontology::{Axiom, ClassExpr, Facet, Literal, Ontology, THING};

/// Index of an atomic name in a [`Signature`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Concept(pub(crate) u32);

impl Concept {
    pub const THING: Concept = Concept(0);

    pub(crate) fn idx(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Role(pub(crate) u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConceptKind {
    Thing,
    /// Declared in the source ontology.
    Class,
    /// Introduced while flattening nested expressions.
    Fresh,
    /// Stands for one named individual.
    Individual,
    /// Stands for one `DataSomeValuesFrom(property facet)` expression.
    Facet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacetProxy {
    pub prop: String,
    pub facet: Facet,
    pub concept: Concept,
}

/// Every atomic name the saturation works over, plus the tables needed to
/// translate back to ontology vocabulary.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Signature {
    names: Vec<String>,
    kinds: Vec<ConceptKind>,
    classes: HashMap<String, Concept>,
    individuals: BTreeMap<String, Concept>,
    roles: Vec<String>,
    role_index: HashMap<String, Role>,
    data_props: BTreeSet<String>,
    facets: Vec<FacetProxy>,
    facet_index: HashMap<(String, Facet), Concept>,
    data_values: HashMap<Concept, Vec<(String, Literal)>>,
}

impl Signature {
    fn push(&mut self, name: String, kind: ConceptKind) -> Concept {
        let id = Concept(self.names.len() as u32);
        self.names.push(name);
        self.kinds.push(kind);
        id
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn concepts(&self) -> impl Iterator<Item = Concept> {
        (0..self.names.len() as u32).map(Concept)
    }

    pub fn name(&self, c: Concept) -> &str {
        &self.names[c.idx()]
    }

    pub fn kind(&self, c: Concept) -> ConceptKind {
        self.kinds[c.idx()]
    }

    /// Declared classes and `Thing`.
    pub fn class(&self, name: &str) -> Option<Concept> {
        self.classes.get(name).copied()
    }

    pub fn individual(&self, name: &str) -> Option<Concept> {
        self.individuals.get(name).copied()
    }

    pub fn individuals(&self) -> impl Iterator<Item = (&str, Concept)> {
        self.individuals.iter().map(|(n, c)| (n.as_str(), *c))
    }

    pub fn individual_name(&self, c: Concept) -> Option<&str> {
        (self.kind(c) == ConceptKind::Individual).then(|| self.name(c).trim_start_matches("{").trim_end_matches('}'))
    }

    pub fn role(&self, name: &str) -> Option<Role> {
        self.role_index.get(name).copied()
    }

    pub fn role_name(&self, r: Role) -> &str {
        &self.roles[r.0 as usize]
    }

    pub fn is_data_property(&self, name: &str) -> bool {
        self.data_props.contains(name)
    }

    pub fn facets(&self) -> &[FacetProxy] {
        &self.facets
    }

    pub fn facet_proxy(&self, c: Concept) -> Option<&FacetProxy> {
        if self.kind(c) != ConceptKind::Facet {
            return None;
        }
        self.facets.iter().find(|f| f.concept == c)
    }

    pub fn data_values(&self, individual: Concept) -> &[(String, Literal)] {
        self.data_values.get(&individual).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Normal forms over atomic names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormalAxiom {
    /// `A ⊑ B`
    Sub(Concept, Concept),
    /// `A1 ⊓ A2 ⊑ B`
    Conj(Concept, Concept, Concept),
    /// `A ⊑ ∃r.B`
    SomeRight(Concept, Role, Concept),
    /// `∃r.A ⊑ B`
    SomeLeft(Role, Concept, Concept),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedOntology {
    pub signature: Signature,
    pub axioms: Vec<NormalAxiom>,
}

#[derive(Hash, PartialEq, Eq)]
enum LhsKey {
    Conj(Concept, Concept),
    Some(Role, Concept),
}

struct Normalizer {
    sig: Signature,
    axioms: Vec<NormalAxiom>,
    lhs_cache: HashMap<LhsKey, Concept>,
    rhs_cache: HashMap<ClassExpr, Concept>,
}

impl Normalizer {
    fn fresh(&mut self) -> Concept {
        let n = self.sig.len();
        self.sig.push(format!("_:x{n}"), ConceptKind::Fresh)
    }

    fn atomic(&self, name: &str) -> Concept {
        self.sig.classes[name]
    }

    fn role(&self, name: &str) -> Role {
        self.sig.role_index[name]
    }

    fn proxy(&self, prop: &str, facet: &Facet) -> Concept {
        self.sig.facet_index[&(prop.to_string(), facet.clone())]
    }

    /// A name `X` such that `expr ⊑ X`.
    fn lhs(&mut self, expr: &ClassExpr) -> Concept {
        match expr {
            ClassExpr::Thing => Concept::THING,
            ClassExpr::Atomic(name) => self.atomic(name),
            ClassExpr::DataSome(p, f) => self.proxy(p, f),
            ClassExpr::IntersectionOf(parts) => {
                let names: Vec<Concept> = parts.iter().map(|p| self.lhs(p)).collect();
                let mut acc = names[0];
                for &next in &names[1..] {
                    let key = LhsKey::Conj(acc, next);
                    acc = match self.lhs_cache.get(&key) {
                        Some(&y) => y,
                        None => {
                            let y = self.fresh();
                            self.axioms.push(NormalAxiom::Conj(acc, next, y));
                            self.lhs_cache.insert(key, y);
                            y
                        }
                    };
                }
                acc
            }
            ClassExpr::ObjectSome(r, filler) => {
                let filler = self.lhs(filler);
                let role = self.role(r);
                let key = LhsKey::Some(role, filler);
                if let Some(&y) = self.lhs_cache.get(&key) {
                    return y;
                }
                let y = self.fresh();
                self.axioms.push(NormalAxiom::SomeLeft(role, filler, y));
                self.lhs_cache.insert(key, y);
                y
            }
        }
    }

    /// A name `X` such that `X ⊑ expr`.
    fn rhs(&mut self, expr: &ClassExpr) -> Concept {
        match expr {
            ClassExpr::Thing => Concept::THING,
            ClassExpr::Atomic(name) => self.atomic(name),
            ClassExpr::DataSome(p, f) => self.proxy(p, f),
            ClassExpr::IntersectionOf(_) | ClassExpr::ObjectSome(..) => {
                if let Some(&y) = self.rhs_cache.get(expr) {
                    return y;
                }
                let y = self.fresh();
                self.rhs_cache.insert(expr.clone(), y);
                self.add_sup(y, expr);
                y
            }
        }
    }

    /// Emits normal axioms for `sub ⊑ expr`.
    fn add_sup(&mut self, sub: Concept, expr: &ClassExpr) {
        match expr {
            ClassExpr::Thing => {}
            ClassExpr::Atomic(name) => {
                let sup = self.atomic(name);
                self.axioms.push(NormalAxiom::Sub(sub, sup));
            }
            ClassExpr::DataSome(p, f) => {
                let sup = self.proxy(p, f);
                self.axioms.push(NormalAxiom::Sub(sub, sup));
            }
            ClassExpr::IntersectionOf(parts) => {
                for part in parts {
                    self.add_sup(sub, part);
                }
            }
            ClassExpr::ObjectSome(r, filler) => {
                let role = self.role(r);
                let filler = self.rhs(filler);
                self.axioms.push(NormalAxiom::SomeRight(sub, role, filler));
            }
        }
    }

    fn add_subclass(&mut self, sub: &ClassExpr, sup: &ClassExpr) {
        let lhs = self.lhs(sub);
        self.add_sup(lhs, sup);
    }
}

/// Flattens the TBox and ABox into normal forms over atomic names.
///
/// Individuals become proxy names, `DataSomeValuesFrom` expressions become
/// facet proxies. Domain and range axioms do not take part in reasoning.
pub fn normalize(o: &Ontology) -> NormalizedOntology {
    let mut sig = Signature::default();
    let thing = sig.push(THING.to_string(), ConceptKind::Thing);
    sig.classes.insert(THING.to_string(), thing);
    for class in o.classes() {
        let c = sig.push(class.clone(), ConceptKind::Class);
        sig.classes.insert(class.clone(), c);
    }
    for ind in o.individuals() {
        let c = sig.push(format!("{{{ind}}}"), ConceptKind::Individual);
        sig.individuals.insert(ind.clone(), c);
    }
    for prop in o.object_properties() {
        let r = Role(sig.roles.len() as u32);
        sig.roles.push(prop.clone());
        sig.role_index.insert(prop.clone(), r);
    }
    sig.data_props = o.data_properties().clone();

    let mut facet_exprs = BTreeSet::new();
    let mut collect = |e: &ClassExpr| {
        e.visit(&mut |sub| {
            if let ClassExpr::DataSome(p, f) = sub {
                facet_exprs.insert((p.clone(), f.clone()));
            }
        })
    };
    for ax in o.axioms() {
        if let Axiom::SubClassOf(a, b) | Axiom::EquivalentClasses(a, b) = ax {
            collect(a);
            collect(b);
        }
    }
    for (c, _) in o.abox().class_assertions() {
        collect(c);
    }
    for (prop, facet) in facet_exprs {
        let c = sig.push(format!("_:f{}", sig.facets.len()), ConceptKind::Facet);
        sig.facet_index.insert((prop.clone(), facet.clone()), c);
        sig.facets.push(FacetProxy { prop, facet, concept: c });
    }

    let mut axioms = Vec::new();
    for a in &sig.facets {
        for b in &sig.facets {
            if a.concept != b.concept && a.prop == b.prop && a.facet.implies(&b.facet) {
                axioms.push(NormalAxiom::Sub(a.concept, b.concept));
            }
        }
    }
    for (prop, ind, value) in o.abox().data_assertions() {
        let n = sig.individuals[ind];
        for f in sig.facets.iter().filter(|f| f.prop == prop && f.facet.satisfied_by(value)) {
            axioms.push(NormalAxiom::Sub(n, f.concept));
        }
        sig.data_values
            .entry(n)
            .or_default()
            .push((prop.to_string(), value.clone()));
    }

    let mut norm = Normalizer {
        sig,
        axioms,
        lhs_cache: HashMap::new(),
        rhs_cache: HashMap::new(),
    };
    for ax in o.axioms() {
        match ax {
            Axiom::SubClassOf(a, b) => norm.add_subclass(a, b),
            Axiom::EquivalentClasses(a, b) => {
                norm.add_subclass(a, b);
                norm.add_subclass(b, a);
            }
            _ => {}
        }
    }
    for (c, ind) in o.abox().class_assertions() {
        let n = norm.sig.individuals[ind];
        norm.add_sup(n, c);
    }
    for a in o.abox().object_assertions() {
        let s = norm.sig.individuals[&a.subject];
        let t = norm.sig.individuals[&a.object];
        let r = norm.role(&a.prop);
        norm.axioms.push(NormalAxiom::SomeRight(s, r, t));
    }

    let mut seen = std::collections::HashSet::new();
    norm.axioms.retain(|ax| seen.insert(*ax));
    NormalizedOntology {
        signature: norm.sig,
        axioms: norm.axioms,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::parse_ontology;

    fn render(n: &NormalizedOntology) -> Vec<String> {
        let s = &n.signature;
        n.axioms
            .iter()
            .map(|ax| match *ax {
                NormalAxiom::Sub(a, b) => format!("{} < {}", s.name(a), s.name(b)),
                NormalAxiom::Conj(a, b, c) => format!("{} & {} < {}", s.name(a), s.name(b), s.name(c)),
                NormalAxiom::SomeRight(a, r, b) => format!("{} < {}.{}", s.name(a), s.role_name(r), s.name(b)),
                NormalAxiom::SomeLeft(r, a, b) => format!("{}.{} < {}", s.role_name(r), s.name(a), s.name(b)),
            })
            .collect()
    }

    #[test]
    fn conjunction_on_the_right_splits() {
        let o = parse_ontology("Class(A) Class(B) Class(C) SubClassOf(A ObjectIntersectionOf(B C))").unwrap();
        assert_eq!(render(&normalize(&o)), ["A < B", "A < C"]);
    }

    #[test]
    fn nested_left_side_gets_fresh_names() {
        let o = parse_ontology(
            "Class(A) Class(B) Class(C) Class(D) ObjectProperty(r) \
             SubClassOf(ObjectIntersectionOf(A ObjectSomeValuesFrom(r ObjectIntersectionOf(B C))) D)",
        )
        .unwrap();
        let out = render(&normalize(&o));
        assert_eq!(out.len(), 4);
        assert!(out[0].starts_with("B & C < _:x"));
        assert!(out[1].starts_with("r._:x"));
        assert!(out[2].starts_with("A & _:x"));
        assert!(out[3].starts_with("_:x") && out[3].ends_with("< D"));
    }

    #[test]
    fn facet_proxies_ordered_by_implication() {
        let o = parse_ontology(
            "Class(Old) Class(VeryOld) DataProperty(age) \
             SubClassOf(DataSomeValuesFrom(age Interval(75 +inf)) VeryOld) \
             SubClassOf(DataSomeValuesFrom(age Interval(70 +inf)) Old)",
        )
        .unwrap();
        let n = normalize(&o);
        let f70 = n.signature.facets().iter().find(|f| f.facet.to_string() == "Interval(70 +inf)").unwrap();
        let f75 = n.signature.facets().iter().find(|f| f.facet.to_string() == "Interval(75 +inf)").unwrap();
        assert!(n.axioms.contains(&NormalAxiom::Sub(f75.concept, f70.concept)));
        assert!(!n.axioms.contains(&NormalAxiom::Sub(f70.concept, f75.concept)));
    }

    #[test]
    fn data_assertion_seeds_matching_facets() {
        let base = "Class(Old) DataProperty(age) SubClassOf(DataSomeValuesFrom(age Interval(75 +inf)) Old) ";
        let old = normalize(&parse_ontology(&format!("{base} DataPropertyAssertion(age i 76)")).unwrap());
        let young = normalize(&parse_ontology(&format!("{base} DataPropertyAssertion(age i 60)")).unwrap());
        let seeds = |n: &NormalizedOntology| {
            let i = n.signature.individual("i").unwrap();
            n.axioms
                .iter()
                .filter(|ax| matches!(ax, NormalAxiom::Sub(a, _) if *a == i))
                .count()
        };
        assert_eq!(seeds(&old), 1);
        assert_eq!(seeds(&young), 0);
    }

    #[test]
    fn assertions_become_proxy_axioms() {
        let o = parse_ontology("Class(A) ObjectProperty(r) ClassAssertion(A i) ObjectPropertyAssertion(r i j)").unwrap();
        assert_eq!(render(&normalize(&o)), ["{i} < A", "{i} < r.{j}"]);
    }
}
