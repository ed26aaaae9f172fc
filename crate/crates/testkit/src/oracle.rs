//! Reference reasoner that works directly on class expressions.
//!
//! The universe is every sub-expression occurring in the ontology (plus any
//! extra query expressions) and one nominal per individual. All rules are
//! re-applied to every node until a full pass adds nothing. No normalization,
//! no fresh names, no facet proxies and no indexes: it shares nothing with the
//! production reasoner beyond the ontology data model.

use std::collections::{BTreeSet, HashMap};

use hibou_core::ontology::{Axiom, ClassExpr, Literal, Ontology};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Node {
    Expr(ClassExpr),
    Nominal(String),
}

pub struct NaiveReasoner {
    nodes: Vec<Node>,
    index: HashMap<Node, usize>,
    subsumers: Vec<BTreeSet<usize>>,
    edges: BTreeSet<(usize, String, usize)>,
}

impl NaiveReasoner {
    pub fn new(o: &Ontology, extra: &[ClassExpr]) -> NaiveReasoner {
        let mut r = NaiveReasoner {
            nodes: Vec::new(),
            index: HashMap::new(),
            subsumers: Vec::new(),
            edges: BTreeSet::new(),
        };
        r.add_expr(&ClassExpr::Thing);
        for c in o.classes() {
            r.add_expr(&ClassExpr::Atomic(c.clone()));
        }
        let mut told: Vec<(ClassExpr, ClassExpr)> = Vec::new();
        for ax in o.axioms() {
            match ax {
                Axiom::SubClassOf(a, b) => told.push((a.clone(), b.clone())),
                Axiom::EquivalentClasses(a, b) => {
                    told.push((a.clone(), b.clone()));
                    told.push((b.clone(), a.clone()));
                }
                _ => {}
            }
        }
        for (a, b) in &told {
            r.add_expr(a);
            r.add_expr(b);
        }
        for (c, _) in o.abox().class_assertions() {
            r.add_expr(c);
        }
        for e in extra {
            r.add_expr(e);
        }
        for i in o.individuals() {
            r.add_node(Node::Nominal(i.clone()));
        }
        r.run(o, &told);
        r
    }

    fn add_node(&mut self, n: Node) -> usize {
        if let Some(&k) = self.index.get(&n) {
            return k;
        }
        let k = self.nodes.len();
        self.nodes.push(n.clone());
        self.index.insert(n, k);
        self.subsumers.push(BTreeSet::new());
        k
    }

    fn add_expr(&mut self, e: &ClassExpr) {
        match e {
            ClassExpr::IntersectionOf(parts) => parts.iter().for_each(|p| self.add_expr(p)),
            ClassExpr::ObjectSome(_, f) => self.add_expr(f),
            _ => {}
        }
        self.add_node(Node::Expr(e.clone()));
    }

    fn id(&self, e: &ClassExpr) -> usize {
        self.index[&Node::Expr(e.clone())]
    }

    fn run(&mut self, o: &Ontology, told: &[(ClassExpr, ClassExpr)]) {
        let thing = self.id(&ClassExpr::Thing);
        let told: Vec<(usize, usize)> = told.iter().map(|(a, b)| (self.id(a), self.id(b))).collect();
        loop {
            let mut changed = false;
            for c in 0..self.nodes.len() {
                let mut add: Vec<usize> = vec![c, thing];
                let mut new_edges: Vec<(usize, String, usize)> = Vec::new();
                let current = self.subsumers[c].clone();
                for &d in &current {
                    add.extend(told.iter().filter(|(a, _)| *a == d).map(|(_, b)| *b));
                    match &self.nodes[d] {
                        Node::Expr(ClassExpr::IntersectionOf(parts)) => {
                            add.extend(parts.iter().map(|p| self.id(p)));
                        }
                        Node::Expr(ClassExpr::ObjectSome(r, f)) => new_edges.push((c, r.clone(), self.id(f))),
                        Node::Expr(ClassExpr::DataSome(p, f)) => {
                            for (k, n) in self.nodes.iter().enumerate() {
                                if let Node::Expr(ClassExpr::DataSome(q, g)) = n {
                                    if p == q && f.implies(g) {
                                        add.push(k);
                                    }
                                }
                            }
                        }
                        _ => {}
                    }
                }
                for (k, n) in self.nodes.iter().enumerate() {
                    match n {
                        Node::Expr(ClassExpr::IntersectionOf(parts))
                            if parts.iter().all(|p| current.contains(&self.id(p))) =>
                        {
                            add.push(k)
                        }
                        Node::Expr(ClassExpr::ObjectSome(r, f)) => {
                            let f = self.id(f);
                            if self
                                .edges
                                .iter()
                                .any(|(s, er, t)| *s == c && er == r && self.subsumers[*t].contains(&f))
                            {
                                add.push(k);
                            }
                        }
                        _ => {}
                    }
                }
                if let Node::Nominal(ind) = &self.nodes[c] {
                    for (expr, i) in o.abox().class_assertions() {
                        if i == ind {
                            add.push(self.id(expr));
                        }
                    }
                    for a in o.abox().object_assertions() {
                        if &a.subject == ind {
                            new_edges.push((c, a.prop.clone(), self.index[&Node::Nominal(a.object.clone())]));
                        }
                    }
                    for (p, i, v) in o.abox().data_assertions() {
                        if i == ind {
                            add.extend(self.facet_nodes_satisfied(p, v));
                        }
                    }
                }
                for d in add {
                    changed |= self.subsumers[c].insert(d);
                }
                for e in new_edges {
                    changed |= self.edges.insert(e);
                }
            }
            if !changed {
                break;
            }
        }
    }

    fn facet_nodes_satisfied(&self, prop: &str, value: &Literal) -> Vec<usize> {
        self.nodes
            .iter()
            .enumerate()
            .filter_map(|(k, n)| match n {
                Node::Expr(ClassExpr::DataSome(q, g)) if q == prop && g.satisfied_by(value) => Some(k),
                _ => None,
            })
            .collect()
    }

    /// `sub ⊑ sup` for class names (or `Thing`).
    pub fn subsumes(&self, sub: &str, sup: &str) -> bool {
        let a = self.id(&ClassExpr::atomic(sub));
        let b = self.id(&ClassExpr::atomic(sup));
        self.subsumers[a].contains(&b)
    }

    /// `expr(individual)`; `expr` must be part of the universe.
    pub fn instance(&self, expr: &ClassExpr, individual: &str) -> bool {
        let n = self.index[&Node::Nominal(individual.to_string())];
        let e = *self
            .index
            .get(&Node::Expr(expr.clone()))
            .unwrap_or_else(|| panic!("{expr} was not registered with the oracle"));
        self.subsumers[n].contains(&e)
    }
}
