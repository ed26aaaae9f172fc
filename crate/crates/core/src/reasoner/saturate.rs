use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use crate::reasoner::normalize::{Concept, NormalAxiom, NormalizedOntology, Role};
use crate::reasoner::taxonomy::Taxonomy;

#[derive(Default)]
struct Index {
    told: HashMap<Concept, Vec<Concept>>,
    /// `B1 -> [(B2, C)]` for every `B1 ⊓ B2 ⊑ C`, indexed under both operands.
    conj: HashMap<Concept, Vec<(Concept, Concept)>>,
    some_right: HashMap<Concept, Vec<(Role, Concept)>>,
    some_left: HashMap<(Role, Concept), Vec<Concept>>,
}

impl Index {
    fn build(axioms: &[NormalAxiom]) -> Index {
        let mut ix = Index::default();
        for ax in axioms {
            match *ax {
                NormalAxiom::Sub(a, b) => ix.told.entry(a).or_default().push(b),
                NormalAxiom::Conj(a, b, c) => {
                    ix.conj.entry(a).or_default().push((b, c));
                    if a != b {
                        ix.conj.entry(b).or_default().push((a, c));
                    }
                }
                NormalAxiom::SomeRight(a, r, b) => ix.some_right.entry(a).or_default().push((r, b)),
                NormalAxiom::SomeLeft(r, a, b) => ix.some_left.entry((r, a)).or_default().push(b),
            }
        }
        ix
    }
}

enum Task {
    Subsumer(Concept, Concept),
    Edge(Concept, Role, Concept),
}

struct State {
    subsumers: Vec<HashSet<Concept>>,
    edges: HashSet<(Concept, Role, Concept)>,
    /// target -> incoming `(source, role)`
    preds: HashMap<Concept, Vec<(Concept, Role)>>,
    queue: VecDeque<Task>,
}

impl State {
    fn process(&mut self, ix: &Index, task: Task) {
        match task {
            Task::Subsumer(a, b) => {
                if !self.subsumers[a.idx()].insert(b) {
                    return;
                }
                if let Some(sups) = ix.told.get(&b) {
                    self.queue.extend(sups.iter().map(|&c| Task::Subsumer(a, c)));
                }
                if let Some(pairs) = ix.conj.get(&b) {
                    for &(other, c) in pairs {
                        if self.subsumers[a.idx()].contains(&other) {
                            self.queue.push_back(Task::Subsumer(a, c));
                        }
                    }
                }
                if let Some(exists) = ix.some_right.get(&b) {
                    self.queue.extend(exists.iter().map(|&(r, c)| Task::Edge(a, r, c)));
                }
                if let Some(preds) = self.preds.get(&a) {
                    for &(src, r) in preds {
                        if let Some(ds) = ix.some_left.get(&(r, b)) {
                            self.queue.extend(ds.iter().map(|&d| Task::Subsumer(src, d)));
                        }
                    }
                }
            }
            Task::Edge(a, r, b) => {
                if !self.edges.insert((a, r, b)) {
                    return;
                }
                self.preds.entry(b).or_default().push((a, r));
                for c in &self.subsumers[b.idx()] {
                    if let Some(ds) = ix.some_left.get(&(r, *c)) {
                        self.queue.extend(ds.iter().map(|&d| Task::Subsumer(a, d)));
                    }
                }
            }
        }
    }
}

/// Computes the least fixpoint of the completion rules with a worklist.
///
/// Every name starts with itself and `Thing` as subsumers. Told, conjunction
/// and existential axioms are looked up through per-name indexes, so each
/// derived fact is processed exactly once.
pub fn saturate(n: &NormalizedOntology) -> Taxonomy {
    let ix = Index::build(&n.axioms);
    let size = n.signature.len();
    let mut state = State {
        subsumers: vec![HashSet::new(); size],
        edges: HashSet::new(),
        preds: HashMap::new(),
        queue: VecDeque::new(),
    };
    for a in n.signature.concepts() {
        state.queue.push_back(Task::Subsumer(a, a));
        state.queue.push_back(Task::Subsumer(a, Concept::THING));
    }
    while let Some(task) = state.queue.pop_front() {
        state.process(&ix, task);
    }

    let subsumers: Vec<BTreeSet<Concept>> = state.subsumers.into_iter().map(|s| s.into_iter().collect()).collect();
    let mut edges: Vec<BTreeSet<(Role, Concept)>> = vec![BTreeSet::new(); size];
    for (a, r, b) in state.edges {
        edges[a.idx()].insert((r, b));
    }
    Taxonomy::new(n.signature.clone(), subsumers, edges)
}
