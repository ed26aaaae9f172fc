//! Seeded random ontologies within the bounds used by the property suites:
//! at most 15 classes, 4 properties, 25 axioms, 5 individuals and 3 distinct
//! facet expressions.

use hibou_core::ontology::{Axiom, ClassExpr, Facet, Literal, NameKind, Number, Ontology};
use rand::seq::SliceRandom;
use rand::Rng;

pub const PATIENT: &str = "Patient";
pub const TREATMENT: &str = "Treatment";
pub const RECO: &str = "reco";
pub const LINK: &str = "link";
pub const SCORE: &str = "score";
pub const STATUS: &str = "status";

fn num(v: f64) -> Number {
    Number::new(v).expect("finite")
}

fn facet_pool() -> Vec<(String, Facet)> {
    let iv = |lo: Number, hi: Number| Facet::interval(lo, hi).expect("non-empty");
    vec![
        (SCORE.into(), iv(num(10.0), Number::POS_INF)),
        (SCORE.into(), iv(num(20.0), Number::POS_INF)),
        (SCORE.into(), iv(num(30.0), num(40.0))),
        (SCORE.into(), iv(Number::NEG_INF, num(15.0))),
        (STATUS.into(), Facet::one_of(["pos"]).expect("non-empty")),
        (STATUS.into(), Facet::one_of(["pos", "neg"]).expect("non-empty")),
    ]
}

struct Vocab {
    classes: Vec<String>,
    treatments: Vec<String>,
    facets: Vec<(String, Facet)>,
}

impl Vocab {
    fn class(&self, rng: &mut impl Rng) -> ClassExpr {
        ClassExpr::atomic(self.classes.choose(rng).expect("non-empty").clone())
    }

    fn expr(&self, rng: &mut impl Rng, depth: u32) -> ClassExpr {
        let roll = if depth == 0 { 0 } else { rng.gen_range(0..10) };
        match roll {
            0..=4 => self.class(rng),
            5 => ClassExpr::Thing,
            6 => {
                let n = rng.gen_range(2..=3);
                ClassExpr::IntersectionOf((0..n).map(|_| self.expr(rng, depth - 1)).collect())
            }
            7 | 8 => {
                let prop = if rng.gen_bool(0.5) { RECO } else { LINK };
                ClassExpr::some(prop, self.expr(rng, depth - 1))
            }
            _ => match self.facets.choose(rng) {
                Some((p, f)) => ClassExpr::DataSome(p.clone(), f.clone()),
                None => self.class(rng),
            },
        }
    }

    fn value(&self, rng: &mut impl Rng, prop: &str) -> Literal {
        if prop == SCORE {
            Literal::Number(num(*[5.0, 12.0, 25.0, 35.0, 50.0].choose(rng).expect("non-empty")))
        } else {
            Literal::Str(["pos", "neg", "other"].choose(rng).expect("non-empty").to_string())
        }
    }
}

/// Generates a random ontology. `Patient`, `Treatment` and `reco` are always
/// declared so decision and form checks can run on every sample.
pub fn random_ontology(rng: &mut impl Rng) -> Ontology {
    let mut o = Ontology::new("random");
    let n_classes = rng.gen_range(4..=15);
    let n_treatments = rng.gen_range(1..=(n_classes - 2).min(5));
    let mut classes = vec![PATIENT.to_string(), TREATMENT.to_string()];
    let mut treatments = vec![TREATMENT.to_string()];
    for k in 0..n_treatments {
        let name = format!("T{k}");
        treatments.push(name.clone());
        classes.push(name);
    }
    for k in 0..(n_classes - 2 - n_treatments) {
        classes.push(format!("C{k}"));
    }
    for c in &classes {
        o.declare(NameKind::Class, c).expect("fresh");
    }
    o.declare(NameKind::ObjectProperty, RECO).expect("fresh");
    o.declare(NameKind::ObjectProperty, LINK).expect("fresh");
    o.declare(NameKind::DataProperty, SCORE).expect("fresh");
    o.declare(NameKind::DataProperty, STATUS).expect("fresh");

    let mut pool = facet_pool();
    pool.shuffle(rng);
    pool.truncate(rng.gen_range(0..=3));
    let individuals: Vec<String> = (0..rng.gen_range(1..=5)).map(|k| format!("i{k}")).collect();
    let vocab = Vocab {
        classes,
        treatments,
        facets: pool,
    };

    let mut budget = rng.gen_range(3..=25usize);
    let push = |o: &mut Ontology, ax: Axiom, budget: &mut usize| {
        if *budget > 0 && o.add_axiom(ax).is_ok() {
            *budget -= 1;
        }
    };

    // treatment hierarchy
    for t in vocab.treatments.iter().skip(1) {
        let parent = vocab.treatments.choose(rng).expect("non-empty");
        let sup = if parent == t { TREATMENT } else { parent.as_str() };
        push(&mut o, Axiom::SubClassOf(ClassExpr::atomic(t), ClassExpr::atomic(sup)), &mut budget);
    }
    if rng.gen_bool(0.3) {
        push(
            &mut o,
            Axiom::ObjectPropertyDomain(LINK.into(), vocab.expr(rng, 1)),
            &mut budget,
        );
    }
    if rng.gen_bool(0.5) {
        push(
            &mut o,
            Axiom::DataPropertyDomain(SCORE.into(), vocab.expr(rng, 1)),
            &mut budget,
        );
    }
    if rng.gen_bool(0.3) {
        push(
            &mut o,
            Axiom::DataPropertyDomain(STATUS.into(), vocab.expr(rng, 1)),
            &mut budget,
        );
    }
    let mut attempts = 0;
    while budget > 0 && attempts < 100 {
        attempts += 1;
        let ax = match rng.gen_range(0..10) {
            0..=2 => {
                let t = vocab.treatments.choose(rng).expect("non-empty");
                Axiom::SubClassOf(vocab.expr(rng, 1), ClassExpr::some(RECO, ClassExpr::atomic(t)))
            }
            3 => Axiom::EquivalentClasses(vocab.class(rng), vocab.expr(rng, 2)),
            4 | 5 => Axiom::SubClassOf(vocab.class(rng), vocab.class(rng)),
            _ => Axiom::SubClassOf(vocab.expr(rng, 2), vocab.expr(rng, 2)),
        };
        push(&mut o, ax, &mut budget);
    }

    for ind in &individuals {
        o.assert_class(vocab.class(rng), ind).expect("valid");
        if rng.gen_bool(0.4) {
            o.assert_class(vocab.expr(rng, 2), ind).expect("valid");
        }
        if rng.gen_bool(0.5) {
            let prop = if rng.gen_bool(0.5) { SCORE } else { STATUS };
            let v = vocab.value(rng, prop);
            o.assert_data(prop, ind, v).expect("no ranges are generated");
        }
        if rng.gen_bool(0.3) {
            let other = individuals.choose(rng).expect("non-empty");
            let prop = if rng.gen_bool(0.5) { RECO } else { LINK };
            o.assert_object(prop, ind, other).expect("valid");
        }
    }
    o
}

/// Query expressions worth checking on `o`: every class, `∃reco.C` for every
/// class, every property domain and a handful of random expressions.
pub fn query_expressions(o: &Ontology, rng: &mut impl Rng) -> Vec<ClassExpr> {
    let mut out = vec![ClassExpr::Thing];
    for c in o.classes() {
        out.push(ClassExpr::Atomic(c.clone()));
        out.push(ClassExpr::some(RECO, ClassExpr::Atomic(c.clone())));
    }
    for p in o.object_properties().iter().chain(o.data_properties()) {
        out.push(o.effective_domain(p));
    }
    let classes: Vec<String> = o.classes().iter().cloned().collect();
    let mut facets: Vec<(String, Facet)> = Vec::new();
    o.axioms().for_each(|ax| {
        if let Axiom::SubClassOf(a, b) | Axiom::EquivalentClasses(a, b) = ax {
            for e in [a, b] {
                e.visit(&mut |x| {
                    if let ClassExpr::DataSome(p, f) = x {
                        facets.push((p.clone(), f.clone()));
                    }
                });
            }
        }
    });
    // one facet the ontology never mentions, checked by value only
    facets.push((SCORE.into(), Facet::interval(num(0.0), num(30.0)).expect("non-empty")));
    let vocab = Vocab {
        classes,
        treatments: Vec::new(),
        facets,
    };
    for _ in 0..6 {
        out.push(vocab.expr(rng, 2));
    }
    out.sort();
    out.dedup();
    out
}

/// A random class expression over the ontology's own vocabulary.
pub fn random_assertion(o: &Ontology, rng: &mut impl Rng) -> ClassExpr {
    let vocab = Vocab {
        classes: o.classes().iter().cloned().collect(),
        treatments: Vec::new(),
        facets: Vec::new(),
    };
    vocab.expr(rng, 1)
}
