use hibou_core::ontology::{parse_ontology, Axiom, ClassExpr, Facet, Literal, Number, Ontology, THING};
use hibou_core::reasoner::{classify, normalize, saturate, NormalAxiom, Taxonomy};
use hibou_testkit::{query_expressions, random_assertion, random_ontology, NaiveReasoner};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

const SAMPLES: u64 = 150;

fn names(o: &Ontology) -> Vec<String> {
    std::iter::once(THING.to_string()).chain(o.classes().iter().cloned()).collect()
}

fn compare(o: &Ontology, exprs: &[ClassExpr], seed: u64) {
    let t = classify(o);
    let r = NaiveReasoner::new(o, exprs);
    let names = names(o);
    for a in &names {
        for b in &names {
            assert_eq!(
                t.entails_subclass(a, b).unwrap(),
                r.subsumes(a, b),
                "seed {seed}: {a} <= {b}"
            );
        }
    }
    for i in o.individuals() {
        for e in exprs {
            assert_eq!(t.entails_instance(e, i).unwrap(), r.instance(e, i), "seed {seed}: {e}({i})");
        }
    }
}

#[test]
fn agrees_with_naive_fixpoint() {
    for seed in 0..SAMPLES {
        let mut rng = StdRng::seed_from_u64(seed);
        let o = random_ontology(&mut rng);
        let exprs = query_expressions(&o, &mut rng);
        compare(&o, &exprs, seed);
    }
}

#[test]
fn subsumption_is_reflexive_and_transitive() {
    for seed in 0..40 {
        let mut rng = StdRng::seed_from_u64(1000 + seed);
        let o = random_ontology(&mut rng);
        let t = classify(&o);
        let names = names(&o);
        for a in &names {
            assert!(t.entails_subclass(a, a).unwrap());
            assert!(t.entails_subclass(a, THING).unwrap());
            for b in &names {
                if !t.entails_subclass(a, b).unwrap() {
                    continue;
                }
                for c in &names {
                    if t.entails_subclass(b, c).unwrap() {
                        assert!(t.entails_subclass(a, c).unwrap(), "seed {seed}: {a} {b} {c}");
                    }
                }
            }
        }
    }
}

fn snapshot(t: &Taxonomy, o: &Ontology, exprs: &[ClassExpr]) -> (Vec<bool>, Vec<bool>) {
    let names = names(o);
    let subs = names
        .iter()
        .flat_map(|a| names.iter().map(move |b| (a, b)))
        .map(|(a, b)| t.entails_subclass(a, b).unwrap())
        .collect();
    let inst = o
        .individuals()
        .iter()
        .flat_map(|i| exprs.iter().map(move |e| (e, i)))
        .map(|(e, i)| t.entails_instance(e, i).unwrap())
        .collect();
    (subs, inst)
}

#[test]
fn adding_axioms_or_assertions_is_monotone() {
    for seed in 0..80 {
        let mut rng = StdRng::seed_from_u64(2000 + seed);
        let o = random_ontology(&mut rng);
        let exprs = query_expressions(&o, &mut rng);
        let before = snapshot(&classify(&o), &o, &exprs);

        let mut bigger = o.clone();
        for _ in 0..3 {
            if rng.gen_bool(0.5) {
                let (a, b) = (random_assertion(&o, &mut rng), random_assertion(&o, &mut rng));
                let _ = bigger.add_axiom(Axiom::SubClassOf(a, b));
            } else {
                let ind = o.individuals().iter().next().unwrap().clone();
                bigger.assert_class(random_assertion(&o, &mut rng), &ind).unwrap();
            }
        }
        let after = snapshot(&classify(&bigger), &o, &exprs);
        for (k, (x, y)) in before.0.iter().zip(&after.0).enumerate() {
            assert!(!x || *y, "seed {seed}: subsumption {k} lost");
        }
        for (k, (x, y)) in before.1.iter().zip(&after.1).enumerate() {
            assert!(!x || *y, "seed {seed}: instance {k} lost");
        }
    }
}

#[test]
fn saturation_ignores_axiom_order() {
    for seed in 0..60 {
        let mut rng = StdRng::seed_from_u64(3000 + seed);
        let o = random_ontology(&mut rng);
        let n = normalize(&o);
        let reference = saturate(&n);
        for _ in 0..3 {
            let mut shuffled = n.clone();
            shuffled.axioms.shuffle(&mut rng);
            assert!(saturate(&shuffled) == reference, "seed {seed}");
        }
    }
}

#[test]
fn facet_proxies_follow_implication() {
    let o = parse_ontology(
        "Class(Old) Class(Older) DataProperty(age) \
         EquivalentClasses(Old DataSomeValuesFrom(age Interval(70 +inf))) \
         EquivalentClasses(Older DataSomeValuesFrom(age Interval(75 +inf))) \
         DataPropertyAssertion(age i 76) DataPropertyAssertion(age j 60)",
    )
    .unwrap();
    let n = normalize(&o);
    let sig = &n.signature;
    let proxy = |lo: f64| {
        sig.facets()
            .iter()
            .find(|f| f.facet == Facet::interval(Number::new(lo).unwrap(), Number::POS_INF).unwrap())
            .unwrap()
            .concept
    };
    assert!(n.axioms.contains(&NormalAxiom::Sub(proxy(75.0), proxy(70.0))));
    assert!(!n.axioms.contains(&NormalAxiom::Sub(proxy(70.0), proxy(75.0))));
    let ni = sig.individual("i").unwrap();
    let nj = sig.individual("j").unwrap();
    assert!(n.axioms.contains(&NormalAxiom::Sub(ni, proxy(75.0))));
    assert!(!n.axioms.iter().any(|a| matches!(a, NormalAxiom::Sub(x, _) if *x == nj)));

    let t = classify(&o);
    assert!(t.entails_subclass("Older", "Old").unwrap());
    assert!(t.entails_instance(&ClassExpr::atomic("Older"), "i").unwrap());
    assert!(!t.entails_instance(&ClassExpr::atomic("Old"), "j").unwrap());
}

/// Enumerates small cases: a data value and an asserted facet class on one
/// individual against every facet of a fixed pool.
#[test]
fn facet_instance_checks_are_exact() {
    let n = |v: f64| Number::new(v).unwrap();
    let pool = [
        Facet::interval(n(0.0), n(10.0)).unwrap(),
        Facet::interval(n(5.0), Number::POS_INF).unwrap(),
        Facet::interval(Number::NEG_INF, n(7.0)).unwrap(),
        Facet::interval(n(5.0), n(6.0)).unwrap(),
    ];
    for value in [-1.0, 0.0, 5.0, 6.5, 10.0, 12.0] {
        for asserted in &pool {
            for queried in &pool {
                let text = format!(
                    "Class(A) DataProperty(x) EquivalentClasses(A DataSomeValuesFrom(x {asserted})) \
                     DataPropertyAssertion(x i {value}) ClassAssertion(DataSomeValuesFrom(x {asserted}) k)"
                );
                let o = parse_ontology(&text).unwrap();
                let t = classify(&o);
                let q = ClassExpr::DataSome("x".into(), queried.clone());
                let by_value = queried.satisfied_by(&Literal::Number(n(value)));
                assert_eq!(t.entails_instance(&q, "i").unwrap(), by_value, "{value} {queried}");
                assert_eq!(t.entails_instance(&q, "k").unwrap(), asserted.implies(queried), "{asserted} {queried}");
            }
        }
    }
}
