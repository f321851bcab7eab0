use ctsmin_core::equivalence::{
    greatest_conditional_bisimilarity_naive, is_conditional_bisimulation, is_conditional_congruence,
    is_lattice_bisimulation, lattice_bisim_fixpoint, per_condition_bisimilarity,
};
use ctsmin_core::minimise::{minimise_chain, minimise_fixpoint_kernel, pair_names};
use ctsmin_core::models::{check_upgrade_preserving, coalgebra_encode, cts_to_lats};
use ctsmin_core::random::{random_cts, Shape};
use ctsmin_core::{fixtures, Cts};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn instance(seed: u64) -> Cts {
    random_cts(&mut ChaCha8Rng::seed_from_u64(seed), Shape::default())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn fixpoint_is_the_greatest_conditional_bisimulation(seed in any::<u64>()) {
        let m = instance(seed);
        let lats = cts_to_lats(&m);
        let fix = lattice_bisim_fixpoint(&lats);
        let r = &fix.relation;
        let n = m.num_states();
        for x in 0..n {
            prop_assert_eq!(r.get(x, x).len(), m.num_conditions());
            for y in 0..n {
                prop_assert_eq!(r.get(x, y), r.get(y, x));
                prop_assert!(m.conditions().is_downward_closed(r.get(x, y).bits()));
            }
        }
        prop_assert!(is_lattice_bisimulation(&lats, r).is_ok());
        for w in fix.trace.windows(2) {
            prop_assert!(w[1].leq(&w[0]));
        }
        let family = r.slices(m.num_conditions());
        prop_assert_eq!(&family, &greatest_conditional_bisimilarity_naive(&m));
        prop_assert!(is_conditional_bisimulation(&m, &family).is_ok());
        prop_assert!(is_conditional_congruence(&m, &family).is_ok());
        prop_assert!(family.is_subset(&per_condition_bisimilarity(&m)));
    }

    #[test]
    fn chain_and_fixpoint_kernel_agree(seed in any::<u64>()) {
        let m = instance(seed);
        let c = coalgebra_encode(&m);
        let chain = minimise_chain(&c).unwrap();
        let via_fix = minimise_fixpoint_kernel(&m);
        prop_assert_eq!(chain.stage, via_fix.stage);
        prop_assert_eq!(&chain.quotient, &via_fix.quotient);
        for (a, b) in chain.stages.iter().zip(&via_fix.stages) {
            prop_assert_eq!(&a.kernel, &b.kernel);
            prop_assert_eq!(&a.matrix, &b.matrix);
        }
        for w in chain.stages.windows(2) {
            for i in 0..w[1].kernel.class_of.len() {
                for j in 0..w[1].kernel.class_of.len() {
                    if w[1].kernel.same(i, j) {
                        prop_assert!(w[0].kernel.same(i, j));
                    }
                }
            }
        }
        let fix = lattice_bisim_fixpoint(&cts_to_lats(&m));
        prop_assert_eq!(chain.separation_stage, fix.iterations);
        prop_assert!(fix.iterations <= chain.stage && chain.stage <= fix.iterations + 1);
        for (k, stage) in chain.stages.iter().enumerate() {
            prop_assert_eq!(&stage.matrix, &fix.trace[k.min(fix.iterations)]);
        }
    }

    #[test]
    fn kernel_classes_are_conditional_congruence(seed in any::<u64>()) {
        let m = instance(seed);
        let np = m.num_conditions();
        let kernel = &minimise_chain(&coalgebra_encode(&m)).unwrap().final_stage().kernel.clone();
        let naive = greatest_conditional_bisimilarity_naive(&m);
        for phi in 0..np {
            for x in 0..m.num_states() {
                for y in 0..m.num_states() {
                    prop_assert_eq!(kernel.same(x * np + phi, y * np + phi), naive.related(phi, x, y));
                }
            }
        }
    }

    #[test]
    fn quotient_preserves_behaviour(seed in any::<u64>()) {
        let m = instance(seed);
        let c = coalgebra_encode(&m);
        let result = minimise_chain(&c).unwrap();
        let q = &result.quotient;
        let qc = q.to_upgrade_coalgebra();
        prop_assert!(qc.validate().is_ok());
        prop_assert_eq!(check_upgrade_preserving(&qc), Ok(()));
        let again = minimise_chain(&qc).unwrap();
        let fin = &result.final_stage().kernel;
        let qnp = qc.conditions().len();
        // (x, φ) and (y, ψ) are identified exactly when their classes, read at
        // their own conditions, are identified in the quotient.
        let total = m.num_states() * m.num_conditions();
        for i in 0..total {
            for j in 0..total {
                let (ki, kj) = (q.class_of[i], q.class_of[j]);
                let (pi, pj) = (i % qnp, j % qnp);
                prop_assert_eq!(
                    fin.same(i, j),
                    again.final_stage().kernel.same(ki * qnp + pi, kj * qnp + pj)
                );
            }
        }
    }
}

#[test]
fn running_example_relation() {
    let m = fixtures::ex1();
    let fix = lattice_bisim_fixpoint(&cts_to_lats(&m));
    let s = |n: &str| m.state(n).unwrap();
    let names = |x: &str, y: &str| -> Vec<String> {
        m.conditions().names_of(fix.relation.get(s(x), s(y)).bits()).map(String::from).collect()
    };
    assert_eq!(names("x", "x'"), ["phi'"]);
    assert_eq!(names("y", "y'"), ["phi", "phi'"]);
    assert_eq!(names("z", "z'"), ["phi", "phi'"]);
    assert!(names("x", "y").is_empty());
    let per = per_condition_bisimilarity(&m);
    let phi = m.condition("phi").unwrap();
    assert!(per.related(phi, s("x"), s("x'")));
    assert!(!fix.relation.get(s("x"), s("x'")).contains(phi));
}

#[test]
fn counterexample_fixture() {
    let m = fixtures::ex2();
    let fix = lattice_bisim_fixpoint(&cts_to_lats(&m));
    let (x1, x2) = (m.state("x1").unwrap(), m.state("x2").unwrap());
    assert!(fix.relation.get(x1, x2).is_empty());
    let per = per_condition_bisimilarity(&m);
    assert!(per.related(m.condition("phi").unwrap(), x1, x2));
}

#[test]
fn codomains_of_the_running_example() {
    let c = coalgebra_encode(&fixtures::ex1());
    let r = minimise_chain(&c).unwrap();
    let names = pair_names(&c);
    let terms = |k: usize| -> Vec<(String, String)> {
        let stage = &r.stages[k];
        stage
            .kernel
            .classes
            .iter()
            .zip(stage.terms.as_ref().unwrap())
            .map(|(cls, t)| (names[cls[0]].clone(), t.clone()))
            .collect()
    };
    let expect = |v: &[(&str, &str)]| -> Vec<(String, String)> {
        v.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    };
    assert_eq!(terms(0), expect(&[("x@phi", "•")]));
    assert_eq!(
        terms(2),
        expect(&[
            ("x@phi", "{(∅,phi),(∅,phi'),({(•,phi')},phi),({(•,phi')},phi')}"),
            ("x@phi'", "{(∅,phi'),({(•,phi')},phi')}"),
            ("x'@phi", "{(∅,phi),(∅,phi'),({(•,phi')},phi')}"),
            ("y@phi", "{({(•,phi')},phi')}"),
            ("z@phi", "∅"),
        ])
    );
    assert_eq!(
        terms(3),
        expect(&[
            ("x@phi", "{(∅,phi),(∅,phi'),({({(•,phi')},phi')},phi),({({(•,phi')},phi')},phi')}"),
            ("x@phi'", "{(∅,phi'),({({(•,phi')},phi')},phi')}"),
            ("x'@phi", "{(∅,phi),(∅,phi'),({({(•,phi')},phi')},phi')}"),
            ("y@phi", "{({(∅,phi'),({(•,phi')},phi')},phi')}"),
            ("z@phi", "∅"),
        ])
    );
}
