mod common;

use std::collections::BTreeSet;

use common::{oracle_model, random_program, strip_trees, ProgramShape};
use ddlite::engine::{
    auto_pt, evaluate, stratify, tp_step, validate_proof, EngineError, EvalOptions, FactStore, ProofTree, Strategy,
};
use ddlite::kernel::{Atom, Program};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn model(p: &Program, strategy: Strategy) -> BTreeSet<Atom> {
    let opts = EvalOptions { strategy, ..EvalOptions::default() };
    evaluate(p, &opts).unwrap().iter().cloned().collect()
}

fn program(seed: u64, shape: ProgramShape) -> Program {
    random_program(&mut ChaCha8Rng::seed_from_u64(seed), shape)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn semi_naive_equals_naive_equals_oracle(seed in any::<u64>()) {
        let p = program(seed, ProgramShape::default());
        let semi = model(&p, Strategy::SemiNaive);
        prop_assert_eq!(&semi, &model(&p, Strategy::Naive));
        prop_assert_eq!(&semi, &oracle_model(&p), "program:\n{}", p);
    }

    #[test]
    fn rule_order_does_not_matter(seed in any::<u64>()) {
        let p = program(seed, ProgramShape::default());
        let mut shuffled = p.clone();
        shuffled.rules.shuffle(&mut ChaCha8Rng::seed_from_u64(seed.wrapping_add(1)));
        prop_assert_eq!(model(&p, Strategy::SemiNaive), model(&shuffled, Strategy::SemiNaive));
    }

    #[test]
    fn fixpoint_facts_are_ground(seed in any::<u64>()) {
        let p = program(seed, ProgramShape::default());
        prop_assert!(model(&p, Strategy::SemiNaive).iter().all(Atom::is_ground));
    }

    #[test]
    fn consequence_operator_is_monotone(seed in any::<u64>()) {
        let shape = ProgramShape { negation: false, ..ProgramShape::default() };
        let p = program(seed, shape);
        let mut store = FactStore::new();
        let mut prev_next: BTreeSet<Atom> = BTreeSet::new();
        loop {
            let before: BTreeSet<Atom> = store.iter().cloned().collect();
            let fresh = tp_step(&p, &store).unwrap();
            let next: BTreeSet<Atom> = before.iter().cloned().chain(fresh.iter().cloned()).collect();
            prop_assert!(before.is_subset(&next));
            prop_assert!(prev_next.is_subset(&next));
            prev_next = next;
            if fresh.is_empty() {
                break;
            }
            for a in fresh {
                store.insert(a);
            }
        }
        prop_assert_eq!(prev_next, model(&p, Strategy::SemiNaive));
    }

    #[test]
    fn auto_pt_trees_validate(seed in any::<u64>()) {
        let shape = ProgramShape { recursive: false, ..ProgramShape::default() };
        let p = program(seed, shape);
        let instrumented = auto_pt(&p);
        let store = evaluate(&instrumented, &EvalOptions::default()).unwrap();
        let idb: BTreeSet<String> = p.rules.iter().filter(|r| !r.is_fact()).map(|r| r.head.predicate.clone()).collect();
        prop_assert_eq!(strip_trees(store.iter().cloned(), &idb), oracle_model(&p));
        for fact in store.iter() {
            if !idb.contains(&fact.predicate) {
                continue;
            }
            let tree = ProofTree::of_fact(fact);
            prop_assert!(tree.is_some(), "no tree on {}", fact);
            let tree = tree.unwrap();
            let mut bare = fact.clone();
            bare.args.pop();
            prop_assert_eq!(&tree.conclusion, &bare);
            if let Err(e) = validate_proof(&tree, &instrumented, &store) {
                prop_assert!(false, "{}\nprogram:\n{}", e, instrumented);
            }
        }
    }
}

#[test]
fn recursive_auto_pt_trees_validate_when_finite() {
    let mut checked = 0;
    for seed in 0..100u64 {
        let p = program(seed, ProgramShape::default());
        let instrumented = auto_pt(&p);
        let opts = EvalOptions { max_facts: 400, max_iterations: 6, ..EvalOptions::default() };
        let store = match evaluate(&instrumented, &opts) {
            Ok(s) => s,
            Err(EngineError::ResourceLimitExceeded { .. }) => continue,
            Err(e) => panic!("{e}"),
        };
        for fact in store.iter() {
            if let Some(tree) = ProofTree::of_fact(fact) {
                validate_proof(&tree, &instrumented, &store).unwrap_or_else(|e| panic!("{e}\n{instrumented}"));
                checked += 1;
            }
        }
    }
    assert!(checked > 0);
}

#[test]
fn strata_respect_dependencies() {
    for seed in 0..100u64 {
        let p = program(seed, ProgramShape::default());
        let strata = stratify(&p).unwrap();
        for r in &p.rules {
            let h = strata.stratum(&r.head.key());
            for l in &r.body {
                let b = strata.stratum(&l.atom.key());
                if l.is_negated() {
                    assert!(h > b, "{r}");
                } else {
                    assert!(h >= b, "{r}");
                }
            }
        }
    }
}

#[test]
fn tampered_tree_is_rejected() {
    let p = ddlite::syntax::parse_program("e(a, b).\ne(b, c).\nt(X, Y) :- e(X, Y).\nt(X, Z) :- e(X, Y), t(Y, Z).").unwrap();
    let q = auto_pt(&p);
    let store = evaluate(&q, &EvalOptions::default()).unwrap();
    let fact = store.iter().find(|a| a.predicate == "t" && a.args[1] == ddlite::kernel::Term::constant("c") && a.args[0] == ddlite::kernel::Term::constant("a")).unwrap();
    let mut tree = ProofTree::of_fact(fact).unwrap();
    validate_proof(&tree, &q, &store).unwrap();
    tree.children.pop();
    assert!(validate_proof(&tree, &q, &store).is_err());
}
