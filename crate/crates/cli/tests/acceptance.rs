//! Acceptance suite: one PASS/FAIL line per criterion.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use common::{aggregate_oracle, check_mgu, close, fixture, fixture_text, oracle_model, random_program, squash, ProgramShape};
use ddlite::engine::{auto_pt, evaluate, explain_fact, validate_proof, EvalOptions, ProofTree, Strategy};
use ddlite::graphs::{build_rpg, equivalent_modulo_helpers, on_cycle, unfold_helper, Node};
use ddlite::kernel::{Atom, PredKey, Program, Rule, Term};
use ddlite::syntax::{normalize_rules, parse_program, parse_ruleml_xml, parse_swrl, print_rule, swrl_to_datalog};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn cli(args: &[String]) -> (i32, String, String) {
    let mut argv = vec!["ddlite".to_string()];
    argv.extend(args.iter().cloned());
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = ddlite_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&err).into_owned())
}

fn args(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn fx(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

fn program(name: &str) -> Result<Program, String> {
    parse_program(&fixture_text(name)).map_err(|e| format!("{name}: {e}"))
}

fn model(p: &Program, strategy: Strategy) -> Result<BTreeSet<Atom>, String> {
    let opts = EvalOptions { strategy, ..EvalOptions::default() };
    Ok(evaluate(p, &opts).map_err(|e| e.to_string())?.iter().cloned().collect())
}

/// Rule text with variables renamed in order of first appearance.
fn variant_key(r: &Rule) -> String {
    let mut names: Vec<String> = Vec::new();
    for v in r.head.variables().into_iter().chain(r.body.iter().flat_map(|l| l.atom.variables())) {
        if !names.contains(&v) {
            names.push(v);
        }
    }
    let s = ddlite::kernel::Substitution::from_pairs(
        names.iter().enumerate().map(|(i, v)| (v.clone(), Term::var(format!("V{i}")))),
    );
    let renamed = Rule::new("r", ddlite::kernel::apply(&s, &r.head), r.body.iter().map(|l| ddlite::kernel::apply(&s, l)).collect());
    print_rule(&renamed)
}

fn c1_pdg_rpg() -> Outcome {
    let (code, pdg, _) = cli(&args(&["diff", &fx("p1.dl"), &fx("p2.dl"), "--kind", "pdg"]));
    ensure(code == 0 && pdg.trim() == "no differences", format!("pdg diff: {pdg}"))?;
    let (code, rpg, _) = cli(&args(&["diff", &fx("p1.dl"), &fx("p2.dl"), "--kind", "rpg"]));
    ensure(code == 0 && !rpg.contains("no differences") && !rpg.trim().is_empty(), format!("rpg diff: {rpg}"))?;
    Ok(format!("pdg: no differences; rpg: {} changed lines", rpg.lines().count()))
}

fn c2_route() -> Outcome {
    let p = program("route.dl")?;
    let store = evaluate(&p, &EvalOptions::default()).map_err(|e| e.to_string())?;
    ensure(store.len() == 5, format!("{} facts", store.len()))?;
    let fact = store
        .iter()
        .find(|a| a.predicate == "route" && a.args[2] == Term::int(295))
        .ok_or("no 295 route")?;
    let want = "route(KT, Mue, 295,
       t(route(KT, Mue, 295), r,
          t(street(KT, Wue, 15), f1),
          t(route(Wue, Mue, 280), e,
             t(street(Wue, Mue, 280), f2))))";
    let got = explain_fact(fact);
    ensure(squash(&got) == squash(want), format!("rendered {got}"))?;
    Ok("5 facts, listing matches".into())
}

fn c3_meta_recursion() -> Outcome {
    let g = build_rpg(&program("ancestor.dl")?);
    let meta = g
        .nodes
        .iter()
        .find(|n| matches!(n, Node::MetaCall { pred, .. } if *pred == PredKey::new("findall", 3)))
        .ok_or("no findall/3 meta node")?;
    let targets: BTreeSet<&Node> = g.successors(meta).map(|e| &e.to).collect();
    ensure(targets.contains(&Node::pred("parent", 2)), "findall does not reach parent/2")?;
    ensure(targets.contains(&Node::pred("ancestor_list", 2)), "findall does not reach ancestor_list/2")?;
    ensure(on_cycle(&g, &Node::pred("ancestor_list", 2)).map_err(|e| e.to_string())?, "ancestor_list/2 not on a cycle")?;
    Ok("findall/3 -> parent/2, ancestor_list/2; cycle found".into())
}

fn c4_helpers() -> Outcome {
    let a = program("helpers_a.dl")?;
    let b = program("helpers_b.dl")?;
    let helpers = [PredKey::new("h", 0)].into_iter().collect();
    let eq = equivalent_modulo_helpers(&a, &b, &PredKey::new("a", 0), &helpers).map_err(|e| e.to_string())?;
    ensure(eq, "reachable sets differ modulo h")?;
    let r1 = a.rule("r1").ok_or("r1 missing")?;
    let r2 = a.rule("r2").ok_or("r2 missing")?;
    let r3 = b.rule("r3").ok_or("r3 missing")?;
    let unfolded = unfold_helper(r1, r2, 2).map_err(|e| e.to_string())?;
    ensure(variant_key(&unfolded) == variant_key(r3), format!("unfolded to {unfolded}"))?;
    Ok("equal modulo {h}; unfold gives r3".into())
}

fn c5_swrl() -> Outcome {
    let rules = parse_swrl(&fixture_text("uncle.swrl")).map_err(|e| e.to_string())?;
    let from_abstract = swrl_to_datalog(&normalize_rules(&rules).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let onto = parse_ruleml_xml(&fixture_text("uncle.xml")).map_err(|e| e.to_string())?;
    let from_xml = swrl_to_datalog(&normalize_rules(&onto.rules).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure(from_abstract.rules.len() == 1 && from_xml.rules.len() == 1, "expected one rule from each syntax")?;
    let (ra, rx) = (&from_abstract.rules[0], &from_xml.rules[0]);
    ensure(variant_key(ra) == variant_key(rx), format!("{ra} vs {rx}"))?;
    let mut p = from_abstract.clone();
    p.add_facts([
        Atom::new("parent", vec![Term::constant("a"), Term::constant("b")]),
        Atom::new("brother", vec![Term::constant("b"), Term::constant("c")]),
    ]);
    let got = model(&p, Strategy::SemiNaive)?;
    ensure(got.contains(&Atom::new("uncle", vec![Term::constant("a"), Term::constant("c")])), "uncle(a, c) not derived")?;
    ensure(got == oracle_model(&p), "differs from the ground oracle")?;
    Ok(format!("{} ; uncle(a, c) derived", squash(&print_rule(ra))))
}

/// Nested loops over the provenance facts, mirroring the antecedent.
fn opm_oracle(facts: &BTreeSet<Atom>) -> BTreeSet<Atom> {
    let unary = |pred: &str| -> Vec<Term> {
        facts.iter().filter(|a| a.predicate == pred).map(|a| a.args[0].clone()).collect()
    };
    let binary = |pred: &str| -> Vec<(Term, Term)> {
        facts.iter().filter(|a| a.predicate == pred).map(|a| (a.args[0].clone(), a.args[1].clone())).collect()
    };
    let has1 = |pred: &str, t: &Term| unary(pred).contains(t);
    let mut out = BTreeSet::new();
    for (c, y) in binary("generated_by_artifact") {
        for (c2, x) in binary("generated_by_process") {
            for (c3, d) in binary("generated_by_account") {
                if c2 != c || c3 != c || !has1("artifact", &y) || !has1("process", &x) || !has1("account", &d) {
                    continue;
                }
                for (e, x2) in binary("used_process") {
                    for (e2, h) in binary("used_artifact") {
                        for (e3, g) in binary("used_account") {
                            if x2 != x || e2 != e || e3 != e || !has1("relation", &e) {
                                continue;
                            }
                            if !has1("artifact", &h) || !has1("account", &g) {
                                continue;
                            }
                            let b = Term::compound(
                                "skolem",
                                vec![Term::constant("create_owl_thing"), x.clone(), c.clone(), e.clone()],
                            );
                            out.insert(Atom::new("derived_sink", vec![b.clone(), h.clone()]));
                            out.insert(Atom::new("derived_source", vec![b.clone(), y.clone()]));
                            out.insert(Atom::new("derived_account", vec![b.clone(), d.clone()]));
                            out.insert(Atom::new("derived_account", vec![b, g]));
                        }
                    }
                }
            }
        }
    }
    out
}

fn c6_opm() -> Outcome {
    let rules = parse_swrl(&fixture_text("opm.swrl")).map_err(|e| e.to_string())?;
    let split = normalize_rules(&rules).map_err(|e| e.to_string())?;
    ensure(split.len() == 4, format!("{} rules after splitting", split.len()))?;
    let mut p = swrl_to_datalog(&split).map_err(|e| e.to_string())?;
    let facts = program("opm_facts.dl")?;
    let fact_set: BTreeSet<Atom> = facts.rules.iter().map(|r| r.head.clone()).collect();
    p.rules.extend(facts.rules);
    let derived: BTreeSet<Atom> =
        model(&p, Strategy::SemiNaive)?.into_iter().filter(|a| a.predicate.starts_with("derived_")).collect();
    ensure(derived.len() == 4, format!("{} derived facts", derived.len()))?;
    let skolems: BTreeSet<&Term> = derived.iter().map(|a| &a.args[0]).collect();
    ensure(skolems.len() == 1, "derived facts use different skolem terms")?;
    ensure(derived == opm_oracle(&fact_set), "differs from the nested-loop oracle")?;
    Ok(format!("4 rules; 4 facts on {} provenance facts", fact_set.len()))
}

const DEPT_GOAL: &str = "employee(_, SSN, _, _, _, _, DNO), Row := doc('works_on.xml')/row::[@'ESSN'=SSN], \
    H := Row@'HOURS', atom_number(H, HOURS)";

fn c7_hybrid() -> Outcome {
    let (code, out, err) = cli(&args(&[
        "query",
        "--csv",
        &format!("employee={}", fx("employee.csv")),
        "--xml",
        &format!("works_on.xml={}", fx("works_on.xml")),
        "--goal",
        DEPT_GOAL,
        "--template",
        "[DNO, sum(HOURS)]",
        "--format",
        "json",
    ]));
    ensure(code == 0, err)?;
    let rows: Vec<(i64, f64)> = serde_json::from_str::<Vec<(i64, f64)>>(&out).map_err(|e| format!("{e}: {out}"))?;
    let oracle: BTreeMap<i64, f64> = aggregate_oracle(&fixture_text("employee.csv"), &fixture_text("works_on.xml"));
    ensure(rows.len() == oracle.len(), format!("{} groups, oracle has {}", rows.len(), oracle.len()))?;
    ensure(rows.windows(2).all(|w| w[0].0 < w[1].0), "groups not sorted")?;
    for ((k, v), (ok, ov)) in rows.iter().zip(&oracle) {
        ensure(k == ok && close(*v, *ov, 1e-9), format!("group {k}: {v} vs oracle {ok}: {ov}"))?;
    }
    // The NULL row belongs to SSN 11, department 1, whose only other row is 12.5.
    ensure(rows.iter().any(|&(k, v)| k == 1 && v == 12.5), "NULL hours leaked into department 1")?;
    Ok(format!("{rows:?}"))
}

fn c8_engine() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x00dd_1173);
    for i in 0..200 {
        let p = random_program(&mut rng, ProgramShape::default());
        let semi = model(&p, Strategy::SemiNaive)?;
        ensure(semi == model(&p, Strategy::Naive)?, format!("program {i}: semi-naive differs from naive\n{p}"))?;
        ensure(semi == oracle_model(&p), format!("program {i}: differs from the ground oracle\n{p}"))?;
        let mut shuffled = p.clone();
        shuffled.rules.shuffle(&mut rng);
        ensure(model(&shuffled, Strategy::SemiNaive)? == semi, format!("program {i}: rule order matters\n{p}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x3141_5926);
    for _ in 0..1000 {
        let a = common::random_term(&mut rng, 3);
        let b = common::random_term(&mut rng, 3);
        check_mgu(&a, &b)?;
    }
    let mut trees = 0;
    let route = program("route.dl")?;
    let mut programs = vec![route];
    let mut rng = ChaCha8Rng::seed_from_u64(0x7ee5);
    let shape = ProgramShape { recursive: false, ..ProgramShape::default() };
    programs.extend((0..200).map(|_| auto_pt(&random_program(&mut rng, shape))));
    for p in &programs {
        let store = evaluate(p, &EvalOptions::default()).map_err(|e| e.to_string())?;
        for fact in store.iter() {
            if let Some(tree) = ProofTree::of_fact(fact) {
                validate_proof(&tree, p, &store).map_err(|e| format!("{e}\n{p}"))?;
                trees += 1;
            }
        }
    }
    Ok(format!("200 programs, 1000 term pairs, {trees} trees replayed"))
}

fn determinism_runs() -> Vec<Vec<String>> {
    let mut runs = Vec::new();
    let programs = ["route.dl", "ancestor.dl", "neg.dl", "p1.dl", "p2.dl", "helpers_a.dl", "helpers_b.dl", "uncle.dl", "opm_facts.dl"];
    for p in programs {
        runs.push(args(&["parse", &fx(p), "--format", "json"]));
        for kind in ["pdg", "rpg"] {
            for format in ["json", "dot"] {
                runs.push(args(&["graph", &fx(p), "--kind", kind, "--format", format]));
            }
        }
    }
    for x in ["works_on.xml", "people.xml", "uncle.xml"] {
        for format in ["json", "dot"] {
            runs.push(args(&["graph", &fx(x), "--kind", "schema", "--format", format]));
        }
    }
    for (l, r) in [("p1.dl", "p2.dl"), ("helpers_a.dl", "helpers_b.dl"), ("route.dl", "neg.dl")] {
        for kind in ["pdg", "rpg"] {
            runs.push(args(&["diff", &fx(l), &fx(r), "--kind", kind, "--format", "json"]));
        }
    }
    runs.push(args(&["diff", &fx("helpers_a.dl"), &fx("helpers_b.dl"), "--helpers", "h", "--format", "json"]));
    for p in ["route.dl", "neg.dl", "opm_facts.dl"] {
        runs.push(args(&["eval", &fx(p), "--format", "json"]));
    }
    runs.push(args(&["eval", &fx("neg.dl"), "--auto-pt", "--format", "json"]));
    runs.push(args(&["eval", &fx("opm.swrl"), &fx("opm_facts.dl"), "--format", "json"]));
    runs.push(args(&[
        "eval",
        &fx("uncle.dl"),
        "--csv",
        &format!("parent={}", fx("parent.csv")),
        "--csv",
        &format!("brother={}", fx("brother.csv")),
        "--format",
        "json",
    ]));
    for s in ["uncle.swrl", "opm.swrl", "uncle.xml", "people.xml", "unsafe.swrl"] {
        for emit in ["datalog", "report"] {
            runs.push(args(&["swrl", &fx(s), "--emit", emit, "--format", "json"]));
        }
    }
    runs.push(args(&[
        "query",
        "--csv",
        &format!("employee={}", fx("employee.csv")),
        "--xml",
        &format!("works_on.xml={}", fx("works_on.xml")),
        "--goal",
        DEPT_GOAL,
        "--template",
        "[DNO, sum(HOURS), avg(HOURS), count(HOURS)]",
        "--format",
        "json",
    ]));
    runs.push(args(&["query", &fx("route.dl"), "--goal", "route(X, Y, L, T)", "--format", "json"]));
    for format in ["json", "dot"] {
        runs.push(args(&["prove", &fx("route.dl"), "--atom", "route(X, Y, L)", "--format", format]));
        runs.push(args(&["prove", &fx("neg.dl"), "--atom", "unreachable(X)", "--format", format]));
    }
    runs
}

fn c9_determinism() -> Outcome {
    let runs = determinism_runs();
    let mut nonzero = 0;
    for run in &runs {
        let first = cli(run);
        let second = cli(run);
        ensure(first == second, format!("output differs for {}", run.join(" ")))?;
        ensure(first.0 != 2, format!("usage or i/o error for {}: {}", run.join(" "), first.2))?;
        nonzero += usize::from(first.0 != 0);
    }
    Ok(format!("{} invocations byte-identical ({nonzero} domain errors)", runs.len()))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("1 pdg/rpg discrimination", Duration::from_secs(1), c1_pdg_rpg),
        ("2 route proof tree", Duration::from_secs(1), c2_route),
        ("3 meta-predicate recursion", Duration::from_secs(1), c3_meta_recursion),
        ("4 helper-rule equivalence", Duration::from_secs(1), c4_helpers),
        ("5 swrl round trip", Duration::from_secs(1), c5_swrl),
        ("6 lloyd-topor and opm", Duration::from_secs(1), c6_opm),
        ("7 hybrid aggregation", Duration::from_secs(1), c7_hybrid),
        ("8 engine properties", Duration::from_secs(30), c8_engine),
        ("9 determinism", Duration::from_secs(10), c9_determinism),
    ];
    let mut failed = 0;
    for (name, budget, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if took > budget => Err(format!("{detail}; took {took:.2?}, budget {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS  {name:<28} {took:>10.2?}  {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name:<28} {took:>10.2?}  {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
