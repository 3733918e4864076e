//! Generators and brute-force oracles shared by the integration tests and
//! the acceptance suite.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::PathBuf;

use ddlite::kernel::{Atom, Literal, Program, Rule, Term};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn squash(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

// ---------------------------------------------------------------- terms

const VARS: [&str; 3] = ["X", "Y", "Z"];
const CONSTS: [&str; 2] = ["a", "b"];

/// Small terms over X, Y, Z, a, b, f/2 and g/1.
pub fn random_term(rng: &mut impl Rng, depth: u32) -> Term {
    let roll = rng.gen_range(0..10);
    if depth == 0 || roll < 6 {
        if rng.gen_bool(0.5) {
            Term::var(*VARS.choose(rng).unwrap())
        } else {
            Term::constant(*CONSTS.choose(rng).unwrap())
        }
    } else if roll < 8 {
        Term::compound("f", vec![random_term(rng, depth - 1), random_term(rng, depth - 1)])
    } else {
        Term::compound("g", vec![random_term(rng, depth - 1)])
    }
}

fn replace(t: &Term, m: &HashMap<String, Term>) -> Term {
    match t {
        Term::Var(v) => m.get(v).cloned().unwrap_or_else(|| t.clone()),
        Term::Compound(f, args) => Term::compound(f.clone(), args.iter().map(|a| replace(a, m)).collect()),
        _ => t.clone(),
    }
}

fn ground_terms(depth: u32) -> Vec<Term> {
    let mut out: Vec<Term> = CONSTS.iter().map(|c| Term::constant(*c)).collect();
    if depth > 0 {
        let inner = ground_terms(depth - 1);
        for x in &inner {
            out.push(Term::compound("g", vec![x.clone()]));
        }
        for x in &CONSTS {
            for y in &CONSTS {
                out.push(Term::compound("f", vec![Term::constant(*x), Term::constant(*y)]));
            }
        }
    }
    out
}

/// Every ground substitution of X, Y, Z over a small term universe that
/// unifies `a` and `b`.
pub fn ground_unifiers(a: &Term, b: &Term) -> Vec<HashMap<String, Term>> {
    let universe = ground_terms(1);
    let mut out = Vec::new();
    for x in &universe {
        for y in &universe {
            for z in &universe {
                let m: HashMap<String, Term> =
                    [("X", x), ("Y", y), ("Z", z)].into_iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
                if replace(a, &m) == replace(b, &m) {
                    out.push(m);
                }
            }
        }
    }
    out
}

/// Checks the unifier, idempotence and most-general properties of `mgu`
/// against brute force. Returns a description of the first failure.
pub fn check_mgu(a: &Term, b: &Term) -> Result<(), String> {
    use ddlite::kernel::{mgu, Substitute};
    let ground = ground_unifiers(a, b);
    match mgu(a, b) {
        None => {
            if ground.is_empty() {
                Ok(())
            } else {
                Err(format!("mgu({a}, {b}) failed but a ground unifier exists"))
            }
        }
        Some(s) => {
            let (sa, sb) = (a.apply(&s), b.apply(&s));
            if sa != sb {
                return Err(format!("mgu({a}, {b}) = {s} is not a unifier"));
            }
            if sa.apply(&s) != sa || sb.apply(&s) != sb {
                return Err(format!("mgu({a}, {b}) = {s} is not idempotent"));
            }
            for (v, t) in s.iter() {
                if t.occurs(v) {
                    return Err(format!("binding {v} -> {t} fails the occurs check"));
                }
            }
            // Any other unifier must factor through the mgu: for a ground
            // unifier g, g(s(v)) == g(v) for every variable.
            for g in &ground {
                for v in VARS {
                    let via = replace(&Term::var(v).apply(&s), g);
                    if via != replace(&Term::var(v), g) {
                        return Err(format!("mgu({a}, {b}) = {s} is not more general than {g:?}"));
                    }
                }
            }
            Ok(())
        }
    }
}

// ------------------------------------------------------------- programs

#[derive(Debug, Clone, Copy)]
pub struct ProgramShape {
    pub max_rules: usize,
    pub max_consts: usize,
    pub recursive: bool,
    pub negation: bool,
}

impl Default for ProgramShape {
    fn default() -> Self {
        ProgramShape { max_rules: 8, max_consts: 5, recursive: true, negation: true }
    }
}

const IDB: [(&str, usize); 4] = [("p0", 1), ("p1", 2), ("p2", 1), ("p3", 2)];
const EDB: [(&str, usize); 2] = [("e0", 1), ("e1", 2)];

/// A safe program that is stratified by construction: with negation, a rule
/// for `p_i` uses `p_j` positively only for `j <= i` and negatively only
/// for `j < i`. Without negation any positive dependency is allowed.
pub fn random_program(rng: &mut impl Rng, shape: ProgramShape) -> Program {
    let k = rng.gen_range(1..=shape.max_consts);
    let consts: Vec<Term> = (0..k).map(|i| Term::constant(format!("c{i}"))).collect();
    let negation = shape.negation && rng.gen_bool(0.5);
    let mut rules = Vec::new();
    let n_facts = rng.gen_range(0..=6);
    for _ in 0..n_facts {
        let (name, arity) = *EDB.choose(rng).unwrap();
        let args = (0..arity).map(|_| consts.choose(rng).unwrap().clone()).collect();
        rules.push(Atom::new(name, args));
    }
    let mut program = Program::default();
    program.add_facts(rules);
    let n_rules = rng.gen_range(1..=shape.max_rules);
    for _ in 0..n_rules {
        let hi = rng.gen_range(0..IDB.len());
        let (hname, harity) = IDB[hi];
        let allowed_pos: Vec<(&str, usize)> = EDB
            .iter()
            .copied()
            .chain(IDB.iter().enumerate().filter(|(j, _)| {
                if !shape.recursive {
                    *j < hi
                } else if negation {
                    *j <= hi
                } else {
                    true
                }
            }).map(|(_, p)| *p))
            .collect();
        let mut body = Vec::new();
        let mut bound: BTreeSet<String> = BTreeSet::new();
        let n_pos = rng.gen_range(1..=3);
        for _ in 0..n_pos {
            let (name, arity) = *allowed_pos.choose(rng).unwrap();
            let args: Vec<Term> = (0..arity)
                .map(|_| {
                    if rng.gen_bool(0.2) {
                        consts.choose(rng).unwrap().clone()
                    } else {
                        Term::var(*VARS.choose(rng).unwrap())
                    }
                })
                .collect();
            for a in &args {
                if let Term::Var(v) = a {
                    bound.insert(v.clone());
                }
            }
            body.push(Literal::positive(Atom::new(name, args)));
        }
        let bound: Vec<String> = bound.into_iter().collect();
        let pick = |rng: &mut dyn rand::RngCore| -> Term {
            if bound.is_empty() || rng.gen_bool(0.15) {
                consts[rng.gen_range(0..consts.len())].clone()
            } else {
                Term::var(bound[rng.gen_range(0..bound.len())].clone())
            }
        };
        if negation && rng.gen_bool(0.5) {
            let lower: Vec<(&str, usize)> =
                EDB.iter().copied().chain(IDB.iter().take(hi).copied()).collect();
            let (name, arity) = *lower.choose(rng).unwrap();
            let args = (0..arity).map(|_| pick(rng)).collect();
            body.push(Literal::negated(Atom::new(name, args)));
        }
        let head = Atom::new(hname, (0..harity).map(|_| pick(rng)).collect());
        let name = program.fresh_rule_name();
        program.rules.push(Rule::new(name, head, body));
    }
    program
}

/// Minimal strata by relaxation, independent of the library.
fn oracle_strata(p: &Program) -> BTreeMap<(String, usize), usize> {
    let mut s: BTreeMap<(String, usize), usize> = BTreeMap::new();
    for r in &p.rules {
        s.entry((r.head.predicate.clone(), r.head.args.len())).or_insert(0);
        for l in &r.body {
            s.entry((l.atom.predicate.clone(), l.atom.args.len())).or_insert(0);
        }
    }
    let limit = s.len() + 1;
    for _ in 0..=limit {
        let mut changed = false;
        for r in &p.rules {
            let hk = (r.head.predicate.clone(), r.head.args.len());
            for l in &r.body {
                let bk = (l.atom.predicate.clone(), l.atom.args.len());
                let need = s[&bk] + usize::from(l.is_negated());
                if s[&hk] < need {
                    s.insert(hk.clone(), need);
                    changed = true;
                }
            }
        }
        if !changed {
            return s;
        }
    }
    panic!("oracle: program is not stratified");
}

fn constants_of(t: &Term, out: &mut BTreeSet<Term>) {
    match t {
        Term::Const(_) | Term::Num(_) => {
            out.insert(t.clone());
        }
        Term::Compound(_, args) => args.iter().for_each(|a| constants_of(a, out)),
        Term::Var(_) => {}
    }
}

/// Stratified model by ground instantiation over the program's constants.
/// Only for builtin-free programs over constants.
pub fn oracle_model(p: &Program) -> BTreeSet<Atom> {
    let strata = oracle_strata(p);
    let mut domain = BTreeSet::new();
    for r in &p.rules {
        r.head.args.iter().for_each(|a| constants_of(a, &mut domain));
        for l in &r.body {
            l.atom.args.iter().for_each(|a| constants_of(a, &mut domain));
        }
    }
    let domain: Vec<Term> = domain.into_iter().collect();
    let top = strata.values().copied().max().unwrap_or(0);
    let mut model: BTreeSet<Atom> = BTreeSet::new();
    for level in 0..=top {
        let rules: Vec<&Rule> =
            p.rules.iter().filter(|r| strata[&(r.head.predicate.clone(), r.head.args.len())] == level).collect();
        loop {
            let mut new = Vec::new();
            for r in &rules {
                let mut vars: Vec<String> = r.variables();
                vars.sort();
                vars.dedup();
                let n = vars.len() as u32;
                let combos = domain.len().pow(n);
                for mut code in 0..combos.max(1) {
                    if n > 0 && domain.is_empty() {
                        break;
                    }
                    let mut m = HashMap::new();
                    for v in &vars {
                        m.insert(v.clone(), domain[code % domain.len()].clone());
                        code /= domain.len();
                    }
                    let inst = |a: &Atom| Atom::new(a.predicate.clone(), a.args.iter().map(|t| replace(t, &m)).collect());
                    let holds = r.body.iter().all(|l| model.contains(&inst(&l.atom)) != l.is_negated());
                    if holds {
                        let h = inst(&r.head);
                        if !model.contains(&h) {
                            new.push(h);
                        }
                    }
                }
            }
            if new.is_empty() {
                break;
            }
            model.extend(new);
        }
    }
    model
}

/// Drops the last argument of every atom whose predicate is in `preds`.
pub fn strip_trees(facts: impl IntoIterator<Item = Atom>, preds: &BTreeSet<String>) -> BTreeSet<Atom> {
    facts
        .into_iter()
        .map(|mut a| {
            if preds.contains(&a.predicate) {
                a.args.pop();
            }
            a
        })
        .collect()
}

// --------------------------------------------------------------- hybrid

/// Department sums by nested loops over the raw fixture text, skipping
/// rows whose HOURS is not a number. Uses compensated summation.
pub fn aggregate_oracle(employee_csv: &str, works_on_xml: &str) -> BTreeMap<i64, f64> {
    let employees: Vec<(String, i64)> = employee_csv
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let cells: Vec<&str> = l.split(',').collect();
            (cells[1].to_string(), cells[6].trim().parse().unwrap())
        })
        .collect();
    let attr = |row: &str, name: &str| -> Option<String> {
        let key = format!("{name}=\"");
        let start = row.find(&key)? + key.len();
        let end = row[start..].find('"')? + start;
        Some(row[start..end].to_string())
    };
    let rows: Vec<(String, String)> = works_on_xml
        .lines()
        .filter(|l| l.contains("<row"))
        .map(|l| (attr(l, "ESSN").unwrap(), attr(l, "HOURS").unwrap()))
        .collect();
    let mut groups: BTreeMap<i64, Vec<f64>> = BTreeMap::new();
    for (ssn, dno) in &employees {
        for (essn, hours) in &rows {
            if essn == ssn {
                if let Ok(h) = hours.parse::<f64>() {
                    groups.entry(*dno).or_default().push(h);
                }
            }
        }
    }
    groups
        .into_iter()
        .map(|(k, xs)| {
            let (mut sum, mut c) = (0.0f64, 0.0f64);
            for x in xs {
                let t = sum + x;
                c += if sum.abs() >= x.abs() { (sum - t) + x } else { (x - t) + sum };
                sum = t;
            }
            (k, sum + c)
        })
        .collect()
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}
