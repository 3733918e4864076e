//! Command-line front end for the `ddlite` toolkit.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use ddlite::engine::{
    auto_pt, check_safety, evaluate_into, find_proofs, stratify, validate_proof, EvalOptions, FactStore, RenderFormat,
    Strategy,
};
use ddlite::graphs::{
    build_pdg_with, build_rpg_with, equivalent_modulo_helpers, graph_diff, schema_graph, to_dot, to_json_value,
    DepGraph, DiffReport, MetaConfig,
};
use ddlite::hybrid::{
    ddbase_aggregate, format_tuples, load_facts_csv, load_xml, parse_goal, parse_template, solve_goal, tuples_to_json,
    CsvHeader, Documents,
};
use ddlite::kernel::{Atom, PredKey, Program, Substitute, Term};
use ddlite::syntax::{
    atom_from_term, normalize_rules, parse_program_file, parse_ruleml_xml, parse_swrl, parse_term, print_program,
    print_term, swrl_to_datalog, SwrlRule,
};
use serde_json::json;

/// Name of the environment variable overriding the default fact limit.
pub const MAX_FACTS_ENV: &str = "DDLITE_MAX_FACTS";

#[derive(Debug, Parser)]
#[command(name = "ddlite", version, about = "Deductive database toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a program and check safety and stratification.
    Parse {
        files: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Build a dependency or schema graph.
    Graph {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Kind::Pdg)]
        kind: Kind,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Leave attribute leaves out of schema graphs.
        #[arg(long)]
        no_attrs: bool,
        /// Meta-predicates given their own call nodes, e.g. `not/1,findall/3`.
        #[arg(long)]
        meta_list: Option<String>,
    },
    /// Compare the graphs of two programs.
    Diff {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, value_enum, default_value_t = Kind::Pdg)]
        kind: Kind,
        /// Helper predicates, comma separated (`h` or `h/0`).
        #[arg(long)]
        helpers: Option<String>,
        /// Root predicate for the helper comparison; defaults to the first head.
        #[arg(long)]
        root: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Evaluate a program bottom-up and dump the model.
    Eval {
        files: Vec<PathBuf>,
        #[command(flatten)]
        sources: Sources,
        #[command(flatten)]
        limits: Limits,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Translate SWRL rules or report on them.
    Swrl {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Emit::Datalog)]
        emit: Emit,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Answer a goal, optionally grouped by an aggregation template.
    Query {
        files: Vec<PathBuf>,
        #[arg(long)]
        goal: String,
        /// Template such as `[DNO, sum(HOURS)]`.
        #[arg(long)]
        template: Option<String>,
        #[command(flatten)]
        sources: Sources,
        #[command(flatten)]
        limits: Limits,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Show the proof trees of an atom.
    Prove {
        files: Vec<PathBuf>,
        #[arg(long)]
        atom: String,
        #[command(flatten)]
        sources: Sources,
        #[command(flatten)]
        limits: Limits,
        #[arg(long, value_enum, default_value_t = ProofFormat::Term)]
        format: ProofFormat,
    },
}

#[derive(Debug, Args)]
struct Sources {
    /// CSV relation as `pred=path`.
    #[arg(long = "csv", value_name = "PRED=PATH")]
    csv: Vec<String>,
    /// CSV files start with a header row.
    #[arg(long)]
    csv_header: bool,
    /// XML document as `name=path`.
    #[arg(long = "xml", value_name = "NAME=PATH")]
    xml: Vec<String>,
}

#[derive(Debug, Clone, Copy, Args)]
struct Limits {
    #[arg(long)]
    max_iterations: Option<usize>,
    #[arg(long)]
    max_facts: Option<usize>,
    /// Recompute every rule in every iteration.
    #[arg(long)]
    naive: bool,
    /// Add proof-tree arguments to a plain program before evaluation.
    #[arg(long)]
    auto_pt: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Pdg,
    Rpg,
    Schema,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Datalog,
    Report,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProofFormat {
    Term,
    Ascii,
    Dot,
    Json,
}

/// Failure of a command: exit code 1 for domain errors, 2 for I/O and usage.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
    /// Output still written to stdout, such as a failing report.
    pub output: Option<String>,
}

impl Failure {
    fn domain(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into(), output: None }
    }

    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into(), output: None }
    }
}

impl From<ddlite::hybrid::HybridError> for Failure {
    fn from(e: ddlite::hybrid::HybridError) -> Self {
        use ddlite::hybrid::HybridError as H;
        match e {
            H::Io { .. } | H::UnknownDocument(_) => Failure::usage(e.to_string()),
            _ => Failure::domain(e.to_string()),
        }
    }
}

impl From<ddlite::engine::EngineError> for Failure {
    fn from(e: ddlite::engine::EngineError) -> Self {
        Failure::domain(e.to_string())
    }
}

impl From<ddlite::graphs::GraphError> for Failure {
    fn from(e: ddlite::graphs::GraphError) -> Self {
        Failure::domain(e.to_string())
    }
}

type CmdResult = Result<String, Failure>;

/// Runs one invocation and returns the exit code. Normal output goes to
/// `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let target: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Parse { files, format } => cmd_parse(&files, format),
        Command::Graph { file, kind, format, no_attrs, meta_list } => {
            cmd_graph(&file, kind, format, !no_attrs, meta_list.as_deref())
        }
        Command::Diff { left, right, kind, helpers, root, format } => {
            cmd_diff(&left, &right, kind, helpers.as_deref(), root.as_deref(), format)
        }
        Command::Eval { files, sources, limits, format } => cmd_eval(&files, &sources, &limits, format),
        Command::Swrl { file, emit, format } => cmd_swrl(&file, emit, format),
        Command::Query { files, goal, template, sources, limits, format } => {
            cmd_query(&files, &goal, template.as_deref(), &sources, &limits, format)
        }
        Command::Prove { files, atom, sources, limits, format } => cmd_prove(&files, &atom, &sources, &limits, format),
    };
    match result {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(f) => {
            if let Some(text) = &f.output {
                let _ = out.write_all(text.as_bytes());
            }
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn extension(path: &Path) -> String {
    path.extension().and_then(|e| e.to_str()).unwrap_or("").to_ascii_lowercase()
}

fn swrl_rules(path: &Path) -> Result<Vec<SwrlRule>, Failure> {
    let text = read(path)?;
    match extension(path).as_str() {
        "xml" | "ruleml" | "owx" => parse_ruleml_xml(&text)
            .map(|o| o.rules)
            .map_err(|e| Failure::domain(format!("{}: {e}", path.display()))),
        _ => parse_swrl(&text).map_err(|e| Failure::domain(format!("{}: {e}", path.display()))),
    }
}

fn load_one(path: &Path) -> Result<Program, Failure> {
    match extension(path).as_str() {
        "swrl" | "xml" | "ruleml" | "owx" => {
            let rules = swrl_rules(path)?;
            let rules = normalize_rules(&rules).map_err(|e| Failure::domain(e.to_string()))?;
            swrl_to_datalog(&rules).map_err(|e| Failure::domain(e.to_string()))
        }
        _ => {
            let text = read(path)?;
            parse_program_file(&text, &path.display().to_string()).map_err(|e| Failure::domain(e.to_string()))
        }
    }
}

/// Appends rules, renaming those whose names are already taken.
fn merge(into: &mut Program, other: Program) {
    for mut rule in other.rules {
        if into.rule(&rule.name).is_some() {
            rule.name = into.fresh_rule_name();
        }
        into.rules.push(rule);
    }
}

fn load_programs(files: &[PathBuf]) -> Result<Program, Failure> {
    let mut p = Program::default();
    for f in files {
        merge(&mut p, load_one(f)?);
    }
    Ok(p)
}

fn split_binding<'a>(spec: &'a str, flag: &str) -> Result<(&'a str, &'a str), Failure> {
    spec.split_once('=')
        .filter(|(k, v)| !k.is_empty() && !v.is_empty())
        .ok_or_else(|| Failure::usage(format!("--{flag} expects NAME=PATH, got {spec:?}")))
}

fn add_sources(p: &mut Program, sources: &Sources) -> Result<Documents, Failure> {
    let header = if sources.csv_header { CsvHeader::Present } else { CsvHeader::Absent };
    for spec in &sources.csv {
        let (pred, path) = split_binding(spec, "csv")?;
        let facts = load_facts_csv(path, pred, header, None)?;
        p.add_facts(facts);
    }
    let base = std::env::current_dir().map_err(|e| Failure::usage(e.to_string()))?;
    let mut docs = Documents::with_base(base);
    for spec in &sources.xml {
        let (name, path) = split_binding(spec, "xml")?;
        let doc = load_xml(path)?;
        p.add_facts([Atom::new("xml_document", vec![Term::constant(name), doc.to_term()])]);
        docs.insert(name, doc);
    }
    Ok(docs)
}

fn eval_options(limits: &Limits) -> Result<EvalOptions, Failure> {
    let mut opts = EvalOptions::default();
    if let Ok(v) = std::env::var(MAX_FACTS_ENV) {
        opts.max_facts = v
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("{MAX_FACTS_ENV} must be a number, got {v:?}")))?;
    }
    if let Some(n) = limits.max_facts {
        opts.max_facts = n;
    }
    if let Some(n) = limits.max_iterations {
        opts.max_iterations = n;
    }
    if limits.naive {
        opts.strategy = Strategy::Naive;
    }
    Ok(opts)
}

fn evaluate_program(p: &Program, limits: &Limits) -> Result<FactStore, Failure> {
    let opts = eval_options(limits)?;
    Ok(evaluate_into(p, FactStore::new(), &opts)?)
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn cmd_parse(files: &[PathBuf], format: Format) -> CmdResult {
    if files.is_empty() {
        return Err(Failure::usage("no input files"));
    }
    let p = load_programs(files)?;
    let violations = check_safety(&p);
    let strata = if violations.is_empty() { Some(stratify(&p)) } else { None };
    let ok = violations.is_empty() && matches!(strata, Some(Ok(_)));
    let mut problems: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
    if let Some(Err(c)) = &strata {
        problems.push(c.to_string());
    }
    let text = match format {
        Format::Json => pretty(&json!({
            "rules": p.rules.iter().map(|r| json!({"name": r.name, "text": ddlite::syntax::print_rule(r)})).collect::<Vec<_>>(),
            "safe": violations.is_empty(),
            "stratified": matches!(strata, Some(Ok(_))),
            "problems": problems,
        })),
        _ => {
            let mut s = print_program(&p);
            if ok {
                s.push_str("% safe, stratified\n");
            }
            s
        }
    };
    if ok {
        Ok(text)
    } else {
        Err(Failure::domain(problems.join("\n")))
    }
}

fn graph_text(g: &DepGraph) -> String {
    let mut s = format!("{} graph: {} nodes, {} edges\n", g.kind, g.nodes.len(), g.edges.len());
    for n in &g.nodes {
        s.push_str(&format!("node {n}\n"));
    }
    for e in &g.edges {
        s.push_str(&format!("edge {e}\n"));
    }
    s
}

fn metas(list: Option<&str>) -> Result<MetaConfig, Failure> {
    match list {
        None => Ok(MetaConfig::default()),
        Some("") => Ok(MetaConfig::none()),
        Some(l) => MetaConfig::parse(l).ok_or_else(|| Failure::usage(format!("bad --meta-list {l:?}"))),
    }
}

fn program_graph(path: &Path, kind: Kind, meta: &MetaConfig) -> Result<DepGraph, Failure> {
    let p = load_one(path)?;
    Ok(match kind {
        Kind::Rpg => build_rpg_with(&p, meta),
        _ => build_pdg_with(&p, meta),
    })
}

fn cmd_graph(file: &Path, kind: Kind, format: Format, attrs: bool, meta_list: Option<&str>) -> CmdResult {
    let g = match kind {
        Kind::Schema => schema_graph(&load_xml(file)?, attrs),
        _ => program_graph(file, kind, &metas(meta_list)?)?,
    };
    Ok(match format {
        Format::Text => graph_text(&g),
        Format::Json => pretty(&to_json_value(&g)),
        Format::Dot => to_dot(&g),
    })
}

/// Resolves `name/arity` or a bare name against the predicates of `programs`.
fn resolve_pred(spec: &str, programs: &[&Program]) -> Result<Vec<PredKey>, Failure> {
    if let Some(k) = PredKey::parse(spec) {
        return Ok(vec![k]);
    }
    let found: BTreeSet<PredKey> = programs
        .iter()
        .flat_map(|p| p.predicates())
        .filter(|k| k.name == spec && k.module.is_none())
        .collect();
    if found.is_empty() {
        return Err(Failure::domain(format!("unknown predicate {spec}")));
    }
    Ok(found.into_iter().collect())
}

fn diff_text(d: &DiffReport) -> String {
    if d.is_empty() {
        return "no differences\n".to_string();
    }
    let mut s = String::new();
    for n in &d.nodes_only_left {
        s.push_str(&format!("- node {n}\n"));
    }
    for n in &d.nodes_only_right {
        s.push_str(&format!("+ node {n}\n"));
    }
    for e in &d.edges_only_left {
        s.push_str(&format!("- edge {e}\n"));
    }
    for e in &d.edges_only_right {
        s.push_str(&format!("+ edge {e}\n"));
    }
    s
}

fn cmd_diff(
    left: &Path,
    right: &Path,
    kind: Kind,
    helpers: Option<&str>,
    root: Option<&str>,
    format: Format,
) -> CmdResult {
    let (g1, g2, modulo) = if kind == Kind::Schema {
        (schema_graph(&load_xml(left)?, true), schema_graph(&load_xml(right)?, true), None)
    } else {
        let (p1, p2) = (load_one(left)?, load_one(right)?);
        let meta = MetaConfig::default();
        let build = |p: &Program| if kind == Kind::Rpg { build_rpg_with(p, &meta) } else { build_pdg_with(p, &meta) };
        let modulo = match helpers {
            None => None,
            Some(list) => {
                let mut hs = BTreeSet::new();
                for h in list.split(',').map(str::trim).filter(|h| !h.is_empty()) {
                    hs.extend(resolve_pred(h, &[&p1, &p2])?);
                }
                let root = match root {
                    Some(r) => resolve_pred(r, &[&p1, &p2])?.remove(0),
                    None => p1.rules.first().map(|r| r.head.key()).ok_or_else(|| Failure::domain("empty program"))?,
                };
                Some((equivalent_modulo_helpers(&p1, &p2, &root, &hs)?, hs, root))
            }
        };
        (build(&p1), build(&p2), modulo)
    };
    let mut report = graph_diff(&g1, &g2)?;
    if let Some((_, hs, _)) = &modulo {
        report.equivalent_modulo = hs.clone();
    }
    Ok(match format {
        Format::Json => {
            let ids = |s: &BTreeSet<ddlite::graphs::Node>| s.iter().map(|n| n.id()).collect::<Vec<_>>();
            let edges = |s: &BTreeSet<ddlite::graphs::Edge>| {
                s.iter()
                    .map(|e| json!({"from": e.from.id(), "to": e.to.id(), "mark": e.mark.to_string()}))
                    .collect::<Vec<_>>()
            };
            let mut v = json!({
                "kind": g1.kind.to_string(),
                "identical": report.is_empty(),
                "nodes_only_left": ids(&report.nodes_only_left),
                "nodes_only_right": ids(&report.nodes_only_right),
                "edges_only_left": edges(&report.edges_only_left),
                "edges_only_right": edges(&report.edges_only_right),
            });
            if let Some((eq, hs, root)) = &modulo {
                v["root"] = json!(root.to_string());
                v["helpers"] = json!(hs.iter().map(|k| k.to_string()).collect::<Vec<_>>());
                v["equivalent_modulo_helpers"] = json!(eq);
            }
            pretty(&v)
        }
        _ => {
            let mut s = diff_text(&report);
            if let Some((eq, _, _)) = &modulo {
                s.push_str(&format!("equivalent modulo helpers: {eq}\n"));
            }
            s
        }
    })
}

fn prepare(files: &[PathBuf], sources: &Sources, limits: &Limits) -> Result<(Program, Documents), Failure> {
    let mut p = load_programs(files)?;
    let docs = add_sources(&mut p, sources)?;
    if limits.auto_pt {
        p = auto_pt(&p);
    }
    Ok((p, docs))
}

fn cmd_eval(files: &[PathBuf], sources: &Sources, limits: &Limits, format: Format) -> CmdResult {
    let (p, _) = prepare(files, sources, limits)?;
    let store = evaluate_program(&p, limits)?;
    Ok(match format {
        Format::Json => pretty(&store.to_json_value()),
        _ => store.dump_text(),
    })
}

fn cmd_swrl(file: &Path, emit: Emit, format: Format) -> CmdResult {
    let rules = swrl_rules(file)?;
    match emit {
        Emit::Datalog => {
            let split = normalize_rules(&rules).map_err(|e| Failure::domain(e.to_string()))?;
            let p = swrl_to_datalog(&split).map_err(|e| Failure::domain(e.to_string()))?;
            Ok(match format {
                Format::Json => pretty(&json!(p.rules.iter().map(ddlite::syntax::print_rule).collect::<Vec<_>>())),
                _ => print_program(&p),
            })
        }
        Emit::Report => {
            let mut entries = Vec::new();
            let mut problems = Vec::new();
            for (i, r) in rules.iter().enumerate() {
                let name = format!("rule {}", i + 1);
                match normalize_rules(std::slice::from_ref(r)).and_then(|s| swrl_to_datalog(&s)) {
                    Ok(p) => {
                        let violations: Vec<String> = check_safety(&p)
                            .iter()
                            .map(|v| format!("{name}: variable {} is not range-restricted ({v})", v.variable))
                            .collect();
                        problems.extend(violations.iter().cloned());
                        entries.push(json!({
                            "rule": i + 1,
                            "antecedent": r.antecedent.len(),
                            "consequent": r.consequent.len(),
                            "datalog_rules": p.rules.len(),
                            "violations": violations,
                        }));
                    }
                    Err(e) => {
                        problems.push(format!("{name}: {e}"));
                        entries.push(json!({"rule": i + 1, "error": e.to_string()}));
                    }
                }
            }
            let text = match format {
                Format::Json => pretty(&json!({"rules": entries, "ok": problems.is_empty()})),
                _ => {
                    let mut s = String::new();
                    for e in &entries {
                        match e.get("error") {
                            Some(err) => s.push_str(&format!("rule {}: {}\n", e["rule"], err.as_str().unwrap_or(""))),
                            None => s.push_str(&format!(
                                "rule {}: {} antecedent atoms, {} consequent atoms, {} datalog rules\n",
                                e["rule"], e["antecedent"], e["consequent"], e["datalog_rules"]
                            )),
                        }
                    }
                    for p in &problems {
                        s.push_str(&format!("{p}\n"));
                    }
                    if problems.is_empty() {
                        s.push_str("all rules are range-restricted\n");
                    }
                    s
                }
            };
            if problems.is_empty() {
                Ok(text)
            } else {
                let message = format!("{} rule(s) not range-restricted", problems.len());
                Err(Failure { output: Some(text), ..Failure::domain(message) })
            }
        }
    }
}

fn cmd_query(
    files: &[PathBuf],
    goal: &str,
    template: Option<&str>,
    sources: &Sources,
    limits: &Limits,
    format: Format,
) -> CmdResult {
    let (p, docs) = prepare(files, sources, limits)?;
    let store = evaluate_program(&p, limits)?;
    let goal = parse_goal(goal)?;
    match template {
        Some(t) => {
            let rows = ddbase_aggregate(&parse_template(t)?, &goal, &p, &store, &docs)?;
            Ok(match format {
                Format::Json => pretty(&tuples_to_json(&rows)),
                _ => format!("{}\n", format_tuples(&rows)),
            })
        }
        None => {
            let vars: Vec<String> = {
                let mut seen = BTreeSet::new();
                let mut v = Vec::new();
                for item in &goal {
                    for name in item.variables() {
                        if !name.starts_with('_') && seen.insert(name.clone()) {
                            v.push(name);
                        }
                    }
                }
                v
            };
            let answers = solve_goal(&goal, &p, &store, &docs)?;
            let rows: Vec<Vec<(String, Term)>> = answers
                .iter()
                .map(|s| vars.iter().map(|v| (v.clone(), Term::var(v.clone()).apply(s))).collect())
                .collect();
            Ok(match format {
                Format::Json => pretty(&json!(rows
                    .iter()
                    .map(|r| r.iter().map(|(v, t)| (v.clone(), json!(print_term(t)))).collect::<serde_json::Map<_, _>>())
                    .collect::<Vec<_>>())),
                _ if rows.is_empty() => "no\n".to_string(),
                _ => rows
                    .iter()
                    .map(|r| {
                        if r.is_empty() {
                            "yes\n".to_string()
                        } else {
                            let parts: Vec<String> = r.iter().map(|(v, t)| format!("{v} = {}", print_term(t))).collect();
                            format!("{}\n", parts.join(", "))
                        }
                    })
                    .collect(),
            })
        }
    }
}

fn cmd_prove(files: &[PathBuf], atom: &str, sources: &Sources, limits: &Limits, format: ProofFormat) -> CmdResult {
    let (p, _) = prepare(files, sources, &Limits { auto_pt: false, ..*limits })?;
    // Trees are needed here, so plain programs are always instrumented.
    let p = auto_pt(&p);
    let pattern = parse_term(atom)
        .map_err(|e| Failure::usage(e.to_string()))
        .and_then(|t| atom_from_term(&t).map_err(Failure::usage))?;
    let store = evaluate_program(&p, limits)?;
    let proofs = find_proofs(&store, &pattern);
    if proofs.is_empty() {
        return Err(Failure::domain(format!("no proof of {pattern}")));
    }
    for t in &proofs {
        validate_proof(t, &p, &store).map_err(|e| Failure::domain(e.to_string()))?;
    }
    Ok(match format {
        ProofFormat::Json => pretty(&json!(proofs
            .iter()
            .map(|t| json!({"conclusion": t.conclusion.to_string(), "tree": t.render(RenderFormat::Term)}))
            .collect::<Vec<_>>())),
        _ => {
            let f = match format {
                ProofFormat::Ascii => RenderFormat::Ascii,
                ProofFormat::Dot => RenderFormat::Dot,
                _ => RenderFormat::Term,
            };
            proofs
                .iter()
                .map(|t| {
                    let mut s = t.render(f);
                    if !s.ends_with('\n') {
                        s.push('\n');
                    }
                    s
                })
                .collect()
        }
    })
}
