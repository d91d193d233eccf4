use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use domainlab::budget::DEFAULT_BUDGET;
use domainlab::classify::{build_verified_pnt, classify, find_critical_spots, ClassifyError, Taxonomy};
use domainlab::enumerate::{decompose_rule, enum_topsonly_sp_rules, EnumError};
use domainlab::family::{
    certify_hybrid_domain, certify_sh_domain, certify_sp_domain, certify_ssp_domain, gen_family, Family, FamilyError,
    FamilyKind, DEFAULT_GEN_CAP,
};
use domainlab::report::{self, envelope};
use domainlab::rules::{check_axioms, check_invariance, check_invariance_strict, Axiom, RuleError, RuleSpec};
use domainlab::structure::{adjacency_graph, check_unidimensional, weak_adjacency_graph};
use domainlab::tree::parse_graph;
use domainlab::{parse_domain, parse_domain_json, Budget, BudgetExceeded, Domain, Tree};

#[derive(Parser)]
#[command(
    name = "domainlab",
    version,
    about = "Classify preference domains and verify strategy-proof rules"
)]
struct Cli {
    /// Evaluation budget (profile evaluations / search nodes).
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    /// Worker threads (0 = rayon default).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Also write the JSON report to this file.
    #[arg(long, global = true, value_name = "FILE")]
    json: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Richness report for a domain.
    Check { domain: PathBuf },
    /// Full classification of a domain.
    Classify { domain: PathBuf },
    /// Family certificates for a domain.
    ClassifyFamily { domain: PathBuf },
    /// Generate every preference of a family on a tree.
    Gen(GenArgs),
    /// Adjacency graph of a domain.
    Graph {
        domain: PathBuf,
        #[arg(long)]
        dot: bool,
        /// Weak adjacency (no agreement required below rank two).
        #[arg(long)]
        weak: bool,
    },
    /// Rule operations.
    Rule {
        #[command(subcommand)]
        action: RuleCommand,
    },
    /// Enumerate the two-voter tops-only strategy-proof rules.
    Enum {
        domain: PathBuf,
        #[arg(long)]
        decompose: bool,
    },
    /// Critical spots of a domain on a tree.
    Spots {
        domain: PathBuf,
        #[arg(long)]
        tree: PathBuf,
        /// Build and verify a PNT rule on every spot.
        #[arg(long)]
        build: bool,
        #[arg(long, num_args = 2, default_values_t = [0, 1])]
        voters: Vec<usize>,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    family: String,
    #[arg(long)]
    tree: PathBuf,
    #[arg(long, conflicts_with = "thresholds")]
    threshold: Option<String>,
    #[arg(long, num_args = 2)]
    thresholds: Option<Vec<String>>,
}

#[derive(Subcommand)]
enum RuleCommand {
    /// Check axioms of a rule spec on a domain.
    Verify {
        #[arg(long)]
        rule: PathBuf,
        #[arg(long)]
        domain: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "unanimity,sp,topsonly,anon,inv")]
        axioms: Vec<String>,
        /// Check invariance on every completely reversed pair.
        #[arg(long)]
        strict_invariance: bool,
    },
}

/// Result of a command: the JSON report, its text rendering, and whether
/// the outcome was inconclusive.
struct Output {
    json: Value,
    text: String,
    inconclusive: bool,
}

impl Output {
    fn new(json: Value, text: String) -> Self {
        Output {
            json,
            text,
            inconclusive: false,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_budget(&e) { 2 } else { 1 })
        }
    }
}

fn is_budget(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.is::<BudgetExceeded>()
            || matches!(c.downcast_ref::<RuleError>(), Some(RuleError::Budget(_)))
            || matches!(c.downcast_ref::<EnumError>(), Some(EnumError::Budget(_)))
            || matches!(c.downcast_ref::<FamilyError>(), Some(FamilyError::Budget(_)))
            || matches!(
                c.downcast_ref::<ClassifyError>(),
                Some(ClassifyError::Budget(_)) | Some(ClassifyError::Rule(RuleError::Budget(_)))
            )
    })
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let budget = Budget::new(cli.budget);
    let (out, default_format) = match &cli.command {
        Command::Check { domain } => (cmd_check(&load_domain(domain)?)?, Format::Json),
        Command::Classify { domain } => (cmd_classify(&load_domain(domain)?, &budget)?, Format::Json),
        Command::ClassifyFamily { domain } => (cmd_classify_family(&load_domain(domain)?, &budget), Format::Json),
        Command::Gen(args) => (cmd_gen(args)?, Format::Text),
        Command::Graph { domain, dot, weak } => (cmd_graph(&load_domain(domain)?, *dot, *weak), Format::Text),
        Command::Rule {
            action:
                RuleCommand::Verify {
                    rule,
                    domain,
                    axioms,
                    strict_invariance,
                },
        } => (
            cmd_rule_verify(rule, &load_domain(domain)?, axioms, *strict_invariance, &budget)?,
            Format::Json,
        ),
        Command::Enum { domain, decompose } => (cmd_enum(&load_domain(domain)?, *decompose, &budget)?, Format::Json),
        Command::Spots {
            domain,
            tree,
            build,
            voters,
            n,
        } => {
            let d = load_domain(domain)?;
            let t = load_tree(tree, &d)?;
            (
                cmd_spots(&d, &t, *build, (voters[0], voters[1]), *n, &budget)?,
                Format::Json,
            )
        }
    };
    let pretty = serde_json::to_string_pretty(&out.json)? + "\n";
    if let Some(path) = &cli.json {
        fs::write(path, &pretty).with_context(|| format!("writing {}", path.display()))?;
    }
    match cli.format.unwrap_or(default_format) {
        Format::Json => print!("{pretty}"),
        Format::Text => print!("{}", out.text),
    }
    Ok(ExitCode::from(if out.inconclusive { 2 } else { 0 }))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_domain(path: &Path) -> Result<Domain> {
    let text = read(path)?;
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("domain");
    let parsed = if path.extension().is_some_and(|e| e == "json") {
        parse_domain_json(&text, name)
    } else {
        parse_domain(&text, name)
    };
    parsed.with_context(|| format!("parsing {}", path.display()))
}

fn load_tree(path: &Path, d: &Domain) -> Result<Tree> {
    let (_, g) = parse_graph(&read(path)?, Some(d.labels())).with_context(|| format!("parsing {}", path.display()))?;
    Tree::new(g).with_context(|| format!("{} is not a tree", path.display()))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_check(d: &Domain) -> Result<Output> {
    let r = check_unidimensional(d)?;
    let mut text = format!("domain {}: {} alternatives, {} preferences\n", d.name(), d.m(), d.len());
    text += &format!("minimally rich: {}\n", yes(r.minimally_rich));
    text += &format!("path-connected: {}\n", yes(r.path_connected));
    text += &match r.diversity_witness {
        Some((i, j)) => format!("diversity: yes (prefs {i} and {j})\n"),
        None => "diversity: no\n".to_string(),
    };
    let violations = r.leaf_symmetry.violations();
    text += &format!("leaf symmetry: {}", yes(r.leaf_symmetry.holds));
    if !violations.is_empty() {
        let v: Vec<&str> = violations.iter().map(|&a| d.label(a)).collect();
        text += &format!(" (violated at {})", v.join(", "));
    }
    text.push('\n');
    text += &match r.unique_seconds_witness {
        Some((x, y)) => format!("unique seconds: {} -> {}\n", d.label(x), d.label(y)),
        None => "unique seconds: none\n".to_string(),
    };
    text += &format!("linked: {}\nunidimensional: {}\n", yes(r.linked), yes(r.unidimensional));
    Ok(Output::new(
        envelope(
            "check",
            json!({ "domain": d.name(), "report": report::richness_json(d, &r) }),
        ),
        text,
    ))
}

fn cmd_classify(d: &Domain, budget: &Budget) -> Result<Output> {
    let v = classify(d, budget)?;
    let mut text = format!("domain {}: {}\n", d.name(), v.taxonomy.name());
    match &v.taxonomy {
        Taxonomy::SemiSinglePeaked(c) => {
            let json = report::certificate_json(d, c);
            text += &format!(
                "  tree: {}\n  threshold: {}\n",
                json["kind"]["tree"], json["kind"]["threshold"]
            );
        }
        Taxonomy::SemiHybrid { cert, degenerate } => {
            let json = report::certificate_json(d, cert);
            text += &format!(
                "  tree: {}\n  thresholds: {}\n  degenerate: {}\n",
                json["kind"]["tree"],
                json["kind"]["thresholds"],
                yes(*degenerate)
            );
        }
        Taxonomy::Inconclusive(reason) => text += &format!("  reason: {reason}\n"),
        _ => {}
    }
    for r in &v.constructed_rules {
        let results: Vec<String> = r
            .results
            .iter()
            .map(|x| format!("{}={}", x.axiom.name(), if x.holds { "pass" } else { "fail" }))
            .collect();
        text += &format!("  {} rule: {}\n", r.role.name(), results.join(" "));
        if let Some(z) = r.free_zone_dictator {
            text += &format!(
                "    free-zone dictator: {}\n",
                z.map_or("none".to_string(), |v| format!("voter {v}"))
            );
        }
    }
    if !v.critical_spots.is_empty() {
        let spots: Vec<String> = v
            .critical_spots
            .iter()
            .map(|s| format!("({}, {})", d.label(s.x), d.label(s.y)))
            .collect();
        text += &format!("  critical spots: {}\n", spots.join(" "));
    }
    for n in &v.notes {
        text += &format!("  note: {n}\n");
    }
    let inconclusive = v.is_inconclusive();
    Ok(Output {
        json: envelope("classify", report::verdict_json(d, &v)),
        text,
        inconclusive,
    })
}

fn cmd_classify_family(d: &Domain, budget: &Budget) -> Output {
    let results = [
        ("sp", certify_sp_domain(d, budget)),
        ("ssp", certify_ssp_domain(d, budget)),
        ("hybrid", certify_hybrid_domain(d, budget)),
        ("sh", certify_sh_domain(d, budget)),
    ];
    let mut text = format!("domain {}\n", d.name());
    let mut body = serde_json::Map::new();
    body.insert("domain".into(), json!(d.name()));
    let mut inconclusive = false;
    for (name, c) in &results {
        inconclusive |= c.is_inconclusive();
        text += &format!("  {name}: {}\n", c.status());
        body.insert(name.to_string(), report::certification_json(d, c));
    }
    Output {
        json: envelope("classify-family", Value::Object(body)),
        text,
        inconclusive,
    }
}

fn cmd_gen(args: &GenArgs) -> Result<Output> {
    let (labels, g) = parse_graph(&read(&args.tree)?, None)?;
    let tree = Tree::new(g)?;
    let alt = |l: &str| {
        labels
            .iter()
            .position(|x| x == l)
            .map(domainlab::Alt::from_index)
            .ok_or_else(|| anyhow!("unknown alternative `{l}`"))
    };
    let family = Family::parse(&args.family).ok_or_else(|| anyhow!("unknown family `{}`", args.family))?;
    let kind = match family {
        Family::Sp => FamilyKind::sp(tree),
        Family::Ssp => {
            let x = args
                .threshold
                .as_deref()
                .ok_or_else(|| anyhow!("--threshold is required"))?;
            FamilyKind::ssp(tree, alt(x)?)?
        }
        Family::Hybrid | Family::Sh => {
            let ts = args
                .thresholds
                .as_ref()
                .ok_or_else(|| anyhow!("--thresholds A B is required"))?;
            let (a, b) = (alt(&ts[0])?, alt(&ts[1])?);
            if family == Family::Hybrid {
                FamilyKind::hybrid(tree, a, b)?
            } else {
                FamilyKind::sh(tree, a, b)?
            }
        }
    };
    let d = gen_family(&kind, &labels, DEFAULT_GEN_CAP)?;
    let prefs: Vec<Vec<&str>> = d
        .prefs()
        .iter()
        .map(|p| p.ranking().iter().map(|&a| d.label(a)).collect())
        .collect();
    Ok(Output::new(
        envelope(
            "gen",
            json!({ "name": d.name(), "alternatives": d.labels(), "prefs": prefs }),
        ),
        d.to_text(),
    ))
}

fn cmd_graph(d: &Domain, dot: bool, weak: bool) -> Output {
    let g = if weak {
        weak_adjacency_graph(d)
    } else {
        adjacency_graph(d)
    };
    let text = if dot {
        g.to_dot(d.labels())
    } else {
        g.to_text(d.labels())
    };
    Output::new(
        envelope(
            "graph",
            json!({
                "domain": d.name(),
                "weak": weak,
                "edges": report::edges_json(d, &g),
                "connected": g.is_connected(),
                "tree": g.is_tree(),
            }),
        ),
        text,
    )
}

fn cmd_rule_verify(rule: &Path, d: &Domain, axioms: &[String], strict: bool, budget: &Budget) -> Result<Output> {
    let spec: RuleSpec =
        serde_json::from_str(&read(rule)?).with_context(|| format!("parsing rule spec {}", rule.display()))?;
    let f = spec.build(d)?;
    let axioms = axioms
        .iter()
        .map(|a| Axiom::parse(a.trim()).ok_or_else(|| anyhow!("unknown axiom `{a}`")))
        .collect::<Result<Vec<_>>>()?;
    let results = check_axioms(&f, d, &axioms, budget)?;
    let mut text = format!("rule {} on {}\n", f.kind_name(), d.name());
    for r in &results {
        text += &format!("  {}: {}\n", r.axiom.name(), if r.holds { "pass" } else { "fail" });
    }
    let mut body = json!({
        "domain": d.name(),
        "rule": report::scf_json(d, &f),
        "results": results.iter().map(|r| report::axiom_result_json(d, r)).collect::<Vec<_>>(),
    });
    if strict {
        let pairs = check_invariance_strict(&f, d, budget)?;
        body["invariance_pairs"] = Value::Array(
            pairs
                .iter()
                .map(|(p, r)| json!({ "pair": [p.0, p.1], "result": report::axiom_result_json(d, r) }))
                .collect(),
        );
        let fails = pairs.iter().filter(|(_, r)| !r.holds).count();
        text += &format!("  invariance (all {} pairs): {} failing\n", pairs.len(), fails);
    }
    Ok(Output::new(envelope("rule verify", body), text))
}

fn cmd_enum(d: &Domain, decompose: bool, budget: &Budget) -> Result<Output> {
    let rules = enum_topsonly_sp_rules(d, budget)?;
    let diverse = domainlab::structure::check_diversity(d).is_some() && d.m() > 1;
    let mut text = format!("{} rules on {}\n", rules.len(), d.name());
    let mut items = Vec::new();
    for (k, f) in rules.iter().enumerate() {
        let table = report::peak_table_json(d, f).expect("enumeration yields peak tables");
        let mut item = json!({ "table": table });
        text += &format!("rule {k}");
        if diverse {
            let inv = check_invariance(f, d, budget)?.holds;
            item["invariant"] = json!(inv);
            text += if inv { " invariant" } else { "" };
        }
        if decompose {
            let dec = decompose_rule(f, d, budget)?;
            text += &format!(" {}", dec.tag());
            item["decomposition"] = report::decomposition_json(d, &dec);
        }
        text.push('\n');
        for row in table.as_array().expect("matrix") {
            let cells: Vec<String> = row
                .as_array()
                .expect("row")
                .iter()
                .map(|c| c.as_str().unwrap_or("-").to_string())
                .collect();
            text += &format!("  {}\n", cells.join(" "));
        }
        items.push(item);
    }
    Ok(Output::new(
        envelope(
            "enum",
            json!({ "domain": d.name(), "alternatives": d.labels(), "count": rules.len(), "rules": items }),
        ),
        text,
    ))
}

fn cmd_spots(d: &Domain, t: &Tree, build: bool, (i, j): (usize, usize), n: usize, budget: &Budget) -> Result<Output> {
    let spots = find_critical_spots(d, t, budget)?;
    let mut text = format!("{} critical spots\n", spots.len());
    let mut items = Vec::new();
    for s in &spots {
        text += &format!(
            "  ({}, {}) witnesses {} {}\n",
            d.label(s.x),
            d.label(s.y),
            s.witnesses.0,
            s.witnesses.1
        );
        let mut item = report::spots_json(d, std::slice::from_ref(s))[0].clone();
        if build {
            let (f, results) = build_verified_pnt(d, t, s, i, j, n, budget)?;
            item["rule"] = report::scf_json(d, &f);
            item["results"] = Value::Array(results.iter().map(|r| report::axiom_result_json(d, r)).collect());
        }
        items.push(item);
    }
    Ok(Output::new(
        envelope(
            "spots",
            json!({ "domain": d.name(), "tree": report::tree_json(d, t), "spots": items }),
        ),
        text,
    ))
}
