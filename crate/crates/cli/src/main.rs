mod varfile;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use jetfiber::components::{build_graph, chain_analysis, component_report, ReportOptions};
use jetfiber::ffenum::{cone_product_check, count_fiber_points, EnumerationBudget};
use jetfiber::invariants::{hdv_certificate_attempts, lct_monomial, MonomialIdeal};
use jetfiber::jets::{fiber_ideal, jet_codim, jet_ideal, VarietySpec};
use jetfiber::strata::{Scenario, ScenarioTag};
use jetfiber::verify::{run_suite, suite_criteria, VerifyOptions, SUITES};
use jetfiber::{is_resource_cap, parse_polynomial};

use varfile::VarietyFile;

#[derive(Parser, Debug)]
#[command(name = "jetfiber", version, about = "Jet schemes, jet-fiber components and singularity invariants")]
struct Cli {
    /// Seed for every random draw; echoed in all outputs.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Output format on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Cap on enumerated points (default: $JETFIBER_MAX_POINTS or 10^8).
    #[arg(long, global = true)]
    max_points: Option<u128>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Jet scheme or jet fiber ideal of a variety at order m.
    Jet {
        /// Variety file or scenario tag.
        input: String,
        #[arg(long)]
        m: usize,
        /// Fiber over the variety's point instead of the whole jet scheme.
        #[arg(long)]
        fiber: bool,
    },
    /// Certified components of the jet fiber of a scenario at order m.
    Components {
        scenario: String,
        #[arg(long)]
        m: usize,
        /// Prime for the finite-field cross-check.
        #[arg(long)]
        oracle: Option<u64>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Graph of components across orders 0..=max.
    Graph {
        scenario: String,
        #[arg(long)]
        max: usize,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Log canonical threshold of a monomial ideal, e.g. "x^2, y^2, z^3".
    Lct {
        ideal: String,
        /// Variable order (comma separated); defaults to first appearance.
        #[arg(long)]
        vars: Option<String>,
    },
    /// Certificate for the complete intersection of e general members of 𝔞.
    HdvCert {
        #[arg(long)]
        e: u32,
        /// A, D, E6, E7 or E8 (A and D take --n; A2 and D4 also accepted).
        #[arg(long = "type")]
        btype: String,
        #[arg(long)]
        n: Option<u32>,
        /// Coefficient redraws while the structural checks fail.
        #[arg(long, default_value_t = 5)]
        draws: usize,
    },
    /// Run a named acceptance suite.
    Verify {
        #[arg(default_value = "all")]
        suite: String,
    },
    /// Count 𝔽_q points of a jet fiber, bucketed by target orders.
    Enum {
        /// Variety file or scenario tag.
        input: String,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 5)]
        q: u64,
        /// Comma-separated ambient polynomials whose orders form the buckets.
        #[arg(long)]
        targets: Option<String>,
        /// For `cone:N:r`, compare with |X_{m-r}| · q^{N(r-1)}.
        #[arg(long)]
        cone_check: bool,
    },
}

/// Exit status of the process.
#[derive(Debug)]
enum Outcome {
    Ok,
    /// A mathematical check failed.
    Failed(String),
}

/// Errors raised for invalid input, classified as usage errors.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(UsageError(msg.into()))
}

struct Ctx {
    seed: u64,
    format: Format,
    budget: EnumerationBudget,
}

impl Ctx {
    fn emit<T: Serialize>(&self, value: &T, text: impl FnOnce() -> String) -> Result<()> {
        let out = match self.format {
            Format::Json => serde_json::to_string_pretty(value)? + "\n",
            Format::Text => text(),
        };
        let mut stdout = std::io::stdout().lock();
        match stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
            _ => Ok(()),
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn scenario(tag: &str, seed: u64) -> Result<Scenario> {
    let parsed: ScenarioTag = tag.parse().map_err(|e: jetfiber::strata::StrataError| usage(e.to_string()))?;
    Ok(Scenario::new(parsed, seed)?)
}

/// A scenario tag when the argument parses as one, otherwise a variety file.
fn variety_input(input: &str, seed: u64) -> Result<(String, VarietySpec)> {
    if let Ok(tag) = input.parse::<ScenarioTag>() {
        return Ok((tag.to_string(), Scenario::new(tag, seed)?.variety));
    }
    let path = Path::new(input);
    if !path.exists() {
        return Err(usage(format!("`{input}` is neither a scenario tag nor an existing file")));
    }
    let file = VarietyFile::read(path).map_err(|e| usage(format!("{e:#}")))?;
    let spec = file.to_spec().map_err(|e| usage(format!("{}: {e:#}", path.display())))?;
    Ok((path.display().to_string(), spec))
}

fn cmd_jet(ctx: &Ctx, input: &str, m: usize, fiber: bool) -> Result<Outcome> {
    let (name, v) = variety_input(input, ctx.seed)?;
    let (jctx, ideal) = if fiber { fiber_ideal(&v, m)? } else { jet_ideal(&v, m)? };
    let dim = ideal.dimension()?;
    let codim = if fiber { None } else { Some(jet_codim(dim.max(0), m, v.dimension()).unwrap_or(-1)) };
    let gens: Vec<String> = ideal.generators().iter().map(|g| g.to_string()).collect();
    let value = json!({
        "schema": jetfiber::components::SCHEMA_VERSION,
        "input": name, "seed": ctx.seed, "order": m, "fiber": fiber,
        "variables": jctx.ring().variables(), "generators": gens,
        "dimension": dim, "variety_dimension": v.dimension(), "jet_codimension": codim,
    });
    ctx.emit(&value, || {
        let mut s = format!(
            "{} of {name} at order {m} (seed {})\n",
            if fiber { "jet fiber" } else { "jet scheme" },
            ctx.seed
        );
        s += &format!("variables: {}\n", jctx.ring().variables().join(", "));
        s += &format!("generators ({}):\n", gens.len());
        for g in &gens {
            s += &format!("  {g}\n");
        }
        s += &format!("dimension: {dim}\n");
        if let Some(c) = codim {
            s += &format!("variety dimension: {}, (m+1)·dim X − dim: {c}\n", v.dimension());
        }
        s
    })?;
    Ok(Outcome::Ok)
}

fn cmd_components(ctx: &Ctx, tag: &str, m: usize, oracle: Option<u64>, out: Option<&Path>) -> Result<Outcome> {
    let sc = scenario(tag, ctx.seed)?;
    let opts = ReportOptions { oracle_q: oracle, oracle_max_order: usize::MAX, budget: ctx.budget };
    let report = component_report(&sc, m, &opts)?;
    if let Some(path) = out {
        write_file(path, &serde_json::to_string_pretty(&report)?)?;
    }
    ctx.emit(&report, || {
        let mut s = format!("scenario {} order {m} (seed {})\n", report.scenario, report.seed);
        s += &format!(
            "containment {} cover {} irredundancy {} => {}\n",
            report.containment_certified,
            report.cover_certified,
            report.irredundancy_certified,
            if report.certified { format!("certified, {} components", report.count) } else { "NOT certified".into() }
        );
        for c in &report.components {
            s += &format!(
                "  {:<6} dim {:>3}  jet codim {:>3}  {}{}\n",
                c.label,
                c.dimension,
                c.jet_codimension.map_or("-".into(), |v| v.to_string()),
                if c.arc_type { "arc-type " } else { "" },
                if c.witnesses.is_empty() { String::new() } else { format!("[{}]", c.witnesses.join(", ")) }
            );
        }
        if let Some(o) = &report.oracle {
            s += &format!(
                "oracle F_{}: {} fiber points, {} uncovered, private {:?}, agrees {}\n",
                o.counts.q, o.counts.fiber_points, o.counts.uncovered, o.counts.private_points, o.agrees
            );
        }
        for n in report.notes.iter().chain(&report.diagnostics) {
            s += &format!("note: {n}\n");
        }
        for a in &report.assumptions {
            s += &format!("assumption: {a}\n");
        }
        s
    })?;
    let oracle_ok = report.oracle.as_ref().is_none_or(|o| o.agrees);
    if report.certified && oracle_ok {
        Ok(Outcome::Ok)
    } else {
        Ok(Outcome::Failed(format!("{} at order {m} is not certified", report.scenario)))
    }
}

fn cmd_graph(ctx: &Ctx, tag: &str, max: usize, dot: Option<&Path>, out: Option<&Path>) -> Result<Outcome> {
    let sc = scenario(tag, ctx.seed)?;
    if max < 1 {
        return Err(usage("--max must be at least 1"));
    }
    let (graph, _) = match build_graph(&sc, max, &ReportOptions::default()) {
        Ok(g) => g,
        Err(e @ jetfiber::components::ComponentError::NotCertified { .. }) => return Ok(Outcome::Failed(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    let chains = chain_analysis(&graph);
    let value = json!({ "graph": graph, "chains": chains, "seed": ctx.seed });
    if let Some(path) = dot {
        write_file(path, &graph.to_dot())?;
    }
    if let Some(path) = out {
        write_file(path, &serde_json::to_string_pretty(&value)?)?;
    }
    ctx.emit(&value, || {
        let mut s = String::new();
        if dot.is_none() {
            s += &graph.to_dot();
        }
        s += &format!("// seed {}\n// {}\n", ctx.seed, chains.report);
        for n in &graph.notes {
            s += &format!("// note: {n}\n");
        }
        s
    })?;
    Ok(Outcome::Ok)
}

fn cmd_lct(ctx: &Ctx, ideal: &str, vars: Option<&str>) -> Result<Outcome> {
    let names: Option<Vec<String>> = vars.map(|v| v.split(',').map(|s| s.trim().to_string()).collect());
    let a = MonomialIdeal::parse(ideal, names.as_deref()).map_err(|e| usage(e.to_string()))?;
    let res = lct_monomial(&a)?;
    let value = json!({ "ideal": ideal, "seed": ctx.seed, "generators": a.generators(), "result": res });
    ctx.emit(&value, || {
        let show = |v: &[jetfiber::Rational]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        format!(
            "lct = {}\nseed: {}\nwitness: s* = {} with generator weights λ = [{}]\ndual: coordinate weights w = [{}]\n",
            res.lct,
            ctx.seed,
            res.s,
            show(&res.lambda),
            show(&res.dual)
        )
    })?;
    Ok(Outcome::Ok)
}

fn cmd_hdv(ctx: &Ctx, e: u32, btype: &str, n: Option<u32>, draws: usize) -> Result<Outcome> {
    let tag = match n {
        Some(n) => format!("hdv:{e}:{btype}:{n}"),
        None => format!("hdv:{e}:{btype}"),
    };
    let parsed: ScenarioTag = tag.parse().map_err(|err: jetfiber::strata::StrataError| usage(err.to_string()))?;
    let ScenarioTag::Hdv { e, btype } = parsed else { unreachable!("hdv tag") };
    let cert = hdv_certificate_attempts(e, btype, ctx.seed, draws)?;
    ctx.emit(&cert, || {
        let k = &cert.checks;
        let mut s = format!("hDV certificate e = {e}, type {btype} (seed {}, draws {})\n", cert.seed, cert.draws);
        for eq in &cert.equations {
            s += &format!("  {eq} = 0\n");
        }
        s += &format!("complete intersection: {}\n", k.complete_intersection);
        s += &format!("isolated singularity: {} (singular locus dim {})\n", k.isolated_singularity, k.singular_locus_dim);
        s += &format!("dim {} edim {} ecodim {}\n", k.embedding.dim, k.embedding.edim, k.embedding.ecodim);
        s += &format!("lct(a) = {} > {e}: {}\n", k.lct_a.lct, k.lct_exceeds_e);
        s += &format!("multiplicity {}, blow-up bound {}\n", k.multiplicity, k.blowup_bound);
        s += &format!(
            "mld verdict: {}\n",
            cert.mld_verdict.as_ref().map_or("not certified".to_string(), |v| v.to_string())
        );
        s
    })?;
    if cert.certified() {
        Ok(Outcome::Ok)
    } else {
        Ok(Outcome::Failed(format!("{tag} is not certified")))
    }
}

fn cmd_verify(ctx: &Ctx, suite: &str) -> Result<Outcome> {
    if suite_criteria(suite).is_none() {
        let names: Vec<&str> = SUITES.iter().map(|(n, _)| *n).collect();
        return Err(usage(format!("unknown suite `{suite}`; expected one of {}", names.join(", "))));
    }
    let mut opts = VerifyOptions { seed: ctx.seed, ..Default::default() };
    opts.budget.max_points = opts.budget.max_points.max(ctx.budget.max_points);
    let results = run_suite(suite, &opts).expect("suite exists");
    let failed: Vec<u8> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    let value = json!({ "suite": suite, "seed": ctx.seed, "results": results, "failed": failed });
    ctx.emit(&value, || {
        let mut s = format!("suite {suite} (seed {})\n", ctx.seed);
        for r in &results {
            s += &r.line();
            s.push('\n');
        }
        s
    })?;
    if failed.is_empty() {
        Ok(Outcome::Ok)
    } else {
        Ok(Outcome::Failed(format!("criteria {failed:?} failed")))
    }
}

fn cmd_enum(ctx: &Ctx, input: &str, m: usize, q: u64, targets: Option<&str>, cone: bool) -> Result<Outcome> {
    if cone {
        let Ok(ScenarioTag::Cone { n, r }) = input.parse::<ScenarioTag>() else {
            return Err(usage("--cone-check needs a cone:N:r scenario"));
        };
        let check = cone_product_check(n as usize, r as usize, m, q, &ctx.budget)?;
        let value = json!({ "seed": ctx.seed, "cone": check });
        ctx.emit(&value, || {
            format!(
                "cone N={n} r={r} m={m} over F_{q} (seed {}): {} = {} · {} -> {}\n",
                ctx.seed, check.fiber_count, check.lower_jet_count, check.factor, check.holds
            )
        })?;
        return Ok(if check.holds { Outcome::Ok } else { Outcome::Failed("cone formula fails".into()) });
    }
    let (name, v) = variety_input(input, ctx.seed)?;
    let targets = match targets {
        Some(t) => t
            .split(',')
            .map(|p| parse_polynomial(p.trim(), v.ring()).map_err(|e| usage(format!("target `{p}`: {e}"))))
            .collect::<Result<Vec<_>>>()?,
        None => vec![],
    };
    let counts = count_fiber_points(&v, m, q, &targets, &ctx.budget)?;
    let value = json!({ "input": name, "seed": ctx.seed, "count": counts });
    ctx.emit(&value, || {
        let mut s = format!("{name}: fiber at order {m} over F_{q} (seed {}) has {} points\n", ctx.seed, counts.total);
        for (k, c) in &counts.buckets {
            if !targets.is_empty() {
                s += &format!("  orders ({k}): {c}\n");
            }
        }
        s
    })?;
    Ok(Outcome::Ok)
}

fn run(cli: &Cli) -> Result<Outcome> {
    let budget = match cli.max_points {
        Some(p) => EnumerationBudget::with_max_points(p),
        None => EnumerationBudget::from_env(),
    };
    let ctx = Ctx { seed: cli.seed, format: cli.format, budget };
    match &cli.command {
        Command::Jet { input, m, fiber } => cmd_jet(&ctx, input, *m, *fiber),
        Command::Components { scenario, m, oracle, json } => cmd_components(&ctx, scenario, *m, *oracle, json.as_deref()),
        Command::Graph { scenario, max, dot, json } => cmd_graph(&ctx, scenario, *max, dot.as_deref(), json.as_deref()),
        Command::Lct { ideal, vars } => cmd_lct(&ctx, ideal, vars.as_deref()),
        Command::HdvCert { e, btype, n, draws } => cmd_hdv(&ctx, *e, btype, *n, *draws),
        Command::Verify { suite } => cmd_verify(&ctx, suite),
        Command::Enum { input, m, q, targets, cone_check } => cmd_enum(&ctx, input, *m, *q, targets.as_deref(), *cone_check),
    }
}

fn diagnostic(kind: &str, code: u8, message: &str, seed: u64) {
    let v: Value = json!({ "error": kind, "exit_code": code, "message": message, "seed": seed });
    eprintln!("{v}");
}

fn classify(err: &anyhow::Error) -> (&'static str, u8) {
    for cause in err.chain() {
        if is_resource_cap(cause) {
            return ("resource_cap", 3);
        }
        if cause.downcast_ref::<UsageError>().is_some() {
            return ("usage", 2);
        }
    }
    ("input", 2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            if code == 2 {
                diagnostic("usage", 2, &e.kind().to_string(), 1);
            }
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed(msg)) => {
            diagnostic("verification_failed", 1, &msg, cli.seed);
            ExitCode::from(1)
        }
        Err(err) => {
            let (kind, code) = classify(&err);
            diagnostic(kind, code, &format!("{err:#}"), cli.seed);
            ExitCode::from(code)
        }
    }
}
