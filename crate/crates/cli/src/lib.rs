//! The `orcap` command-line tool: graph generation and products, exact
//! solvers, theta bounds, capacity reports and the Paley test pairs.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 inconclusive within
//! budget, 3 certificate verification failure.

pub mod report;

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};

use orcap_core::bounds::{
    capacity_bounds, pair_bounds, paley_gap_certificate, BoundEntry, BoundKind, BoundReport,
    BoundsConfig, Certificate, GapVerdict, PairReport,
};
use orcap_core::graph::{and_product, join, or_power, or_product, tensor_product};
use orcap_core::io::{decode_graph6, encode_graph6, parse_dimacs, write_dimacs};
use orcap_core::paley::{paley_family, PaleyVariant};
use orcap_core::props::{run_properties, PropertyConfig};
use orcap_core::search::{
    chromatic_number, homomorphism, max_clique_with, odd_girth, Decision, SearchBudget,
};
use orcap_core::theta::{lovasz_theta_certified, theta_bar_certified, SolverConfig};
use orcap_core::Graph;

use report::{
    verify_document, CliqueTarget, GraphRecord, Outcome, Phase, ReportDocument, Results,
    ThetaParameter, Timing, SCHEMA_VERSION,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "orcap", version, about = "Certified bounds on the Shannon OR-capacity of graphs and graph products")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Graph format. Output defaults to graph6; input is detected when omitted.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write a JSON report document to PATH ("-" for stdout).
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,

    /// Canonical (lexicographically least) witnesses.
    #[arg(long, global = true, default_value_t = true, action = ArgAction::Set,
          num_args = 0..=1, default_missing_value = "true", value_name = "BOOL")]
    deterministic: bool,

    /// Seed for the randomized property harness.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    /// Leave dense dual matrices out of JSON output.
    #[arg(long, global = true)]
    elide_matrices: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Graph6,
    Dimacs,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a named graph.
    Gen(GenArgs),
    /// Apply a graph operation.
    Op(OpArgs),
    /// Compute a single invariant.
    Compute(ComputeArgs),
    /// Decide whether F maps homomorphically to G.
    Hom(PairInput),
    /// Capacity bounds for one graph.
    Bounds(BoundsArgs),
    /// Bounds for the capacity of the categorical product F x G.
    Pair(PairArgs),
    /// The Paley test-pair argument for a prime p.
    Testcase(TestcaseArgs),
    /// Run the randomized property suites.
    Props(PropsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Paley,
    PaleyDel,
    PaleyDel2,
    Cycle,
    Complete,
    Empty,
    Path,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DeletionKind {
    Adjacent,
    Nonadjacent,
}

#[derive(Args, Debug)]
struct GenArgs {
    family: Family,
    /// Field order for the Paley families, a prime power = 1 (mod 4).
    #[arg(long)]
    q: Option<u64>,
    /// Vertex count for cycle, complete, empty and path.
    #[arg(long)]
    n: Option<usize>,
    /// Which second vertex paley-del2 removes: the least square or the least nonsquare.
    #[arg(long, value_enum, default_value_t = DeletionKind::Adjacent)]
    kind: DeletionKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Operation {
    Complement,
    Tensor,
    Or,
    And,
    Join,
    Power,
}

#[derive(Args, Debug)]
struct OpArgs {
    operation: Operation,
    /// Exponent for `power`.
    #[arg(short = 't', long = "power")]
    t: Option<u32>,
    /// Input files ("-" or none for stdin).
    inputs: Vec<PathBuf>,
}

#[derive(Args, Debug, Clone, Copy)]
struct SolveArgs {
    /// Relative gap at which the theta solver stops.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    budget_nodes: Option<u64>,
    #[arg(long)]
    budget_seconds: Option<f64>,
}

impl SolveArgs {
    fn budget(&self, default: SearchBudget) -> Result<SearchBudget, CliError> {
        if self.budget_nodes.is_none() && self.budget_seconds.is_none() {
            return Ok(default);
        }
        if let Some(s) = self.budget_seconds {
            if !(s.is_finite() && s >= 0.0) {
                return Err(CliError::Usage("--budget-seconds must be a nonnegative number".into()));
            }
        }
        Ok(SearchBudget {
            max_nodes: self.budget_nodes,
            max_time: self.budget_seconds.map(std::time::Duration::from_secs_f64),
        })
    }

    fn solver(&self) -> Result<SolverConfig, CliError> {
        let mut cfg = SolverConfig::default();
        if let Some(t) = self.tol {
            if !(t > 0.0 && t < 1.0) {
                return Err(CliError::Usage("--tol must lie in (0, 1)".into()));
            }
            cfg.target_gap = t;
        }
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Quantity {
    Clique,
    Alpha,
    Chrom,
    Theta,
    ThetaBar,
    OddGirth,
}

#[derive(Args, Debug)]
struct ComputeArgs {
    quantity: Quantity,
    input: Option<PathBuf>,
    #[command(flatten)]
    solve: SolveArgs,
}

#[derive(Args, Debug)]
struct PairInput {
    /// F and G ("-" or omitted for stdin, one graph per line).
    inputs: Vec<PathBuf>,
    #[command(flatten)]
    solve: SolveArgs,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    max_power: u32,
    #[command(flatten)]
    solve: SolveArgs,
}

#[derive(Args, Debug)]
struct PairArgs {
    inputs: Vec<PathBuf>,
    #[arg(long, default_value_t = 1)]
    max_power: u32,
    #[command(flatten)]
    solve: SolveArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Variant {
    Full,
    Deleted,
}

#[derive(Args, Debug)]
struct TestcaseArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, value_enum, default_value_t = Variant::Deleted)]
    variant: Variant,
    #[command(flatten)]
    solve: SolveArgs,
}

#[derive(Args, Debug)]
struct PropsArgs {
    /// A reduced run with a tenth of the cases.
    #[arg(long)]
    quick: bool,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Verification(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Verification(_) => EXIT_VERIFICATION,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Verification(m) => m,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

/// What a subcommand produced, before it is rendered.
struct Output {
    text: String,
    inputs: Vec<GraphRecord>,
    results: Results,
    certificates: Vec<Certificate>,
    phases: Vec<Phase>,
    conclusive: bool,
}

impl Output {
    fn new(text: String, results: Results) -> Self {
        Output {
            text,
            inputs: Vec::new(),
            results,
            certificates: Vec::new(),
            phases: Vec::new(),
            conclusive: true,
        }
    }
}

struct Inputs<'a> {
    stdin: &'a mut dyn Read,
    stdin_used: bool,
    format: Option<Format>,
}

impl Inputs<'_> {
    fn read_source(&mut self, path: Option<&PathBuf>) -> Result<(String, Vec<u8>), CliError> {
        match path {
            Some(p) if p.as_os_str() != "-" => {
                let bytes = std::fs::read(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
                Ok((p.display().to_string(), bytes))
            }
            _ => {
                if self.stdin_used {
                    return Err(usage("standard input can only be read once"));
                }
                self.stdin_used = true;
                let mut bytes = Vec::new();
                self.stdin.read_to_end(&mut bytes).map_err(usage)?;
                Ok(("stdin".into(), bytes))
            }
        }
    }

    fn parse(&self, id: &str, bytes: &[u8]) -> Result<Vec<(String, Graph)>, CliError> {
        let text = String::from_utf8_lossy(bytes);
        let dimacs = match self.format {
            Some(f) => f == Format::Dimacs,
            None => text.lines().any(|l| l.trim_start().starts_with("p ")),
        };
        if dimacs {
            let g = parse_dimacs(&text).map_err(|e| usage(format!("{id}: {e}")))?;
            return Ok(vec![(id.to_string(), g)]);
        }
        let lines: Vec<&[u8]> = bytes
            .split(|&b| b == b'\n')
            .filter(|l| !l.iter().all(|b| b.is_ascii_whitespace()))
            .collect();
        let many = lines.len() > 1;
        lines
            .iter()
            .enumerate()
            .map(|(i, line)| {
                let g = decode_graph6(line).map_err(|e| usage(format!("{id}: {e}")))?;
                let name = if many { format!("{id}#{}", i + 1) } else { id.to_string() };
                Ok((name, g))
            })
            .collect()
    }

    /// Reads exactly `count` graphs from the given paths, or from stdin.
    fn gather(&mut self, paths: &[PathBuf], count: usize) -> Result<Vec<(String, Graph)>, CliError> {
        let mut graphs = Vec::new();
        if paths.is_empty() {
            let (id, bytes) = self.read_source(None)?;
            graphs.extend(self.parse(&id, &bytes)?);
        }
        for p in paths {
            let (id, bytes) = self.read_source(Some(p))?;
            graphs.extend(self.parse(&id, &bytes)?);
        }
        if graphs.len() != count {
            return Err(usage(format!("expected {count} input graph(s), got {}", graphs.len())));
        }
        Ok(graphs)
    }
}

fn records(graphs: &[(String, Graph)]) -> Result<Vec<GraphRecord>, CliError> {
    graphs
        .iter()
        .map(|(id, g)| GraphRecord::new(id.clone(), g).map_err(usage))
        .collect()
}

fn render_graph(g: &Graph, format: Option<Format>) -> Result<String, CliError> {
    Ok(match format.unwrap_or(Format::Graph6) {
        Format::Graph6 => encode_graph6(g).map_err(usage)? + "\n",
        Format::Dimacs => write_dimacs(g),
    })
}

fn graph_output(g: Graph, operation: String, format: Option<Format>) -> Result<Output, CliError> {
    let text = render_graph(&g, format)?;
    let output = GraphRecord::new(g.label().unwrap_or("output").to_string(), &g).map_err(usage)?;
    Ok(Output::new(text, Results::Graph { operation, output }))
}

fn cmd_gen(a: &GenArgs, format: Option<Format>) -> Result<Output, CliError> {
    let need_q = || a.q.ok_or_else(|| usage("this family needs --q"));
    let need_n = || a.n.ok_or_else(|| usage("this family needs --n"));
    let g = match a.family {
        Family::Paley => paley_family(need_q()?, PaleyVariant::Full).map_err(usage)?,
        Family::PaleyDel => paley_family(need_q()?, PaleyVariant::OneDeleted).map_err(usage)?,
        Family::PaleyDel2 => {
            let v = match a.kind {
                DeletionKind::Adjacent => PaleyVariant::TwoDeletedAdjacent,
                DeletionKind::Nonadjacent => PaleyVariant::TwoDeletedNonadjacent,
            };
            paley_family(need_q()?, v).map_err(usage)?
        }
        Family::Cycle => Graph::cycle(need_n()?),
        Family::Complete => Graph::complete(need_n()?),
        Family::Empty => Graph::empty(need_n()?),
        Family::Path => Graph::path(need_n()?),
    };
    let name = format!("gen {}", a.family.to_possible_value().expect("named").get_name());
    graph_output(g, name, format)
}

fn cmd_op(a: &OpArgs, inputs: &mut Inputs) -> Result<Output, CliError> {
    let unary = matches!(a.operation, Operation::Complement | Operation::Power);
    let graphs = inputs.gather(&a.inputs, if unary { 1 } else { 2 })?;
    let first = &graphs[0].1;
    let g = match a.operation {
        Operation::Complement => first.complement(),
        Operation::Power => {
            let t = a.t.ok_or_else(|| usage("power needs -t T"))?;
            or_power(first, t).map_err(usage)?
        }
        Operation::Tensor => tensor_product(first, &graphs[1].1).map_err(usage)?,
        Operation::Or => or_product(first, &graphs[1].1).map_err(usage)?,
        Operation::And => and_product(first, &graphs[1].1).map_err(usage)?,
        Operation::Join => join(first, &graphs[1].1),
    };
    let name = format!("op {}", a.operation.to_possible_value().expect("named").get_name());
    let mut out = graph_output(g, name, inputs.format)?;
    out.inputs = records(&graphs)?;
    Ok(out)
}

fn cmd_compute(a: &ComputeArgs, inputs: &mut Inputs, deterministic: bool, keep: bool) -> Result<Output, CliError> {
    let paths: Vec<PathBuf> = a.input.iter().cloned().collect();
    let graphs = inputs.gather(&paths, 1)?;
    let g = &graphs[0].1;
    let budget = a.solve.budget(SearchBudget::unlimited())?;
    let mut out = match a.quantity {
        Quantity::Clique | Quantity::Alpha => {
            let alpha = a.quantity == Quantity::Alpha;
            let target = if alpha { g.complement() } else { g.clone() };
            let r = max_clique_with(&target, budget, deterministic);
            let mut out = Output::new(
                format!("{}\n", r.size),
                Results::Clique {
                    target: if alpha { CliqueTarget::IndependentSet } else { CliqueTarget::Clique },
                    size: r.size,
                    proven_optimal: r.proven_optimal,
                    nodes_explored: r.nodes_explored,
                },
            );
            if !r.proven_optimal {
                out.text = format!("{} (inconclusive: best found within budget)\n", r.size);
            }
            out.conclusive = r.proven_optimal;
            out.certificates.push(Certificate::Clique {
                power: 1,
                vertices: r.witness,
            });
            out
        }
        Quantity::Chrom => {
            let r = chromatic_number(g, budget);
            let text = match r.exact() {
                Some(k) => format!("{k}\n"),
                None => format!("between {} and {} (inconclusive)\n", r.lower, r.upper),
            };
            let mut out = Output::new(
                text,
                Results::Chromatic {
                    lower: r.lower,
                    upper: r.upper,
                },
            );
            out.conclusive = r.is_exact();
            out.certificates.push(Certificate::Coloring { colors: r.coloring });
            out
        }
        Quantity::Theta | Quantity::ThetaBar => {
            let solver = a.solve.solver()?;
            let bar = a.quantity == Quantity::ThetaBar;
            let sol = if bar {
                theta_bar_certified(g, &solver)
            } else {
                lovasz_theta_certified(g, &solver)
            }
            .map_err(usage)?;
            let v = sol.value;
            let mut out = Output::new(
                format!("{:.6} [{:.6}, {:.6}]\n", v.midpoint(), v.lower, v.upper),
                Results::Theta {
                    parameter: if bar { ThetaParameter::ThetaBar } else { ThetaParameter::Theta },
                    interval: v,
                },
            );
            out.certificates.push(Certificate::ThetaDual {
                interval: v,
                edge_weights: keep.then_some(sol.certificate.edge_weights),
            });
            out
        }
        Quantity::OddGirth => {
            let v = odd_girth(g);
            let text = v.map_or("inf\n".to_string(), |k| format!("{k}\n"));
            Output::new(text, Results::OddGirth { value: v })
        }
    };
    out.inputs = records(&graphs)?;
    Ok(out)
}

fn cmd_hom(a: &PairInput, inputs: &mut Inputs) -> Result<Output, CliError> {
    let graphs = inputs.gather(&a.inputs, 2)?;
    let budget = a.solve.budget(SearchBudget::unlimited())?;
    let d = homomorphism(&graphs[0].1, &graphs[1].1, budget);
    let mut out = match d {
        Decision::Found(w) => {
            let line: Vec<String> = w.mapping.iter().map(usize::to_string).collect();
            let mut out = Output::new(
                format!("found\n{}\n", line.join(" ")),
                Results::Homomorphism { outcome: Outcome::Found },
            );
            out.certificates.push(Certificate::Homomorphism { mapping: w.mapping });
            out
        }
        Decision::Refuted => Output::new("none\n".into(), Results::Homomorphism { outcome: Outcome::Refuted }),
        Decision::Inconclusive => {
            let mut out = Output::new(
                "inconclusive\n".into(),
                Results::Homomorphism {
                    outcome: Outcome::Inconclusive,
                },
            );
            out.conclusive = false;
            out
        }
    };
    out.inputs = records(&graphs)?;
    Ok(out)
}

fn bounds_config(solve: &SolveArgs, deterministic: bool, keep: bool) -> Result<BoundsConfig, CliError> {
    let mut cfg = BoundsConfig::default();
    cfg.budget = solve.budget(cfg.budget)?;
    cfg.solver = solve.solver()?;
    cfg.deterministic = deterministic;
    cfg.keep_certificates = keep;
    Ok(cfg)
}

fn describe_entry(e: &BoundEntry) -> String {
    let kind = match e.kind {
        BoundKind::Lower => ">=",
        BoundKind::Upper => "<=",
    };
    let why = serde_json::to_value(&e.provenance)
        .ok()
        .and_then(|v| {
            let reason = v.get("reason")?.as_str()?.to_string();
            Some(match v.get("t") {
                Some(t) => format!("{reason} t={t}"),
                None => reason,
            })
        })
        .unwrap_or_default();
    format!("  {kind} {:.6}  {why}\n", e.value)
}

fn describe_report(r: &BoundReport) -> String {
    let mut s = format!("{} ({} vertices)\n", r.graph, r.n);
    for e in &r.entries {
        s.push_str(&describe_entry(e));
    }
    s.push_str(&format!("  capacity in [{:.6}, {:.6}]", r.best_lower, r.best_upper));
    if let Some(x) = r.exact {
        s.push_str(&format!(", exactly {x:.6}"));
    }
    s.push('\n');
    for n in &r.notices {
        s.push_str(&format!("  note: {n}\n"));
    }
    s
}

fn report_is_conclusive(r: &BoundReport) -> bool {
    !r.notices.iter().any(|n| n.contains("inconclusive"))
}

fn cmd_bounds(a: &BoundsArgs, inputs: &mut Inputs, cfg: &BoundsConfig) -> Result<Output, CliError> {
    let paths: Vec<PathBuf> = a.input.iter().cloned().collect();
    let mut graphs = inputs.gather(&paths, 1)?;
    if graphs[0].1.label().is_none() {
        let id = graphs[0].0.clone();
        graphs[0].1 = graphs[0].1.clone().with_label(id);
    }
    let r = capacity_bounds(&graphs[0].1, a.max_power, cfg).map_err(bounds_error)?;
    let mut out = Output::new(describe_report(&r), Results::Bounds { report: r.clone() });
    out.conclusive = report_is_conclusive(&r);
    out.inputs = records(&graphs)?;
    Ok(out)
}

fn bounds_error(e: orcap_core::bounds::BoundsError) -> CliError {
    match e {
        orcap_core::bounds::BoundsError::Verification(m) => CliError::Verification(m),
        other => usage(other),
    }
}

fn describe_pair(r: &PairReport) -> String {
    let mut s = describe_report(&r.first);
    s.push_str(&describe_report(&r.second));
    s.push_str(&format!("product upper bound {:.6}\n", r.upper));
    for e in &r.lower_candidates {
        s.push_str(&describe_entry(e));
    }
    if let Some(c) = &r.lower_bound_cap {
        s.push_str(&format!("lower-bound cap {:.6}\n", c.value));
    }
    let verdict = serde_json::to_value(r.verdict).expect("verdict serializes");
    s.push_str(&format!("verdict: {}", verdict.as_str().unwrap_or("?")));
    if let Some((lo, hi)) = r.equality_interval {
        s.push_str(&format!(", capacity of the product in [{lo:.6}, {hi:.6}]"));
    }
    s.push('\n');
    for n in &r.notes {
        s.push_str(&format!("note: {n}\n"));
    }
    s
}

fn cmd_pair(a: &PairArgs, inputs: &mut Inputs, cfg: &BoundsConfig) -> Result<Output, CliError> {
    let mut graphs = inputs.gather(&a.inputs, 2)?;
    for (id, g) in graphs.iter_mut() {
        if g.label().is_none() {
            *g = g.clone().with_label(id.clone());
        }
    }
    if graphs[0].1.label() == graphs[1].1.label() {
        graphs[1].1 = graphs[1].1.clone().with_label(format!("{}'", graphs[1].0));
    }
    let r = pair_bounds(&graphs[0].1, &graphs[1].1, a.max_power, cfg).map_err(bounds_error)?;
    let mut out = Output::new(describe_pair(&r), Results::Pair { report: r.clone() });
    out.conclusive = report_is_conclusive(&r.first)
        && report_is_conclusive(&r.second)
        && !r.notes.iter().any(|n| n.contains("inconclusive"));
    out.inputs = records(&graphs)?;
    Ok(out)
}

fn cmd_testcase(a: &TestcaseArgs, cfg: &BoundsConfig) -> Result<Output, CliError> {
    let variant = match a.variant {
        Variant::Full => PaleyVariant::Full,
        Variant::Deleted => PaleyVariant::OneDeleted,
    };
    let c = paley_gap_certificate(a.p, variant, cfg).map_err(bounds_error)?;
    let f = paley_family(a.p, variant).map_err(usage)?;
    let k = Graph::complete(c.colors);
    let conclusive = !matches!(c.verdict, GapVerdict::Inconclusive { .. });
    let mut out = Output::new(c.narrative.clone(), Results::Gap { certificate: c });
    out.conclusive = conclusive;
    out.inputs = records(&[
        (f.label().unwrap_or("F").to_string(), f.clone()),
        (k.label().unwrap_or("K").to_string(), k),
    ])?;
    Ok(out)
}

fn cmd_props(a: &PropsArgs, seed: u64) -> Result<Output, CliError> {
    let mut cfg = PropertyConfig::full(seed);
    if a.quick {
        cfg = PropertyConfig {
            seed,
            de_morgan_pairs: 20,
            clique_pairs: 10,
            odd_girth_pairs: 5,
            theta_pairs: 3,
            hom_pairs: 3,
        };
    }
    let (report, timings) = run_properties(&cfg, &SolverConfig::default());
    let mut text = String::new();
    for s in &report.suites {
        let status = if s.passed() { "PASS" } else { "FAIL" };
        text.push_str(&format!("{status} {:<26} {} cases\n", s.name, s.cases));
        if let Some(f) = &s.first_failure {
            text.push_str(&format!("     first failure: {f}\n"));
        }
    }
    let mut out = Output::new(text, Results::Properties { report });
    out.phases = timings
        .into_iter()
        .map(|(name, seconds)| Phase { name, seconds })
        .collect();
    Ok(out)
}

fn execute(cli: &Cli, inputs: &mut Inputs) -> Result<Output, CliError> {
    let keep = !cli.elide_matrices;
    match &cli.command {
        Command::Gen(a) => cmd_gen(a, cli.format),
        Command::Op(a) => cmd_op(a, inputs),
        Command::Compute(a) => cmd_compute(a, inputs, cli.deterministic, keep),
        Command::Hom(a) => cmd_hom(a, inputs),
        Command::Bounds(a) => cmd_bounds(a, inputs, &bounds_config(&a.solve, cli.deterministic, keep)?),
        Command::Pair(a) => cmd_pair(a, inputs, &bounds_config(&a.solve, cli.deterministic, keep)?),
        Command::Testcase(a) => cmd_testcase(a, &bounds_config(&a.solve, cli.deterministic, keep)?),
        Command::Props(a) => cmd_props(a, cli.seed),
    }
}

/// Runs the tool with explicit streams; returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    let start = Instant::now();
    let mut inputs = Inputs {
        stdin,
        stdin_used: false,
        format: cli.format,
    };
    let out = match execute(&cli, &mut inputs) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            return e.code();
        }
    };
    let doc = ReportDocument {
        schema_version: SCHEMA_VERSION.into(),
        command: argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect(),
        inputs: out.inputs,
        results: out.results,
        certificates: out.certificates,
        timing: Timing {
            total_seconds: start.elapsed().as_secs_f64(),
            phases: out.phases,
        },
    };
    if let Err(e) = verify_document(&doc) {
        let _ = writeln!(stderr, "error: certificate verification failed: {e}");
        return EXIT_VERIFICATION;
    }
    let json_to_stdout = cli.json.as_ref().is_some_and(|p| p.as_os_str() == "-");
    if json_to_stdout {
        let _ = writeln!(stdout, "{}", doc.to_json());
    } else {
        let _ = write!(stdout, "{}", out.text);
        if let Some(path) = &cli.json {
            if let Err(e) = std::fs::write(path, doc.to_json() + "\n") {
                let _ = writeln!(stderr, "error: {}: {e}", path.display());
                return EXIT_USAGE;
            }
        }
    }
    if out.conclusive {
        EXIT_OK
    } else {
        EXIT_INCONCLUSIVE
    }
}

/// Runs the tool on the process's standard streams.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdin = std::io::stdin();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(args, &mut stdin.lock(), &mut stdout.lock(), &mut stderr.lock())
}
