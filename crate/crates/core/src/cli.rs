//! Command-line front end: `roots`, `construct`, `sample`, `audit`, `demo`.
//!
//! Exit codes: 0 on success, 1 for invalid input or I/O failures, 2 for
//! numerical failures (uncertified roots, tail mass above tolerance).

use std::ffi::OsString;
use std::fmt::{self, Write as _};
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::audit::{quasirandomness_report, AuditConfig, AuditError, AuditReport, CountStrategy, Verdict};
use crate::defexp::{kurtz_check, truncated_coefficients, DefexpError, DensityParam};
use crate::ensemble::{
    build_multipartite, clique_plus_isolated, clique_size, complete_bipartite, gnp, paley, sample_graphon_graph,
    EnsembleError, PartitionWitness, SeededRng,
};
use crate::graph::{Graph, GraphIoError};
use crate::spectrum::{
    find_roots_entire, find_roots_truncated, max_weight_bound_check, roots_to_weights,
    verify_elementary_symmetric, weights_for_tail, MaxWeightCheck, RootList, RootOptions, RootTable,
    SpectrumError, SymmetricCheck, WeightSequence,
};

/// Directory used for outputs when `--out` is not given.
pub const OUT_DIR_ENV: &str = "NONFORCING_OUT_DIR";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}: {source}")]
    Graph { path: String, source: GraphIoError },
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Ensemble(#[from] EnsembleError),
    #[error(transparent)]
    Audit(#[from] AuditError),
    #[error(transparent)]
    Defexp(#[from] DefexpError),
    #[error("{path}: {source}")]
    Json { path: String, source: serde_json::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Spectrum(e) => match e {
                SpectrumError::Defexp(d) => defexp_code(d),
                SpectrumError::InvalidWeights(_) | SpectrumError::TooFewWeights { .. } => 1,
                _ => 2,
            },
            CliError::Defexp(d) => defexp_code(d),
            CliError::Ensemble(EnsembleError::TailTooHeavy { .. }) => 2,
            _ => 1,
        }
    }
}

fn defexp_code(e: &DefexpError) -> i32 {
    match e {
        DefexpError::InvalidParam { .. } | DefexpError::Parse(_) | DefexpError::Degree(_) => 1,
        _ => 2,
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

#[derive(Debug, Parser)]
#[command(name = "nonforcing", version, about = "Complete-multipartite graphs whose clique counts look p-random")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certified roots of f_{p,k} or of f_p, with the derived part weights.
    Roots(RootsArgs),
    /// Build a graph (multipartite counterexample or a control family).
    Construct(ConstructArgs),
    /// Sample a graph from the step graphon built from the roots of f_p.
    Sample(SampleArgs),
    /// Audit an edge-list graph for quasirandomness.
    Audit(AuditArgs),
    /// Roots, graph and audit in one run.
    Demo(DemoArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Edgelist,
    Text,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; defaults to a fixed name in the output directory, else stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Default output directory.
    #[arg(long, env = OUT_DIR_ENV)]
    pub out_dir: Option<PathBuf>,
}

impl OutputArgs {
    fn target(&self, default_name: &str) -> Option<PathBuf> {
        self.out
            .clone()
            .or_else(|| self.out_dir.as_ref().map(|d| d.join(default_name)))
    }
}

fn emit(target: Option<&Path>, content: &str) -> Result<(), CliError> {
    match target {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(io_err(dir))?;
            }
            fs::write(path, content).map_err(io_err(path))
        }
        None => io::stdout()
            .lock()
            .write_all(content.as_bytes())
            .map_err(io_err(Path::new("<stdout>"))),
    }
}

#[derive(Debug, Clone, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["k", "m"])))]
pub struct RootsArgs {
    /// Density parameter as a decimal string, 0 < p <= 1.
    #[arg(long)]
    pub p: String,
    /// Degree of the truncated polynomial f_{p,k}.
    #[arg(long, alias = "truncated-k")]
    pub k: Option<usize>,
    /// Number of roots of the entire function f_p.
    #[arg(long, alias = "entire-m")]
    pub m: Option<usize>,
    #[arg(long)]
    pub precision_bits: Option<u32>,
    /// Keep going when the Kurtz check fails; partial results exit with 2.
    #[arg(long)]
    pub force: bool,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Serialize)]
pub struct RootsReport {
    #[serde(flatten)]
    pub table: RootTable,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kurtz: Option<crate::defexp::KurtzOutcome>,
    pub symmetric: Vec<SymmetricCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_weight: Option<MaxWeightCheck>,
}

fn root_options(precision_bits: Option<u32>, force: bool) -> RootOptions {
    RootOptions { precision_bits, force }
}

/// Computes the roots report; uncertified (forced) runs come back with
/// `table.certified == false` and no weights.
pub fn compute_roots(args: &RootsArgs) -> Result<RootsReport, CliError> {
    let p = DensityParam::parse(&args.p)?;
    let opts = root_options(args.precision_bits, args.force);
    let roots = match (args.k, args.m) {
        (Some(k), None) => find_roots_truncated(&p, k, &opts)?,
        (None, Some(m)) => find_roots_entire(&p, m, &opts)?,
        _ => return Err(CliError::Usage("give exactly one of --k and --m".into())),
    };
    if !roots.certified {
        return Ok(RootsReport {
            table: RootTable::new(&roots, None),
            kurtz: roots.kurtz.clone(),
            symmetric: Vec::new(),
            max_weight: None,
        });
    }
    let weights = roots_to_weights(&roots)?;
    let j_max = match args.k {
        Some(k) => k,
        None => weights.len().min(6),
    };
    Ok(RootsReport {
        table: RootTable::new(&roots, Some(&weights)),
        kurtz: roots.kurtz.clone(),
        symmetric: verify_elementary_symmetric(&weights, j_max)?,
        max_weight: Some(max_weight_bound_check(&weights)),
    })
}

fn cmd_roots(args: &RootsArgs) -> Result<(), CliError> {
    let report = compute_roots(args)?;
    let (content, name) = match args.format {
        Format::Csv => {
            let mut s = String::from("index,root,weight\n");
            for (i, a) in report.table.roots.iter().enumerate() {
                let c = report.table.weights.get(i).map_or("", String::as_str);
                let _ = writeln!(s, "{},{a},{c}", i + 1);
            }
            (s, "roots.csv")
        }
        Format::Json => (to_json(&report), "roots.json"),
        f => return Err(CliError::Usage(format!("roots cannot be written as {f:?}"))),
    };
    emit(args.output.target(name).as_deref(), &content)?;
    if !report.table.certified {
        return Err(SpectrumError::RootCount {
            found: report.table.roots.len(),
            expected: args.k.or(args.m).unwrap_or(0),
            missing_index: report.table.roots.len() + 1,
        }
        .into());
    }
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable report");
    s.push('\n');
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Multipartite,
    Gnp,
    Paley,
    CliquePlusIsolated,
    CompleteBipartite,
}

#[derive(Debug, Clone, Args)]
pub struct ConstructArgs {
    #[arg(long, value_enum, default_value = "multipartite")]
    pub family: Family,
    /// Density parameter (edge probability for `gnp`).
    #[arg(long)]
    pub p: Option<String>,
    /// Truncation degree for the multipartite family.
    #[arg(long, conflicts_with_all = ["m", "weights"])]
    pub k: Option<usize>,
    /// Use the first m roots of f_p; the remaining mass becomes a dust part.
    #[arg(long, conflicts_with = "weights")]
    pub m: Option<usize>,
    /// Root table written by `roots`.
    #[arg(long)]
    pub weights: Option<PathBuf>,
    /// Vertex count (the prime q for `paley`).
    #[arg(long)]
    pub n: usize,
    /// Seed for `gnp`.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
    /// Allow parts that round to zero vertices.
    #[arg(long)]
    pub allow_empty: bool,
    #[arg(long)]
    pub precision_bits: Option<u32>,
    /// Witness file; defaults to the graph path with `.witness.json`.
    #[arg(long)]
    pub witness: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn require_p(p: &Option<String>, what: &str) -> Result<String, CliError> {
    p.clone().ok_or_else(|| CliError::Usage(format!("{what} needs --p")))
}

/// Weights from `--k`, `--m` or a root table file.
fn construct_weights(args: &ConstructArgs) -> Result<WeightSequence, CliError> {
    if let Some(path) = &args.weights {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        let table: RootTable = serde_json::from_str(&text).map_err(|source| CliError::Json {
            path: path.display().to_string(),
            source,
        })?;
        return Ok(table.weight_sequence()?);
    }
    let p = DensityParam::parse(&require_p(&args.p, "the multipartite family")?)?;
    let opts = root_options(args.precision_bits, false);
    let roots = match (args.k, args.m) {
        (Some(k), _) => find_roots_truncated(&p, k, &opts)?,
        (None, Some(m)) => find_roots_entire(&p, m, &opts)?,
        (None, None) => return Err(CliError::Usage("give --k, --m or --weights".into())),
    };
    Ok(roots_to_weights(&roots)?)
}

/// Builds the requested graph and, for partitioned families, its witness.
pub fn construct_graph(args: &ConstructArgs) -> Result<(Graph, Option<PartitionWitness>), CliError> {
    let n = args.n;
    match args.family {
        Family::Multipartite => {
            let ws = construct_weights(args)?;
            let (g, w) = build_multipartite(&ws, n, args.allow_empty)?;
            Ok((g, Some(w)))
        }
        Family::Gnp => {
            let text = require_p(&args.p, "gnp")?;
            let p: f64 = text
                .parse()
                .map_err(|_| CliError::Usage(format!("bad edge probability {text:?}")))?;
            let seed = args.seed.ok_or_else(|| CliError::Usage("gnp needs --seed".into()))?;
            Ok((gnp(n, p, &mut SeededRng::new(seed, args.stream))?, None))
        }
        Family::Paley => Ok((paley(n)?, None)),
        Family::CliquePlusIsolated => {
            let p = DensityParam::parse(&require_p(&args.p, "clique-plus-isolated")?)?;
            let g = clique_plus_isolated(n, &p);
            let s = clique_size(n, &p);
            let w = PartitionWitness {
                parts: vec![(0..s).collect(), (s..n).collect()],
                part_weights: Vec::new(),
                dust_index: None,
            };
            Ok((g, Some(w)))
        }
        Family::CompleteBipartite => {
            let g = complete_bipartite(n)?;
            let w = PartitionWitness {
                parts: vec![(0..n / 2).collect(), (n / 2..n).collect()],
                part_weights: Vec::new(),
                dust_index: None,
            };
            Ok((g, Some(w)))
        }
    }
}

fn witness_target(explicit: &Option<PathBuf>, graph: Option<&Path>) -> Option<PathBuf> {
    explicit.clone().or_else(|| {
        graph.map(|g| {
            let mut s = g.as_os_str().to_owned();
            s.push(".witness.json");
            PathBuf::from(s)
        })
    })
}

fn write_graph(
    g: &Graph,
    w: Option<&PartitionWitness>,
    output: &OutputArgs,
    witness: &Option<PathBuf>,
) -> Result<(), CliError> {
    let gpath = output.target("graph.edges");
    emit(gpath.as_deref(), &g.to_edge_list())?;
    if let Some(w) = w {
        match witness_target(witness, gpath.as_deref()) {
            Some(path) => emit(Some(&path), &w.to_json())?,
            None => eprintln!("witness not written (graph went to stdout; pass --witness)"),
        }
    }
    Ok(())
}

fn describe_parts(w: &PartitionWitness, n: usize) -> String {
    let sizes = w.sizes();
    let shown: Vec<String> = sizes.iter().take(12).map(usize::to_string).collect();
    let more = if sizes.len() > 12 { format!(" … ({} parts)", sizes.len()) } else { String::new() };
    let largest = w.largest_part().map_or(0, |(_, s)| s);
    format!(
        "part sizes: {}{more}\nlargest part (an independent set): {largest} of {n} vertices",
        shown.join(" ")
    )
}

fn cmd_construct(args: &ConstructArgs) -> Result<(), CliError> {
    let (g, w) = construct_graph(args)?;
    write_graph(&g, w.as_ref(), &args.output, &args.witness)?;
    eprintln!("{}: {} vertices, {} edges", g.label(), g.n(), g.edge_count());
    if let (Family::Multipartite, Some(w)) = (args.family, &w) {
        eprintln!("{}", describe_parts(w, g.n()));
    }
    Ok(())
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    #[arg(long)]
    pub p: String,
    /// Number of roots of f_p; chosen from the tail tolerance when omitted.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
    /// Largest tail mass accepted as the dust part.
    #[arg(long, default_value_t = 1e-9)]
    pub tail_tolerance: f64,
    #[arg(long)]
    pub precision_bits: Option<u32>,
    #[arg(long)]
    pub witness: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Entire-function weights, either for a fixed `m` or enough roots for `tol`.
fn graphon_weights(
    p: &DensityParam,
    m: Option<usize>,
    tol: f64,
    precision_bits: Option<u32>,
) -> Result<(RootList, WeightSequence), CliError> {
    let opts = root_options(precision_bits, false);
    let (roots, ws) = match m {
        Some(m) => {
            let roots = find_roots_entire(p, m, &opts)?;
            let ws = roots_to_weights(&roots)?;
            (roots, ws)
        }
        None => weights_for_tail(p, tol, &opts)?,
    };
    let tail = ws.tail_mass.to_f64();
    if tail > tol {
        return Err(EnsembleError::TailTooHeavy { tail, tolerance: tol }.into());
    }
    Ok((roots, ws))
}

pub fn sample_graph(args: &SampleArgs) -> Result<(Graph, PartitionWitness), CliError> {
    let p = DensityParam::parse(&args.p)?;
    let (_, ws) = graphon_weights(&p, args.m, args.tail_tolerance, args.precision_bits)?;
    let seed = args
        .seed
        .ok_or_else(|| CliError::Usage("sample needs --seed".into()))?;
    let mut rng = SeededRng::new(seed, args.stream);
    Ok(sample_graphon_graph(&ws, args.n, &mut rng, args.tail_tolerance)?)
}

fn cmd_sample(args: &SampleArgs) -> Result<(), CliError> {
    let (g, w) = sample_graph(args)?;
    write_graph(&g, Some(&w), &args.output, &args.witness)?;
    eprintln!("{}: {} vertices, {} edges", g.label(), g.n(), g.edge_count());
    eprintln!("{}", describe_parts(&w, g.n()));
    Ok(())
}

/// Tolerance overrides shared by `audit` and `demo`.
#[derive(Debug, Clone, Args)]
pub struct AuditTolerances {
    #[arg(long, default_value_t = 0.02)]
    pub clique_tol_floor: f64,
    #[arg(long, default_value_t = 3.0)]
    pub clique_tol_scale: f64,
    #[arg(long, default_value_t = 0.5)]
    pub p3_c: f64,
    #[arg(long, default_value_t = 20)]
    pub p3_trials: usize,
    #[arg(long, default_value_t = 0.05)]
    pub p3_tolerance: f64,
    #[arg(long, default_value_t = -0.5, allow_hyphen_values = true)]
    pub p3_fail_threshold: f64,
    /// Skip the 4-cycle row.
    #[arg(long)]
    pub no_c4: bool,
    #[arg(long, default_value = "auto")]
    pub count_strategy: CountStrategy,
}

impl AuditTolerances {
    fn config(&self, k_max: usize, seed: u64, stream: u64) -> AuditConfig {
        AuditConfig {
            k_max,
            clique_tol_floor: self.clique_tol_floor,
            clique_tol_scale: self.clique_tol_scale,
            include_c4: !self.no_c4,
            p3_c: self.p3_c,
            p3_trials: self.p3_trials,
            p3_tolerance: self.p3_tolerance,
            p3_fail_threshold: self.p3_fail_threshold,
            seed,
            stream,
            strategy: self.count_strategy,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct AuditArgs {
    /// Edge-list file.
    #[arg(long)]
    pub graph: PathBuf,
    /// Witness JSON; `<graph>.witness.json` is used when it exists.
    #[arg(long)]
    pub witness: Option<PathBuf>,
    #[arg(long)]
    pub p: String,
    #[arg(long, alias = "k", default_value_t = 4)]
    pub k_max: usize,
    /// Seed for the random P3 subsets.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
    #[command(flatten)]
    pub tolerances: AuditTolerances,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn read_graph(path: &Path) -> Result<Graph, CliError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let label = path.file_name().map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    Graph::parse_edge_list(&text, label).map_err(|source| CliError::Graph {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_witness(path: &Path) -> Result<PartitionWitness, CliError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    PartitionWitness::from_json(&text).map_err(|e| match e {
        EnsembleError::Json(source) => CliError::Json {
            path: path.display().to_string(),
            source,
        },
        other => other.into(),
    })
}

pub fn run_audit(args: &AuditArgs) -> Result<AuditReport, CliError> {
    let p = DensityParam::parse(&args.p)?;
    let g = read_graph(&args.graph)?;
    let wpath = args
        .witness
        .clone()
        .or_else(|| witness_target(&None, Some(&args.graph)).filter(|w| w.exists()));
    let witness = wpath.as_deref().map(read_witness).transpose()?;
    let config = args.tolerances.config(args.k_max, args.seed, args.stream);
    Ok(quasirandomness_report(&g, &p, witness.as_ref(), &config)?)
}

fn cmd_audit(args: &AuditArgs) -> Result<(), CliError> {
    let report = run_audit(args)?;
    let (content, name) = match args.format {
        Format::Csv => (report.to_csv(), "audit.csv"),
        Format::Json => (report.to_json(), "audit.json"),
        f => return Err(CliError::Usage(format!("audit reports cannot be written as {f:?}"))),
    };
    emit(args.output.target(name).as_deref(), &content)?;
    eprintln!("verdict: {}", report.verdict);
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Truncated polynomial when its Kurtz check passes, graphon otherwise.
    Auto,
    Truncated,
    Graphon,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::Auto => "auto",
            Route::Truncated => "truncated",
            Route::Graphon => "graphon",
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct DemoArgs {
    #[arg(long)]
    pub p: String,
    /// Truncation degree, and the largest clique order audited.
    #[arg(long, default_value_t = 4)]
    pub k: usize,
    #[arg(long, default_value_t = 2000)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "auto")]
    pub route: Route,
    /// Number of roots of f_p on the graphon route; chosen from the tail tolerance when omitted.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 1e-9)]
    pub tail_tolerance: f64,
    #[arg(long)]
    pub precision_bits: Option<u32>,
    #[command(flatten)]
    pub tolerances: AuditTolerances,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    #[command(flatten)]
    pub output: OutputArgs,
}

impl DemoArgs {
    /// Defaults for a library caller.
    pub fn new(p: &str, k: usize, n: usize) -> Self {
        let cli = Cli::try_parse_from(["nonforcing", "demo", "--p", p, "--k", &k.to_string(), "--n", &n.to_string()])
            .expect("static demo arguments parse");
        match cli.command {
            Command::Demo(mut d) => {
                d.output.out_dir = None;
                d
            }
            _ => unreachable!("parsed a demo command"),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Headline {
    pub cliques_within_tolerance: bool,
    pub largest_part: usize,
    pub largest_part_independent: bool,
    /// `(1-p)·n/2`, the independent-set size guaranteed for every p.
    pub independent_bound: f64,
    pub half_n: f64,
}

#[derive(Debug, Serialize)]
pub struct DemoReport {
    pub p: String,
    pub route: Route,
    pub k: usize,
    pub n: usize,
    pub seed: u64,
    pub roots: RootTable,
    pub part_sizes: Vec<usize>,
    pub audit: AuditReport,
    pub headline: Headline,
}

impl DemoReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "p = {}, route = {}, source = {}, n = {}", self.p, self.route, self.roots.source, self.n);
        let c: Vec<&str> = self.roots.weights.iter().take(6).map(|w| shorten(w)).collect();
        let _ = writeln!(
            s,
            "weights: {}{}",
            c.join(" "),
            if self.roots.weights.len() > 6 { " …" } else { "" }
        );
        let _ = writeln!(s, "tail mass: {}", shorten(&self.roots.tail_mass));
        let shown: Vec<String> = self.part_sizes.iter().take(12).map(usize::to_string).collect();
        let _ = writeln!(s, "part sizes: {}", shown.join(" "));
        let _ = writeln!(s, "{:<8} {:>28} {:>24} {:>12} {:>10}", "row", "labeled count", "p^e n^v", "rel_dev", "tolerance");
        for r in self.audit.clique_rows.iter().chain(&self.audit.c4_row) {
            let _ = writeln!(
                s,
                "{:<8} {:>28} {:>24} {:>12.6} {:>10.4}{}",
                r.subgraph,
                r.labeled_count.to_string(),
                format!("{:.9e}", r.expected.parse::<f64>().unwrap_or(f64::NAN)),
                r.rel_dev,
                r.tolerance,
                if r.within { "" } else { "  outside" }
            );
        }
        if let Some(q) = self.audit.p3_samples.iter().find(|q| q.source.starts_with("witness")) {
            let _ = writeln!(
                s,
                "P3 on {} ({} vertices): {} labeled edges vs {:.0} expected, rel_dev = {}",
                q.source, q.subset_size, q.labeled_edges_within, q.expected, q.rel_dev
            );
        }
        let worst_random = self
            .audit
            .p3_samples
            .iter()
            .filter(|q| q.source.starts_with("random"))
            .map(|q| q.rel_dev.abs())
            .fold(0.0, f64::max);
        let _ = writeln!(s, "P3 on random subsets: max |rel_dev| = {worst_random:.4}");
        let h = &self.headline;
        let _ = writeln!(
            s,
            "clique counts {} the p-random prediction; independent set of size {} (>= (1-p)n/2 = {:.1}: {})",
            if h.cliques_within_tolerance { "match" } else { "do not all match" },
            h.largest_part,
            h.independent_bound,
            h.largest_part_independent && h.largest_part as f64 >= h.independent_bound
        );
        let _ = writeln!(s, "verdict: {}", self.audit.verdict);
        s
    }
}

fn shorten(decimal: &str) -> &str {
    let cut = decimal
        .char_indices()
        .filter(|(_, c)| c.is_ascii_digit())
        .nth(12)
        .map_or(decimal.len(), |(i, _)| i);
    if decimal[cut..].contains('e') {
        decimal
    } else {
        &decimal[..cut]
    }
}

/// Roots, then the multipartite graph (truncated route) or a graphon sample,
/// then the audit with `k_max = k`.
pub fn run_demo(args: &DemoArgs) -> Result<DemoReport, CliError> {
    let p = DensityParam::parse(&args.p)?;
    let route = match args.route {
        Route::Auto => {
            let passes = args.k >= 2
                && kurtz_check(&truncated_coefficients(&p, args.k)?)
                    .map(|o| o.holds)
                    .unwrap_or(false);
            if passes || p.is_one() {
                Route::Truncated
            } else {
                Route::Graphon
            }
        }
        r => r,
    };
    let opts = root_options(args.precision_bits, false);
    let (roots, ws, g, w) = match route {
        Route::Graphon => {
            let (roots, ws) = graphon_weights(&p, args.m, args.tail_tolerance, args.precision_bits)?;
            let mut rng = SeededRng::new(args.seed, 0);
            let (g, w) = sample_graphon_graph(&ws, args.n, &mut rng, args.tail_tolerance)?;
            (roots, ws, g, w)
        }
        _ => {
            let roots = find_roots_truncated(&p, args.k, &opts)?;
            let ws = roots_to_weights(&roots)?;
            let (g, w) = build_multipartite(&ws, args.n, false)?;
            (roots, ws, g, w)
        }
    };
    let config = args.tolerances.config(args.k, args.seed, 1);
    let audit = quasirandomness_report(&g, &p, Some(&w), &config)?;
    let independent = audit.independent_set.as_ref();
    let headline = Headline {
        cliques_within_tolerance: audit.clique_rows.iter().all(|r| r.within),
        largest_part: independent.map_or(0, |i| i.size),
        largest_part_independent: independent.is_some_and(|i| i.independent),
        independent_bound: (1.0 - p.to_f64()) * args.n as f64 / 2.0,
        half_n: args.n as f64 / 2.0,
    };
    Ok(DemoReport {
        p: p.text().to_string(),
        route,
        k: args.k,
        n: args.n,
        seed: args.seed,
        roots: RootTable::new(&roots, Some(&ws)),
        part_sizes: w.sizes(),
        audit,
        headline,
    })
}

fn cmd_demo(args: &DemoArgs) -> Result<(), CliError> {
    let report = run_demo(args)?;
    let (content, name) = match args.format {
        Format::Json => (to_json(&report), "demo.json"),
        Format::Text => (report.to_text(), "demo.txt"),
        Format::Csv => (report.audit.to_csv(), "demo.csv"),
        Format::Edgelist => return Err(CliError::Usage("demo reports cannot be written as an edge list".into())),
    };
    emit(args.output.target(name).as_deref(), &content)?;
    if report.audit.verdict != Verdict::CliqueConsistentButP3Fail {
        eprintln!("note: verdict is {}", report.audit.verdict);
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Roots(a) => cmd_roots(a),
        Command::Construct(a) => cmd_construct(a),
        Command::Sample(a) => cmd_sample(a),
        Command::Audit(a) => cmd_audit(a),
        Command::Demo(a) => cmd_demo(a),
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
