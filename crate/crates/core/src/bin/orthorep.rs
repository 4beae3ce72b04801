use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use orthorep::connectivity::{vertex_connectivity, Witness};
use orthorep::construct::{
    construct_gor_plus, construct_lss_randomized, construct_with_retries, sample_parameters,
    AnyRepresentation, ConstructError, Provenance, RepresentationDoc, RetryConfig,
    DEFAULT_ATTEMPTS, DEFAULT_MAGNITUDE,
};
use orthorep::graph::{Graph, GraphFormat};
use orthorep::harness::{
    generate_graph, guess_format, lemma_sweep, run_experiment, ExperimentResult,
    ExperimentSettings, GraphModel, OrderingSpec, MODE_ENV,
};
use orthorep::linalg::{Mode, Rational, Tolerance};
use orthorep::seed::derive_seed;
use orthorep::verify::{certify_no_gor, OrStatus, VerificationReport};

#[derive(Parser)]
#[command(
    name = "orthorep",
    version,
    about = "Orthogonal representations of graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the vertex connectivity and a minimum cut.
    Connectivity(ConnectivityArgs),
    /// Build a representation and write it as JSON.
    Construct(ConstructArgs),
    /// Check a stored representation; exit 0 for a GOR, 1 otherwise.
    Verify(VerifyArgs),
    /// Run seeded construction trials and aggregate the outcomes.
    Experiment(ExperimentArgs),
    /// Check the ordering lemmas over a graph corpus.
    Lemmas(LemmasArgs),
    /// Emit a generated graph.
    Gen(GenArgs),
}

#[derive(Args)]
struct GraphInput {
    /// Graph file, or `-` for stdin.
    #[arg(long = "graph", visible_alias = "in")]
    graph: PathBuf,
    /// edge-list or graph6; guessed from the extension when omitted.
    #[arg(long)]
    format: Option<GraphFormat>,
}

impl GraphInput {
    fn load(&self) -> Result<Graph> {
        let format = self.format.unwrap_or_else(|| guess_format(&self.graph));
        let text = read_input(&self.graph)?;
        Graph::parse(&text, format).with_context(|| format!("parsing {}", self.graph.display()))
    }
}

#[derive(Args)]
struct ConnectivityArgs {
    #[command(flatten)]
    input: GraphInput,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Method {
    /// Mode's native algorithm with retries until a GOR verifies.
    Auto,
    /// One run of the complement-map construction.
    GorPlus,
    /// One run of the random unit-vector construction (float only).
    Lss,
}

#[derive(Args)]
struct ConstructArgs {
    #[command(flatten)]
    input: GraphInput,
    #[arg(long = "D", visible_alias = "dim")]
    dim: usize,
    #[arg(long, env = MODE_ENV, default_value = "exact")]
    mode: Mode,
    #[arg(long, value_enum, default_value = "auto")]
    method: Method,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "M", visible_alias = "magnitude", default_value_t = DEFAULT_MAGNITUDE)]
    magnitude: i64,
    #[arg(long, default_value_t = DEFAULT_ATTEMPTS)]
    attempts: usize,
    /// identity, random:1, or subset-first:v1,v2,...
    #[arg(long, default_value = "identity")]
    ordering: OrderingSpec,
    #[arg(long, default_value_t = Tolerance::DEFAULT.get())]
    eps: f64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the construction trace here.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: GraphInput,
    #[arg(long)]
    rep: PathBuf,
    #[arg(long = "D", visible_alias = "dim")]
    dim: Option<usize>,
    #[arg(long, default_value_t = Tolerance::DEFAULT.get())]
    eps: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ExperimentArgs {
    /// key = value settings file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    format: Option<GraphFormat>,
    /// gnp:N:P, cycle:N, complete:N, complete-minus-matching:N, petersen, star:N
    #[arg(long)]
    model: Option<GraphModel>,
    #[arg(long = "D", visible_alias = "dim")]
    dim: Option<usize>,
    #[arg(long)]
    mode: Option<Mode>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    orderings: Option<OrderingSpec>,
    #[arg(long = "M", visible_alias = "magnitude")]
    magnitude: Option<i64>,
    #[arg(long)]
    attempts: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    eps: Option<f64>,
    /// Write the full result JSON here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LemmasArgs {
    /// Graph files to check; may be repeated.
    #[arg(long)]
    graph: Vec<PathBuf>,
    #[arg(long)]
    format: Option<GraphFormat>,
    /// Generated graphs to check; may be repeated.
    #[arg(long)]
    model: Vec<GraphModel>,
    /// Additional random gnp graphs with 4..=9 vertices.
    #[arg(long, default_value_t = 0)]
    random: usize,
    #[arg(long = "D", visible_alias = "dim")]
    dim: usize,
    #[arg(long, default_value_t = 20)]
    orderings: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Five-step exchange sequences to include in the output.
    #[arg(long, default_value_t = 3)]
    samples: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    model: GraphModel,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "edge-list")]
    format: GraphFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read_input(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn join(v: impl IntoIterator<Item = usize>) -> String {
    v.into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn connectivity(args: ConnectivityArgs) -> Result<u8> {
    let g = args.input.load()?;
    let cert = vertex_connectivity(&g);
    if args.json {
        println!("{}", serde_json::to_string_pretty(&cert)?);
    } else {
        println!("kappa={}", cert.kappa);
        match &cert.witness {
            Witness::CompleteGraph => println!("witness=complete"),
            Witness::CutSet(cut) => println!("cut={}", join(cut.iter().copied())),
        }
    }
    Ok(0)
}

fn construct(args: ConstructArgs) -> Result<u8> {
    let g = args.input.load()?;
    let tol = Tolerance::new(args.eps)?;
    let order = args
        .ordering
        .expand(g.n(), derive_seed(args.seed, &[u64::MAX - 1]))?
        .into_iter()
        .next()
        .ok_or_else(|| anyhow!("ordering spec produced no ordering"))?;
    let (rep, provenance, trace) = match args.method {
        Method::Auto => {
            let cfg = RetryConfig {
                mode: args.mode,
                attempts: args.attempts,
                magnitude: args.magnitude,
                seed: args.seed,
                tolerance: tol,
            };
            let outcome = construct_with_retries(&g, &order, args.dim, &cfg)?;
            for failed in outcome.failures() {
                eprintln!(
                    "attempt {} (seed {}) did not verify",
                    failed.attempt, failed.seed
                );
            }
            let last = outcome.last().clone();
            (last.representation.clone(), last.provenance(), last.trace)
        }
        Method::GorPlus => {
            let params = sample_parameters(g.n(), args.dim, args.magnitude, args.seed)?;
            let prov = Provenance {
                seed: Some(args.seed),
                params: Some(params.params.clone()),
            };
            match args.mode {
                Mode::Exact => {
                    let (r, t) = construct_gor_plus::<Rational>(&g, &order, args.dim, &params)?;
                    (AnyRepresentation::Exact(r), prov, t)
                }
                Mode::Float => {
                    let (r, t) = construct_gor_plus::<f64>(&g, &order, args.dim, &params)?;
                    (AnyRepresentation::Float(r), prov, t)
                }
            }
        }
        Method::Lss => {
            if args.mode == Mode::Exact {
                return Err(ConstructError::ExactRandomized.into());
            }
            let (r, t) = construct_lss_randomized(&g, &order, args.dim, args.seed, tol)?;
            let prov = Provenance {
                seed: Some(args.seed),
                params: None,
            };
            (AnyRepresentation::Float(r), prov, t)
        }
    };
    let report = rep.verify(&g, tol)?;
    let doc = rep.to_doc(&order, provenance);
    write_output(args.out.as_deref(), &serde_json::to_string_pretty(&doc)?)?;
    if let Some(path) = &args.trace {
        write_output(Some(path), &serde_json::to_string_pretty(&trace)?)?;
    }
    eprintln!("gor={}", report.gor);
    Ok(if report.gor { 0 } else { 1 })
}

fn print_report(report: &VerificationReport) {
    println!("mode={}", report.mode);
    match &report.or_status {
        OrStatus::Pass => println!("or=pass"),
        OrStatus::Violations(v) => {
            println!("or=fail ({} violations)", v.len());
            for x in v {
                println!(
                    "  {{{}, {}}}: inner product {} (relative {:.3e})",
                    x.u, x.v, x.value, x.relative
                );
            }
        }
    }
    match &report.gp_status {
        orthorep::linalg::GeneralPosition::Yes => println!("general_position=pass"),
        orthorep::linalg::GeneralPosition::Fails(s) => {
            println!("general_position=fail subset={}", join(s.clone()))
        }
    }
    if let (Some(o), Some(g)) = (report.or_margin, report.gp_margin) {
        println!("or_margin={o:.3e} gp_margin={g:.3e}");
    }
    println!("gor={}", report.gor);
}

fn verify(args: VerifyArgs) -> Result<u8> {
    let g = args.input.load()?;
    let doc: RepresentationDoc =
        serde_json::from_str(&read_input(&args.rep)?).context("parsing representation")?;
    let rep = AnyRepresentation::from_doc(&doc)?;
    if let Some(d) = args.dim {
        if d != rep.dim() {
            bail!("representation is in R^{}, --D says {d}", rep.dim());
        }
    }
    let report = rep.verify(&g, Tolerance::new(args.eps)?)?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print_report(&report);
        if !report.gor {
            if let Some(cut) = certify_no_gor(&g, rep.dim()) {
                println!(
                    "no GOR exists: cut {{{}}} has fewer than n - D vertices",
                    join(cut)
                );
            }
        }
    }
    Ok(if report.gor { 0 } else { 1 })
}

fn print_summary(result: &ExperimentResult) {
    let cfg = &result.config;
    println!(
        "n={} D={} kappa={} mode={} trials/ordering={} attempts={}",
        result.n, cfg.dim, result.kappa, cfg.mode, cfg.trials, cfg.attempts
    );
    match &result.no_gor_certificate {
        Some(cut) => println!(
            "certificate: cut {{{}}} of size {} < n - D = {}",
            join(cut.iter().copied()),
            cut.len(),
            result.n - cfg.dim
        ),
        None => println!("certificate: none (graph is (n - D)-connected)"),
    }
    println!(
        "{:<32} {:>7} {:>9} {:>7} {:>6} {:>9} {:>10}",
        "ordering", "trials", "success", "or-only", "zeros", "retried", "ms"
    );
    for o in &result.per_ordering {
        println!(
            "{:<32} {:>7} {:>9} {:>7} {:>6} {:>9} {:>10}",
            join(o.ordering.as_slice().iter().copied()),
            o.trials,
            o.successes,
            o.or_only,
            o.zero_vector_incidences,
            o.first_attempt_failures,
            o.wall_time.as_millis()
        );
    }
    println!(
        "successes={}/{}",
        result.total_successes(),
        result.total_trials()
    );
}

fn experiment(args: ExperimentArgs) -> Result<u8> {
    let flags = ExperimentSettings {
        graph: args.graph,
        format: args.format,
        model: args.model,
        dim: args.dim,
        mode: args.mode,
        trials: args.trials,
        orderings: args.orderings,
        magnitude: args.magnitude,
        attempts: args.attempts,
        seed: args.seed,
        tolerance: args.eps,
    };
    let file = match &args.config {
        Some(p) => ExperimentSettings::parse(&read_input(p)?)?,
        None => ExperimentSettings::default(),
    };
    let env_mode = match std::env::var(MODE_ENV) {
        Ok(v) => Some(v.parse::<Mode>().map_err(|e| anyhow!("{MODE_ENV}: {e}"))?),
        Err(_) => None,
    };
    let cfg = flags
        .over(file)
        .over(ExperimentSettings::defaults(env_mode))
        .resolve()?;
    let result = run_experiment(&cfg)?;
    print_summary(&result);
    if let Some(out) = &args.out {
        write_output(Some(out), &serde_json::to_string_pretty(&result)?)?;
    }
    Ok(0)
}

fn lemmas(args: LemmasArgs) -> Result<u8> {
    let mut graphs = Vec::new();
    for path in &args.graph {
        let format = args.format.unwrap_or_else(|| guess_format(path));
        let text = read_input(path)?;
        // graph6 files may hold one graph per line.
        if format == GraphFormat::Graph6 {
            for line in text.lines().filter(|l| !l.trim().is_empty()) {
                graphs.push(Graph::parse(line, format)?);
            }
        } else {
            graphs.push(Graph::parse(&text, format)?);
        }
    }
    for (i, m) in args.model.iter().enumerate() {
        graphs.push(generate_graph(m, derive_seed(args.seed, &[1, i as u64]))?);
    }
    for i in 0..args.random {
        let s = derive_seed(args.seed, &[2, i as u64]);
        let n = 4 + (s % 6) as usize;
        let p = 0.3 + 0.6 * ((s >> 8) % 1000) as f64 / 1000.0;
        graphs.push(generate_graph(&GraphModel::Gnp { n, p }, s)?);
    }
    if graphs.is_empty() {
        bail!("no graphs given (use --graph, --model or --random)");
    }
    if args.dim == 0 {
        bail!("D must be at least 1");
    }
    let before = graphs.len();
    graphs.retain(|g| g.n() >= args.dim);
    if graphs.len() < before {
        println!(
            "skipped {} graphs with fewer than D = {} vertices",
            before - graphs.len(),
            args.dim
        );
    }
    let report = lemma_sweep(&graphs, args.dim, args.orderings, args.seed, args.samples);
    println!("graphs={} orderings={}", report.graphs, report.orderings);
    println!(
        "edge-swap invariance: {} checked, {} failures",
        report.edge_swaps_checked, report.edge_swap_failures
    );
    println!(
        "prefix paths: {} checked, {} failures",
        report.prefix_paths_checked, report.prefix_path_failures
    );
    println!(
        "missing prefix paths: {} seen, {} without a cut certificate",
        report.contrapositive_checked, report.contrapositive_failures
    );
    println!(
        "exchange sequences: {} checked, {} failures, step counts {:?}",
        report.exchanges_checked, report.exchange_failures, report.step_counts
    );
    if let Some(out) = &args.out {
        write_output(Some(out), &serde_json::to_string_pretty(&report)?)?;
    }
    Ok(if report.all_passed() { 0 } else { 1 })
}

fn gen(args: GenArgs) -> Result<u8> {
    let g = generate_graph(&args.model, args.seed)?;
    let text = g.serialize(args.format);
    match &args.out {
        Some(p) => std::fs::write(p, &text).with_context(|| format!("writing {}", p.display()))?,
        None => print!(
            "{}",
            if args.format == GraphFormat::Graph6 {
                text + "\n"
            } else {
                text
            }
        ),
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Connectivity(a) => connectivity(a),
        Command::Construct(a) => construct(a),
        Command::Verify(a) => verify(a),
        Command::Experiment(a) => experiment(a),
        Command::Lemmas(a) => lemmas(a),
        Command::Gen(a) => gen(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
