//! Graph generators, seeded Monte-Carlo experiments and the lemma sweep.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::connectivity::{is_k_connected, vertex_connectivity};
use crate::construct::{
    construct_with_retries, AnyRepresentation, ConstructError, ConstructionTrace,
    RepresentationDoc, RetryConfig, RetryOutcome, DEFAULT_ATTEMPTS, DEFAULT_MAGNITUDE,
};
use crate::graph::{path_within_prefix, Graph, GraphError, GraphFormat, VertexOrdering};
use crate::linalg::{Mode, Tolerance};
use crate::ordering::{edge_swap_invariance, exchange_sequence, ExchangeStep, SwapCheck};
use crate::seed::derive_seed;
use crate::verify::{certify_no_gor, VerificationReport};

pub const MODE_ENV: &str = "ORTHOREP_MODE";

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid graph model {0:?}")]
    BadModel(String),
    #[error("invalid ordering spec {0:?}")]
    BadOrdering(String),
    #[error("D = {dim} must satisfy 1 <= D <= n = {n}")]
    BadDimension { dim: usize, n: usize },
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("config line {line}: {reason}")]
    Config { line: usize, reason: String },
    #[error("missing setting: {0}")]
    Missing(&'static str),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum GraphModel {
    Gnp {
        n: usize,
        p: f64,
    },
    Cycle(usize),
    Complete(usize),
    /// `K_n` minus a maximum matching `{0,1}, {2,3}, ...`.
    CompleteMinusMatching(usize),
    Petersen,
    /// Center `0` joined to leaves `1..n`.
    Star(usize),
    Path(usize),
    Empty(usize),
}

impl fmt::Display for GraphModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphModel::Gnp { n, p } => write!(f, "gnp:{n}:{p}"),
            GraphModel::Cycle(n) => write!(f, "cycle:{n}"),
            GraphModel::Complete(n) => write!(f, "complete:{n}"),
            GraphModel::CompleteMinusMatching(n) => write!(f, "complete-minus-matching:{n}"),
            GraphModel::Petersen => write!(f, "petersen"),
            GraphModel::Star(n) => write!(f, "star:{n}"),
            GraphModel::Path(n) => write!(f, "path:{n}"),
            GraphModel::Empty(n) => write!(f, "empty:{n}"),
        }
    }
}

impl FromStr for GraphModel {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || HarnessError::BadModel(s.to_string());
        let parts: Vec<&str> = s.split(':').collect();
        let int = |i: usize| -> Result<usize, HarnessError> {
            parts.get(i).and_then(|t| t.parse().ok()).ok_or_else(bad)
        };
        let model = match (parts[0], parts.len()) {
            ("gnp", 3) => GraphModel::Gnp {
                n: int(1)?,
                p: parts[2].parse().map_err(|_| bad())?,
            },
            ("cycle", 2) => GraphModel::Cycle(int(1)?),
            ("complete", 2) => GraphModel::Complete(int(1)?),
            ("complete-minus-matching", 2) => GraphModel::CompleteMinusMatching(int(1)?),
            ("petersen", 1) => GraphModel::Petersen,
            ("star", 2) => GraphModel::Star(int(1)?),
            ("path", 2) => GraphModel::Path(int(1)?),
            ("empty", 2) => GraphModel::Empty(int(1)?),
            _ => return Err(bad()),
        };
        Ok(model)
    }
}

impl From<GraphModel> for String {
    fn from(m: GraphModel) -> String {
        m.to_string()
    }
}

impl TryFrom<String> for GraphModel {
    type Error = HarnessError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

pub fn generate_graph(model: &GraphModel, seed: u64) -> Result<Graph, HarnessError> {
    let bad = || HarnessError::BadModel(model.to_string());
    let g = match *model {
        GraphModel::Gnp { n, p } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(bad());
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random_bool(p) {
                        edges.push((u, v));
                    }
                }
            }
            Graph::from_edges(n, &edges)?
        }
        GraphModel::Cycle(n) => {
            if n < 3 {
                return Err(bad());
            }
            Graph::from_edges(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())?
        }
        GraphModel::Complete(n) => Graph::complete(n)?,
        GraphModel::CompleteMinusMatching(n) => {
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if !(u % 2 == 0 && v == u + 1) {
                        edges.push((u, v));
                    }
                }
            }
            Graph::from_edges(n, &edges)?
        }
        GraphModel::Petersen => {
            let mut edges = Vec::new();
            for i in 0..5 {
                edges.push((i, (i + 1) % 5));
                edges.push((i, i + 5));
                edges.push((5 + i, 5 + (i + 2) % 5));
            }
            Graph::from_edges(10, &edges)?
        }
        GraphModel::Star(n) => Graph::from_edges(n, &(1..n).map(|i| (0, i)).collect::<Vec<_>>())?,
        GraphModel::Path(n) => {
            Graph::from_edges(n, &(1..n).map(|i| (i - 1, i)).collect::<Vec<_>>())?
        }
        GraphModel::Empty(n) => Graph::empty(n)?,
    };
    Ok(g)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum OrderingSpec {
    Identity,
    /// `k` uniformly random orderings.
    Random(usize),
    /// The listed vertices first, in the given order, then the rest ascending.
    SubsetFirst(Vec<usize>),
}

impl fmt::Display for OrderingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderingSpec::Identity => f.write_str("identity"),
            OrderingSpec::Random(k) => write!(f, "random:{k}"),
            OrderingSpec::SubsetFirst(s) => {
                let items: Vec<String> = s.iter().map(ToString::to_string).collect();
                write!(f, "subset-first:{}", items.join(","))
            }
        }
    }
}

impl FromStr for OrderingSpec {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || HarnessError::BadOrdering(s.to_string());
        match s.split_once(':') {
            None if s == "identity" => Ok(OrderingSpec::Identity),
            Some(("random", k)) => Ok(OrderingSpec::Random(k.parse().map_err(|_| bad())?)),
            Some(("subset-first" | "all-subset-first", list)) => list
                .split(',')
                .map(|t| t.trim().parse().map_err(|_| bad()))
                .collect::<Result<_, _>>()
                .map(OrderingSpec::SubsetFirst),
            _ => Err(bad()),
        }
    }
}

impl From<OrderingSpec> for String {
    fn from(o: OrderingSpec) -> String {
        o.to_string()
    }
}

impl TryFrom<String> for OrderingSpec {
    type Error = HarnessError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl OrderingSpec {
    pub fn expand(&self, n: usize, seed: u64) -> Result<Vec<VertexOrdering>, HarnessError> {
        match self {
            OrderingSpec::Identity => Ok(vec![VertexOrdering::identity(n)]),
            OrderingSpec::Random(k) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                Ok((0..*k).map(|_| random_ordering(n, &mut rng)).collect())
            }
            OrderingSpec::SubsetFirst(first) => {
                let chosen: BTreeSet<usize> = first.iter().copied().collect();
                let mut order = first.clone();
                order.extend((0..n).filter(|v| !chosen.contains(v)));
                VertexOrdering::new(order)
                    .map(|o| vec![o])
                    .map_err(|_| HarnessError::BadOrdering(self.to_string()))
            }
        }
    }
}

pub fn random_ordering(n: usize, rng: &mut impl Rng) -> VertexOrdering {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    VertexOrdering::new(v).expect("shuffled identity")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum GraphSource {
    Model { model: GraphModel },
    File { path: PathBuf, format: GraphFormat },
}

impl GraphSource {
    pub fn load(&self, seed: u64) -> Result<Graph, HarnessError> {
        match self {
            GraphSource::Model { model } => generate_graph(model, seed),
            GraphSource::File { path, format } => {
                let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
                    path: path.clone(),
                    source,
                })?;
                Ok(Graph::parse(&text, *format)?)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub source: GraphSource,
    #[serde(rename = "D")]
    pub dim: usize,
    pub mode: Mode,
    pub trials: usize,
    pub orderings: OrderingSpec,
    #[serde(rename = "M")]
    pub magnitude: i64,
    pub attempts: usize,
    pub seed: u64,
    pub tolerance: Tolerance,
}

/// Experiment settings where every field is optional, so flags, a config
/// file, the environment and defaults can be layered.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExperimentSettings {
    pub graph: Option<PathBuf>,
    pub format: Option<GraphFormat>,
    pub model: Option<GraphModel>,
    pub dim: Option<usize>,
    pub mode: Option<Mode>,
    pub trials: Option<usize>,
    pub orderings: Option<OrderingSpec>,
    pub magnitude: Option<i64>,
    pub attempts: Option<usize>,
    pub seed: Option<u64>,
    pub tolerance: Option<f64>,
}

impl ExperimentSettings {
    /// Parses `key = value` lines. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let mut s = ExperimentSettings::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |reason: String| HarnessError::Config {
                line: i + 1,
                reason,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err("expected key = value".into()))?;
            let (key, value) = (key.trim(), value.trim());
            fn num<T: FromStr>(v: &str) -> Result<T, String> {
                v.parse().map_err(|_| format!("bad number {v:?}"))
            }
            let res: Result<(), String> = (|| {
                match key {
                    "graph" => s.graph = Some(PathBuf::from(value)),
                    "format" => {
                        s.format = Some(value.parse().map_err(|e: GraphError| e.to_string())?)
                    }
                    "model" => {
                        s.model = Some(value.parse().map_err(|e: HarnessError| e.to_string())?)
                    }
                    "D" | "dim" => s.dim = Some(num(value)?),
                    "mode" => s.mode = Some(value.parse()?),
                    "trials" => s.trials = Some(num(value)?),
                    "orderings" => {
                        s.orderings = Some(value.parse().map_err(|e: HarnessError| e.to_string())?)
                    }
                    "M" | "magnitude" => s.magnitude = Some(num(value)?),
                    "attempts" => s.attempts = Some(num(value)?),
                    "seed" => s.seed = Some(num(value)?),
                    "eps" | "tolerance" => s.tolerance = Some(num(value)?),
                    other => return Err(format!("unknown key {other:?}")),
                }
                Ok(())
            })();
            res.map_err(err)?;
        }
        Ok(s)
    }

    /// Fields of `self` win; missing ones come from `lower`.
    pub fn over(self, lower: ExperimentSettings) -> ExperimentSettings {
        // A graph source is taken as a unit so a file in one layer does not
        // mix with a model from another.
        let (graph, format, model) = if self.graph.is_some() || self.model.is_some() {
            (self.graph, self.format.or(lower.format), self.model)
        } else {
            (lower.graph, self.format.or(lower.format), lower.model)
        };
        ExperimentSettings {
            graph,
            format,
            model,
            dim: self.dim.or(lower.dim),
            mode: self.mode.or(lower.mode),
            trials: self.trials.or(lower.trials),
            orderings: self.orderings.or(lower.orderings),
            magnitude: self.magnitude.or(lower.magnitude),
            attempts: self.attempts.or(lower.attempts),
            seed: self.seed.or(lower.seed),
            tolerance: self.tolerance.or(lower.tolerance),
        }
    }

    /// Defaults, with the mode taken from `env_mode` when given.
    pub fn defaults(env_mode: Option<Mode>) -> ExperimentSettings {
        ExperimentSettings {
            mode: Some(env_mode.unwrap_or(Mode::Exact)),
            trials: Some(100),
            orderings: Some(OrderingSpec::Identity),
            magnitude: Some(DEFAULT_MAGNITUDE),
            attempts: Some(DEFAULT_ATTEMPTS),
            seed: Some(0),
            tolerance: Some(Tolerance::DEFAULT.get()),
            ..ExperimentSettings::default()
        }
    }

    pub fn resolve(self) -> Result<ExperimentConfig, HarnessError> {
        let source = match (self.graph, self.model) {
            (Some(_), Some(_)) => {
                return Err(HarnessError::Config {
                    line: 0,
                    reason: "give either a graph file or a model, not both".into(),
                })
            }
            (Some(path), None) => {
                let format = self.format.unwrap_or_else(|| guess_format(&path));
                GraphSource::File { path, format }
            }
            (None, Some(model)) => GraphSource::Model { model },
            (None, None) => return Err(HarnessError::Missing("graph or model")),
        };
        let tolerance = self.tolerance.ok_or(HarnessError::Missing("tolerance"))?;
        Ok(ExperimentConfig {
            source,
            dim: self.dim.ok_or(HarnessError::Missing("D"))?,
            mode: self.mode.ok_or(HarnessError::Missing("mode"))?,
            trials: self.trials.ok_or(HarnessError::Missing("trials"))?,
            orderings: self.orderings.ok_or(HarnessError::Missing("orderings"))?,
            magnitude: self.magnitude.ok_or(HarnessError::Missing("M"))?,
            attempts: self.attempts.ok_or(HarnessError::Missing("attempts"))?,
            seed: self.seed.ok_or(HarnessError::Missing("seed"))?,
            tolerance: Tolerance::new(tolerance).map_err(|e| HarnessError::Config {
                line: 0,
                reason: e.to_string(),
            })?,
        })
    }
}

/// `graph6` for `.g6`/`.graph6` files, edge list otherwise.
pub fn guess_format(path: &std::path::Path) -> GraphFormat {
    match path.extension().and_then(|e| e.to_str()) {
        Some("g6" | "graph6") => GraphFormat::Graph6,
        _ => GraphFormat::EdgeList,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailedAttemptLog {
    pub attempt: usize,
    pub seed: u64,
    pub trace: ConstructionTrace,
    pub report: VerificationReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub success: bool,
    pub attempts: usize,
    pub zero_vectors: usize,
    pub report: VerificationReport,
    /// Present on success.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub representation: Option<RepresentationDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failed_attempts: Vec<FailedAttemptLog>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderingResult {
    pub ordering: VertexOrdering,
    pub trials: usize,
    pub successes: usize,
    /// Final output was an OR but not in general position.
    pub or_only: usize,
    /// Trials whose final output contains a zero vector.
    pub zero_vector_incidences: usize,
    pub first_attempt_failures: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_or_margin: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_gp_margin: Option<f64>,
    pub records: Vec<TrialRecord>,
    /// Not serialized, so replayed results compare byte for byte.
    #[serde(skip)]
    pub wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub n: usize,
    pub kappa: usize,
    /// Cut set of size `< n - D`, when one exists.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub no_gor_certificate: Option<BTreeSet<usize>>,
    pub per_ordering: Vec<OrderingResult>,
}

impl ExperimentResult {
    pub fn total_trials(&self) -> usize {
        self.per_ordering.iter().map(|o| o.trials).sum()
    }

    pub fn total_successes(&self) -> usize {
        self.per_ordering.iter().map(|o| o.successes).sum()
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult, HarnessError> {
    let g = cfg.source.load(derive_seed(cfg.seed, &[u64::MAX]))?;
    run_experiment_on(&g, cfg)
}

/// Runs the configured trials on an already loaded graph. Trials run in
/// parallel; trial `t` of ordering `o` is seeded from `(seed, o, t)`.
pub fn run_experiment_on(
    g: &Graph,
    cfg: &ExperimentConfig,
) -> Result<ExperimentResult, HarnessError> {
    let n = g.n();
    if cfg.dim == 0 || cfg.dim > n {
        return Err(HarnessError::BadDimension { dim: cfg.dim, n });
    }
    if cfg.trials == 0 {
        return Err(HarnessError::NoTrials);
    }
    let orderings = cfg
        .orderings
        .expand(n, derive_seed(cfg.seed, &[u64::MAX - 1]))?;
    let per_ordering = orderings
        .into_iter()
        .enumerate()
        .map(|(oi, ordering)| run_ordering(g, cfg, oi, ordering))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ExperimentResult {
        config: cfg.clone(),
        n,
        kappa: vertex_connectivity(g).kappa,
        no_gor_certificate: certify_no_gor(g, cfg.dim),
        per_ordering,
    })
}

fn run_ordering(
    g: &Graph,
    cfg: &ExperimentConfig,
    oi: usize,
    ordering: VertexOrdering,
) -> Result<OrderingResult, HarnessError> {
    let start = Instant::now();
    let records = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| run_trial(g, cfg, &ordering, oi, trial))
        .collect::<Result<Vec<_>, _>>()?;
    let mean = |f: fn(&VerificationReport) -> Option<f64>| {
        let vals: Vec<f64> = records.iter().filter_map(|r| f(&r.report)).collect();
        (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64)
    };
    Ok(OrderingResult {
        trials: records.len(),
        successes: records.iter().filter(|r| r.success).count(),
        or_only: records
            .iter()
            .filter(|r| !r.success && r.report.or_status.passes())
            .count(),
        zero_vector_incidences: records.iter().filter(|r| r.zero_vectors > 0).count(),
        first_attempt_failures: records
            .iter()
            .filter(|r| !r.failed_attempts.is_empty())
            .count(),
        mean_or_margin: mean(|r| r.or_margin),
        mean_gp_margin: mean(|r| r.gp_margin),
        ordering,
        records,
        wall_time: start.elapsed(),
    })
}

fn run_trial(
    g: &Graph,
    cfg: &ExperimentConfig,
    ordering: &VertexOrdering,
    oi: usize,
    trial: usize,
) -> Result<TrialRecord, HarnessError> {
    let seed = derive_seed(cfg.seed, &[oi as u64, trial as u64]);
    let retry = RetryConfig {
        mode: cfg.mode,
        attempts: cfg.attempts,
        magnitude: cfg.magnitude,
        seed,
        tolerance: cfg.tolerance,
    };
    let outcome = construct_with_retries(g, ordering, cfg.dim, &retry)?;
    let last = outcome.last();
    let mut representation = None;
    let mut success = false;
    if let RetryOutcome::Success { attempt, .. } = &outcome {
        let doc = attempt
            .representation
            .to_doc(ordering, attempt.provenance());
        // Count a success only if the stored document verifies on its own.
        let reread = AnyRepresentation::from_doc(&doc)?;
        success = reread
            .verify(g, cfg.tolerance)
            .map_err(ConstructError::from)?
            .gor;
        representation = Some(doc);
    }
    Ok(TrialRecord {
        trial,
        seed,
        success,
        attempts: outcome.attempts_used(),
        zero_vectors: last.representation.zero_count(),
        report: last.report.clone(),
        representation,
        failed_attempts: outcome
            .failures()
            .iter()
            .map(|a| FailedAttemptLog {
                attempt: a.attempt,
                seed: a.seed,
                trace: a.trace.clone(),
                report: a.report.clone(),
            })
            .collect(),
    })
}

/// Aggregate counts from [`lemma_sweep`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub graphs: usize,
    pub orderings: usize,
    pub edge_swaps_checked: usize,
    pub edge_swap_failures: usize,
    /// Prefix-path queries at positions `p >= D - 1` on `(n - D)`-connected graphs.
    pub prefix_paths_checked: usize,
    pub prefix_path_failures: usize,
    /// Missing prefix paths at positions `p >= D - 1`. Each must come with a
    /// failed connectivity check and a separating suffix.
    pub contrapositive_checked: usize,
    pub contrapositive_failures: usize,
    pub exchanges_checked: usize,
    pub exchange_failures: usize,
    pub step_counts: BTreeMap<usize, usize>,
    /// A few exchange sequences, for inspection.
    pub samples: Vec<ExchangeSample>,
}

impl LemmaReport {
    pub fn all_passed(&self) -> bool {
        self.edge_swap_failures == 0
            && self.prefix_path_failures == 0
            && self.contrapositive_failures == 0
            && self.exchange_failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExchangeSample {
    pub graph6: String,
    pub ordering: VertexOrdering,
    pub position: usize,
    pub steps: Vec<ExchangeStep>,
}

/// Checks the ordering lemmas on `graphs` under `orderings_per_graph` random
/// orderings each.
pub fn lemma_sweep(
    graphs: &[Graph],
    dim: usize,
    orderings_per_graph: usize,
    seed: u64,
    max_samples: usize,
) -> LemmaReport {
    let mut report = LemmaReport {
        graphs: graphs.len(),
        ..LemmaReport::default()
    };
    for (gi, g) in graphs.iter().enumerate() {
        let n = g.n();
        let connected_enough = is_k_connected(g, n.saturating_sub(dim)).is_yes();
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[gi as u64]));
        for _ in 0..orderings_per_graph {
            let order = random_ordering(n, &mut rng);
            report.orderings += 1;
            for p in 0..n.saturating_sub(1) {
                if g.has_edge(order.at(p), order.at(p + 1)) {
                    report.edge_swaps_checked += 1;
                    if edge_swap_invariance(g, &order, p) != Ok(SwapCheck::Invariant) {
                        report.edge_swap_failures += 1;
                    }
                }
                if p + 1 < dim {
                    continue;
                }
                let path = path_within_prefix(g, &order, p);
                if connected_enough {
                    report.prefix_paths_checked += 1;
                    if path.is_none() {
                        report.prefix_path_failures += 1;
                    }
                    report.exchanges_checked += 1;
                    match exchange_sequence(g, &order, p, dim) {
                        Ok(steps) => {
                            *report.step_counts.entry(steps.len()).or_default() += 1;
                            if steps.len() == 5 && report.samples.len() < max_samples {
                                report.samples.push(ExchangeSample {
                                    graph6: g.to_graph6(),
                                    ordering: order.clone(),
                                    position: p,
                                    steps,
                                });
                            }
                        }
                        Err(_) => report.exchange_failures += 1,
                    }
                }
                if path.is_none() {
                    // The vertices after position p + 1 must then separate
                    // the pair, a cut smaller than n - D.
                    report.contrapositive_checked += 1;
                    let suffix: BTreeSet<usize> =
                        order.as_slice()[p + 2..].iter().copied().collect();
                    let separates = g.is_separating_set(&suffix) && suffix.len() < n - dim;
                    if connected_enough || !separates || is_k_connected(g, n - dim).is_yes() {
                        report.contrapositive_failures += 1;
                    }
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators() {
        let c5 = generate_graph(&GraphModel::Cycle(5), 0).unwrap();
        assert_eq!(vertex_connectivity(&c5).kappa, 2);
        let k6 = generate_graph(&GraphModel::Complete(6), 0).unwrap();
        assert_eq!(vertex_connectivity(&k6).kappa, 5);
        let a = generate_graph(&GraphModel::Gnp { n: 10, p: 0.5 }, 9).unwrap();
        assert_eq!(
            a,
            generate_graph(&GraphModel::Gnp { n: 10, p: 0.5 }, 9).unwrap()
        );
        for m in [2, 3, 4, 5] {
            let g = generate_graph(&GraphModel::CompleteMinusMatching(2 * m), 0).unwrap();
            assert_eq!(vertex_connectivity(&g).kappa, 2 * m - 2);
        }
        let pet = generate_graph(&GraphModel::Petersen, 0).unwrap();
        assert_eq!(
            (pet.n(), pet.edge_count(), vertex_connectivity(&pet).kappa),
            (10, 15, 3)
        );
        let star = generate_graph(&GraphModel::Star(5), 0).unwrap();
        assert_eq!((star.n(), vertex_connectivity(&star).kappa), (5, 1));
        assert!(generate_graph(&GraphModel::Gnp { n: 4, p: 1.5 }, 0).is_err());
        assert!(generate_graph(&GraphModel::Cycle(2), 0).is_err());
        assert!(generate_graph(&GraphModel::Complete(0), 0).is_err());
    }

    #[test]
    fn model_strings() {
        for s in [
            "gnp:10:0.5",
            "cycle:5",
            "complete:6",
            "complete-minus-matching:8",
            "petersen",
            "star:5",
        ] {
            assert_eq!(s.parse::<GraphModel>().unwrap().to_string(), s);
        }
        assert!("cycle".parse::<GraphModel>().is_err());
        assert!("wheel:5".parse::<GraphModel>().is_err());
    }

    #[test]
    fn ordering_specs() {
        assert_eq!(
            OrderingSpec::Identity.expand(3, 0).unwrap(),
            vec![VertexOrdering::identity(3)]
        );
        let r = OrderingSpec::Random(4).expand(6, 1).unwrap();
        assert_eq!(r.len(), 4);
        assert_eq!(r, OrderingSpec::Random(4).expand(6, 1).unwrap());
        let s: OrderingSpec = "subset-first:3,1".parse().unwrap();
        assert_eq!(s.expand(4, 0).unwrap()[0].as_slice(), &[3, 1, 0, 2]);
        assert!(OrderingSpec::SubsetFirst(vec![1, 1]).expand(3, 0).is_err());
        assert!("random:x".parse::<OrderingSpec>().is_err());
    }

    #[test]
    fn settings_layering() {
        let file = ExperimentSettings::parse(
            "# comment\nmodel = cycle:5\nD = 3\ntrials = 7\nmode = float\n",
        )
        .unwrap();
        let flags = ExperimentSettings {
            trials: Some(2),
            ..ExperimentSettings::default()
        };
        let cfg = flags
            .over(file)
            .over(ExperimentSettings::defaults(None))
            .resolve()
            .unwrap();
        assert_eq!(cfg.trials, 2);
        assert_eq!(cfg.mode, Mode::Float);
        assert_eq!(cfg.dim, 3);
        assert_eq!(cfg.attempts, DEFAULT_ATTEMPTS);
        let env = ExperimentSettings::defaults(Some(Mode::Float));
        assert_eq!(env.mode, Some(Mode::Float));
        assert!(ExperimentSettings::parse("bogus = 1").is_err());
        assert!(ExperimentSettings::parse("D = three").is_err());
        assert!(ExperimentSettings::parse("no equals sign").is_err());
        assert!(matches!(
            ExperimentSettings::defaults(None).resolve(),
            Err(HarnessError::Missing(_))
        ));
    }

    fn cfg(model: &str, dim: usize, trials: usize) -> ExperimentConfig {
        ExperimentSettings {
            model: Some(model.parse().unwrap()),
            dim: Some(dim),
            trials: Some(trials),
            ..ExperimentSettings::default()
        }
        .over(ExperimentSettings::defaults(None))
        .resolve()
        .unwrap()
    }

    #[test]
    fn experiments() {
        let r = run_experiment(&cfg("complete:3", 1, 1)).unwrap();
        assert_eq!(r.total_successes(), 1);
        assert!(r.no_gor_certificate.is_none());

        let r = run_experiment(&cfg("star:5", 3, 10)).unwrap();
        assert_eq!(r.total_successes(), 0);
        assert_eq!(r.no_gor_certificate, Some(BTreeSet::from([0])));
        assert_eq!(r.per_ordering[0].or_only, 10);

        assert!(matches!(
            run_experiment(&cfg("cycle:5", 6, 1)),
            Err(HarnessError::BadDimension { .. })
        ));
        assert!(matches!(
            run_experiment(&cfg("cycle:5", 3, 0)),
            Err(HarnessError::NoTrials)
        ));
    }

    #[test]
    fn replay_is_byte_identical() {
        let c = cfg("cycle:6", 4, 5);
        let a = serde_json::to_string(&run_experiment(&c).unwrap()).unwrap();
        let b = serde_json::to_string(&run_experiment(&c).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
