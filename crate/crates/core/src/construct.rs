//! Sequential constructions of orthogonal representations.
//!
//! [`construct_gor_plus`] walks an ordering and places each vertex with the
//! polynomial complement map, emitting zero whenever the earlier
//! non-neighbors are dependent. [`construct_lss_randomized`] instead draws a
//! uniform unit vector from the orthogonal complement, whatever its
//! dimension.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::graph::{preceding_non_neighbors, Graph, VertexOrdering};
use crate::linalg::{self, LinalgError, Mode, Rational, Scalar, Tolerance, Vector};
use crate::seed::derive_seed;
use crate::verify::{verify_gor, VerificationReport, VerifyError};

pub const DEFAULT_MAGNITUDE: i64 = 1 << 20;
pub const DEFAULT_ATTEMPTS: usize = 3;
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("ordering has {found} vertices, graph has {expected}")]
    OrderingSize { expected: usize, found: usize },
    #[error("parameter bundle is {found_positions}x{found_dim}, expected {n}x{dim}")]
    ParameterSize {
        n: usize,
        dim: usize,
        found_positions: usize,
        found_dim: usize,
    },
    #[error("magnitude bound must be at least 1")]
    BadMagnitude,
    #[error("attempts must be at least 1")]
    NoAttempts,
    #[error("the randomized unit-vector algorithm needs float mode")]
    ExactRandomized,
    #[error("representation document: {0}")]
    Document(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

/// One vector in `R^dim` per vertex, indexed by vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct Representation<T> {
    dim: usize,
    vectors: Vec<Vector<T>>,
}

impl<T: Scalar> Representation<T> {
    pub fn new(dim: usize, vectors: Vec<Vector<T>>) -> Result<Self, LinalgError> {
        if let Some(v) = vectors.iter().find(|v| v.dim() != dim) {
            return Err(LinalgError::DimensionMismatch {
                expected: dim,
                found: v.dim(),
            });
        }
        Ok(Representation { dim, vectors })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vector<T>] {
        &self.vectors
    }

    pub fn zero_count(&self) -> usize {
        self.vectors.iter().filter(|v| v.is_zero()).count()
    }

    /// Float copy. Exact vectors are rescaled by positive factors, which
    /// changes neither orthogonality nor general position.
    pub fn to_f64(&self) -> Representation<f64> {
        Representation {
            dim: self.dim,
            vectors: self
                .vectors
                .iter()
                .map(|v| Vector(T::rescaled_f64(&v.0)))
                .collect(),
        }
    }

    pub fn to_doc(&self, ordering: &VertexOrdering, provenance: Provenance) -> RepresentationDoc {
        RepresentationDoc {
            version: FORMAT_VERSION,
            n: self.n(),
            dim: self.dim,
            mode: T::MODE,
            vectors: self
                .vectors
                .iter()
                .map(|v| v.0.iter().map(Scalar::encode).collect())
                .collect(),
            ordering: ordering.clone(),
            seed: provenance.seed,
            params: provenance.params,
        }
    }

    pub fn from_doc(doc: &RepresentationDoc) -> Result<Self, ConstructError> {
        if doc.mode != T::MODE {
            return Err(ConstructError::Document(format!(
                "document is in {} mode, expected {}",
                doc.mode,
                T::MODE
            )));
        }
        if doc.vectors.len() != doc.n || doc.ordering.len() != doc.n {
            return Err(ConstructError::Document(format!(
                "expected {} vectors and ordering entries",
                doc.n
            )));
        }
        let vectors = doc
            .vectors
            .iter()
            .map(|row| {
                row.iter()
                    .map(T::decode)
                    .collect::<Result<Vec<_>, _>>()
                    .map(Vector)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Representation::new(doc.dim, vectors)?)
    }
}

/// Where a stored representation came from.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Provenance {
    pub seed: Option<u64>,
    pub params: Option<Vec<Vec<i64>>>,
}

/// Versioned JSON form of a representation. Exact entries are rational
/// strings (`"p/q"`, or `"p"` for integers); float entries are numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepresentationDoc {
    pub version: u32,
    pub n: usize,
    #[serde(rename = "D")]
    pub dim: usize,
    pub mode: Mode,
    pub vectors: Vec<Vec<Value>>,
    pub ordering: VertexOrdering,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Vec<Vec<i64>>>,
}

/// Either scalar flavour, for callers that pick the mode at run time.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyRepresentation {
    Exact(Representation<Rational>),
    Float(Representation<f64>),
}

impl AnyRepresentation {
    pub fn mode(&self) -> Mode {
        match self {
            AnyRepresentation::Exact(_) => Mode::Exact,
            AnyRepresentation::Float(_) => Mode::Float,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            AnyRepresentation::Exact(r) => r.dim(),
            AnyRepresentation::Float(r) => r.dim(),
        }
    }

    pub fn zero_count(&self) -> usize {
        match self {
            AnyRepresentation::Exact(r) => r.zero_count(),
            AnyRepresentation::Float(r) => r.zero_count(),
        }
    }

    pub fn verify(&self, g: &Graph, tol: Tolerance) -> Result<VerificationReport, VerifyError> {
        match self {
            AnyRepresentation::Exact(r) => verify_gor(g, r, r.dim(), tol),
            AnyRepresentation::Float(r) => verify_gor(g, r, r.dim(), tol),
        }
    }

    pub fn to_doc(&self, ordering: &VertexOrdering, provenance: Provenance) -> RepresentationDoc {
        match self {
            AnyRepresentation::Exact(r) => r.to_doc(ordering, provenance),
            AnyRepresentation::Float(r) => r.to_doc(ordering, provenance),
        }
    }

    pub fn from_doc(doc: &RepresentationDoc) -> Result<Self, ConstructError> {
        Ok(match doc.mode {
            Mode::Exact => AnyRepresentation::Exact(Representation::from_doc(doc)?),
            Mode::Float => AnyRepresentation::Float(Representation::from_doc(doc)?),
        })
    }
}

/// Integer parameter vectors `w_p ∈ [-M, M]^D`, one per position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParameterBundle {
    pub magnitude: i64,
    pub seed: u64,
    pub params: Vec<Vec<i64>>,
}

impl ParameterBundle {
    pub fn positions(&self) -> usize {
        self.params.len()
    }

    /// Bundle for the ordering with positions `a` and `b` exchanged, so each
    /// vertex keeps its own parameter vector.
    pub fn swapped(&self, a: usize, b: usize) -> Self {
        let mut out = self.clone();
        out.params.swap(a, b);
        out
    }

    pub fn truncated(&self, positions: usize) -> Self {
        let mut out = self.clone();
        out.params.truncate(positions);
        out
    }
}

pub fn sample_parameters(
    n: usize,
    dim: usize,
    magnitude: i64,
    seed: u64,
) -> Result<ParameterBundle, ConstructError> {
    if magnitude < 1 {
        return Err(ConstructError::BadMagnitude);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = (0..n)
        .map(|_| {
            (0..dim)
                .map(|_| rng.random_range(-magnitude..=magnitude))
                .collect()
        })
        .collect();
    Ok(ParameterBundle {
        magnitude,
        seed,
        params,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum StepParameter {
    /// Integer `w` fed to the complement map.
    Integer(Vec<i64>),
    /// Unit vector drawn by the randomized algorithm; `None` when the
    /// complement was `{0}`.
    Unit(Option<Vec<f64>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub position: usize,
    pub vertex: usize,
    pub preceding_non_neighbors: Vec<usize>,
    pub independent: bool,
    /// Exact mode only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram_det: Option<String>,
    /// Float mode only: smallest over largest singular value of the
    /// preceding vectors (1 when there are none).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sv_margin: Option<f64>,
    pub parameter: StepParameter,
    pub zero_output: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ConstructionTrace {
    pub steps: Vec<TraceStep>,
}

impl ConstructionTrace {
    pub fn max_preceding(&self) -> usize {
        self.steps
            .iter()
            .map(|s| s.preceding_non_neighbors.len())
            .max()
            .unwrap_or(0)
    }
}

fn check_inputs(g: &Graph, order: &VertexOrdering, dim: usize) -> Result<(), ConstructError> {
    if dim == 0 {
        return Err(ConstructError::ZeroDimension);
    }
    if order.len() != g.n() {
        return Err(ConstructError::OrderingSize {
            expected: g.n(),
            found: order.len(),
        });
    }
    Ok(())
}

/// Runs the sequential construction along `order`.
///
/// The bundle may cover only a prefix of the ordering; the representation
/// then holds zero vectors for vertices not yet placed and the trace stops
/// at the prefix.
pub fn construct_gor_plus<T: Scalar>(
    g: &Graph,
    order: &VertexOrdering,
    dim: usize,
    params: &ParameterBundle,
) -> Result<(Representation<T>, ConstructionTrace), ConstructError> {
    check_inputs(g, order, dim)?;
    let size_err = || ConstructError::ParameterSize {
        n: g.n(),
        dim,
        found_positions: params.positions(),
        found_dim: params
            .params
            .iter()
            .map(Vec::len)
            .find(|&l| l != dim)
            .unwrap_or(dim),
    };
    if params.positions() > g.n() || params.params.iter().any(|w| w.len() != dim) {
        return Err(size_err());
    }
    let mut vectors = vec![Vector::<T>::zeros(dim); g.n()];
    let mut trace = ConstructionTrace::default();
    for (p, w) in params.params.iter().enumerate() {
        let vertex = order.at(p);
        let preceding = preceding_non_neighbors(g, order, p);
        let constraints: Vec<Vector<T>> = preceding.iter().map(|&u| vectors[u].clone()).collect();
        let k = constraints.len();
        let independent = k <= dim && linalg::rank(&constraints, Tolerance::DEFAULT)? == k;
        let (raw, det) = linalg::complement_map_with_det(&constraints, &Vector::from_i64s(w))?;
        let emitted = if independent && k < dim {
            T::canonicalize(raw)
        } else {
            // Exact mode already yields zero here; floats leave round-off.
            Vector::zeros(dim)
        };
        let (gram_det, sv_margin) = match T::MODE {
            Mode::Exact => (Some(det.to_string()), None),
            Mode::Float => (None, Some(sv_margin(&constraints))),
        };
        trace.steps.push(TraceStep {
            position: p,
            vertex,
            preceding_non_neighbors: preceding,
            independent,
            gram_det,
            sv_margin,
            parameter: StepParameter::Integer(w.clone()),
            zero_output: emitted.is_zero(),
        });
        vectors[vertex] = emitted;
    }
    Ok((Representation { dim, vectors }, trace))
}

fn sv_margin<T: Scalar>(constraints: &[Vector<T>]) -> f64 {
    if constraints.is_empty() {
        1.0
    } else {
        linalg::condition_margin(&constraints.iter().map(Vector::to_f64).collect::<Vec<_>>())
    }
}

/// Randomized construction: each vertex gets a uniform unit vector in the
/// orthogonal complement of its earlier non-neighbors, or zero when that
/// complement is trivial.
pub fn construct_lss_randomized(
    g: &Graph,
    order: &VertexOrdering,
    dim: usize,
    seed: u64,
    tol: Tolerance,
) -> Result<(Representation<f64>, ConstructionTrace), ConstructError> {
    check_inputs(g, order, dim)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vectors = vec![Vector::<f64>::zeros(dim); g.n()];
    let mut trace = ConstructionTrace::default();
    for p in 0..g.n() {
        let vertex = order.at(p);
        let preceding = preceding_non_neighbors(g, order, p);
        let constraints: Vec<Vector<f64>> = preceding.iter().map(|&u| vectors[u].clone()).collect();
        let basis = linalg::orthonormal_complement_basis(&constraints, dim, tol)?;
        let independent = linalg::rank(&constraints, tol)? == constraints.len();
        let emitted = if basis.is_empty() {
            Vector::zeros(dim)
        } else {
            let mut v = Vector::zeros(dim);
            for b in &basis {
                let c: f64 = rng.sample(StandardNormal);
                v = v.sub_scaled(&-c, b);
            }
            f64::canonicalize(v)
        };
        trace.steps.push(TraceStep {
            position: p,
            vertex,
            preceding_non_neighbors: preceding,
            independent,
            gram_det: None,
            sv_margin: Some(sv_margin(&constraints)),
            parameter: StepParameter::Unit((!basis.is_empty()).then(|| emitted.0.clone())),
            zero_output: emitted.is_zero(),
        });
        vectors[vertex] = emitted;
    }
    Ok((Representation { dim, vectors }, trace))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RetryConfig {
    pub mode: Mode,
    pub attempts: usize,
    pub magnitude: i64,
    pub seed: u64,
    pub tolerance: Tolerance,
}

impl Default for RetryConfig {
    fn default() -> Self {
        RetryConfig {
            mode: Mode::Exact,
            attempts: DEFAULT_ATTEMPTS,
            magnitude: DEFAULT_MAGNITUDE,
            seed: 0,
            tolerance: Tolerance::DEFAULT,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Attempt {
    pub attempt: usize,
    pub seed: u64,
    pub representation: AnyRepresentation,
    pub params: Option<ParameterBundle>,
    pub trace: ConstructionTrace,
    pub report: VerificationReport,
}

impl Attempt {
    pub fn provenance(&self) -> Provenance {
        Provenance {
            seed: Some(self.seed),
            params: self.params.as_ref().map(|p| p.params.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RetryOutcome {
    Success {
        attempt: Box<Attempt>,
        /// Failed attempts before the success, in order.
        failures: Vec<Attempt>,
    },
    Failure {
        failures: Vec<Attempt>,
    },
}

impl RetryOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, RetryOutcome::Success { .. })
    }

    pub fn attempts_used(&self) -> usize {
        match self {
            RetryOutcome::Success { failures, .. } => failures.len() + 1,
            RetryOutcome::Failure { failures } => failures.len(),
        }
    }

    pub fn failures(&self) -> &[Attempt] {
        match self {
            RetryOutcome::Success { failures, .. } | RetryOutcome::Failure { failures } => failures,
        }
    }

    /// The successful attempt, or the last failed one.
    pub fn last(&self) -> &Attempt {
        match self {
            RetryOutcome::Success { attempt, .. } => attempt,
            RetryOutcome::Failure { failures } => failures.last().expect("attempts >= 1"),
        }
    }
}

/// One construction in the mode's native algorithm: the complement map
/// with sampled integer parameters in exact mode, random unit vectors in
/// float mode.
pub fn construct_once(
    g: &Graph,
    order: &VertexOrdering,
    dim: usize,
    cfg: &RetryConfig,
    seed: u64,
) -> Result<
    (
        AnyRepresentation,
        Option<ParameterBundle>,
        ConstructionTrace,
    ),
    ConstructError,
> {
    match cfg.mode {
        Mode::Exact => {
            let params = sample_parameters(g.n(), dim, cfg.magnitude, seed)?;
            let (rep, trace) = construct_gor_plus::<Rational>(g, order, dim, &params)?;
            Ok((AnyRepresentation::Exact(rep), Some(params), trace))
        }
        Mode::Float => {
            let (rep, trace) = construct_lss_randomized(g, order, dim, seed, cfg.tolerance)?;
            Ok((AnyRepresentation::Float(rep), None, trace))
        }
    }
}

/// Re-draws parameters until the output verifies as a GOR or the attempt
/// budget runs out. Attempt `a` uses the seed derived from `(cfg.seed, a)`.
pub fn construct_with_retries(
    g: &Graph,
    order: &VertexOrdering,
    dim: usize,
    cfg: &RetryConfig,
) -> Result<RetryOutcome, ConstructError> {
    if cfg.attempts == 0 {
        return Err(ConstructError::NoAttempts);
    }
    let mut failures = Vec::new();
    for attempt in 0..cfg.attempts {
        let seed = derive_seed(cfg.seed, &[attempt as u64]);
        let (representation, params, trace) = construct_once(g, order, dim, cfg, seed)?;
        let report = representation.verify(g, cfg.tolerance)?;
        let record = Attempt {
            attempt,
            seed,
            representation,
            params,
            trace,
            report,
        };
        if record.report.gor {
            return Ok(RetryOutcome::Success {
                attempt: Box::new(record),
                failures,
            });
        }
        failures.push(record);
    }
    Ok(RetryOutcome::Failure { failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::verify_or;

    fn bundle(params: Vec<Vec<i64>>) -> ParameterBundle {
        ParameterBundle {
            magnitude: 100,
            seed: 0,
            params,
        }
    }

    fn cycle5() -> Graph {
        Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap()
    }

    #[test]
    fn complete_graph_in_one_dimension() {
        let g = Graph::complete(3).unwrap();
        let (rep, trace) = construct_gor_plus::<Rational>(
            &g,
            &VertexOrdering::identity(3),
            1,
            &bundle(vec![vec![5], vec![-2], vec![7]]),
        )
        .unwrap();
        // Primitive form of a nonzero scalar is its sign.
        assert_eq!(rep.vectors()[1], Vector::from_i64s(&[-1]));
        assert!(trace
            .steps
            .iter()
            .all(|s| !s.zero_output && s.preceding_non_neighbors.is_empty()));
        assert!(verify_gor(&g, &rep, 1, Tolerance::DEFAULT).unwrap().gor);
    }

    #[test]
    fn empty_graph_gives_orthogonal_frame() {
        let g = Graph::empty(3).unwrap();
        let params = bundle(vec![vec![1, 2, 3], vec![-4, 0, 5], vec![2, 2, -7]]);
        let (rep, trace) =
            construct_gor_plus::<Rational>(&g, &VertexOrdering::identity(3), 3, &params).unwrap();
        let v = rep.vectors();
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            assert!(Scalar::is_zero(&v[a].dot(&v[b])));
        }
        assert_eq!(rep.zero_count(), 0);
        assert_eq!(trace.steps[2].preceding_non_neighbors, vec![0, 1]);
        assert!(trace.steps[2].independent);
    }

    #[test]
    fn dependent_predecessors_emit_zero() {
        // Vertices 0 and 1 get parallel vectors in R^1, so vertex 2 sees a
        // dependent pair and must be zero.
        let g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        let params = bundle(vec![vec![3], vec![4], vec![5]]);
        let (rep, trace) =
            construct_gor_plus::<Rational>(&g, &VertexOrdering::identity(3), 1, &params).unwrap();
        assert!(rep.vectors()[2].is_zero());
        let s = &trace.steps[2];
        assert!(!s.independent && s.zero_output);
        assert_eq!(s.gram_det.as_deref(), Some("0"));
    }

    #[test]
    fn parameter_size_checked() {
        let g = cycle5();
        let o = VertexOrdering::identity(5);
        assert!(matches!(
            construct_gor_plus::<Rational>(&g, &o, 3, &bundle(vec![vec![1, 2]])),
            Err(ConstructError::ParameterSize { .. })
        ));
        assert!(matches!(
            construct_gor_plus::<Rational>(&g, &o, 3, &bundle(vec![vec![1, 2, 3]; 6])),
            Err(ConstructError::ParameterSize { .. })
        ));
        assert!(matches!(
            construct_gor_plus::<Rational>(&g, &o, 0, &bundle(vec![])),
            Err(ConstructError::ZeroDimension)
        ));
    }

    #[test]
    fn cycle_with_large_parameters_is_gor() {
        let g = cycle5();
        let params = sample_parameters(5, 3, DEFAULT_MAGNITUDE, 11).unwrap();
        let (rep, _) =
            construct_gor_plus::<Rational>(&g, &VertexOrdering::identity(5), 3, &params).unwrap();
        assert!(verify_gor(&g, &rep, 3, Tolerance::DEFAULT).unwrap().gor);
    }

    #[test]
    fn sampling_is_reproducible_and_bounded() {
        let a = sample_parameters(2, 2, 1, 42).unwrap();
        assert_eq!(a, sample_parameters(2, 2, 1, 42).unwrap());
        assert!(a.params.iter().flatten().all(|x| (-1..=1).contains(x)));
        assert_eq!(a.params.iter().flatten().count(), 4);
        assert!(matches!(
            sample_parameters(2, 2, 0, 1),
            Err(ConstructError::BadMagnitude)
        ));

        let big = sample_parameters(2000, 5, 10, 7).unwrap();
        let vals: Vec<i64> = big.params.into_iter().flatten().collect();
        assert!(vals.iter().all(|x| (-10..=10).contains(x)));
        let mean = vals.iter().sum::<i64>() as f64 / vals.len() as f64;
        // Var of uniform{-10..10} is 36.67, so sd of the mean over 10^4 is 0.06.
        assert!(mean.abs() < 0.3, "mean {mean}");
        for v in -10..=10 {
            assert!(vals.contains(&v));
        }
    }

    #[test]
    fn randomized_complete_and_empty() {
        let t = Tolerance::DEFAULT;
        let k = Graph::complete(4).unwrap();
        let (rep, _) = construct_lss_randomized(&k, &VertexOrdering::identity(4), 3, 5, t).unwrap();
        assert!(rep
            .vectors()
            .iter()
            .all(|v| (v.norm2() - 1.0).abs() < 1e-12));
        let e = Graph::empty(3).unwrap();
        let (rep, _) = construct_lss_randomized(&e, &VertexOrdering::identity(3), 3, 9, t).unwrap();
        let v = rep.vectors();
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            assert!(v[a].dot(&v[b]).abs() < 1e-9);
        }
        assert_eq!(
            verify_or(&e, &rep, t).unwrap(),
            crate::verify::OrStatus::Pass
        );
        let (again, _) =
            construct_lss_randomized(&e, &VertexOrdering::identity(3), 3, 9, t).unwrap();
        assert_eq!(rep, again);
    }

    #[test]
    fn randomized_trivial_complement_is_zero() {
        let e = Graph::empty(3).unwrap();
        let (rep, trace) =
            construct_lss_randomized(&e, &VertexOrdering::identity(3), 2, 1, Tolerance::DEFAULT)
                .unwrap();
        assert!(rep.vectors()[2].is_zero());
        assert_eq!(trace.steps[2].parameter, StepParameter::Unit(None));
    }

    #[test]
    fn retries_need_attempts() {
        let g = cycle5();
        let cfg = RetryConfig {
            attempts: 0,
            ..RetryConfig::default()
        };
        assert!(matches!(
            construct_with_retries(&g, &VertexOrdering::identity(5), 3, &cfg),
            Err(ConstructError::NoAttempts)
        ));
    }

    #[test]
    fn retries_fail_below_connectivity() {
        let star = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        for mode in [Mode::Exact, Mode::Float] {
            let cfg = RetryConfig {
                mode,
                seed: 3,
                ..RetryConfig::default()
            };
            let out = construct_with_retries(&star, &VertexOrdering::identity(5), 3, &cfg).unwrap();
            assert!(!out.is_success());
            assert_eq!(out.failures().len(), 3);
            assert!(out.failures().iter().all(|a| !a.report.gor));
        }
    }

    #[test]
    fn document_round_trip() {
        let g = cycle5();
        let o = VertexOrdering::identity(5);
        let params = sample_parameters(5, 3, DEFAULT_MAGNITUDE, 2).unwrap();
        let (rep, _) = construct_gor_plus::<Rational>(&g, &o, 3, &params).unwrap();
        let doc = rep.to_doc(
            &o,
            Provenance {
                seed: Some(2),
                params: Some(params.params.clone()),
            },
        );
        let text = serde_json::to_string(&doc).unwrap();
        let back: RepresentationDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(Representation::<Rational>::from_doc(&back).unwrap(), rep);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
        assert!(Representation::<f64>::from_doc(&back).is_err());
    }
}
