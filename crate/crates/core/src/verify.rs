//! OR, general-position and GOR predicates, plus the cut-set certificate
//! that rules out a GOR when connectivity is too low.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::connectivity::{is_k_connected, KConnectivity};
use crate::construct::Representation;
use crate::graph::Graph;
use crate::linalg::{self, GeneralPosition, LinalgError, Mode, Scalar, Tolerance, Vector};

#[derive(Debug, Error, PartialEq)]
pub enum VerifyError {
    #[error("representation has {found} vectors, graph has {expected} vertices")]
    SizeMismatch { expected: usize, found: usize },
    #[error("representation lives in R^{found}, expected R^{expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("need n >= D, got n = {n}, D = {dim}")]
    TooFewVertices { n: usize, dim: usize },
    #[error("subset must have exactly D = {dim} distinct vertices below {n}")]
    BadSubset { dim: usize, n: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrViolation {
    pub u: usize,
    pub v: usize,
    /// Inner product, printed in the representation's scalar type.
    pub value: String,
    /// `|<v_u, v_v>| / (|v_u| |v_v|)`.
    pub relative: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrStatus {
    Pass,
    Violations(Vec<OrViolation>),
}

impl OrStatus {
    pub fn passes(&self) -> bool {
        matches!(self, OrStatus::Pass)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub mode: Mode,
    /// `None` in exact mode, where no tolerance applies.
    pub tolerance: Option<f64>,
    pub or_status: OrStatus,
    pub gp_status: GeneralPosition,
    pub gor: bool,
    /// Float mode: largest relative inner product over non-adjacent pairs.
    pub or_margin: Option<f64>,
    /// Float mode: smallest `σ_min / σ_max` over all `D`-subsets.
    pub gp_margin: Option<f64>,
}

fn relative(dot: f64, a: f64, b: f64) -> f64 {
    let denom = (a * b).sqrt();
    if denom == 0.0 {
        0.0
    } else {
        dot.abs() / denom
    }
}

pub fn verify_or<T: Scalar>(
    g: &Graph,
    rep: &Representation<T>,
    tol: Tolerance,
) -> Result<OrStatus, VerifyError> {
    check_size(g, rep)?;
    let v = rep.vectors();
    let norms: Vec<T> = v.iter().map(Vector::norm2).collect();
    let mut violations = Vec::new();
    for a in 0..g.n() {
        for b in a + 1..g.n() {
            if g.has_edge(a, b) {
                continue;
            }
            let dot = v[a].dot(&v[b]);
            if !T::orthogonal(&dot, &norms[a], &norms[b], tol) {
                violations.push(OrViolation {
                    u: a,
                    v: b,
                    relative: relative(dot.to_f64(), norms[a].to_f64(), norms[b].to_f64()),
                    value: dot.to_string(),
                });
            }
        }
    }
    Ok(if violations.is_empty() {
        OrStatus::Pass
    } else {
        OrStatus::Violations(violations)
    })
}

pub fn verify_gor<T: Scalar>(
    g: &Graph,
    rep: &Representation<T>,
    dim: usize,
    tol: Tolerance,
) -> Result<VerificationReport, VerifyError> {
    check_size(g, rep)?;
    if rep.dim() != dim {
        return Err(VerifyError::DimensionMismatch {
            expected: dim,
            found: rep.dim(),
        });
    }
    if g.n() < dim {
        return Err(VerifyError::TooFewVertices { n: g.n(), dim });
    }
    let or_status = verify_or(g, rep, tol)?;
    let gp_status = linalg::general_position(rep.vectors(), dim, tol)?;
    let (or_margin, gp_margin) = match T::MODE {
        Mode::Exact => (None, None),
        Mode::Float => float_margins(g, rep),
    };
    Ok(VerificationReport {
        mode: T::MODE,
        tolerance: (T::MODE == Mode::Float).then_some(tol.get()),
        gor: or_status.passes() && gp_status.holds(),
        or_status,
        gp_status,
        or_margin,
        gp_margin,
    })
}

fn float_margins<T: Scalar>(g: &Graph, rep: &Representation<T>) -> (Option<f64>, Option<f64>) {
    let v: Vec<Vector<f64>> = rep.vectors().iter().map(Vector::to_f64).collect();
    let mut or_margin: f64 = 0.0;
    for (a, b) in (0..g.n()).tuple_combinations() {
        if !g.has_edge(a, b) {
            or_margin = or_margin.max(relative(v[a].dot(&v[b]), v[a].norm2(), v[b].norm2()));
        }
    }
    let gp_margin = (0..v.len())
        .combinations(rep.dim())
        .map(|s| linalg::condition_margin(&s.iter().map(|&i| v[i].clone()).collect::<Vec<_>>()))
        .fold(f64::INFINITY, f64::min);
    (Some(or_margin), Some(gp_margin))
}

/// Membership of `rep` in GP(I): the vectors at `subset` are independent.
pub fn verify_gp_subset<T: Scalar>(
    rep: &Representation<T>,
    subset: &[usize],
    tol: Tolerance,
) -> Result<bool, VerifyError> {
    let n = rep.vectors().len();
    let distinct: BTreeSet<usize> = subset.iter().copied().collect();
    if subset.len() != rep.dim()
        || distinct.len() != subset.len()
        || distinct.iter().any(|&i| i >= n)
    {
        return Err(VerifyError::BadSubset { dim: rep.dim(), n });
    }
    let cols: Vec<Vector<T>> = subset.iter().map(|&i| rep.vectors()[i].clone()).collect();
    Ok(linalg::rank(&cols, tol)? == rep.dim())
}

/// A vertex cut of size `< n - D` when one exists. Such a cut rules out any
/// GOR of `g` in `R^D`.
pub fn certify_no_gor(g: &Graph, dim: usize) -> Option<BTreeSet<usize>> {
    let need = g.n().saturating_sub(dim);
    match is_k_connected(g, need) {
        KConnectivity::Yes => None,
        KConnectivity::No(cert) => cert.cut_set().cloned(),
    }
}

fn check_size<T: Scalar>(g: &Graph, rep: &Representation<T>) -> Result<(), VerifyError> {
    if rep.vectors().len() != g.n() {
        return Err(VerifyError::SizeMismatch {
            expected: g.n(),
            found: rep.vectors().len(),
        });
    }
    Ok(())
}
