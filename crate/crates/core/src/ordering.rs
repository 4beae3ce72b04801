//! Combinatorics of vertex orderings.
//!
//! The sequential construction sees an ordering only through each vertex's
//! set of earlier non-neighbors, its constraint signature. Swapping two
//! adjacent positions that hold an edge leaves that signature unchanged.
//! A non-edge swap at position `p >= D - 1` of an `(n - D)`-connected graph
//! rewrites into a chain of five exchanges, each either confined to the
//! first `p + 1` positions, an edge swap, or a swap whose endpoints are
//! joined by a strictly shorter prefix path.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{path_within_prefix, preceding_non_neighbors, Graph, VertexOrdering};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrderingError {
    #[error("position {p} is below D - 1 = {min}")]
    PositionTooEarly { p: usize, min: usize },
    #[error("position {p} has no successor in an ordering of {n} vertices")]
    PositionOutOfRange { p: usize, n: usize },
    #[error("no path between positions {p} and {} through earlier positions; the graph is not (n - D)-connected", .p + 1)]
    NoPrefixPath { p: usize },
    #[error("orderings have different lengths or vertex sets")]
    Incompatible,
    #[error("orderings differ after position {0}")]
    DisagreeAfter(usize),
    #[error("prefixes through position {0} hold different vertex sets")]
    PrefixSetsDiffer(usize),
    #[error("step {step}: {reason}")]
    InvalidStep { step: usize, reason: String },
}

/// Vertex-indexed sets of earlier non-neighbors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintSignature(pub Vec<BTreeSet<usize>>);

pub fn constraint_signature(g: &Graph, order: &VertexOrdering) -> ConstraintSignature {
    let mut sig = vec![BTreeSet::new(); g.n()];
    for p in 0..order.len() {
        sig[order.at(p)] = preceding_non_neighbors(g, order, p).into_iter().collect();
    }
    ConstraintSignature(sig)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "result")]
pub enum SwapCheck {
    Invariant,
    NotAnEdge,
    /// Signatures changed across an edge swap. Never expected.
    SignatureDiffers {
        before: ConstraintSignature,
        after: ConstraintSignature,
    },
}

/// Compares constraint signatures before and after exchanging positions `p`
/// and `p + 1`, when those positions hold an edge.
pub fn edge_swap_invariance(
    g: &Graph,
    order: &VertexOrdering,
    p: usize,
) -> Result<SwapCheck, OrderingError> {
    if p + 1 >= order.len() {
        return Err(OrderingError::PositionOutOfRange { p, n: order.len() });
    }
    if !g.has_edge(order.at(p), order.at(p + 1)) {
        return Ok(SwapCheck::NotAnEdge);
    }
    let before = constraint_signature(g, order);
    let after = constraint_signature(g, &order.swapped(p, p + 1));
    Ok(if before == after {
        SwapCheck::Invariant
    } else {
        SwapCheck::SignatureDiffers { before, after }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Justification {
    /// Both positions lie in the first `p + 1`; the orderings agree after.
    EarlyRearrangement,
    /// The swapped pair is joined by a prefix path with this many interior
    /// vertices, fewer than the pair being rewritten.
    InnerInduction { interior: usize },
    /// The swapped pair is an edge at positions `p`, `p + 1`.
    EdgeBaseCase,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExchangeStep {
    pub positions: (usize, usize),
    pub justification: Justification,
    pub ordering: VertexOrdering,
}

/// Rewrites the transposition of positions `p`, `p + 1` into justified
/// exchanges. Returns one edge step when the two vertices are adjacent,
/// five steps otherwise.
pub fn exchange_sequence(
    g: &Graph,
    order: &VertexOrdering,
    p: usize,
    dim: usize,
) -> Result<Vec<ExchangeStep>, OrderingError> {
    let n = order.len();
    if p + 1 >= n {
        return Err(OrderingError::PositionOutOfRange { p, n });
    }
    if p + 1 < dim {
        return Err(OrderingError::PositionTooEarly { p, min: dim - 1 });
    }
    let path = path_within_prefix(g, order, p).ok_or(OrderingError::NoPrefixPath { p })?;
    let interior = path.len() - 2;
    let mut steps = Vec::new();
    let mut push = |cur: &VertexOrdering, a: usize, b: usize, justification| {
        let next = cur.swapped(a, b);
        steps.push(ExchangeStep {
            positions: (a.min(b), a.max(b)),
            justification,
            ordering: next.clone(),
        });
        next
    };
    if interior == 0 {
        push(order, p, p + 1, Justification::EdgeBaseCase);
    } else {
        let j1 = order.positions()[path[1]];
        let early = Justification::EarlyRearrangement;
        let s1 = push(order, j1, p, early);
        let s2 = push(
            &s1,
            p,
            p + 1,
            Justification::InnerInduction {
                interior: interior - 1,
            },
        );
        let s3 = push(&s2, j1, p, early);
        let s4 = push(&s3, p, p + 1, Justification::EdgeBaseCase);
        push(&s4, j1, p, early);
    }
    validate_exchange(g, order, p, &steps)?;
    Ok(steps)
}

/// Checks every step's precondition and that the chain ends at `order` with
/// positions `p`, `p + 1` transposed.
pub fn validate_exchange(
    g: &Graph,
    order: &VertexOrdering,
    p: usize,
    steps: &[ExchangeStep],
) -> Result<(), OrderingError> {
    let bad = |step: usize, reason: String| OrderingError::InvalidStep { step, reason };
    if steps.len() != 1 && steps.len() != 5 {
        return Err(bad(
            0,
            format!("expected 1 or 5 steps, got {}", steps.len()),
        ));
    }
    let start_interior = path_within_prefix(g, order, p)
        .map(|path| path.len() - 2)
        .ok_or(OrderingError::NoPrefixPath { p })?;
    let mut cur = order.clone();
    for (i, step) in steps.iter().enumerate() {
        let (a, b) = step.positions;
        if a >= b || b >= cur.len() {
            return Err(bad(i, format!("bad positions ({a}, {b})")));
        }
        if step.ordering != cur.swapped(a, b) {
            return Err(bad(i, "ordering is not the stated swap".into()));
        }
        match step.justification {
            Justification::EarlyRearrangement => {
                if b > p {
                    return Err(bad(
                        i,
                        format!("position {b} is past the rearrangeable prefix"),
                    ));
                }
            }
            Justification::EdgeBaseCase => {
                if (a, b) != (p, p + 1) || !g.has_edge(cur.at(a), cur.at(b)) {
                    return Err(bad(i, "edge swap must exchange an edge at p, p + 1".into()));
                }
            }
            Justification::InnerInduction { interior } => {
                if (a, b) != (p, p + 1) {
                    return Err(bad(i, "inner step must exchange p, p + 1".into()));
                }
                let found = path_within_prefix(g, &cur, p).map(|path| path.len() - 2);
                match found {
                    Some(k) if k <= interior && interior < start_interior => {}
                    _ => {
                        return Err(bad(
                            i,
                            format!("no prefix path with at most {interior} interior vertices"),
                        ))
                    }
                }
            }
        }
        cur = step.ordering.clone();
    }
    if cur != order.swapped(p, p + 1) {
        return Err(bad(
            steps.len() - 1,
            "chain does not end at the transposition".into(),
        ));
    }
    Ok(())
}

/// Given `sigma`, `tau` agreeing after position `i` (0-based) and holding the
/// same vertex set in positions `0..=i`, rearranges only positions `0..i` of
/// each so the results differ exactly by transposing positions `i - 1`, `i`.
///
/// When `sigma` and `tau` already agree at position `i`, both sides reduce to
/// `sigma` and the returned pair is equal.
pub fn reduce_to_adjacent_transposition(
    sigma: &VertexOrdering,
    tau: &VertexOrdering,
    i: usize,
) -> Result<(VertexOrdering, VertexOrdering), OrderingError> {
    let n = sigma.len();
    if tau.len() != n || i >= n || i == 0 {
        return Err(OrderingError::Incompatible);
    }
    let (s, t) = (sigma.as_slice(), tau.as_slice());
    if s[i + 1..] != t[i + 1..] {
        return Err(OrderingError::DisagreeAfter(i));
    }
    let prefix = |o: &[usize]| o[..=i].iter().copied().collect::<BTreeSet<_>>();
    if prefix(s) != prefix(t) {
        return Err(OrderingError::PrefixSetsDiffer(i));
    }
    if s[i] == t[i] {
        return Ok((sigma.clone(), sigma.clone()));
    }
    let moved = t[i];
    let head: Vec<usize> = s[..i].iter().copied().filter(|&v| v != moved).collect();
    let build = |last: [usize; 2]| {
        let mut o = head.clone();
        o.extend(last);
        o.extend_from_slice(&s[i + 1..]);
        VertexOrdering::new(o).expect("rearrangement of a permutation")
    };
    Ok((build([moved, s[i]]), build([s[i], moved])))
}
