//! Vertex connectivity with minimum-cut certificates.
//!
//! Local connectivity `κ(s, t)` for non-adjacent `s, t` is a unit-capacity
//! max-flow on the vertex-split digraph. Global connectivity takes a vertex
//! `v` of minimum degree and minimizes over `κ(v, u)` for non-neighbors `u`
//! and `κ(x, y)` for non-adjacent pairs of neighbors `x, y` of `v`; some
//! minimum separator either misses `v` or separates two of its neighbors.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "vertices")]
pub enum Witness {
    /// Minimum vertex cut. Empty when the graph is already disconnected.
    CutSet(BTreeSet<usize>),
    CompleteGraph,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectivityCertificate {
    pub kappa: usize,
    pub witness: Witness,
}

impl ConnectivityCertificate {
    /// Checks the certificate against `g`: a cut set must have size `kappa`
    /// and disconnect the graph; the complete marker needs a complete graph.
    pub fn validate(&self, g: &Graph) -> bool {
        match &self.witness {
            Witness::CompleteGraph => g.is_complete() && self.kappa == g.n() - 1,
            Witness::CutSet(cut) => cut.len() == self.kappa && g.is_separating_set(cut),
        }
    }

    pub fn cut_set(&self) -> Option<&BTreeSet<usize>> {
        match &self.witness {
            Witness::CutSet(c) => Some(c),
            Witness::CompleteGraph => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KConnectivity {
    Yes,
    /// `kappa < k`; the certificate's cut set (if any) has fewer than `k`
    /// vertices.
    No(ConnectivityCertificate),
}

impl KConnectivity {
    pub fn is_yes(&self) -> bool {
        matches!(self, KConnectivity::Yes)
    }
}

pub fn vertex_connectivity(g: &Graph) -> ConnectivityCertificate {
    let n = g.n();
    if g.is_complete() {
        return ConnectivityCertificate {
            kappa: n - 1,
            witness: Witness::CompleteGraph,
        };
    }
    if !g.is_connected() {
        return ConnectivityCertificate {
            kappa: 0,
            witness: Witness::CutSet(BTreeSet::new()),
        };
    }
    let v = (0..n).min_by_key(|&v| g.degree(v)).expect("n >= 1");
    let mut best: Option<BTreeSet<usize>> = None;
    let mut consider = |s: usize, t: usize| {
        let bound = best.as_ref().map_or(usize::MAX, BTreeSet::len);
        let cut = min_vertex_cut(g, s, t, bound);
        if let Some(cut) = cut {
            if cut.len() < bound {
                best = Some(cut);
            }
        }
    };
    for u in 0..n {
        if u != v && !g.has_edge(u, v) {
            consider(v, u);
        }
    }
    let nbrs: Vec<usize> = g.neighbors(v).collect();
    for (a, &x) in nbrs.iter().enumerate() {
        for &y in &nbrs[a + 1..] {
            if !g.has_edge(x, y) {
                consider(x, y);
            }
        }
    }
    let cut = best.expect("a non-complete graph has a non-adjacent pair");
    ConnectivityCertificate {
        kappa: cut.len(),
        witness: Witness::CutSet(cut),
    }
}

pub fn is_k_connected(g: &Graph, k: usize) -> KConnectivity {
    let cert = vertex_connectivity(g);
    if cert.kappa >= k {
        KConnectivity::Yes
    } else {
        KConnectivity::No(cert)
    }
}

struct FlowNetwork {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<usize>,
}

impl FlowNetwork {
    fn new(nodes: usize) -> Self {
        FlowNetwork {
            head: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
        }
    }

    fn add_arc(&mut self, u: usize, v: usize, c: usize) {
        self.head[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(c);
        self.head[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(0);
    }

    /// Shortest augmenting path by BFS; returns the reachability vector of
    /// the final residual graph when no path remains.
    fn augment(&mut self, s: usize, t: usize) -> Result<(), Vec<bool>> {
        let mut via = vec![usize::MAX; self.head.len()];
        let mut seen = vec![false; self.head.len()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.head[u] {
                let w = self.to[e];
                if self.cap[e] > 0 && !seen[w] {
                    seen[w] = true;
                    via[w] = e;
                    queue.push_back(w);
                }
            }
        }
        if !seen[t] {
            return Err(seen);
        }
        let mut cur = t;
        while cur != s {
            let e = via[cur];
            self.cap[e] -= 1;
            self.cap[e ^ 1] += 1;
            cur = self.to[e ^ 1];
        }
        Ok(())
    }
}

/// Minimum vertex cut separating non-adjacent `s` and `t`. Returns `None`
/// once the flow reaches `bound`, since the cut cannot improve on it.
fn min_vertex_cut(g: &Graph, s: usize, t: usize, bound: usize) -> Option<BTreeSet<usize>> {
    debug_assert!(s != t && !g.has_edge(s, t));
    let n = g.n();
    let inf = n + 1;
    let (vin, vout) = (|v: usize| 2 * v, |v: usize| 2 * v + 1);
    let mut net = FlowNetwork::new(2 * n);
    for v in 0..n {
        let c = if v == s || v == t { inf } else { 1 };
        net.add_arc(vin(v), vout(v), c);
    }
    for (u, v) in g.edges() {
        net.add_arc(vout(u), vin(v), inf);
        net.add_arc(vout(v), vin(u), inf);
    }
    let mut flow = 0;
    loop {
        match net.augment(vout(s), vin(t)) {
            Ok(()) => {
                flow += 1;
                if flow >= bound {
                    return None;
                }
            }
            Err(reach) => {
                let cut: BTreeSet<usize> = (0..n)
                    .filter(|&v| reach[vin(v)] && !reach[vout(v)])
                    .collect();
                debug_assert_eq!(cut.len(), flow);
                return Some(cut);
            }
        }
    }
}
