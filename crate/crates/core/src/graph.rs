//! Simple undirected graphs, their text formats, and ordering-relative
//! neighborhood queries.
//!
//! Vertices are `0..n`. A [`VertexOrdering`] stores vertices by position, so
//! position `p` holds the vertex written `σ_{p+1}` in 1-based notation.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("graph6: {0}")]
    Graph6(String),
    #[error("not a permutation of 0..{n}: {reason}")]
    BadOrdering { n: usize, reason: String },
    #[error("unknown graph format {0:?}")]
    UnknownFormat(String),
}

/// Text encodings understood by [`Graph::parse`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphFormat {
    EdgeList,
    Graph6,
}

impl FromStr for GraphFormat {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "edge-list" | "el" | "edgelist" => Ok(GraphFormat::EdgeList),
            "graph6" | "g6" => Ok(GraphFormat::Graph6),
            other => Err(GraphError::UnknownFormat(other.to_string())),
        }
    }
}

impl fmt::Display for GraphFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphFormat::EdgeList => f.write_str("edge-list"),
            GraphFormat::Graph6 => f.write_str("graph6"),
        }
    }
}

/// Simple undirected graph stored as a dense adjacency matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<bool>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges())
            .finish()
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        Ok(Graph {
            n,
            adj: vec![false; n * n],
        })
    }

    /// Builds a graph from an edge list, rejecting loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            g.try_add_edge(u, v)?;
        }
        Ok(g)
    }

    fn try_add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        for w in [u, v] {
            if w >= self.n {
                return Err(GraphError::VertexOutOfRange {
                    vertex: w,
                    n: self.n,
                });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if self.has_edge(u, v) {
            return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
        }
        self.set_edge(u, v, true);
        Ok(())
    }

    fn set_edge(&mut self, u: usize, v: usize, present: bool) {
        self.adj[u * self.n + v] = present;
        self.adj[v * self.n + u] = present;
    }

    pub fn complete(n: usize) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n)?;
        for u in 0..n {
            for v in u + 1..n {
                g.set_edge(u, v, true);
            }
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.n + v]
    }

    pub fn degree(&self, v: usize) -> usize {
        (0..self.n).filter(|&u| self.has_edge(v, u)).count()
    }

    /// Neighbors of `v` in increasing index order.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&u| self.has_edge(v, u))
    }

    /// Edges `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().filter(|&&b| b).count() / 2
    }

    pub fn is_complete(&self) -> bool {
        self.edge_count() == self.n * (self.n - 1) / 2
    }

    /// Number of connected components of the graph with `removed` deleted.
    /// An empty remainder has zero components.
    pub fn components_without(&self, removed: &BTreeSet<usize>) -> usize {
        let mut seen = vec![false; self.n];
        for &r in removed {
            if r < self.n {
                seen[r] = true;
            }
        }
        let mut count = 0;
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            count += 1;
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                for w in self.neighbors(u) {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.components_without(&BTreeSet::new()) == 1
    }

    /// True when deleting `cut` leaves at least two components.
    pub fn is_separating_set(&self, cut: &BTreeSet<usize>) -> bool {
        self.components_without(cut) >= 2
    }

    pub fn parse(text: &str, format: GraphFormat) -> Result<Self, GraphError> {
        match format {
            GraphFormat::EdgeList => parse_edge_list(text),
            GraphFormat::Graph6 => parse_graph6(text),
        }
    }

    pub fn serialize(&self, format: GraphFormat) -> String {
        match format {
            GraphFormat::EdgeList => self.to_edge_list(),
            GraphFormat::Graph6 => self.to_graph6(),
        }
    }

    /// `n` on the first line, then one `u v` line per edge with `u < v`.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for (u, v) in self.edges() {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    pub fn to_graph6(&self) -> String {
        let mut out = Vec::new();
        encode_graph6_size(self.n, &mut out);
        let mut acc = 0u8;
        let mut nbits = 0;
        for v in 1..self.n {
            for u in 0..v {
                acc = (acc << 1) | u8::from(self.has_edge(u, v));
                nbits += 1;
                if nbits == 6 {
                    out.push(acc + 63);
                    acc = 0;
                    nbits = 0;
                }
            }
        }
        if nbits > 0 {
            out.push((acc << (6 - nbits)) + 63);
        }
        String::from_utf8(out).expect("graph6 bytes are printable ASCII")
    }

    /// Induced subgraph on the listed vertices, relabelled `0..vertices.len()`
    /// in list order.
    pub fn induced(&self, vertices: &[usize]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(vertices.len())?;
        for (a, &u) in vertices.iter().enumerate() {
            for (b, &v) in vertices.iter().enumerate().skip(a + 1) {
                if self.has_edge(u, v) {
                    g.set_edge(a, b, true);
                }
            }
        }
        Ok(g)
    }
}

fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (line_no, header) = lines.next().ok_or(GraphError::Empty)?;
    let n: usize = header.parse().map_err(|_| GraphError::Malformed {
        line: line_no,
        reason: format!("expected vertex count, found {header:?}"),
    })?;
    let mut g = Graph::empty(n)?;
    for (line_no, line) in lines {
        let mut parts = line.split_whitespace();
        let mut endpoint = || -> Result<usize, GraphError> {
            let tok = parts.next().ok_or_else(|| GraphError::Malformed {
                line: line_no,
                reason: "expected two vertex indices".into(),
            })?;
            tok.parse().map_err(|_| GraphError::Malformed {
                line: line_no,
                reason: format!("bad vertex index {tok:?}"),
            })
        };
        let u = endpoint()?;
        let v = endpoint()?;
        if parts.next().is_some() {
            return Err(GraphError::Malformed {
                line: line_no,
                reason: "trailing tokens".into(),
            });
        }
        g.try_add_edge(u, v)?;
    }
    Ok(g)
}

fn encode_graph6_size(n: usize, out: &mut Vec<u8>) {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + 63);
        }
    } else {
        out.extend_from_slice(&[126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + 63);
        }
    }
}

fn parse_graph6(text: &str) -> Result<Graph, GraphError> {
    let bytes = text.trim_end_matches(['\n', '\r']).as_bytes();
    let bytes = bytes.strip_prefix(b">>graph6<<").unwrap_or(bytes);
    if let Some(&b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(GraphError::Graph6(format!("invalid byte {b:#04x}")));
    }
    let sextet = |slice: &[u8]| {
        slice
            .iter()
            .fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize)
    };
    let (n, body) = match bytes {
        [] => return Err(GraphError::Graph6("empty input".into())),
        [126, 126, rest @ ..] if rest.len() >= 6 => (sextet(&rest[..6]), &rest[6..]),
        [126, rest @ ..] if rest.len() >= 3 && rest[0] != 126 => (sextet(&rest[..3]), &rest[3..]),
        [126, ..] => return Err(GraphError::Graph6("truncated size header".into())),
        [first, rest @ ..] => ((first - 63) as usize, rest),
    };
    let nbits = n * n.saturating_sub(1) / 2;
    let expected = nbits.div_ceil(6);
    if body.len() != expected {
        return Err(GraphError::Graph6(format!(
            "expected {expected} data bytes for n = {n}, found {}",
            body.len()
        )));
    }
    let mut g = Graph::empty(n)?;
    let mut bit = 0;
    for v in 1..n {
        for u in 0..v {
            let byte = body[bit / 6] - 63;
            if (byte >> (5 - bit % 6)) & 1 == 1 {
                g.set_edge(u, v, true);
            }
            bit += 1;
        }
    }
    if nbits % 6 != 0 {
        let pad = body[expected - 1] - 63;
        if pad & ((1 << (6 - nbits % 6)) - 1) != 0 {
            return Err(GraphError::Graph6("non-zero padding bits".into()));
        }
    }
    Ok(g)
}

/// A permutation of `0..n`; `at(p)` is the vertex placed at position `p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct VertexOrdering {
    order: Vec<usize>,
}

impl TryFrom<Vec<usize>> for VertexOrdering {
    type Error = GraphError;

    fn try_from(order: Vec<usize>) -> Result<Self, Self::Error> {
        VertexOrdering::new(order)
    }
}

impl From<VertexOrdering> for Vec<usize> {
    fn from(o: VertexOrdering) -> Self {
        o.order
    }
}

impl VertexOrdering {
    pub fn new(order: Vec<usize>) -> Result<Self, GraphError> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &v in &order {
            if v >= n {
                return Err(GraphError::BadOrdering {
                    n,
                    reason: format!("vertex {v} out of range"),
                });
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(GraphError::BadOrdering {
                    n,
                    reason: format!("vertex {v} repeated"),
                });
            }
        }
        Ok(VertexOrdering { order })
    }

    pub fn identity(n: usize) -> Self {
        VertexOrdering {
            order: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn at(&self, p: usize) -> usize {
        self.order[p]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.order
    }

    /// `positions()[v]` is the position holding vertex `v`.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (p, &v) in self.order.iter().enumerate() {
            pos[v] = p;
        }
        pos
    }

    /// Copy with the vertices at positions `a` and `b` exchanged.
    pub fn swapped(&self, a: usize, b: usize) -> Self {
        let mut order = self.order.clone();
        order.swap(a, b);
        VertexOrdering { order }
    }
}

/// Vertices at positions before `p` that are not adjacent to the vertex at
/// position `p`, listed in position order.
pub fn preceding_non_neighbors(g: &Graph, order: &VertexOrdering, p: usize) -> Vec<usize> {
    let v = order.at(p);
    order.as_slice()[..p]
        .iter()
        .copied()
        .filter(|&u| !g.has_edge(u, v))
        .collect()
}

/// Shortest path from the vertex at position `p` to the vertex at `p + 1`
/// whose interior vertices all sit at positions `< p`.
///
/// Breadth-first search visits neighbors in increasing vertex index, so ties
/// between shortest paths resolve deterministically.
pub fn path_within_prefix(g: &Graph, order: &VertexOrdering, p: usize) -> Option<Vec<usize>> {
    assert!(p + 1 < order.len(), "position {p} has no successor");
    let pos = order.positions();
    let (from, to) = (order.at(p), order.at(p + 1));
    let mut parent = vec![usize::MAX; g.n()];
    parent[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        for w in g.neighbors(u) {
            if parent[w] != usize::MAX {
                continue;
            }
            if w == to {
                let mut path = vec![to, u];
                let mut cur = u;
                while cur != from {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            if pos[w] < p {
                parent[w] = u;
                queue.push_back(w);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle5() -> Graph {
        Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap()
    }

    #[test]
    fn edge_list_path() {
        let g = Graph::parse("3\n0 1\n1 2", GraphFormat::EdgeList).unwrap();
        assert_eq!(g.edges(), vec![(0, 1), (1, 2)]);
        assert_eq!(g.to_edge_list(), "3\n0 1\n1 2\n");
    }

    #[test]
    fn edge_list_errors() {
        assert_eq!(
            Graph::parse("3\n0 0", GraphFormat::EdgeList),
            Err(GraphError::SelfLoop(0))
        );
        assert_eq!(
            Graph::parse("3\n0 3", GraphFormat::EdgeList),
            Err(GraphError::VertexOutOfRange { vertex: 3, n: 3 })
        );
        assert_eq!(
            Graph::parse("0\n", GraphFormat::EdgeList),
            Err(GraphError::Empty)
        );
        assert!(matches!(
            Graph::parse("3\n0 x", GraphFormat::EdgeList),
            Err(GraphError::Malformed { line: 2, .. })
        ));
        assert!(matches!(
            Graph::parse("3\n0 1 2", GraphFormat::EdgeList),
            Err(GraphError::Malformed { .. })
        ));
        assert_eq!(
            Graph::parse("3\n0 1\n1 0", GraphFormat::EdgeList),
            Err(GraphError::DuplicateEdge(0, 1))
        );
    }

    #[test]
    fn graph6_k4() {
        let g = Graph::parse("C~", GraphFormat::Graph6).unwrap();
        assert_eq!(g, Graph::complete(4).unwrap());
        assert_eq!(g.to_graph6(), "C~");
    }

    #[test]
    fn graph6_errors() {
        assert!(Graph::parse("", GraphFormat::Graph6).is_err());
        assert!(Graph::parse("C", GraphFormat::Graph6).is_err());
        assert!(Graph::parse("C~~", GraphFormat::Graph6).is_err());
        assert!(Graph::parse("?", GraphFormat::Graph6).is_err());
        // n = 2 has one data bit; the five padding bits must be zero.
        assert!(Graph::parse("A@", GraphFormat::Graph6).is_err());
        assert_eq!(
            Graph::parse("A_", GraphFormat::Graph6).unwrap().edges(),
            vec![(0, 1)]
        );
    }

    #[test]
    fn graph6_large_header() {
        let g = Graph::from_edges(70, &[(0, 69), (3, 4)]).unwrap();
        let s = g.to_graph6();
        assert_eq!(&s.as_bytes()[..4], &[126, 63, 64, 69]);
        assert_eq!(Graph::parse(&s, GraphFormat::Graph6).unwrap(), g);
    }

    #[test]
    fn preceding_non_neighbors_cases() {
        let c5 = cycle5();
        let id = VertexOrdering::identity(5);
        assert_eq!(preceding_non_neighbors(&c5, &id, 2), vec![0]);
        let k = Graph::complete(5).unwrap();
        let o = VertexOrdering::new(vec![3, 1, 4, 0, 2]).unwrap();
        for p in 0..5 {
            assert!(preceding_non_neighbors(&k, &o, p).is_empty());
        }
        let e = Graph::empty(4).unwrap();
        assert_eq!(
            preceding_non_neighbors(&e, &VertexOrdering::identity(4), 3),
            vec![0, 1, 2]
        );
    }

    #[test]
    fn prefix_paths() {
        let c5 = cycle5();
        let id = VertexOrdering::identity(5);
        assert_eq!(path_within_prefix(&c5, &id, 3), Some(vec![3, 4]));
        // 2 and 3 are adjacent; 1 and 2 adjacent; position 0 -> 1 adjacent.
        assert_eq!(path_within_prefix(&c5, &id, 0), Some(vec![0, 1]));
        // Ordering 0,2,4,1,3: positions 1,2 hold 2 and 4, not adjacent. 0 is
        // interior only via 4-0-1-2, but 1 sits at position 3.
        let o = VertexOrdering::new(vec![0, 2, 4, 1, 3]).unwrap();
        assert_eq!(path_within_prefix(&c5, &o, 1), None);
        // Positions 2,3 hold 4 and 1, joined through 0 at position 0.
        assert_eq!(path_within_prefix(&c5, &o, 2), Some(vec![4, 0, 1]));
    }

    #[test]
    fn star_center_last_has_no_prefix_path() {
        let star = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let o = VertexOrdering::new(vec![1, 2, 3, 4, 0]).unwrap();
        assert_eq!(path_within_prefix(&star, &o, 2), None);
    }

    #[test]
    fn ordering_validation() {
        assert!(VertexOrdering::new(vec![0, 0]).is_err());
        assert!(VertexOrdering::new(vec![0, 2]).is_err());
        let o = VertexOrdering::new(vec![2, 0, 1]).unwrap();
        assert_eq!(o.positions(), vec![1, 2, 0]);
        assert_eq!(o.swapped(0, 2).as_slice(), &[1, 0, 2]);
    }
}
