//! Simple graphs on `n = p·q` vertices carrying the double labeling
//! `(j, k)`, `j ∈ 1..=p`, `k ∈ 1..=q`.
//!
//! Vertex `(j, k)` is stored at 0-based index `(j − 1)·q + (k − 1)`, i.e.
//! row-major with the first label major. Every external surface (file
//! formats, JSON, error messages) uses the 1-based `(j, k)` labels.

mod io;
mod matching;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::IntegerMatrix;

pub use io::{parse_graph, parse_graph_json, parse_graph_text, ParseError};
pub use matching::{
    canonicalize_entangling_matching, classify_matching, Canonicalization, ComponentKind, MatchingClassification,
    MatchingComponent, MatchingKind,
};

/// 1-based `(first label, second label)` pair.
pub type Label = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("invalid split p = {p}, q = {q}: both must be at least 1")]
    InvalidSplit { p: usize, q: usize },
    #[error("self-loop at vertex {0:?}")]
    SelfLoop(Label),
    #[error("duplicate edge {{{0:?}, {1:?}}}")]
    DuplicateEdge(Label, Label),
    #[error("vertex {0:?} out of range for split {1} x {2}")]
    IndexOutOfRange(Label, usize, usize),
    #[error("vertex index {0} out of range for {1} vertices")]
    VertexIndexOutOfRange(usize, usize),
    #[error("not a perfect entangling matching between two columns: {0}")]
    NotPerfectEntanglingMatching(String),
    #[error("invalid relabeling: {0}")]
    InvalidPermutation(String),
}

/// Simple graph with a bipartite `(p, q)` labeling of its vertices. The edge
/// list is canonical (each pair ordered, list sorted), so `==` is structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "GraphJson", try_from = "GraphJson")]
pub struct BipartiteLabeledGraph {
    p: usize,
    q: usize,
    edges: Vec<(usize, usize)>,
}

/// JSON form: `{"p":int,"q":int,"edges":[[[j,k],[j2,k2]],...]}` with 1-based labels.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphJson {
    pub p: usize,
    pub q: usize,
    pub edges: Vec<[[usize; 2]; 2]>,
}

impl From<BipartiteLabeledGraph> for GraphJson {
    fn from(g: BipartiteLabeledGraph) -> Self {
        let edges = g.edge_labels().into_iter().map(|((a, b), (c, d))| [[a, b], [c, d]]).collect();
        GraphJson { p: g.p, q: g.q, edges }
    }
}

impl TryFrom<GraphJson> for BipartiteLabeledGraph {
    type Error = GraphError;
    fn try_from(j: GraphJson) -> Result<Self, GraphError> {
        let edges: Vec<(Label, Label)> = j.edges.iter().map(|[[a, b], [c, d]]| ((*a, *b), (*c, *d))).collect();
        BipartiteLabeledGraph::new(j.p, j.q, &edges)
    }
}

impl BipartiteLabeledGraph {
    /// Builds a graph from 1-based label pairs.
    pub fn new(p: usize, q: usize, edges: &[(Label, Label)]) -> Result<Self, GraphError> {
        check_split(p, q)?;
        let mut indexed = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            let a = label_to_index(u, p, q)?;
            let b = label_to_index(v, p, q)?;
            indexed.push((a, b));
        }
        Self::from_index_edges(p, q, indexed)
    }

    /// Builds a graph from 0-based vertex indices.
    pub fn from_index_edges(
        p: usize,
        q: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        check_split(p, q)?;
        let n = p * q;
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            for x in [a, b] {
                if x >= n {
                    return Err(GraphError::VertexIndexOutOfRange(x, n));
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(index_to_label(a, q)));
            }
            let e = (a.min(b), a.max(b));
            if !set.insert(e) {
                return Err(GraphError::DuplicateEdge(index_to_label(e.0, q), index_to_label(e.1, q)));
            }
        }
        Ok(Self { p, q, edges: set.into_iter().collect() })
    }

    pub fn empty(p: usize, q: usize) -> Result<Self, GraphError> {
        Self::from_index_edges(p, q, [])
    }

    /// Graph whose edge set is the subset of [`vertex_pairs`] selected by
    /// the bits of `mask` (bit `i` ↔ pair `i`).
    pub fn from_mask(p: usize, q: usize, mask: u64) -> Result<Self, GraphError> {
        let pairs = vertex_pairs(p * q);
        Self::from_index_edges(p, q, pairs.into_iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| e))
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn vertex_count(&self) -> usize {
        self.p * self.q
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_labels(&self) -> Vec<(Label, Label)> {
        self.edges.iter().map(|&(a, b)| (self.label(a), self.label(b))).collect()
    }

    pub fn label(&self, index: usize) -> Label {
        index_to_label(index, self.q)
    }

    pub fn index(&self, label: Label) -> Result<usize, GraphError> {
        label_to_index(label, self.p, self.q)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    pub fn degrees(&self) -> Vec<i64> {
        let mut d = vec![0; self.vertex_count()];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    /// `M(G)`: symmetric 0/1 matrix with ones exactly on the edges.
    pub fn adjacency_matrix(&self) -> IntegerMatrix {
        let mut m = IntegerMatrix::zeros(self.vertex_count());
        for &(a, b) in &self.edges {
            m[(a, b)] = 1;
            m[(b, a)] = 1;
        }
        m
    }

    /// `Δ(G)`: diagonal matrix of vertex degrees.
    pub fn degree_matrix(&self) -> IntegerMatrix {
        IntegerMatrix::from_diagonal(&self.degrees())
    }

    /// Combinatorial Laplacian `L(G) = Δ(G) − M(G)`.
    pub fn laplacian(&self) -> IntegerMatrix {
        &self.degree_matrix() - &self.adjacency_matrix()
    }

    /// `G^{Γ_B}`: `{(i,j),(k,l)}` is an edge iff `{(i,l),(k,j)}` is an edge of `G`.
    pub fn partial_transpose(&self) -> Self {
        let q = self.q;
        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(a, b)| {
                let (i, j) = (a / q, a % q);
                let (k, l) = (b / q, b % q);
                let x = i * q + l;
                let y = k * q + j;
                (x.min(y), x.max(y))
            })
            .collect();
        edges.sort_unstable();
        Self { p: self.p, q: self.q, edges }
    }

    pub fn is_entangled(&self, edge: (usize, usize)) -> bool {
        is_entangled_edge(edge, self.p, self.q)
    }

    pub fn entangled_edges(&self) -> Vec<(usize, usize)> {
        self.edges.iter().copied().filter(|&e| self.is_entangled(e)).collect()
    }

    /// True iff every edge joins lattice points at distance 1 or √2 when
    /// vertex `(j, k)` sits at row `j`, column `k`. Isolated vertices are
    /// allowed.
    pub fn is_nearest_point(&self) -> bool {
        self.edges.iter().all(|&e| is_nearest_point_edge(e, self.q))
    }

    /// Every vertex has degree exactly one.
    pub fn is_perfect_matching(&self) -> bool {
        self.degrees().iter().all(|&d| d == 1)
    }

    /// Perfect matching all of whose edges are entangled.
    pub fn is_perfect_entangling_matching(&self) -> bool {
        self.is_perfect_matching() && self.edges.iter().all(|&e| self.is_entangled(e))
    }

    /// Applies a permutation to the first label: vertex `(j, k)` moves to
    /// `(perm[j − 1], k)`. `perm` holds 1-based images.
    pub fn relabel_rows(&self, perm: &[usize]) -> Result<Self, GraphError> {
        check_permutation(perm, self.p)?;
        let q = self.q;
        let map = |x: usize| (perm[x / q] - 1) * q + x % q;
        Self::from_index_edges(self.p, self.q, self.edges.iter().map(|&(a, b)| (map(a), map(b))))
    }

    /// Applies a permutation to the second label: `(j, k) ↦ (j, perm[k − 1])`.
    pub fn relabel_cols(&self, perm: &[usize]) -> Result<Self, GraphError> {
        check_permutation(perm, self.q)?;
        let q = self.q;
        let map = |x: usize| (x / q) * q + perm[x % q] - 1;
        Self::from_index_edges(self.p, self.q, self.edges.iter().map(|&(a, b)| (map(a), map(b))))
    }

    /// Subgraph on the same vertex set keeping only `edges`.
    pub fn with_edges(&self, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        Self::from_index_edges(self.p, self.q, edges)
    }
}

/// An edge is entangled when its endpoints differ in both labels.
pub fn is_entangled_edge(edge: (usize, usize), p: usize, q: usize) -> bool {
    debug_assert!(edge.0 < p * q && edge.1 < p * q);
    let (i, j) = (edge.0 / q, edge.0 % q);
    let (k, l) = (edge.1 / q, edge.1 % q);
    i != k && j != l
}

pub fn is_nearest_point_edge(edge: (usize, usize), q: usize) -> bool {
    let (i, j) = ((edge.0 / q) as i64, (edge.0 % q) as i64);
    let (k, l) = ((edge.1 / q) as i64, (edge.1 % q) as i64);
    (i - k).abs() <= 1 && (j - l).abs() <= 1 && (i, j) != (k, l)
}

/// All unordered vertex pairs `(a, b)`, `a < b < n`, in lexicographic order.
pub fn vertex_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| ((a + 1)..n).map(move |b| (a, b))).collect()
}

pub fn index_to_label(index: usize, q: usize) -> Label {
    (index / q + 1, index % q + 1)
}

pub fn label_to_index(label: Label, p: usize, q: usize) -> Result<usize, GraphError> {
    let (j, k) = label;
    if j == 0 || k == 0 || j > p || k > q {
        return Err(GraphError::IndexOutOfRange(label, p, q));
    }
    Ok((j - 1) * q + (k - 1))
}

fn check_split(p: usize, q: usize) -> Result<(), GraphError> {
    if p == 0 || q == 0 {
        return Err(GraphError::InvalidSplit { p, q });
    }
    Ok(())
}

fn check_permutation(perm: &[usize], len: usize) -> Result<(), GraphError> {
    if perm.len() != len {
        return Err(GraphError::InvalidPermutation(format!("expected {len} images, got {}", perm.len())));
    }
    let mut seen = vec![false; len];
    for &x in perm {
        if x == 0 || x > len || std::mem::replace(&mut seen[x - 1], true) {
            return Err(GraphError::InvalidPermutation(format!("{perm:?} is not a permutation of 1..={len}")));
        }
    }
    Ok(())
}
