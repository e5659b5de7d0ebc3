//! Undirected simple graphs on dense vertex ids, plus base sequences and
//! their k-th powers.

use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Canonical index of an edge, assigned in lexicographic order of `(u, v)`, `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeId(pub usize);

impl EdgeId {
    pub fn index(self) -> usize {
        self.0
    }
}

const NO_EDGE: u32 = u32::MAX;

/// Undirected simple graph with vertices `0..n`.
///
/// Edges are stored sorted as `(u, v)` with `u < v`; the position in that list
/// is the edge's [`EdgeId`]. A dense `n * n` table maps vertex pairs to ids.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<FixedBitSet>,
    edge_index: Vec<u32>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges)
            .finish()
    }
}

impl Graph {
    /// Builds a graph from an edge list. Duplicates and reversed copies collapse.
    pub fn new(n: usize, edge_list: &[(usize, usize)]) -> Result<Self> {
        let mut set = BTreeSet::new();
        for &(a, b) in edge_list {
            for x in [a, b] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if a == b {
                return Err(Error::InvalidEdge(a));
            }
            set.insert((a.min(b), a.max(b)));
        }
        let edges: Vec<_> = set.into_iter().collect();
        assert!(edges.len() < NO_EDGE as usize, "too many edges");
        let mut adjacency = vec![FixedBitSet::with_capacity(n); n];
        let mut edge_index = vec![NO_EDGE; n * n];
        for (id, &(u, v)) in edges.iter().enumerate() {
            adjacency[u].insert(v);
            adjacency[v].insert(u);
            edge_index[u * n + v] = id as u32;
            edge_index[v * n + u] = id as u32;
        }
        Ok(Graph {
            n,
            edges,
            adjacency,
            edge_index,
        })
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::new(n, &edges).expect("complete graph edges are valid")
    }

    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Result<Self> {
        let list: Vec<_> = edges.into_iter().collect();
        Graph::new(n, &list)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical order; the slice index is the edge id.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn endpoints(&self, e: EdgeId) -> (usize, usize) {
        self.edges[e.0]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.edge_index[u * self.n + v] != NO_EDGE
    }

    #[inline]
    pub fn edge_id(&self, u: usize, v: usize) -> Option<EdgeId> {
        if u >= self.n || v >= self.n {
            return None;
        }
        match self.edge_index[u * self.n + v] {
            NO_EDGE => None,
            id => Some(EdgeId(id as usize)),
        }
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[v].ones()
    }

    pub fn adjacency(&self, v: usize) -> &FixedBitSet {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].count_ones(..)
    }

    /// Minimum degree; zero for the empty graph.
    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Number of neighbours of `v` inside `set`.
    pub fn degree_into(&self, v: usize, set: &FixedBitSet) -> usize {
        self.adjacency[v].intersection(set).count()
    }

    /// Edge ids incident to `v`, ascending.
    pub fn incident_edges(&self, v: usize) -> Vec<EdgeId> {
        let mut ids: Vec<_> = self
            .neighbors(v)
            .map(|u| self.edge_id(v, u).expect("adjacent"))
            .collect();
        ids.sort_unstable();
        ids
    }

    /// Edge ids of a set of vertex pairs, failing on the first non-edge.
    pub fn edge_ids_of<'a, I>(&self, pairs: I) -> std::result::Result<Vec<EdgeId>, (usize, usize)>
    where
        I: IntoIterator<Item = &'a (usize, usize)>,
    {
        pairs
            .into_iter()
            .map(|&(u, v)| self.edge_id(u, v).ok_or((u, v)))
            .collect()
    }

    /// Whether the vertices pairwise span edges.
    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices.iter().enumerate().all(|(i, &a)| {
            vertices[i + 1..]
                .iter()
                .all(|&b| a != b && self.has_edge(a, b))
        })
    }

    /// Subgraph induced on the vertices of `keep`, relabelled to `0..keep.len()` in the given order.
    pub fn induced(&self, keep: &[usize]) -> Result<Graph> {
        let mut label = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            if v >= self.n {
                return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
            }
            label[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| label[u] != usize::MAX && label[v] != usize::MAX)
            .map(|&(u, v)| (label[u], label[v]));
        Graph::from_edges(keep.len(), edges)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SequenceKind {
    Path,
    Cycle,
}

/// An ordered list of distinct vertices read as a path or as a cycle.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BaseSequence {
    vertices: Vec<usize>,
    kind: SequenceKind,
}

impl BaseSequence {
    pub fn new(vertices: Vec<usize>, kind: SequenceKind) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidSequence("empty sequence".into()));
        }
        let mut seen = BTreeSet::new();
        for &v in &vertices {
            if !seen.insert(v) {
                return Err(Error::InvalidSequence(format!("vertex {v} repeated")));
            }
        }
        Ok(BaseSequence { vertices, kind })
    }

    pub fn path(vertices: Vec<usize>) -> Result<Self> {
        Self::new(vertices, SequenceKind::Path)
    }

    pub fn cycle(vertices: Vec<usize>) -> Result<Self> {
        Self::new(vertices, SequenceKind::Cycle)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn kind(&self) -> SequenceKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn into_vertices(self) -> Vec<usize> {
        self.vertices
    }

    /// Distance between positions `i` and `j` along the base (cyclic for cycles).
    pub fn distance(&self, i: usize, j: usize) -> usize {
        position_distance(i, j, self.len(), self.kind)
    }
}

#[inline]
pub(crate) fn position_distance(i: usize, j: usize, len: usize, kind: SequenceKind) -> usize {
    let d = i.abs_diff(j);
    match kind {
        SequenceKind::Path => d,
        SequenceKind::Cycle => d.min(len - d),
    }
}

/// Vertex pairs at distance `1..=k` along the base, each as `(min, max)`.
pub fn power_edges(base: &BaseSequence, k: usize) -> Result<BTreeSet<(usize, usize)>> {
    if k == 0 {
        return Err(Error::BadParams("power k must be at least 1".into()));
    }
    if base.len() < 2 {
        return Err(Error::InvalidSequence(
            "power edges need a base of length at least 2".into(),
        ));
    }
    let vs = base.vertices();
    let len = vs.len();
    let mut out = BTreeSet::new();
    for i in 0..len {
        for j in i + 1..len {
            let d = position_distance(i, j, len, base.kind());
            if d <= k {
                let (a, b) = (vs[i], vs[j]);
                out.insert((a.min(b), a.max(b)));
            }
        }
    }
    Ok(out)
}

/// Expected number of edges of the k-th power of a path on `s` vertices.
pub fn path_power_edge_count(s: usize, k: usize) -> usize {
    if s == 0 {
        return 0;
    }
    let k = k.min(s - 1);
    s * k - k * (k + 1) / 2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle() {
        let g = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.min_degree(), 2);
        assert!(g.is_clique(&[0, 1, 2]));
    }

    #[test]
    fn dedup_and_canonical_order() {
        let g = Graph::new(4, &[(1, 0), (0, 1)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);
        assert_eq!(g.min_degree(), 0);
        assert_eq!(g.edge_id(1, 0), Some(EdgeId(0)));
    }

    #[test]
    fn loop_rejected() {
        assert_eq!(Graph::new(2, &[(0, 0)]), Err(Error::InvalidEdge(0)));
    }

    #[test]
    fn out_of_range_rejected() {
        assert_eq!(
            Graph::new(2, &[(0, 2)]),
            Err(Error::VertexOutOfRange { vertex: 2, n: 2 })
        );
    }

    #[test]
    fn rebuild_is_identity() {
        let g = Graph::new(5, &[(4, 2), (0, 3), (1, 2), (3, 0)]).unwrap();
        let h = Graph::new(5, g.edges()).unwrap();
        assert_eq!(g, h);
    }

    #[test]
    fn square_of_path_on_four() {
        let base = BaseSequence::path(vec![1, 2, 3, 4]).unwrap();
        let edges = power_edges(&base, 2).unwrap();
        let expected: BTreeSet<_> = [(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)].into_iter().collect();
        assert_eq!(edges, expected);
        assert_eq!(edges.len(), path_power_edge_count(4, 2));
    }

    #[test]
    fn cycle_powers_on_six() {
        let base = BaseSequence::cycle((0..6).collect()).unwrap();
        let c6 = power_edges(&base, 1).unwrap();
        assert_eq!(c6.len(), 6);
        assert!(c6.contains(&(0, 5)));
        let sq = power_edges(&base, 2).unwrap();
        assert_eq!(sq.len(), 12);
        for i in 0..6 {
            let t = [i, (i + 1) % 6, (i + 2) % 6];
            for a in 0..3 {
                for b in a + 1..3 {
                    let (x, y) = (t[a].min(t[b]), t[a].max(t[b]));
                    assert!(sq.contains(&(x, y)));
                }
            }
        }
    }

    #[test]
    fn repeated_vertex_rejected() {
        assert!(matches!(
            BaseSequence::path(vec![0, 1, 0]),
            Err(Error::InvalidSequence(_))
        ));
    }

    #[test]
    fn power_needs_two_vertices_and_positive_k() {
        let one = BaseSequence::path(vec![3]).unwrap();
        assert!(power_edges(&one, 1).is_err());
        let two = BaseSequence::path(vec![3, 4]).unwrap();
        assert!(power_edges(&two, 0).is_err());
    }
}
