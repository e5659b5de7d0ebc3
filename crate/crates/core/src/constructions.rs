//! The space-barrier family: a complete `(k+1)`-partite graph with unbalanced
//! parts, a bipartite spanning graph inside every part, and a system forbidding
//! every cross vertex from using both ends of an inside edge.
//!
//! No compatible `K_{k+1}`-factor exists: the largest part has one more vertex
//! than the number of factor cliques, so some clique meets it twice, and those two
//! vertices span an inside edge whose ends are incompatible at any third vertex.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::incompat::IncompatibilitySystem;

/// Spanning graph placed inside one part, on local indices `0..size`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InsideGraph {
    Empty,
    /// Hamilton path `0 - 1 - ... - (size-1)`.
    Path,
    /// Hamilton cycle on the part; needs an even size of at least 4 to stay bipartite.
    Cycle,
    Edges(Vec<(usize, usize)>),
}

impl InsideGraph {
    /// Path for odd or tiny parts, cycle for even parts of size at least 4.
    pub fn default_for(size: usize) -> Self {
        if size.is_multiple_of(2) && size >= 4 {
            InsideGraph::Cycle
        } else {
            InsideGraph::Path
        }
    }

    pub fn edges(&self, size: usize) -> Vec<(usize, usize)> {
        match self {
            InsideGraph::Empty => Vec::new(),
            InsideGraph::Path => (1..size).map(|i| (i - 1, i)).collect(),
            InsideGraph::Cycle => {
                let mut e: Vec<_> = (1..size).map(|i| (i - 1, i)).collect();
                if size >= 3 {
                    e.push((0, size - 1));
                }
                e
            }
            InsideGraph::Edges(list) => list.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarrierSpec {
    pub k: usize,
    pub n: usize,
    pub part_sizes: Vec<usize>,
    pub inside_graphs: Vec<InsideGraph>,
}

impl BarrierSpec {
    /// Sizes `n/(k+1) + 1, n/(k+1) - 1, n/(k+1), ...` with default inside graphs.
    pub fn standard(k: usize, n: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::BadParams("k must be at least 1".into()));
        }
        if !n.is_multiple_of(k + 1) {
            return Err(Error::BadDivisibility { n, by: k + 1 });
        }
        let q = n / (k + 1);
        if q < 3 {
            return Err(Error::BadParams(format!(
                "n/(k+1) = {q} is below 3; parts would degenerate"
            )));
        }
        let mut part_sizes = vec![q + 1, q - 1];
        part_sizes.extend(std::iter::repeat_n(q, k - 1));
        let inside_graphs = part_sizes.iter().map(|&s| InsideGraph::default_for(s)).collect();
        Ok(BarrierSpec {
            k,
            n,
            part_sizes,
            inside_graphs,
        })
    }

    /// Same part sizes with no inside edges.
    pub fn without_inside(mut self) -> Self {
        self.inside_graphs = vec![InsideGraph::Empty; self.part_sizes.len()];
        self
    }
}

/// A built barrier instance together with its part structure.
#[derive(Debug, Clone)]
pub struct SpaceBarrier {
    pub spec: BarrierSpec,
    pub graph: Graph,
    pub system: IncompatibilitySystem,
    /// Vertex ids of each part; part `i` occupies a contiguous id range.
    pub parts: Vec<Vec<usize>>,
    pub part_of: Vec<usize>,
    /// Realized `(min, max)` degree over all inside graphs.
    pub inside_degrees: (usize, usize),
}

impl SpaceBarrier {
    pub fn inside_degree(&self, v: usize) -> usize {
        let p = self.part_of[v];
        self.graph
            .neighbors(v)
            .filter(|&u| self.part_of[u] == p)
            .count()
    }
}

pub fn build_space_barrier(spec: &BarrierSpec) -> Result<SpaceBarrier> {
    let k = spec.k;
    if k == 0 {
        return Err(Error::BadParams("k must be at least 1".into()));
    }
    if !spec.n.is_multiple_of(k + 1) {
        return Err(Error::BadDivisibility { n: spec.n, by: k + 1 });
    }
    if spec.n / (k + 1) < 3 {
        return Err(Error::BadParams("n/(k+1) must be at least 3".into()));
    }
    if spec.part_sizes.len() != k + 1 || spec.inside_graphs.len() != k + 1 {
        return Err(Error::BadParams(format!("need exactly {} parts", k + 1)));
    }
    if spec.part_sizes.iter().sum::<usize>() != spec.n {
        return Err(Error::BadParams("part sizes must sum to n".into()));
    }

    let mut parts = Vec::with_capacity(k + 1);
    let mut part_of = vec![0; spec.n];
    let mut next = 0;
    for (i, &size) in spec.part_sizes.iter().enumerate() {
        let ids: Vec<usize> = (next..next + size).collect();
        for &v in &ids {
            part_of[v] = i;
        }
        next += size;
        parts.push(ids);
    }

    let mut edges = Vec::new();
    for u in 0..spec.n {
        for v in u + 1..spec.n {
            if part_of[u] != part_of[v] {
                edges.push((u, v));
            }
        }
    }
    let mut inside_edges = Vec::with_capacity(k + 1);
    for (i, inside) in spec.inside_graphs.iter().enumerate() {
        let size = spec.part_sizes[i];
        let local = inside.edges(size);
        for &(a, b) in &local {
            if a >= size || b >= size || a == b {
                return Err(Error::BadParams(format!(
                    "inside edge ({a}, {b}) invalid for part {i} of size {size}"
                )));
            }
        }
        if !is_bipartite(size, &local) {
            return Err(Error::NotBipartite { part: i });
        }
        let global: Vec<(usize, usize)> = local
            .iter()
            .map(|&(a, b)| (parts[i][a], parts[i][b]))
            .collect();
        edges.extend_from_slice(&global);
        inside_edges.push(global);
    }
    let graph = Graph::new(spec.n, &edges)?;

    let mut triples = Vec::new();
    for (j, list) in inside_edges.iter().enumerate() {
        for &(u, w) in list {
            for v in (0..spec.n).filter(|&v| part_of[v] != j) {
                triples.push((v, u, w));
            }
        }
    }
    let system = IncompatibilitySystem::from_vertex_triples(&graph, triples)?;

    let mut barrier = SpaceBarrier {
        spec: spec.clone(),
        graph,
        system,
        parts,
        part_of,
        inside_degrees: (0, 0),
    };
    let degs: Vec<usize> = (0..spec.n).map(|v| barrier.inside_degree(v)).collect();
    barrier.inside_degrees = (
        degs.iter().copied().min().unwrap_or(0),
        degs.iter().copied().max().unwrap_or(0),
    );
    Ok(barrier)
}

fn is_bipartite(size: usize, edges: &[(usize, usize)]) -> bool {
    let mut adj = vec![Vec::new(); size];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut side = vec![None; size];
    for s in 0..size {
        if side[s].is_some() {
            continue;
        }
        side[s] = Some(false);
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            let sx = side[x].expect("visited");
            for &y in &adj[x] {
                match side[y] {
                    None => {
                        side[y] = Some(!sx);
                        queue.push_back(y);
                    }
                    Some(sy) if sy == sx => return false,
                    Some(_) => {}
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EdgeId;

    #[test]
    fn standard_twelve() {
        let spec = BarrierSpec::standard(2, 12).unwrap();
        assert_eq!(spec.part_sizes, vec![5, 3, 4]);
        assert_eq!(
            spec.inside_graphs,
            vec![InsideGraph::Path, InsideGraph::Path, InsideGraph::Cycle]
        );
        let b = build_space_barrier(&spec).unwrap();
        assert_eq!(b.graph.min_degree(), 8);
        assert_eq!(b.system.boundedness(), 2);
        assert_eq!(b.inside_degrees, (1, 2));
        // minimum degree sits at an end of the inside path of the largest part
        assert_eq!(b.graph.degree(0), 8);
        assert_eq!(b.graph.degree(4), 8);
    }

    #[test]
    fn empty_inside_gives_complete_multipartite() {
        let spec = BarrierSpec::standard(2, 9).unwrap().without_inside();
        let b = build_space_barrier(&spec).unwrap();
        assert!(b.system.is_empty());
        for (u, v) in b.graph.edges() {
            assert_ne!(b.part_of[*u], b.part_of[*v]);
        }
        let cross: usize = {
            let s = &spec.part_sizes;
            (s.iter().sum::<usize>().pow(2) - s.iter().map(|x| x * x).sum::<usize>()) / 2
        };
        assert_eq!(b.graph.edge_count(), cross);
    }

    #[test]
    fn divisibility_and_bipartiteness_enforced() {
        assert_eq!(
            BarrierSpec::standard(2, 10),
            Err(Error::BadDivisibility { n: 10, by: 3 })
        );
        let mut spec = BarrierSpec::standard(2, 12).unwrap();
        spec.inside_graphs[1] = InsideGraph::Cycle; // C_3
        assert_eq!(
            build_space_barrier(&spec).unwrap_err(),
            Error::NotBipartite { part: 1 }
        );
        spec.n = 13;
        assert!(matches!(
            build_space_barrier(&spec),
            Err(Error::BadDivisibility { .. })
        ));
    }

    #[test]
    fn cross_triangles_over_inside_edges_are_incompatible() {
        let b = build_space_barrier(&BarrierSpec::standard(2, 12).unwrap()).unwrap();
        let g = &b.graph;
        for (u, w) in g.edges().iter().copied() {
            if b.part_of[u] != b.part_of[w] {
                continue;
            }
            for v in 0..g.n() {
                if b.part_of[v] == b.part_of[u] {
                    continue;
                }
                let tri: Vec<EdgeId> = g.edge_ids_of(&[(u, w), (v, u), (v, w)]).unwrap();
                let verdict = b.system.is_compatible(&tri).unwrap();
                assert_eq!(verdict.violation.map(|x| x.vertex), Some(v));
            }
        }
    }

    #[test]
    fn parts_are_triangle_free() {
        for n in [9, 12, 15] {
            let b = build_space_barrier(&BarrierSpec::standard(2, n).unwrap()).unwrap();
            for part in &b.parts {
                for (i, &x) in part.iter().enumerate() {
                    for (j, &y) in part.iter().enumerate().skip(i + 1) {
                        for &z in &part[j + 1..] {
                            assert!(!b.graph.is_clique(&[x, y, z]));
                        }
                    }
                }
            }
        }
    }
}
