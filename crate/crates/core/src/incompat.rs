//! Incompatibility systems: per-vertex families of forbidden edge pairs.

use std::collections::{BTreeSet, HashMap};
use std::hash::Hash;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph};

/// A forbidden pair `{first, second}` at `vertex`, with `first < second`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Violation {
    pub vertex: usize,
    pub first: EdgeId,
    pub second: EdgeId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompatibilityVerdict {
    pub violation: Option<Violation>,
}

impl CompatibilityVerdict {
    pub fn compatible() -> Self {
        CompatibilityVerdict { violation: None }
    }

    pub fn is_compatible(&self) -> bool {
        self.violation.is_none()
    }
}

/// The family `{F_v}` over a fixed graph.
///
/// Pairs live in `families[v]` sorted by `(lower id, higher id)`. For the
/// solvers, `local[e][side]` lists the far endpoints of edges that conflict
/// with `e` at its endpoint `side` (0 = smaller endpoint), sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncompatibilitySystem {
    edges: Vec<(usize, usize)>,
    families: Vec<Vec<(EdgeId, EdgeId)>>,
    local: Vec<[Vec<usize>; 2]>,
}

impl IncompatibilitySystem {
    pub fn empty(g: &Graph) -> Self {
        IncompatibilitySystem {
            edges: g.edges().to_vec(),
            families: vec![Vec::new(); g.n()],
            local: vec![[Vec::new(), Vec::new()]; g.edge_count()],
        }
    }

    /// Builds a system from `(vertex, e, e')` triples; duplicate pairs collapse.
    pub fn from_pairs<I>(g: &Graph, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, EdgeId, EdgeId)>,
    {
        let mut sys = Self::empty(g);
        for (v, a, b) in pairs {
            sys.insert(v, a, b)?;
        }
        Ok(sys)
    }

    /// Builds a system from vertex triples: `(v, a, b)` forbids edges `va` and `vb` at `v`.
    pub fn from_vertex_triples<I>(g: &Graph, triples: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, usize)>,
    {
        let mut sys = Self::empty(g);
        for (v, a, b) in triples {
            let ea = g.edge_id(v, a).ok_or_else(|| Error::InvalidPair {
                vertex: v,
                reason: format!("{{{v},{a}}} is not an edge"),
            })?;
            let eb = g.edge_id(v, b).ok_or_else(|| Error::InvalidPair {
                vertex: v,
                reason: format!("{{{v},{b}}} is not an edge"),
            })?;
            sys.insert(v, ea, eb)?;
        }
        Ok(sys)
    }

    /// Adds `{a, b}` to `F_v`. Returns whether the pair was new.
    pub fn insert(&mut self, v: usize, a: EdgeId, b: EdgeId) -> Result<bool> {
        let n = self.families.len();
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        for e in [a, b] {
            if e.0 >= self.edges.len() {
                return Err(Error::EdgeOutOfRange {
                    id: e.0,
                    count: self.edges.len(),
                });
            }
        }
        if a == b {
            return Err(Error::InvalidPair {
                vertex: v,
                reason: "the two edges coincide".into(),
            });
        }
        let (first, second) = (a.min(b), a.max(b));
        let (fu, fv) = self.edges[first.0];
        let (su, sv) = self.edges[second.0];
        if !(fu == v || fv == v) || !(su == v || sv == v) {
            return Err(Error::InvalidPair {
                vertex: v,
                reason: format!("edges {{{fu},{fv}}} and {{{su},{sv}}} do not meet at {v}"),
            });
        }
        let fam = &mut self.families[v];
        match fam.binary_search(&(first, second)) {
            Ok(_) => return Ok(false),
            Err(at) => fam.insert(at, (first, second)),
        }
        let far_first = if fu == v { fv } else { fu };
        let far_second = if su == v { sv } else { su };
        let side_first = usize::from(fu != v);
        let side_second = usize::from(su != v);
        insert_sorted(&mut self.local[first.0][side_first], far_second);
        insert_sorted(&mut self.local[second.0][side_second], far_first);
        Ok(true)
    }

    /// Removes `{a, b}` from `F_v`. Returns whether it was present.
    pub fn remove(&mut self, v: usize, a: EdgeId, b: EdgeId) -> bool {
        let (first, second) = (a.min(b), a.max(b));
        let Some(fam) = self.families.get_mut(v) else {
            return false;
        };
        let Ok(at) = fam.binary_search(&(first, second)) else {
            return false;
        };
        fam.remove(at);
        let (fu, fv) = self.edges[first.0];
        let (su, sv) = self.edges[second.0];
        let far_first = if fu == v { fv } else { fu };
        let far_second = if su == v { sv } else { su };
        remove_sorted(&mut self.local[first.0][usize::from(fu != v)], far_second);
        remove_sorted(&mut self.local[second.0][usize::from(su != v)], far_first);
        true
    }

    pub fn n(&self) -> usize {
        self.families.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Whether this system was built over a graph with the same edge set as `g`.
    pub fn is_over(&self, g: &Graph) -> bool {
        self.families.len() == g.n() && self.edges == g.edges()
    }

    /// The pairs of `F_v`, sorted.
    pub fn family(&self, v: usize) -> &[(EdgeId, EdgeId)] {
        &self.families[v]
    }

    pub fn pair_count(&self) -> usize {
        self.families.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.families.iter().all(Vec::is_empty)
    }

    /// All pairs as `(v, e, e')`, ordered by vertex then pair.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, EdgeId, EdgeId)> + '_ {
        self.families
            .iter()
            .enumerate()
            .flat_map(|(v, fam)| fam.iter().map(move |&(a, b)| (v, a, b)))
    }

    /// Least `D` such that the system is `D`-bounded.
    pub fn boundedness(&self) -> usize {
        self.local
            .iter()
            .flat_map(|sides| sides.iter().map(Vec::len))
            .max()
            .unwrap_or(0)
    }

    /// Far endpoints `w` such that `{e, vw}` is forbidden at `v`, where `v` is an endpoint of `e`.
    #[inline]
    pub fn conflicts_at(&self, e: EdgeId, v: usize) -> &[usize] {
        let (a, _) = self.edges[e.0];
        &self.local[e.0][usize::from(a != v)]
    }

    /// Whether edges `va` and `vb` are incompatible at `v`. Non-edges are never incompatible.
    #[inline]
    pub fn incompatible_at(&self, g: &Graph, v: usize, a: usize, b: usize) -> bool {
        match g.edge_id(v, a) {
            Some(e) => self.conflicts_at(e, v).binary_search(&b).is_ok(),
            None => false,
        }
    }

    /// Checks a subgraph given by edge ids. On failure reports the least violation
    /// in `(vertex, first, second)` order.
    pub fn is_compatible(&self, subgraph: &[EdgeId]) -> Result<CompatibilityVerdict> {
        let mut member = FixedBitSet::with_capacity(self.edges.len());
        let mut touched = BTreeSet::new();
        for &e in subgraph {
            if e.0 >= self.edges.len() {
                return Err(Error::EdgeOutOfRange {
                    id: e.0,
                    count: self.edges.len(),
                });
            }
            member.insert(e.0);
            let (a, b) = self.edges[e.0];
            touched.insert(a);
            touched.insert(b);
        }
        for v in touched {
            for &(a, b) in &self.families[v] {
                if member.contains(a.0) && member.contains(b.0) {
                    return Ok(CompatibilityVerdict {
                        violation: Some(Violation {
                            vertex: v,
                            first: a,
                            second: b,
                        }),
                    });
                }
            }
        }
        Ok(CompatibilityVerdict::compatible())
    }

    /// Incremental check: is `e` compatible with the edges in `present` (a bitset over
    /// edge ids) at both of its endpoints? Pairs not involving `e` are not examined.
    pub fn conflict_with_set(
        &self,
        g: &Graph,
        e: EdgeId,
        present: &FixedBitSet,
    ) -> Option<Violation> {
        let (a, b) = self.edges[e.0];
        let mut best: Option<Violation> = None;
        for v in [a, b] {
            for &w in self.conflicts_at(e, v) {
                let other = g.edge_id(v, w).expect("conflict partners are edges");
                if present.contains(other.0) {
                    let cand = Violation {
                        vertex: v,
                        first: e.min(other),
                        second: e.max(other),
                    };
                    if best.is_none_or(|b| cand < b) {
                        best = Some(cand);
                    }
                }
            }
        }
        best
    }

    /// Whether all edges among `vertices` are present and pairwise compatible.
    pub fn is_compatible_clique(&self, g: &Graph, vertices: &[usize]) -> bool {
        if !g.is_clique(vertices) {
            return false;
        }
        for &v in vertices {
            for &a in vertices {
                if a == v {
                    continue;
                }
                let e = g.edge_id(v, a).expect("clique edge");
                for &w in self.conflicts_at(e, v) {
                    if vertices.contains(&w) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

fn insert_sorted(list: &mut Vec<usize>, x: usize) {
    if let Err(at) = list.binary_search(&x) {
        list.insert(at, x);
    }
}

fn remove_sorted(list: &mut Vec<usize>, x: usize) {
    if let Ok(at) = list.binary_search(&x) {
        list.remove(at);
    }
}

/// Random `bound`-bounded system by rejection sampling.
///
/// At each vertex `v` of degree `d`, draws `ceil(bound * d / 2)` uniformly random
/// pairs of distinct incident edges and keeps a draw unless it is already present or
/// one of its edges already sits in `bound` pairs of `F_v`.
pub fn gen_random_system(g: &Graph, bound: usize, seed: u64) -> IncompatibilitySystem {
    let mut sys = IncompatibilitySystem::empty(g);
    if bound == 0 {
        return sys;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for v in 0..g.n() {
        let inc = g.incident_edges(v);
        let d = inc.len();
        if d < 2 {
            continue;
        }
        let mut count = vec![0usize; d];
        let draws = (bound * d).div_ceil(2);
        for _ in 0..draws {
            let i = rng.gen_range(0..d);
            let mut j = rng.gen_range(0..d - 1);
            if j >= i {
                j += 1;
            }
            if count[i] >= bound || count[j] >= bound {
                continue;
            }
            if sys.insert(v, inc[i], inc[j]).expect("incident pair") {
                count[i] += 1;
                count[j] += 1;
            }
        }
    }
    sys
}

/// The system in which two edges meeting at `v` are incompatible iff they share a color.
pub fn gen_color_system<C, F>(g: &Graph, coloring: F) -> Result<IncompatibilitySystem>
where
    C: Eq + Hash,
    F: Fn(EdgeId) -> Option<C>,
{
    let colors = (0..g.edge_count())
        .map(|i| coloring(EdgeId(i)).ok_or(Error::MissingColor(i)))
        .collect::<Result<Vec<_>>>()?;
    let mut sys = IncompatibilitySystem::empty(g);
    for v in 0..g.n() {
        let mut classes: HashMap<&C, Vec<EdgeId>> = HashMap::new();
        for e in g.incident_edges(v) {
            classes.entry(&colors[e.0]).or_default().push(e);
        }
        for class in classes.values() {
            for (i, &a) in class.iter().enumerate() {
                for &b in &class[i + 1..] {
                    sys.insert(v, a, b)?;
                }
            }
        }
    }
    Ok(sys)
}
