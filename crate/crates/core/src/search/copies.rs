use fixedbitset::FixedBitSet;

use super::check_instance;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::incompat::IncompatibilitySystem;

pub const DEFAULT_PATTERN_LIMIT: usize = 8;

const UNMAPPED: usize = usize::MAX;

/// Number of injective maps `pattern -> g` whose image edges are present and
/// compatible. `constraints[i]`, when given, is the set of host vertices that
/// pattern vertex `i` may map to.
pub fn count_compatible_copies(
    g: &Graph,
    sys: &IncompatibilitySystem,
    pattern: &Graph,
    constraints: Option<&[FixedBitSet]>,
) -> Result<u64> {
    count_compatible_copies_with_limit(g, sys, pattern, constraints, DEFAULT_PATTERN_LIMIT)
}

pub fn count_compatible_copies_with_limit(
    g: &Graph,
    sys: &IncompatibilitySystem,
    pattern: &Graph,
    constraints: Option<&[FixedBitSet]>,
    limit: usize,
) -> Result<u64> {
    check_instance(g, sys)?;
    let p = pattern.n();
    if p > limit {
        return Err(Error::PatternTooLarge { size: p, limit });
    }
    if let Some(c) = constraints {
        if c.len() != p {
            return Err(Error::BadParams(format!(
                "{} constraint sets for a pattern on {p} vertices",
                c.len()
            )));
        }
    }
    if p == 0 {
        return Ok(1);
    }
    let order = placement_order(pattern);
    let mut e = Embedder {
        g,
        sys,
        pattern,
        constraints,
        order,
        img: vec![UNMAPPED; p],
        inv: vec![UNMAPPED; g.n()],
    };
    Ok(e.count(0))
}

/// Places next the vertex with most already-placed neighbours, so adjacency
/// prunes as early as possible.
fn placement_order(pattern: &Graph) -> Vec<usize> {
    let p = pattern.n();
    let mut placed = vec![false; p];
    let mut order = Vec::with_capacity(p);
    for _ in 0..p {
        let next = (0..p)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                let back = pattern.neighbors(v).filter(|&u| placed[u]).count();
                (back, pattern.degree(v), std::cmp::Reverse(v))
            })
            .expect("unplaced vertex remains");
        placed[next] = true;
        order.push(next);
    }
    order
}

struct Embedder<'a> {
    g: &'a Graph,
    sys: &'a IncompatibilitySystem,
    pattern: &'a Graph,
    constraints: Option<&'a [FixedBitSet]>,
    order: Vec<usize>,
    img: Vec<usize>,
    inv: Vec<usize>,
}

impl Embedder<'_> {
    fn count(&mut self, depth: usize) -> u64 {
        if depth == self.order.len() {
            return 1;
        }
        let x = self.order[depth];
        let anchor = self.pattern.neighbors(x).find(|&y| self.img[y] != UNMAPPED);
        let candidates: Vec<usize> = match anchor {
            Some(y) => self.g.neighbors(self.img[y]).collect(),
            None => (0..self.g.n()).collect(),
        };
        let mut total = 0;
        for h in candidates {
            if self.inv[h] != UNMAPPED {
                continue;
            }
            if self.constraints.is_some_and(|c| !c[x].contains(h)) {
                continue;
            }
            if !self.fits(x, h) {
                continue;
            }
            self.img[x] = h;
            self.inv[h] = x;
            total += self.count(depth + 1);
            self.img[x] = UNMAPPED;
            self.inv[h] = UNMAPPED;
        }
        total
    }

    /// Whether mapping `x -> h` keeps every image edge present and compatible.
    fn fits(&self, x: usize, h: usize) -> bool {
        for y in self.pattern.neighbors(x) {
            let hy = self.img[y];
            if hy != UNMAPPED && !self.g.has_edge(h, hy) {
                return false;
            }
        }
        for y in self.pattern.neighbors(x) {
            let hy = self.img[y];
            if hy == UNMAPPED {
                continue;
            }
            let e = self.g.edge_id(h, hy).expect("checked above");
            // a partner h-w at h is in the image when the preimage of w is adjacent to x
            for &w in self.sys.conflicts_at(e, h) {
                let z = self.inv[w];
                if z != UNMAPPED && self.pattern.has_edge(x, z) {
                    return false;
                }
            }
            for &w in self.sys.conflicts_at(e, hy) {
                let z = self.inv[w];
                if z != UNMAPPED && self.pattern.has_edge(y, z) {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_space_barrier, BarrierSpec};
    use crate::graph::{power_edges, BaseSequence};

    fn p24() -> Graph {
        let base = BaseSequence::path(vec![0, 1, 2, 3]).unwrap();
        let e: Vec<_> = power_edges(&base, 2).unwrap().into_iter().collect();
        Graph::new(4, &e).unwrap()
    }

    #[test]
    fn single_edge_counts_twice_per_edge() {
        let g = crate::generators::gnp(9, 0.5, 3).unwrap();
        let sys = crate::incompat::gen_random_system(&g, 3, 3);
        let k2 = Graph::complete(2);
        assert_eq!(
            count_compatible_copies(&g, &sys, &k2, None).unwrap(),
            2 * g.edge_count() as u64
        );
    }

    #[test]
    fn square_path_in_k6() {
        let g = Graph::complete(6);
        let sys = IncompatibilitySystem::empty(&g);
        assert_eq!(count_compatible_copies(&g, &sys, &p24(), None).unwrap(), 360);
    }

    #[test]
    fn barrier_has_no_triangle_with_two_vertices_in_first_part() {
        let b = build_space_barrier(&BarrierSpec::standard(2, 12).unwrap()).unwrap();
        let k3 = Graph::complete(3);
        let part = |i: usize| {
            let mut s = FixedBitSet::with_capacity(12);
            for v in 0..12 {
                if b.part_of[v] == i {
                    s.insert(v);
                }
            }
            s
        };
        for j in 1..3 {
            let cons = [part(0), part(0), part(j)];
            assert_eq!(count_compatible_copies(&b.graph, &b.system, &k3, Some(&cons)).unwrap(), 0);
        }
        // without the incompatibilities those triangles exist
        let plain = IncompatibilitySystem::empty(&b.graph);
        let cons = [part(0), part(0), part(1)];
        assert!(count_compatible_copies(&b.graph, &plain, &k3, Some(&cons)).unwrap() > 0);
    }

    #[test]
    fn pattern_guard() {
        let g = Graph::complete(10);
        let sys = IncompatibilitySystem::empty(&g);
        let big = Graph::new(9, &[]).unwrap();
        assert_eq!(
            count_compatible_copies(&g, &sys, &big, None).unwrap_err(),
            Error::PatternTooLarge { size: 9, limit: 8 }
        );
        // 10 * 9 * ... * 2 injective maps of 9 isolated vertices
        assert_eq!(
            count_compatible_copies_with_limit(&g, &sys, &big, None, 9).unwrap(),
            (2..=10).product::<u64>()
        );
    }

    #[test]
    fn agrees_with_brute_force_on_random_systems() {
        // triangles counted by direct check of all ordered triples
        for seed in 0..5 {
            let g = crate::generators::gnp(8, 0.7, seed).unwrap();
            let sys = crate::incompat::gen_random_system(&g, 2, seed);
            let mut brute = 0;
            for a in 0..8 {
                for b in 0..8 {
                    for c in 0..8 {
                        if a != b && b != c && a != c && sys.is_compatible_clique(&g, &[a, b, c]) {
                            brute += 1;
                        }
                    }
                }
            }
            let k3 = Graph::complete(3);
            assert_eq!(count_compatible_copies(&g, &sys, &k3, None).unwrap(), brute);
        }
    }
}
