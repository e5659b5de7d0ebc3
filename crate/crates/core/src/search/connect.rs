use fixedbitset::FixedBitSet;

use super::{check_instance, check_vertices, Budget, KTuple, Meter, PowerBuilder, SolveOutcome, Status, Witness};
use crate::error::{Error, Result};
use crate::graph::{BaseSequence, Graph};
use crate::incompat::IncompatibilitySystem;

/// Outcome of a connection search: the interior vertices when SAT.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectOutcome {
    pub status: Status,
    pub interior: Option<Vec<usize>>,
    pub nodes_expanded: u64,
}

/// Shortest compatible power path `u_1 ... u_k Q v_k ... v_1` whose ends are the
/// reversed tuples of `e1 = (u_1..u_k)` and `e2 = (v_1..v_k)`, with the interior
/// `Q` of at most `max_interior` vertices avoiding `forbidden`.
///
/// Interior lengths are tried in increasing order, so a SAT witness is shortest.
pub fn connect_ends(
    g: &Graph,
    sys: &IncompatibilitySystem,
    e1: &KTuple,
    e2: &KTuple,
    forbidden: &[usize],
    max_interior: usize,
    budget: Budget,
) -> Result<SolveOutcome> {
    check_instance(g, sys)?;
    check_vertices(g, e1.vertices())?;
    check_vertices(g, e2.vertices())?;
    check_vertices(g, forbidden)?;
    if e1.k() != e2.k() {
        return Err(Error::BadParams("ends must have the same length".into()));
    }
    if e1.vertices().iter().any(|v| e2.vertices().contains(v)) {
        return Err(Error::BadParams("ends must be disjoint".into()));
    }
    if forbidden
        .iter()
        .any(|v| e1.vertices().contains(v) || e2.vertices().contains(v))
    {
        return Err(Error::BadParams("forbidden set meets an end".into()));
    }
    let mut allowed = FixedBitSet::with_capacity(g.n());
    allowed.insert_range(..);
    for &v in forbidden {
        allowed.set(v, false);
    }
    let suffix = e2.reversed().into_vertices();
    let out = connect_variants(
        g,
        sys,
        e1.k(),
        &[e1.vertices().to_vec()],
        std::slice::from_ref(&suffix),
        &allowed,
        max_interior,
        budget,
    )?;
    Ok(match (out.status, out.interior) {
        (Status::Sat, Some(q)) => {
            let seq = [e1.vertices().to_vec(), q, suffix].concat();
            let base = BaseSequence::path(seq).expect("disjoint parts");
            SolveOutcome::sat(Witness::Sequence(base), out.nodes_expanded)
        }
        (Status::Timeout, _) => SolveOutcome::timeout(out.nodes_expanded),
        _ => SolveOutcome::unsat(out.nodes_expanded),
    })
}

/// Finds a shortest interior `Q` inside `allowed` such that `p Q s` is a compatible
/// power path for every prefix variant `p` and every suffix variant `s`.
///
/// Variants let one connection serve several readings of its neighbourhood at
/// once, for instance an absorber with and without its absorbed vertex. Vertices of
/// any variant are never used in `Q`.
#[allow(clippy::too_many_arguments)]
pub fn connect_variants(
    g: &Graph,
    sys: &IncompatibilitySystem,
    k: usize,
    prefixes: &[Vec<usize>],
    suffixes: &[Vec<usize>],
    allowed: &FixedBitSet,
    max_interior: usize,
    budget: Budget,
) -> Result<ConnectOutcome> {
    if k == 0 {
        return Err(Error::BadParams("k must be at least 1".into()));
    }
    if prefixes.is_empty() || suffixes.is_empty() {
        return Err(Error::BadParams("need at least one prefix and one suffix".into()));
    }
    let mut pool = allowed.clone();
    pool.grow(g.n());
    for v in prefixes.iter().chain(suffixes).flatten() {
        check_vertices(g, &[*v])?;
        pool.set(*v, false);
    }
    let mut builders = Vec::with_capacity(prefixes.len());
    for p in prefixes {
        match PowerBuilder::path_from(g, sys, k, p) {
            Some(b) => builders.push(b),
            None => {
                return Ok(ConnectOutcome {
                    status: Status::Unsat,
                    interior: None,
                    nodes_expanded: 0,
                })
            }
        }
    }
    if budget.is_zero() {
        return Ok(ConnectOutcome {
            status: Status::Timeout,
            interior: None,
            nodes_expanded: 0,
        });
    }
    let mut meter = Meter::standalone(budget);
    let mut search = Search {
        g,
        k,
        suffixes,
        pool: &pool,
        builders,
        interior: Vec::new(),
    };
    let mut status = Status::Unsat;
    for len in 0..=max_interior {
        match search.extend(len, &mut meter) {
            Some(true) => {
                status = Status::Sat;
                break;
            }
            Some(false) => {}
            None => {
                status = Status::Timeout;
                break;
            }
        }
    }
    meter.finish();
    Ok(ConnectOutcome {
        status,
        interior: (status == Status::Sat).then(|| search.interior.clone()),
        nodes_expanded: meter.shared().total(),
    })
}

struct Search<'s, 'a> {
    g: &'a Graph,
    k: usize,
    suffixes: &'s [Vec<usize>],
    pool: &'s FixedBitSet,
    builders: Vec<PowerBuilder<'a>>,
    interior: Vec<usize>,
}

impl Search<'_, '_> {
    fn extend(&mut self, left: usize, meter: &mut Meter) -> Option<bool> {
        if left == 0 {
            if !meter.tick() {
                return None;
            }
            return Some(self.suffixes_fit());
        }
        let g = self.g;
        let candidates: Vec<usize> = match self.builders[0].last() {
            Some(last) => g
                .neighbors(last)
                .filter(|&x| self.pool.contains(x) && !self.interior.contains(&x))
                .collect(),
            None => self
                .pool
                .ones()
                .filter(|x| !self.interior.contains(x))
                .collect(),
        };
        for x in candidates {
            if !meter.tick() {
                return None;
            }
            // x ends up `left - 1 + 1 + j` positions before suffix vertex j
            let reach_ok = self.suffixes.iter().all(|s| {
                s.iter()
                    .enumerate()
                    .take_while(|(j, _)| left + j <= self.k)
                    .all(|(_, &y)| g.has_edge(x, y))
            });
            if !reach_ok || !self.builders.iter().all(|b| b.can_push(x)) {
                continue;
            }
            for b in &mut self.builders {
                b.push_unchecked(x);
            }
            self.interior.push(x);
            match self.extend(left - 1, meter) {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {}
            }
            self.interior.pop();
            for b in &mut self.builders {
                b.pop();
            }
        }
        Some(false)
    }

    fn suffixes_fit(&mut self) -> bool {
        for b in &mut self.builders {
            for s in self.suffixes {
                if !b.try_extend(s) {
                    return false;
                }
                b.truncate(b.len() - s.len());
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_space_barrier, BarrierSpec};
    use crate::search::validate::validate_power;

    fn t(v: &[usize]) -> KTuple {
        KTuple::new(v.to_vec()).unwrap()
    }

    #[test]
    fn complete_graph_connects_directly() {
        let g = Graph::complete(8);
        let sys = IncompatibilitySystem::empty(&g);
        let out =
            connect_ends(&g, &sys, &t(&[0, 1]), &t(&[2, 3]), &[], 4, Budget::unlimited()).unwrap();
        assert_eq!(out.status, Status::Sat);
        assert_eq!(out.sequence().unwrap().vertices(), &[0, 1, 3, 2]);
    }

    #[test]
    fn existing_power_path_is_identity() {
        // square of the path 4-6-1-3 and nothing else
        let base = BaseSequence::path(vec![4, 6, 1, 3]).unwrap();
        let edges: Vec<_> = crate::graph::power_edges(&base, 2).unwrap().into_iter().collect();
        let g = Graph::new(7, &edges).unwrap();
        let sys = IncompatibilitySystem::empty(&g);
        let out =
            connect_ends(&g, &sys, &t(&[4, 6]), &t(&[3, 1]), &[], 3, Budget::unlimited()).unwrap();
        assert_eq!(out.sequence().unwrap().vertices(), &[4, 6, 1, 3]);
    }

    #[test]
    fn interior_is_shortest_and_avoids_forbidden() {
        // square of the path 0..8; ends (0,1) and (7,6) need the 4 middle vertices
        let base = BaseSequence::path((0..8).collect()).unwrap();
        let edges: Vec<_> = crate::graph::power_edges(&base, 2).unwrap().into_iter().collect();
        let g = Graph::new(8, &edges).unwrap();
        let sys = IncompatibilitySystem::empty(&g);
        let out =
            connect_ends(&g, &sys, &t(&[0, 1]), &t(&[7, 6]), &[], 10, Budget::unlimited()).unwrap();
        let seq = out.sequence().unwrap();
        assert_eq!(seq.vertices(), &[0, 1, 2, 3, 4, 5, 6, 7]);
        validate_power(&g, &sys, seq, 2).unwrap();
        let short =
            connect_ends(&g, &sys, &t(&[0, 1]), &t(&[7, 6]), &[], 3, Budget::unlimited()).unwrap();
        assert_eq!(short.status, Status::Unsat);
        let blocked =
            connect_ends(&g, &sys, &t(&[0, 1]), &t(&[7, 6]), &[4], 10, Budget::unlimited()).unwrap();
        assert_eq!(blocked.status, Status::Unsat);
    }

    #[test]
    fn barrier_inside_ends_never_connect() {
        let b = build_space_barrier(&BarrierSpec::standard(2, 12).unwrap()).unwrap();
        // V_1 = 0..5 carries the inside path 0-1-2-3-4
        for lmax in [0, 2, 5] {
            let out = connect_ends(
                &b.graph,
                &b.system,
                &t(&[0, 1]),
                &t(&[3, 2]),
                &[],
                lmax,
                Budget::unlimited(),
            )
            .unwrap();
            assert_eq!(out.status, Status::Unsat);
        }
    }

    #[test]
    fn bad_inputs() {
        let g = Graph::complete(6);
        let sys = IncompatibilitySystem::empty(&g);
        let b = Budget::unlimited();
        assert!(connect_ends(&g, &sys, &t(&[0, 1]), &t(&[1, 2]), &[], 2, b).is_err());
        assert!(connect_ends(&g, &sys, &t(&[0, 1]), &t(&[3, 2]), &[0], 2, b).is_err());
        assert!(connect_ends(&g, &sys, &t(&[0]), &t(&[3, 2]), &[], 2, b).is_err());
    }

    #[test]
    fn variants_all_have_to_fit() {
        // 1 and 3 are not adjacent, so 2 has to sit between them; inserting 5 before 1
        // makes the forbidden pair {15, 12} at vertex 1 appear
        let edges: Vec<_> = Graph::complete(6).edges().iter().copied().filter(|&e| e != (1, 3)).collect();
        let g = Graph::new(6, &edges).unwrap();
        let sys = IncompatibilitySystem::from_vertex_triples(&g, [(1, 5, 2)]).unwrap();
        let mut allowed = FixedBitSet::with_capacity(6);
        allowed.insert(2);
        let b = Budget::unlimited();
        let plain = connect_variants(&g, &sys, 1, &[vec![0, 1]], &[vec![3]], &allowed, 1, b).unwrap();
        assert_eq!(plain.status, Status::Sat);
        assert_eq!(plain.interior, Some(vec![2]));
        let both = connect_variants(&g, &sys, 1, &[vec![0, 1], vec![5, 1]], &[vec![3]], &allowed, 1, b).unwrap();
        assert_eq!(both.status, Status::Unsat);
    }
}
