use fixedbitset::FixedBitSet;

use super::{check_instance, check_vertices, KTuple, PowerBuilder};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::incompat::IncompatibilitySystem;

/// All `k`-tuples `f` disjoint from `e` such that `e` followed by `f` is the base
/// of a compatible `P^k_{2k}`, in lexicographic order, up to `limit`.
///
/// Fails with [`Error::NotACompatibleClique`] when `e` itself does not induce a
/// compatible `K_k`; an `Ok` empty list means `e` is valid but has no mate.
pub fn enumerate_mates(
    g: &Graph,
    sys: &IncompatibilitySystem,
    e: &KTuple,
    limit: Option<usize>,
) -> Result<Vec<KTuple>> {
    let mut out = Vec::new();
    let cap = limit.map(|l| l as u64);
    walk_mates(g, sys, e.vertices(), None, cap, &mut |f| {
        out.push(KTuple(f.to_vec()));
    })?;
    Ok(out)
}

/// Number of mates of `e`, optionally restricted to mates inside `within` and
/// stopping early at `cap`.
pub fn count_mates(
    g: &Graph,
    sys: &IncompatibilitySystem,
    e: &[usize],
    within: Option<&FixedBitSet>,
    cap: Option<u64>,
) -> Result<u64> {
    walk_mates(g, sys, e, within, cap, &mut |_| {})
}

fn walk_mates(
    g: &Graph,
    sys: &IncompatibilitySystem,
    e: &[usize],
    within: Option<&FixedBitSet>,
    cap: Option<u64>,
    visit: &mut dyn FnMut(&[usize]),
) -> Result<u64> {
    check_instance(g, sys)?;
    check_vertices(g, e)?;
    let tuple = KTuple::new(e.to_vec())?;
    let k = tuple.k();
    let Some(mut b) = PowerBuilder::path_from(g, sys, k, e) else {
        return Err(Error::NotACompatibleClique(e.to_vec()));
    };
    let mut count = 0;
    if cap == Some(0) {
        return Ok(0);
    }
    extend(&mut b, 2 * k, within, cap, &mut count, visit);
    Ok(count)
}

fn extend(
    b: &mut PowerBuilder,
    target: usize,
    within: Option<&FixedBitSet>,
    cap: Option<u64>,
    count: &mut u64,
    visit: &mut dyn FnMut(&[usize]),
) -> bool {
    if b.len() == target {
        visit(&b.seq()[target / 2..]);
        *count += 1;
        return cap.is_some_and(|c| *count >= c);
    }
    let g = b.graph();
    let last = b.last().expect("tuple is nonempty");
    for x in g.neighbors(last) {
        if within.is_some_and(|w| !w.contains(x)) {
            continue;
        }
        if b.try_push(x) {
            let done = extend(b, target, within, cap, count, visit);
            b.pop();
            if done {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_space_barrier, BarrierSpec};
    use crate::graph::BaseSequence;
    use crate::search::validate::validate_power;

    fn t(v: &[usize]) -> KTuple {
        KTuple::new(v.to_vec()).unwrap()
    }

    #[test]
    fn k4_pair_has_two_mates() {
        let g = Graph::complete(4);
        let sys = IncompatibilitySystem::empty(&g);
        let mates = enumerate_mates(&g, &sys, &t(&[0, 1]), None).unwrap();
        assert_eq!(mates, vec![t(&[2, 3]), t(&[3, 2])]);
    }

    #[test]
    fn complete_graph_formula_k2() {
        for n in 4..=9 {
            let g = Graph::complete(n);
            let sys = IncompatibilitySystem::empty(&g);
            let m = count_mates(&g, &sys, &[0, 1], None, None).unwrap();
            assert_eq!(m as usize, (n - 2) * (n - 3));
        }
    }

    #[test]
    fn non_edge_is_not_a_clique_and_not_zero() {
        // C_5 is triangle-free
        let g = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
        let sys = IncompatibilitySystem::empty(&g);
        assert_eq!(
            enumerate_mates(&g, &sys, &t(&[0, 2]), None).unwrap_err(),
            Error::NotACompatibleClique(vec![0, 2])
        );
        // an edge of C_5 is a valid K_2 with no mates
        assert_eq!(enumerate_mates(&g, &sys, &t(&[0, 1]), None).unwrap(), vec![]);
    }

    #[test]
    fn barrier_inside_edge_has_no_mates() {
        let b = build_space_barrier(&BarrierSpec::standard(2, 12).unwrap()).unwrap();
        for (u, w) in b.graph.edges().iter().copied() {
            if b.part_of[u] != 0 || b.part_of[w] != 0 {
                continue;
            }
            for e in [[u, w], [w, u]] {
                assert_eq!(count_mates(&b.graph, &b.system, &e, None, None).unwrap(), 0);
            }
        }
    }

    #[test]
    fn mates_revalidate_by_definition() {
        let g = crate::generators::gnp(9, 0.8, 2).unwrap();
        let sys = crate::incompat::gen_random_system(&g, 1, 2);
        let (a, c) = g.edges()[0];
        let Ok(mates) = enumerate_mates(&g, &sys, &t(&[a, c]), None) else {
            return;
        };
        for f in &mates {
            let seq = [vec![a, c], f.vertices().to_vec()].concat();
            validate_power(&g, &sys, &BaseSequence::path(seq).unwrap(), 2).unwrap();
        }
        let limited = enumerate_mates(&g, &sys, &t(&[a, c]), Some(1)).unwrap();
        assert!(limited.len() <= 1);
        assert_eq!(
            count_mates(&g, &sys, &[a, c], None, Some(3)).unwrap(),
            (mates.len() as u64).min(3)
        );
    }
}
