use crate::graph::Graph;
use crate::incompat::IncompatibilitySystem;
use crate::search::{KTuple, PowerBuilder, PowerPathWitness};

/// Keeps the mates `f` of the back end of `p` that are good for `p`.
///
/// `p` has base `a_1 .. a_k u_1 .. u_k`, where the first block is kept reserved
/// and `(u_1 .. u_k)` is the end being extended. A mate is good when
/// `a_1 .. a_k u_1 .. u_k f_1 .. f_k` is a compatible power path and, if an
/// insertion vertex `u` is given, so is `a_1 .. a_k u u_1 .. u_k f_1 .. f_k`.
/// A mate meeting `a_1 .. a_k` or `u` is never good, so over an empty system the
/// filter keeps exactly the mates avoiding those vertices.
pub fn filter_good_mates(
    g: &Graph,
    sys: &IncompatibilitySystem,
    p: &PowerPathWitness,
    u: Option<usize>,
    mates: &[KTuple],
) -> Vec<KTuple> {
    let k = p.k;
    let vs = p.vertices();
    let split = k.min(vs.len());
    let plain = PowerBuilder::path_from(g, sys, k, vs);
    let inserted = u.map(|u| {
        let mut seq = vs[..split].to_vec();
        seq.push(u);
        seq.extend_from_slice(&vs[split..]);
        PowerBuilder::path_from(g, sys, k, &seq)
    });
    let Some(mut plain) = plain else {
        return Vec::new();
    };
    let mut inserted = match inserted {
        None => None,
        Some(None) => return Vec::new(),
        Some(Some(b)) => Some(b),
    };
    mates
        .iter()
        .filter(|f| {
            let ok = plain.try_extend(f.vertices());
            if ok {
                plain.truncate(vs.len());
            }
            ok && inserted.as_mut().is_none_or(|b| {
                let len = b.len();
                let ok = b.try_extend(f.vertices());
                if ok {
                    b.truncate(len);
                }
                ok
            })
        })
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::enumerate_mates;

    #[test]
    fn empty_system_is_identity() {
        let g = Graph::complete(9);
        let sys = IncompatibilitySystem::empty(&g);
        let p = PowerPathWitness::checked(&g, &sys, vec![0, 1, 2, 3], 2).unwrap();
        let end = p.back_end().unwrap();
        let mates = enumerate_mates(&g, &sys, &end, None).unwrap();
        let disjoint: Vec<KTuple> = mates
            .iter()
            .filter(|f| f.vertices().iter().all(|v| ![0, 1, 8].contains(v)))
            .cloned()
            .collect();
        assert_eq!(disjoint.len(), 4 * 3);
        assert_eq!(filter_good_mates(&g, &sys, &p, Some(8), &mates), disjoint);
        assert_eq!(filter_good_mates(&g, &sys, &p, Some(8), &disjoint), disjoint);
    }

    #[test]
    fn all_mates_bad_for_k1() {
        // at u_1 = 1 the edge to a_1 = 0 conflicts with every edge 1f
        let g = Graph::complete(6);
        let triples: Vec<_> = (2..6).map(|f| (1, 0, f)).collect();
        let sys = IncompatibilitySystem::from_vertex_triples(&g, triples).unwrap();
        let p = PowerPathWitness::checked(&g, &sys, vec![0, 1], 1).unwrap();
        let mates = enumerate_mates(&g, &sys, &p.back_end().unwrap(), None).unwrap();
        assert_eq!(mates.len(), 5);
        assert!(filter_good_mates(&g, &sys, &p, None, &mates).is_empty());
    }

    #[test]
    fn insertion_vertex_filters_further() {
        let g = Graph::complete(7);
        // with u = 6 in front of u_1 = 1, the edge 1-6 conflicts with 1-4
        let sys = IncompatibilitySystem::from_vertex_triples(&g, [(1, 6, 4)]).unwrap();
        let p = PowerPathWitness::checked(&g, &sys, vec![0, 1], 1).unwrap();
        let mates = enumerate_mates(&g, &sys, &p.back_end().unwrap(), None).unwrap();
        let without = filter_good_mates(&g, &sys, &p, None, &mates);
        let with = filter_good_mates(&g, &sys, &p, Some(6), &mates);
        assert!(without.iter().any(|f| f.vertices() == [4]));
        assert!(!with.iter().any(|f| f.vertices() == [4]));
        assert_eq!(without.len(), with.len() + 2);
    }
}
