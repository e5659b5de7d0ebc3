use fixedbitset::FixedBitSet;

use super::{check_instance, Budget, Meter, SolveOutcome, Witness};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::incompat::IncompatibilitySystem;

/// Exact search for a partition of `V` into compatible `r`-cliques.
///
/// Cliques of a factor are vertex-disjoint, so compatibility is local to each
/// clique. The search repeatedly covers the lowest uncovered vertex with a
/// compatible clique whose other members are uncovered and larger.
pub fn solve_clique_factor(
    g: &Graph,
    sys: &IncompatibilitySystem,
    r: usize,
    budget: Budget,
) -> Result<SolveOutcome> {
    check_instance(g, sys)?;
    let n = g.n();
    if r == 0 {
        return Err(Error::BadParams("clique size must be at least 1".into()));
    }
    if !n.is_multiple_of(r) {
        return Err(Error::BadDivisibility { n, by: r });
    }
    if budget.is_zero() {
        return Ok(SolveOutcome::timeout(0));
    }
    let mut meter = Meter::standalone(budget);

    // rooted[v]: compatible r-cliques whose minimum vertex is v
    let mut rooted: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n];
    for (v, bucket) in rooted.iter_mut().enumerate() {
        let mut clique = vec![v];
        let higher: Vec<usize> = g.neighbors(v).filter(|&u| u > v).collect();
        collect_cliques(g, sys, r, &higher, 0, &mut clique, bucket);
    }

    let mut covered = FixedBitSet::with_capacity(n);
    let mut chosen = Vec::with_capacity(n / r.max(1));
    let result = cover(&rooted, &mut covered, &mut chosen, &mut meter);
    meter.finish();
    let nodes = meter.shared().total();
    Ok(match result {
        Some(true) => {
            let blocks = chosen.iter().map(|&(v, i)| rooted[v][i].clone()).collect();
            SolveOutcome::sat(Witness::Factor(blocks), nodes)
        }
        Some(false) => SolveOutcome::unsat(nodes),
        None => SolveOutcome::timeout(nodes),
    })
}

fn collect_cliques(
    g: &Graph,
    sys: &IncompatibilitySystem,
    r: usize,
    pool: &[usize],
    from: usize,
    clique: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if clique.len() == r {
        if sys.is_compatible_clique(g, clique) {
            out.push(clique.clone());
        }
        return;
    }
    for (idx, &u) in pool.iter().enumerate().skip(from) {
        if clique.iter().all(|&c| g.has_edge(c, u)) {
            clique.push(u);
            if sys.is_compatible_clique(g, clique) {
                collect_cliques(g, sys, r, pool, idx + 1, clique, out);
            }
            clique.pop();
        }
    }
}

fn cover(
    rooted: &[Vec<Vec<usize>>],
    covered: &mut FixedBitSet,
    chosen: &mut Vec<(usize, usize)>,
    meter: &mut Meter,
) -> Option<bool> {
    let Some(v) = covered.zeroes().next() else {
        return Some(true);
    };
    for (i, clique) in rooted[v].iter().enumerate() {
        if clique.iter().any(|&u| covered.contains(u)) {
            continue;
        }
        if !meter.tick() {
            return None;
        }
        for &u in clique {
            covered.insert(u);
        }
        chosen.push((v, i));
        match cover(rooted, covered, chosen, meter) {
            Some(true) => return Some(true),
            None => return None,
            Some(false) => {}
        }
        chosen.pop();
        for &u in clique {
            covered.set(u, false);
        }
    }
    Some(false)
}
