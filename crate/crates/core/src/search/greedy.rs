use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{check_instance, PowerBuilder, PowerPathWitness};
use crate::error::{Error, Result};
use crate::graph::{BaseSequence, Graph};
use crate::incompat::IncompatibilitySystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GreedyOptions {
    /// Extra runs from random start vertices after the lowest-id start.
    pub restarts: usize,
    /// Reject an extension while its new last-`k` set has fewer than this many
    /// compatible `(k+1)`-clique extensions among unused allowed vertices. A plain
    /// pass without the filter always runs afterwards, so the result stays maximal.
    pub hyperedge_min: Option<usize>,
}

impl Default for GreedyOptions {
    fn default() -> Self {
        GreedyOptions {
            restarts: 4,
            hyperedge_min: None,
        }
    }
}

/// Longest of several greedy runs inside `allowed`. Each run grows a compatible
/// power path by the lowest-id feasible vertex at the back, then at the front,
/// until neither end extends.
pub fn greedy_longest_power_path(
    g: &Graph,
    sys: &IncompatibilitySystem,
    allowed: &FixedBitSet,
    k: usize,
    seed: u64,
    opts: &GreedyOptions,
) -> Result<PowerPathWitness> {
    check_instance(g, sys)?;
    if k == 0 {
        return Err(Error::BadParams("k must be at least 1".into()));
    }
    let pool: Vec<usize> = allowed.ones().filter(|&v| v < g.n()).collect();
    if pool.is_empty() {
        return Err(Error::BadParams("allowed vertex set is empty".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<Vec<usize>> = None;
    for run in 0..=opts.restarts {
        let start = if run == 0 {
            pool[0]
        } else {
            pool[rng.gen_range(0..pool.len())]
        };
        let seq = grow(g, sys, allowed, k, start, opts.hyperedge_min);
        if best.as_ref().is_none_or(|b| seq.len() > b.len()) {
            best = Some(seq);
        }
        if best.as_ref().is_some_and(|b| b.len() == pool.len()) {
            break;
        }
    }
    let seq = best.expect("at least one run");
    assert!({
        let (front, back) = extension_candidates(g, sys, &seq, k, allowed);
        front.is_empty() && back.is_empty()
    });
    Ok(PowerPathWitness {
        base: BaseSequence::path(seq).expect("distinct"),
        k,
    })
}

fn grow(
    g: &Graph,
    sys: &IncompatibilitySystem,
    allowed: &FixedBitSet,
    k: usize,
    start: usize,
    hyperedge_min: Option<usize>,
) -> Vec<usize> {
    let mut b = PowerBuilder::path(g, sys, k);
    b.push_unchecked(start);
    let filters: &[Option<usize>] = match hyperedge_min {
        Some(t) if t > 0 => &[Some(t), None],
        _ => &[None],
    };
    let mut at_front = false;
    for &filter in filters {
        let mut stuck_sides = 0;
        while stuck_sides < 2 {
            if extend_back(&mut b, allowed, filter) {
                stuck_sides = 0;
                continue;
            }
            stuck_sides += 1;
            b.reverse();
            at_front = !at_front;
        }
    }
    if at_front {
        b.reverse();
    }
    b.seq().to_vec()
}

fn extend_back(b: &mut PowerBuilder, allowed: &FixedBitSet, filter: Option<usize>) -> bool {
    let g = b.graph();
    let last = b.last().expect("nonempty");
    for x in g.neighbors(last) {
        if !allowed.contains(x) || !b.can_push(x) {
            continue;
        }
        if let Some(t) = filter {
            b.push_unchecked(x);
            let ok = clique_extensions(b, allowed, t) >= t;
            b.pop();
            if !ok {
                continue;
            }
        }
        b.push_unchecked(x);
        return true;
    }
    false
}

/// Unused allowed vertices that would extend the path by one, capped at `cap`.
/// Pushing such a vertex makes it a compatible `(k+1)`-clique with the last `k`.
fn clique_extensions(b: &PowerBuilder, allowed: &FixedBitSet, cap: usize) -> usize {
    let g = b.graph();
    let last = b.last().expect("nonempty");
    let mut count = 0;
    for y in g.neighbors(last) {
        if allowed.contains(y) && b.can_push(y) {
            count += 1;
            if count >= cap {
                break;
            }
        }
    }
    count
}

/// Single vertices of `allowed` that extend `path` at its front and at its back.
/// Empty lists certify that the path is maximal by extension.
pub fn extension_candidates(
    g: &Graph,
    sys: &IncompatibilitySystem,
    path: &[usize],
    k: usize,
    allowed: &FixedBitSet,
) -> (Vec<usize>, Vec<usize>) {
    let Some(mut b) = PowerBuilder::path_from(g, sys, k, path) else {
        return (Vec::new(), Vec::new());
    };
    let scan = |b: &PowerBuilder| -> Vec<usize> {
        (0..g.n())
            .filter(|&x| allowed.contains(x) && b.can_push(x))
            .collect()
    };
    let back = scan(&b);
    b.reverse();
    let front = scan(&b);
    (front, back)
}
