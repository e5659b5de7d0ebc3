use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, ReservoirProperty, Result};
use crate::graph::Graph;
use crate::incompat::IncompatibilitySystem;
use crate::search::{count_mates, find_absorber, AbsorberQuery, Budget};

const EPS: f64 = 1e-9;

/// A random vertex subset that passed the reservoir checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reservoir {
    pub vertices: Vec<usize>,
    pub p: f64,
    pub retries_used: usize,
}

impl Reservoir {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn as_set(&self, n: usize) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(n);
        s.extend(self.vertices.iter().copied());
        s
    }
}

/// Knobs for [`sample_reservoir_with`]. A1 and A2 are always checked exactly;
/// A3 and A4 on a random sample of vertices and tuples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReservoirConfig {
    pub p: f64,
    pub gamma: f64,
    pub k: usize,
    pub max_retries: usize,
    /// Vertices sampled for A3.
    pub a3_samples: usize,
    /// Tuples sampled for A4.
    pub a4_samples: usize,
    /// Mates each absorber end needs in `G` to count for A3.
    pub absorber_min_mates: u64,
    /// Only tuples with at least this many mates are held to A4.
    pub a4_min_mates: u64,
    /// Node budget of each absorber search.
    pub search_nodes: u64,
}

impl ReservoirConfig {
    pub fn new(p: f64, gamma: f64, k: usize) -> Self {
        ReservoirConfig {
            p,
            gamma,
            k,
            max_retries: 200,
            a3_samples: 4,
            a4_samples: 8,
            absorber_min_mates: 1,
            a4_min_mates: 1,
            search_nodes: 200_000,
        }
    }
}

/// [`sample_reservoir_with`] with default sampling sizes.
pub fn sample_reservoir(
    g: &Graph,
    sys: &IncompatibilitySystem,
    p: f64,
    gamma: f64,
    k: usize,
    seed: u64,
    max_retries: usize,
) -> Result<Reservoir> {
    let mut cfg = ReservoirConfig::new(p, gamma, k);
    cfg.max_retries = max_retries;
    sample_reservoir_with(g, sys, &cfg, seed)
}

/// Includes each vertex independently with probability `p` and resamples until
/// A1 to A4 hold, up to `max_retries` times.
pub fn sample_reservoir_with(
    g: &Graph,
    sys: &IncompatibilitySystem,
    cfg: &ReservoirConfig,
    seed: u64,
) -> Result<Reservoir> {
    let p = cfg.p;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::BadParams(format!("p must lie in [0, 1], got {p}")));
    }
    if cfg.k == 0 {
        return Err(Error::BadParams("k must be at least 1".into()));
    }
    if p == 0.0 {
        return Err(Error::ReservoirFailure {
            property: ReservoirProperty::A1,
            retries: 0,
        });
    }
    let n = g.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = ReservoirProperty::A1;
    for attempt in 0..=cfg.max_retries {
        let mut set = FixedBitSet::with_capacity(n);
        for v in 0..n {
            if rng.gen_bool(p) {
                set.insert(v);
            }
        }
        match check_reservoir(g, sys, &set, cfg, &mut rng) {
            Ok(()) => {
                return Ok(Reservoir {
                    vertices: set.ones().collect(),
                    p,
                    retries_used: attempt,
                })
            }
            Err(prop) => last = prop,
        }
    }
    Err(Error::ReservoirFailure {
        property: last,
        retries: cfg.max_retries,
    })
}

/// First violated property of `set`, checked in order A1, A2, A3, A4.
pub fn check_reservoir(
    g: &Graph,
    sys: &IncompatibilitySystem,
    set: &FixedBitSet,
    cfg: &ReservoirConfig,
    rng: &mut impl Rng,
) -> std::result::Result<(), ReservoirProperty> {
    if !a1_holds(g.n(), set.count_ones(..), cfg.p) {
        return Err(ReservoirProperty::A1);
    }
    if !a2_holds(g, set, cfg.k, cfg.gamma) {
        return Err(ReservoirProperty::A2);
    }
    if !a3_holds(g, sys, set, cfg, rng) {
        return Err(ReservoirProperty::A3);
    }
    if !a4_holds(g, sys, set, cfg, rng) {
        return Err(ReservoirProperty::A4);
    }
    Ok(())
}

/// `pn/2 <= |R| <= 3pn/2`, inclusive; an empty reservoir never passes.
pub fn a1_holds(n: usize, size: usize, p: f64) -> bool {
    let pn = p * n as f64;
    let s = size as f64;
    size > 0 && s + EPS >= pn / 2.0 && s <= 1.5 * pn + EPS
}

/// Every vertex has at least `(k/(k+1) + gamma/2)|R|` neighbours in `R`.
pub fn a2_holds(g: &Graph, set: &FixedBitSet, k: usize, gamma: f64) -> bool {
    let need = (k as f64 / (k + 1) as f64 + gamma / 2.0) * set.count_ones(..) as f64;
    (0..g.n()).all(|v| g.degree_into(v, set) as f64 + EPS >= need)
}

fn a3_holds(
    g: &Graph,
    sys: &IncompatibilitySystem,
    set: &FixedBitSet,
    cfg: &ReservoirConfig,
    rng: &mut impl Rng,
) -> bool {
    let n = g.n();
    let mut everything = FixedBitSet::with_capacity(n);
    everything.insert_range(..);
    let mut vs: Vec<usize> = (0..n).collect();
    vs.shuffle(rng);
    let factor = cfg.p.powi(2 * cfg.k as i32) / 2.0;
    vs.iter().take(cfg.a3_samples).all(|&v| {
        let in_g = disjoint_absorbers(g, sys, v, &everything, cfg, usize::MAX);
        let need = (factor * in_g as f64 - EPS).ceil().max(0.0) as usize;
        need == 0 || disjoint_absorbers(g, sys, v, set, cfg, need) >= need
    })
}

/// Greedy count of vertex-disjoint absorbers for `v` inside `within`, stopping at `cap`.
/// Greedy packing only bounds the maximum from below.
fn disjoint_absorbers(
    g: &Graph,
    sys: &IncompatibilitySystem,
    v: usize,
    within: &FixedBitSet,
    cfg: &ReservoirConfig,
    cap: usize,
) -> usize {
    let mut free = within.clone();
    free.set(v, false);
    let mut count = 0;
    while count < cap {
        let mut q = AbsorberQuery::new(v, cfg.k);
        q.allowed = Some(&free);
        q.min_mates = cfg.absorber_min_mates;
        q.budget = Budget::nodes(cfg.search_nodes);
        match find_absorber(g, sys, &q) {
            Ok(Some(a)) => {
                for &u in a.vertices() {
                    free.set(u, false);
                }
                count += 1;
            }
            _ => break,
        }
    }
    count
}

fn a4_holds(
    g: &Graph,
    sys: &IncompatibilitySystem,
    set: &FixedBitSet,
    cfg: &ReservoirConfig,
    rng: &mut impl Rng,
) -> bool {
    let n = g.n();
    let k = cfg.k;
    if n < 2 * k {
        return true;
    }
    let factor = cfg.p.powi(k as i32) / 2.0;
    let mut checked = 0;
    let mut tries = 0;
    while checked < cfg.a4_samples && tries < 50 * cfg.a4_samples.max(1) {
        tries += 1;
        let e: Vec<usize> = rand::seq::index::sample(rng, n, k).into_vec();
        let Ok(total) = count_mates(g, sys, &e, None, None) else {
            continue;
        };
        checked += 1;
        if total < cfg.a4_min_mates.max(1) {
            continue;
        }
        let need = (factor * total as f64 - EPS).ceil() as u64;
        let in_r = count_mates(g, sys, &e, Some(set), Some(need)).unwrap_or(0);
        if in_r < need {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_zero_fails_a1_immediately() {
        let g = Graph::complete(10);
        let sys = IncompatibilitySystem::empty(&g);
        assert_eq!(
            sample_reservoir(&g, &sys, 0.0, 0.1, 2, 1, 50).unwrap_err(),
            Error::ReservoirFailure {
                property: ReservoirProperty::A1,
                retries: 0
            }
        );
    }

    #[test]
    fn p_one_takes_everything() {
        let g = Graph::complete(10);
        let sys = IncompatibilitySystem::empty(&g);
        let r = sample_reservoir(&g, &sys, 1.0, 0.1, 2, 1, 0).unwrap();
        assert_eq!(r.vertices, (0..10).collect::<Vec<_>>());
        assert_eq!(r.retries_used, 0);
    }

    #[test]
    fn p_one_a2_is_the_host_degree_condition() {
        // C_6 squared has degree 4 = (2/3)6, so A2 needs gamma = 0
        let base = crate::graph::BaseSequence::cycle((0..6).collect()).unwrap();
        let e: Vec<_> = crate::graph::power_edges(&base, 2).unwrap().into_iter().collect();
        let g = Graph::new(6, &e).unwrap();
        let mut all = FixedBitSet::with_capacity(6);
        all.insert_range(..);
        // v itself is never its own neighbour, so d_R(v) = 4 against (2/3 + gamma/2) * 6
        assert!(a2_holds(&g, &all, 2, 0.0));
        assert!(!a2_holds(&g, &all, 2, 0.1));
    }

    #[test]
    fn a1_bounds_are_inclusive() {
        assert!(a1_holds(20, 5, 0.5));
        assert!(a1_holds(20, 15, 0.5));
        assert!(!a1_holds(20, 4, 0.5));
        assert!(!a1_holds(20, 16, 0.5));
        assert!(!a1_holds(20, 0, 0.0));
    }

    #[test]
    fn k30_fixture() {
        let g = Graph::complete(30);
        let sys = IncompatibilitySystem::empty(&g);
        let r = sample_reservoir(&g, &sys, 0.4, 0.1, 2, 2024, 20).unwrap();
        assert!(a1_holds(30, r.len(), 0.4));
        assert!(a2_holds(&g, &r.as_set(30), 2, 0.1));
        let again = sample_reservoir(&g, &sys, 0.4, 0.1, 2, 2024, 20).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn exhausted_retries_name_the_property() {
        // a perfect matching has degree 1, far below the A2 bound
        let g = Graph::new(8, &[(0, 1), (2, 3), (4, 5), (6, 7)]).unwrap();
        let sys = IncompatibilitySystem::empty(&g);
        match sample_reservoir(&g, &sys, 0.5, 0.1, 1, 3, 5).unwrap_err() {
            Error::ReservoirFailure { property, retries } => {
                assert!(matches!(property, ReservoirProperty::A1 | ReservoirProperty::A2));
                assert_eq!(retries, 5);
            }
            e => panic!("unexpected {e:?}"),
        }
        assert!(sample_reservoir(&g, &sys, 1.5, 0.1, 1, 3, 5).is_err());
    }
}
