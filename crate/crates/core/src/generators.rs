//! Seeded random host graphs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Independent child seed number `stream` of `seed`, so one seed can drive
/// several generators without their streams lining up.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.gen()
}

/// Erdős–Rényi `G(n, p)`.
pub fn gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::BadParams(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(gnp_with(n, p, &mut rng))
}

fn gnp_with<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges).expect("generated edges are valid")
}

/// `G(n, p)` conditioned on minimum degree at least `min_degree`, by resampling.
///
/// Returns the graph and the number of rejected samples.
pub fn gnp_min_degree(
    n: usize,
    p: f64,
    min_degree: usize,
    seed: u64,
    max_tries: usize,
) -> Result<(Graph, usize)> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::BadParams(format!("edge probability {p} outside [0, 1]")));
    }
    if n > 0 && min_degree > n - 1 {
        return Err(Error::BadParams(format!(
            "minimum degree {min_degree} impossible on {n} vertices"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..max_tries.max(1) {
        let g = gnp_with(n, p, &mut rng);
        if g.min_degree() >= min_degree {
            return Ok((g, attempt));
        }
    }
    Err(Error::BadParams(format!(
        "no G({n}, {p}) sample with minimum degree {min_degree} in {max_tries} tries"
    )))
}
