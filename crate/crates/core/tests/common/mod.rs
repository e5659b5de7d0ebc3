#![allow(dead_code)]

use std::collections::BTreeSet;

use ihs_core::{gen_random_system, generators::gnp, Graph, IncompatibilitySystem};

pub fn random_instance(n: usize, p: f64, bound: usize, seed: u64) -> (Graph, IncompatibilitySystem) {
    let g = gnp(n, p, seed).unwrap();
    let sys = gen_random_system(&g, bound, seed.wrapping_mul(31).wrapping_add(7));
    (g, sys)
}

fn key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

/// Edges of the `k`-th power of `seq`, read off positions directly.
pub fn naive_power(seq: &[usize], k: usize, cyclic: bool) -> BTreeSet<(usize, usize)> {
    let s = seq.len();
    let mut out = BTreeSet::new();
    for i in 0..s {
        for j in i + 1..s {
            let d = if cyclic { (j - i).min(s - (j - i)) } else { j - i };
            if d <= k {
                out.insert(key(seq[i], seq[j]));
            }
        }
    }
    out
}

/// Checks presence and compatibility against the raw pair list only.
pub fn naive_ok(g: &Graph, sys: &IncompatibilitySystem, edges: &BTreeSet<(usize, usize)>) -> bool {
    if !edges.iter().all(|&(u, v)| g.has_edge(u, v)) {
        return false;
    }
    sys.pairs().all(|(_, a, b)| {
        let ea = g.endpoints(a);
        let eb = g.endpoints(b);
        !(edges.contains(&key(ea.0, ea.1)) && edges.contains(&key(eb.0, eb.1)))
    })
}

/// Whether some cyclic order of all vertices has a compatible `k`-th power,
/// by trying every permutation that starts at vertex 0.
pub fn oracle_hamilton(g: &Graph, sys: &IncompatibilitySystem, k: usize) -> bool {
    let n = g.n();
    let mut rest: Vec<usize> = (1..n).collect();
    let mut found = false;
    permute(&mut rest, 0, &mut |perm| {
        let mut seq = vec![0];
        seq.extend_from_slice(perm);
        if naive_ok(g, sys, &naive_power(&seq, k, true)) {
            found = true;
        }
        found
    });
    found
}

fn permute(xs: &mut Vec<usize>, i: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if i == xs.len() {
        return visit(xs);
    }
    for j in i..xs.len() {
        xs.swap(i, j);
        if permute(xs, i + 1, visit) {
            xs.swap(i, j);
            return true;
        }
        xs.swap(i, j);
    }
    false
}
