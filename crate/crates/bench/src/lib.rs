//! Fixed instances shared by the benchmarks.

use ihs_core::generators::gnp;
use ihs_core::{build_space_barrier, gen_random_system, BarrierSpec, Graph, IncompatibilitySystem};

pub fn barrier(k: usize, n: usize) -> (Graph, IncompatibilitySystem) {
    let b = build_space_barrier(&BarrierSpec::standard(k, n).expect("valid barrier")).expect("builds");
    (b.graph, b.system)
}

pub fn complete(n: usize, bound: usize, seed: u64) -> (Graph, IncompatibilitySystem) {
    let g = Graph::complete(n);
    let sys = gen_random_system(&g, bound, seed);
    (g, sys)
}

pub fn dense(n: usize, p: f64, bound: usize, seed: u64) -> (Graph, IncompatibilitySystem) {
    let g = gnp(n, p, seed).expect("valid probability");
    let sys = gen_random_system(&g, bound, seed);
    (g, sys)
}
