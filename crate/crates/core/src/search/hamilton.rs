use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use super::{check_instance, Budget, Meter, PowerBuilder, SharedMeter, SolveOutcome, Witness};
use crate::error::{Error, Result};
use crate::graph::{BaseSequence, Graph};
use crate::incompat::IncompatibilitySystem;

/// Exact search for a compatible k-th power of a Hamilton cycle.
///
/// The cycle starts at vertex 0 and is oriented so that its second vertex has a
/// smaller id than its last one; every other cycle is a rotation or reversal of
/// one such sequence, so exhausting them is a proof of UNSAT.
pub fn solve_power_hamilton(
    g: &Graph,
    sys: &IncompatibilitySystem,
    k: usize,
    budget: Budget,
) -> Result<SolveOutcome> {
    solve_power_hamilton_par(g, sys, k, budget, 1)
}

/// As [`solve_power_hamilton`], splitting the choice of the second vertex across
/// `threads` workers. The status does not depend on the worker count.
pub fn solve_power_hamilton_par(
    g: &Graph,
    sys: &IncompatibilitySystem,
    k: usize,
    budget: Budget,
    threads: usize,
) -> Result<SolveOutcome> {
    check_instance(g, sys)?;
    let n = g.n();
    if k == 0 {
        return Err(Error::BadParams("k must be at least 1".into()));
    }
    if n < k + 1 {
        return Err(Error::BadParams(format!(
            "a k-th power of a Hamilton cycle needs n >= k+1 (n = {n}, k = {k})"
        )));
    }
    let shared = SharedMeter::new(budget);
    if budget.is_zero() {
        return Ok(SolveOutcome::timeout(0));
    }

    let mut root = PowerBuilder::cycle(g, sys, k, n);
    root.push_unchecked(0);
    let branches: Vec<usize> = g.neighbors(0).collect();
    let next = AtomicUsize::new(0);
    let found: Mutex<Option<Vec<usize>>> = Mutex::new(None);

    let worker = |shared: Arc<SharedMeter>| {
        let mut meter = Meter::new(shared);
        let mut b = root.clone();
        loop {
            let idx = next.fetch_add(1, Ordering::Relaxed);
            let Some(&second) = branches.get(idx) else {
                break;
            };
            if !meter.tick() {
                break;
            }
            if !b.try_push(second) {
                continue;
            }
            match extend(&mut b, n, &mut meter) {
                Some(true) => {
                    let mut slot = found.lock().expect("poisoned");
                    if slot.is_none() {
                        *slot = Some(b.seq().to_vec());
                    }
                    meter.shared().request_stop();
                    break;
                }
                Some(false) => {
                    b.pop();
                }
                None => break,
            }
        }
        meter.finish();
    };

    let threads = threads.max(1).min(branches.len().max(1));
    if threads == 1 {
        worker(shared.clone());
    } else {
        std::thread::scope(|scope| {
            for _ in 0..threads {
                let s = shared.clone();
                scope.spawn(|| worker(s));
            }
        });
    }

    let nodes = shared.total();
    if let Some(seq) = found.into_inner().expect("poisoned") {
        let cycle = BaseSequence::cycle(seq).expect("search keeps vertices distinct");
        return Ok(SolveOutcome::sat(Witness::Sequence(cycle), nodes));
    }
    if shared.budget_exhausted() {
        Ok(SolveOutcome::timeout(nodes))
    } else {
        Ok(SolveOutcome::unsat(nodes))
    }
}

/// `Some(true)`: builder holds a full cycle. `Some(false)`: subtree exhausted. `None`: stopped.
fn extend(b: &mut PowerBuilder, n: usize, meter: &mut Meter) -> Option<bool> {
    let i = b.len();
    if i == n {
        return Some(true);
    }
    let second = b.seq()[1];
    let last = b.last().expect("nonempty");
    let g = b.graph();
    for x in g.neighbors(last) {
        if b.contains(x) || (i == n - 1 && n > 2 && x < second) {
            continue;
        }
        if !meter.tick() {
            return None;
        }
        if b.try_push(x) {
            match extend(b, n, meter) {
                Some(true) => return Some(true),
                Some(false) => {
                    b.pop();
                }
                None => return None,
            }
        }
    }
    Some(false)
}
