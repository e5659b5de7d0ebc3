//! Exact search over compatible structures: Hamilton powers, clique factors,
//! connections between ends, mates, absorbers and small-pattern counts.
//!
//! Every SAT answer carries a witness that [`validate`] re-checks from scratch.

pub(crate) mod absorbers;
mod builder;
mod connect;
mod copies;
mod factor;
mod greedy;
mod hamilton;
mod mates;
pub mod validate;

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BaseSequence, Graph};
use crate::incompat::IncompatibilitySystem;

pub use absorbers::{enumerate_absorbers, find_absorber, is_absorber, AbsorberQuery};
pub(crate) use builder::PowerBuilder;
pub use connect::{connect_ends, connect_variants, ConnectOutcome};
pub use copies::{count_compatible_copies, count_compatible_copies_with_limit, DEFAULT_PATTERN_LIMIT};
pub use factor::solve_clique_factor;
pub use greedy::{extension_candidates, greedy_longest_power_path, GreedyOptions};
pub use hamilton::{solve_power_hamilton, solve_power_hamilton_par};
pub use mates::{count_mates, enumerate_mates};

/// Ordered tuple of distinct vertices: the end of a power path.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KTuple(Vec<usize>);

impl KTuple {
    pub fn new(vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidSequence("empty tuple".into()));
        }
        for (i, v) in vertices.iter().enumerate() {
            if vertices[..i].contains(v) {
                return Err(Error::InvalidSequence(format!("vertex {v} repeated in tuple")));
            }
        }
        Ok(KTuple(vertices))
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    /// `(u_k, ..., u_1)` for `(u_1, ..., u_k)`.
    pub fn reversed(&self) -> KTuple {
        KTuple(self.0.iter().rev().copied().collect())
    }

    pub fn into_vertices(self) -> Vec<usize> {
        self.0
    }
}

impl From<KTuple> for Vec<usize> {
    fn from(t: KTuple) -> Self {
        t.0
    }
}

/// A base path together with its power; valid witnesses have compatible power edges in `G`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PowerPathWitness {
    pub base: BaseSequence,
    pub k: usize,
}

impl PowerPathWitness {
    /// Wraps a base path after checking it with the independent validator.
    pub fn checked(
        g: &Graph,
        sys: &IncompatibilitySystem,
        vertices: Vec<usize>,
        k: usize,
    ) -> std::result::Result<Self, validate::CertificateError> {
        let base = BaseSequence::path(vertices).map_err(validate::CertificateError::Malformed)?;
        validate::validate_power(g, sys, &base, k)?;
        Ok(PowerPathWitness { base, k })
    }

    pub fn vertices(&self) -> &[usize] {
        self.base.vertices()
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    /// `(v_k, ..., v_1)`: the end at the start of the base, read outward.
    pub fn front_end(&self) -> Option<KTuple> {
        let vs = self.vertices();
        (vs.len() >= self.k).then(|| KTuple(vs[..self.k].iter().rev().copied().collect()))
    }

    /// `(v_{s-k+1}, ..., v_s)`: the end at the back of the base.
    pub fn back_end(&self) -> Option<KTuple> {
        let vs = self.vertices();
        (vs.len() >= self.k).then(|| KTuple(vs[vs.len() - self.k..].to_vec()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Sat,
    Unsat,
    Timeout,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Sat => "SAT",
            Status::Unsat => "UNSAT",
            Status::Timeout => "TIMEOUT",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Witness {
    Sequence(BaseSequence),
    Factor(Vec<Vec<usize>>),
}

/// Result of an exact search. A witness is present iff the status is SAT.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveOutcome {
    pub status: Status,
    pub witness: Option<Witness>,
    pub nodes_expanded: u64,
}

impl SolveOutcome {
    pub fn sat(witness: Witness, nodes_expanded: u64) -> Self {
        SolveOutcome {
            status: Status::Sat,
            witness: Some(witness),
            nodes_expanded,
        }
    }

    pub fn unsat(nodes_expanded: u64) -> Self {
        SolveOutcome {
            status: Status::Unsat,
            witness: None,
            nodes_expanded,
        }
    }

    pub fn timeout(nodes_expanded: u64) -> Self {
        SolveOutcome {
            status: Status::Timeout,
            witness: None,
            nodes_expanded,
        }
    }

    pub fn sequence(&self) -> Option<&BaseSequence> {
        match &self.witness {
            Some(Witness::Sequence(s)) => Some(s),
            _ => None,
        }
    }

    pub fn factor(&self) -> Option<&[Vec<usize>]> {
        match &self.witness {
            Some(Witness::Factor(f)) => Some(f),
            _ => None,
        }
    }
}

/// Search limits; `None` means unlimited.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn nodes(max_nodes: u64) -> Self {
        Budget {
            max_nodes: Some(max_nodes),
            max_time: None,
        }
    }

    pub fn time(max_time: Duration) -> Self {
        Budget {
            max_nodes: None,
            max_time: Some(max_time),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.max_nodes == Some(0) || self.max_time == Some(Duration::ZERO)
    }
}

/// Node and time accounting shared by the workers of one search.
pub(crate) struct SharedMeter {
    nodes: AtomicU64,
    stop: AtomicBool,
    exhausted: AtomicBool,
    max_nodes: Option<u64>,
    deadline: Option<Instant>,
}

impl SharedMeter {
    pub(crate) fn new(budget: Budget) -> Arc<Self> {
        Arc::new(SharedMeter {
            nodes: AtomicU64::new(0),
            stop: AtomicBool::new(false),
            exhausted: AtomicBool::new(false),
            max_nodes: budget.max_nodes,
            deadline: budget.max_time.map(|d| Instant::now() + d),
        })
    }

    pub(crate) fn request_stop(&self) {
        self.stop.store(true, Ordering::Relaxed);
    }

    pub(crate) fn budget_exhausted(&self) -> bool {
        self.exhausted.load(Ordering::Relaxed)
    }

    pub(crate) fn total(&self) -> u64 {
        self.nodes.load(Ordering::Relaxed)
    }
}

const FLUSH_EVERY: u64 = 1024;

/// Per-worker view of a [`SharedMeter`].
pub(crate) struct Meter {
    shared: Arc<SharedMeter>,
    pending: u64,
    seen_total: u64,
}

impl Meter {
    pub(crate) fn new(shared: Arc<SharedMeter>) -> Self {
        Meter {
            shared,
            pending: 0,
            seen_total: 0,
        }
    }

    pub(crate) fn standalone(budget: Budget) -> Self {
        Meter::new(SharedMeter::new(budget))
    }

    /// Counts one node. Returns `false` once the search must stop.
    #[inline]
    pub(crate) fn tick(&mut self) -> bool {
        self.pending += 1;
        if let Some(max) = self.shared.max_nodes {
            if self.seen_total + self.pending > max {
                self.flush();
                self.shared.exhausted.store(true, Ordering::Relaxed);
                self.shared.stop.store(true, Ordering::Relaxed);
                return false;
            }
        }
        if self.pending >= FLUSH_EVERY {
            return self.flush();
        }
        true
    }

    fn flush(&mut self) -> bool {
        let before = self.shared.nodes.fetch_add(self.pending, Ordering::Relaxed);
        self.seen_total = before + self.pending;
        self.pending = 0;
        if let Some(deadline) = self.shared.deadline {
            if Instant::now() >= deadline {
                self.shared.exhausted.store(true, Ordering::Relaxed);
                self.shared.stop.store(true, Ordering::Relaxed);
            }
        }
        !self.shared.stop.load(Ordering::Relaxed)
    }

    pub(crate) fn finish(&mut self) {
        self.flush();
    }

    pub(crate) fn shared(&self) -> &Arc<SharedMeter> {
        &self.shared
    }
}

pub(crate) fn check_instance(g: &Graph, sys: &IncompatibilitySystem) -> Result<()> {
    if sys.is_over(g) {
        Ok(())
    } else {
        Err(Error::BadParams(
            "incompatibility system was built over a different graph".into(),
        ))
    }
}

pub(crate) fn check_vertices(g: &Graph, vs: &[usize]) -> Result<()> {
    match vs.iter().find(|&&v| v >= g.n()) {
        Some(&v) => Err(Error::VertexOutOfRange { vertex: v, n: g.n() }),
        None => Ok(()),
    }
}
