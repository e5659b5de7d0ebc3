//! Independent certificate checks. These rebuild the claimed edge set with
//! [`power_edges`] and run the whole-subgraph compatibility check; they share
//! no state with the solvers.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::error::Error;
use crate::graph::{power_edges, BaseSequence, EdgeId, Graph, SequenceKind};
use crate::incompat::{IncompatibilitySystem, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("malformed certificate: {0}")]
    Malformed(Error),
    #[error("required edge {{{0},{1}}} is missing from the graph")]
    MissingEdge(usize, usize),
    #[error("incompatible pair at vertex {}: edges {} and {}", .0.vertex, .0.first.0, .0.second.0)]
    Incompatible(Violation),
    #[error("certificate covers {covered} of {n} vertices")]
    NotSpanning { covered: usize, n: usize },
    #[error("expected a {expected:?}, got a {got:?}")]
    WrongKind {
        expected: SequenceKind,
        got: SequenceKind,
    },
}

fn check_edges(
    g: &Graph,
    sys: &IncompatibilitySystem,
    pairs: &BTreeSet<(usize, usize)>,
) -> Result<(), CertificateError> {
    let mut ids = Vec::with_capacity(pairs.len());
    for &(u, v) in pairs {
        match g.edge_id(u, v) {
            Some(e) => ids.push(e),
            None => return Err(CertificateError::MissingEdge(u, v)),
        }
    }
    let verdict = sys
        .is_compatible(&ids)
        .map_err(CertificateError::Malformed)?;
    match verdict.violation {
        Some(v) => Err(CertificateError::Incompatible(v)),
        None => Ok(()),
    }
}

/// The k-th power of `base` is a compatible subgraph of `g`.
pub fn validate_power(
    g: &Graph,
    sys: &IncompatibilitySystem,
    base: &BaseSequence,
    k: usize,
) -> Result<(), CertificateError> {
    if let Some(&v) = base.vertices().iter().find(|&&v| v >= g.n()) {
        return Err(CertificateError::Malformed(Error::VertexOutOfRange {
            vertex: v,
            n: g.n(),
        }));
    }
    if base.len() < 2 {
        return Ok(());
    }
    let pairs = power_edges(base, k).map_err(CertificateError::Malformed)?;
    check_edges(g, sys, &pairs)
}

/// A spanning cycle whose k-th power is compatible.
pub fn validate_hamilton_power(
    g: &Graph,
    sys: &IncompatibilitySystem,
    cycle: &BaseSequence,
    k: usize,
) -> Result<(), CertificateError> {
    if cycle.kind() != SequenceKind::Cycle {
        return Err(CertificateError::WrongKind {
            expected: SequenceKind::Cycle,
            got: cycle.kind(),
        });
    }
    if cycle.len() != g.n() {
        return Err(CertificateError::NotSpanning {
            covered: cycle.len(),
            n: g.n(),
        });
    }
    validate_power(g, sys, cycle, k)
}

/// A partition of `V` into compatible `r`-cliques.
pub fn validate_clique_factor(
    g: &Graph,
    sys: &IncompatibilitySystem,
    blocks: &[Vec<usize>],
    r: usize,
) -> Result<(), CertificateError> {
    let mut seen = BTreeSet::new();
    let mut pairs = BTreeSet::new();
    for block in blocks {
        if block.len() != r {
            return Err(CertificateError::Malformed(Error::InvalidSequence(format!(
                "block {block:?} does not have {r} vertices"
            ))));
        }
        for (i, &a) in block.iter().enumerate() {
            if a >= g.n() || !seen.insert(a) {
                return Err(CertificateError::Malformed(Error::InvalidSequence(format!(
                    "vertex {a} invalid or repeated"
                ))));
            }
            for &b in &block[i + 1..] {
                pairs.insert((a.min(b), a.max(b)));
            }
        }
    }
    if seen.len() != g.n() {
        return Err(CertificateError::NotSpanning {
            covered: seen.len(),
            n: g.n(),
        });
    }
    check_edges(g, sys, &pairs)
}

/// Edge ids of the k-th power of `base`, when all are present.
pub fn power_edge_ids(g: &Graph, base: &BaseSequence, k: usize) -> Option<Vec<EdgeId>> {
    let pairs = power_edges(base, k).ok()?;
    g.edge_ids_of(pairs.iter()).ok()
}
