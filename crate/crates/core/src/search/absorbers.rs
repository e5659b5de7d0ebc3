use fixedbitset::FixedBitSet;

use super::{check_instance, check_vertices, count_mates, Budget, Meter, PowerBuilder, PowerPathWitness};
use crate::error::{Error, Result};
use crate::graph::{BaseSequence, Graph};
use crate::incompat::IncompatibilitySystem;

/// Constraints for [`find_absorber`].
#[derive(Debug, Clone)]
pub struct AbsorberQuery<'q> {
    pub v: usize,
    pub k: usize,
    /// Vertices the absorber may use; `None` allows all.
    pub allowed: Option<&'q FixedBitSet>,
    /// Both ends need at least this many mates.
    pub min_mates: u64,
    /// Count mates inside this set only.
    pub mates_within: Option<&'q FixedBitSet>,
    pub budget: Budget,
}

impl<'q> AbsorberQuery<'q> {
    pub fn new(v: usize, k: usize) -> Self {
        AbsorberQuery {
            v,
            k,
            allowed: None,
            min_mates: 0,
            mates_within: None,
            budget: Budget::unlimited(),
        }
    }
}

/// Whether `a` (a base of length `2k`) absorbs `v`: both `a` and `a` with `v`
/// inserted after its first `k` vertices are compatible power paths.
pub fn is_absorber(g: &Graph, sys: &IncompatibilitySystem, v: usize, a: &[usize], k: usize) -> bool {
    if k == 0 || a.len() != 2 * k || a.contains(&v) || v >= g.n() {
        return false;
    }
    let absorbed = absorbed_sequence(a, v, k);
    [a.to_vec(), absorbed].into_iter().all(|seq| {
        BaseSequence::path(seq)
            .ok()
            .is_some_and(|b| super::validate::validate_power(g, sys, &b, k).is_ok())
    })
}

/// `a_1 .. a_k v a_{k+1} .. a_{2k}`.
pub(crate) fn absorbed_sequence(a: &[usize], v: usize, k: usize) -> Vec<usize> {
    let mut seq = Vec::with_capacity(a.len() + 1);
    seq.extend_from_slice(&a[..k]);
    seq.push(v);
    seq.extend_from_slice(&a[k..]);
    seq
}

/// Absorbers for `v` in lexicographic order of their bases, up to `limit`. With
/// `beta > 0` both ends must have at least `ceil(beta * n^k)` mates.
pub fn enumerate_absorbers(
    g: &Graph,
    sys: &IncompatibilitySystem,
    v: usize,
    k: usize,
    beta: f64,
    limit: Option<usize>,
) -> Result<Vec<PowerPathWitness>> {
    if beta.is_nan() || beta < 0.0 {
        return Err(Error::BadParams(format!("beta must be non-negative, got {beta}")));
    }
    let threshold = (beta * (g.n() as f64).powi(k as i32)).ceil() as u64;
    let mut q = AbsorberQuery::new(v, k);
    q.min_mates = threshold;
    let mut out = Vec::new();
    search(g, sys, &q, &mut |a| {
        out.push(PowerPathWitness {
            base: BaseSequence::path(a.to_vec()).expect("distinct"),
            k,
        });
        limit.is_some_and(|l| out.len() >= l)
    })?;
    Ok(out)
}

/// First absorber for `q.v` (lexicographic) satisfying the query, or `None`
/// when there is none or the budget runs out.
pub fn find_absorber(
    g: &Graph,
    sys: &IncompatibilitySystem,
    q: &AbsorberQuery,
) -> Result<Option<PowerPathWitness>> {
    let mut found = None;
    search(g, sys, q, &mut |a| {
        found = Some(PowerPathWitness {
            base: BaseSequence::path(a.to_vec()).expect("distinct"),
            k: q.k,
        });
        true
    })?;
    Ok(found)
}

/// Runs `visit` on each absorber until it returns `true`. Returns `false` if the budget ran out.
fn search(
    g: &Graph,
    sys: &IncompatibilitySystem,
    q: &AbsorberQuery,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> Result<bool> {
    check_instance(g, sys)?;
    check_vertices(g, &[q.v])?;
    if q.k == 0 {
        return Err(Error::BadParams("k must be at least 1".into()));
    }
    if q.budget.is_zero() {
        return Ok(false);
    }
    // every absorber vertex is within distance k of v once v is inserted
    let mut pool = g.adjacency(q.v).clone();
    if let Some(allowed) = q.allowed {
        pool.intersect_with(allowed);
    }
    let mut s = Search {
        g,
        sys,
        q,
        pool,
        plain: PowerBuilder::path(g, sys, q.k),
        absorbed: PowerBuilder::path(g, sys, q.k),
        meter: Meter::standalone(q.budget),
    };
    let r = s.extend(visit);
    s.meter.finish();
    Ok(r.is_some())
}

struct Search<'s, 'a> {
    g: &'a Graph,
    sys: &'a IncompatibilitySystem,
    q: &'s AbsorberQuery<'s>,
    pool: FixedBitSet,
    plain: PowerBuilder<'a>,
    absorbed: PowerBuilder<'a>,
    meter: Meter,
}

impl Search<'_, '_> {
    /// `Some(true)`: visitor asked to stop. `None`: out of budget.
    fn extend(&mut self, visit: &mut dyn FnMut(&[usize]) -> bool) -> Option<bool> {
        let k = self.q.k;
        let i = self.plain.len();
        if i == 2 * k {
            if !self.end_ok(false) {
                return Some(false);
            }
            return Some(visit(self.plain.seq()));
        }
        let candidates: Vec<usize> = match self.plain.last() {
            Some(last) => self
                .g
                .neighbors(last)
                .filter(|&x| self.pool.contains(x))
                .collect(),
            None => self.pool.ones().collect(),
        };
        for x in candidates {
            if !self.meter.tick() {
                return None;
            }
            if !self.plain.can_push(x) || !self.absorbed.can_push(x) {
                continue;
            }
            self.plain.push_unchecked(x);
            self.absorbed.push_unchecked(x);
            let mut ok = true;
            if i + 1 == k {
                ok = self.absorbed.try_push(self.q.v) && self.end_ok(true);
            }
            if ok {
                match self.extend(visit) {
                    Some(false) => {}
                    other => return other,
                }
            }
            if i + 1 == k && self.absorbed.last() == Some(self.q.v) {
                self.absorbed.pop();
            }
            self.plain.pop();
            self.absorbed.pop();
        }
        Some(false)
    }

    fn end_ok(&self, front: bool) -> bool {
        if self.q.min_mates == 0 {
            return true;
        }
        let k = self.q.k;
        let seq = self.plain.seq();
        let end: Vec<usize> = if front {
            seq[..k].iter().rev().copied().collect()
        } else {
            seq[k..].to_vec()
        };
        count_mates(self.g, self.sys, &end, self.q.mates_within, Some(self.q.min_mates))
            .is_ok_and(|m| m >= self.q.min_mates)
    }
}
