use crate::graph::{position_distance, Graph, SequenceKind};
use crate::incompat::IncompatibilitySystem;

const UNPLACED: u32 = u32::MAX;

/// Grows a base sequence one vertex at a time, keeping its k-th power present and
/// compatible. In cycle mode the final length is fixed up front so wrap-around
/// edges are checked as soon as both ends are placed.
///
/// A push only inspects the new power edges: adjacency to the placed vertices
/// within distance `k`, then the conflict lists of each new edge at both of its
/// endpoints, which is `O(k * Delta)` per push.
#[derive(Clone)]
pub(crate) struct PowerBuilder<'a> {
    g: &'a Graph,
    sys: &'a IncompatibilitySystem,
    k: usize,
    kind: SequenceKind,
    total: usize,
    seq: Vec<usize>,
    pos: Vec<u32>,
}

impl<'a> PowerBuilder<'a> {
    pub(crate) fn path(g: &'a Graph, sys: &'a IncompatibilitySystem, k: usize) -> Self {
        PowerBuilder {
            g,
            sys,
            k,
            kind: SequenceKind::Path,
            total: usize::MAX,
            seq: Vec::new(),
            pos: vec![UNPLACED; g.n()],
        }
    }

    pub(crate) fn cycle(
        g: &'a Graph,
        sys: &'a IncompatibilitySystem,
        k: usize,
        total: usize,
    ) -> Self {
        PowerBuilder {
            kind: SequenceKind::Cycle,
            total,
            ..Self::path(g, sys, k)
        }
    }

    /// Path builder preloaded with `vertices`; `None` if they do not form a compatible power path.
    pub(crate) fn path_from(
        g: &'a Graph,
        sys: &'a IncompatibilitySystem,
        k: usize,
        vertices: &[usize],
    ) -> Option<Self> {
        let mut b = Self::path(g, sys, k);
        for &v in vertices {
            if !b.try_push(v) {
                return None;
            }
        }
        Some(b)
    }

    pub(crate) fn graph(&self) -> &'a Graph {
        self.g
    }

    #[inline]
    pub(crate) fn seq(&self) -> &[usize] {
        &self.seq
    }

    #[inline]
    pub(crate) fn len(&self) -> usize {
        self.seq.len()
    }

    #[inline]
    pub(crate) fn contains(&self, v: usize) -> bool {
        self.pos[v] != UNPLACED
    }

    pub(crate) fn last(&self) -> Option<usize> {
        self.seq.last().copied()
    }

    #[inline]
    fn dist(&self, i: usize, j: usize) -> usize {
        position_distance(i, j, self.total, self.kind)
    }

    /// Placed positions within distance `k` of position `i == len`.
    #[inline]
    fn window(&self, i: usize) -> impl Iterator<Item = usize> {
        let lo = i.saturating_sub(self.k);
        let wrap_hi = match self.kind {
            SequenceKind::Path => 0,
            SequenceKind::Cycle => (i + self.k + 1).saturating_sub(self.total).min(lo),
        };
        (lo..i).chain(0..wrap_hi)
    }

    pub(crate) fn can_push(&self, x: usize) -> bool {
        if self.pos[x] != UNPLACED {
            return false;
        }
        let i = self.seq.len();
        if self.kind == SequenceKind::Cycle && i >= self.total {
            return false;
        }
        for t in self.window(i) {
            if !self.g.has_edge(self.seq[t], x) {
                return false;
            }
        }
        for t in self.window(i) {
            let p = self.seq[t];
            let e = self.g.edge_id(p, x).expect("checked above");
            for &w in self.sys.conflicts_at(e, x) {
                let s = self.pos[w];
                if s != UNPLACED && self.dist(s as usize, i) <= self.k {
                    return false;
                }
            }
            for &w in self.sys.conflicts_at(e, p) {
                let s = self.pos[w];
                if s != UNPLACED && self.dist(s as usize, t) <= self.k {
                    return false;
                }
            }
        }
        true
    }

    #[inline]
    pub(crate) fn push_unchecked(&mut self, x: usize) {
        self.pos[x] = self.seq.len() as u32;
        self.seq.push(x);
    }

    #[inline]
    pub(crate) fn try_push(&mut self, x: usize) -> bool {
        if self.can_push(x) {
            self.push_unchecked(x);
            true
        } else {
            false
        }
    }

    /// Pushes all of `xs` or none of them.
    pub(crate) fn try_extend(&mut self, xs: &[usize]) -> bool {
        for (i, &x) in xs.iter().enumerate() {
            if !self.try_push(x) {
                self.truncate(self.len() - i);
                return false;
            }
        }
        true
    }

    #[inline]
    pub(crate) fn pop(&mut self) -> Option<usize> {
        let x = self.seq.pop()?;
        self.pos[x] = UNPLACED;
        Some(x)
    }

    pub(crate) fn truncate(&mut self, len: usize) {
        while self.seq.len() > len {
            self.pop();
        }
    }

    /// Rebuilds the path in reverse order. Reversal preserves validity.
    pub(crate) fn reverse(&mut self) {
        debug_assert_eq!(self.kind, SequenceKind::Path);
        self.seq.reverse();
        for (i, &v) in self.seq.iter().enumerate() {
            self.pos[v] = i as u32;
        }
    }
}
