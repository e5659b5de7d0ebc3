use serde::{Deserialize, Serialize};

use crate::search::absorbers::absorbed_sequence;

/// A stretch of a partial cycle. Absorber blocks carry the vertex they may
/// still take in, so every connection is checked against both readings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub(crate) enum Block {
    Fixed(Vec<usize>),
    Absorber {
        base: Vec<usize>,
        vertex: usize,
        absorbed: bool,
    },
}

impl Block {
    fn plain_len(&self) -> usize {
        match self {
            Block::Fixed(v) => v.len(),
            Block::Absorber { base, .. } => base.len(),
        }
    }

    /// Sequences this block can still turn into.
    fn variants(&self, k: usize) -> Vec<Vec<usize>> {
        match self {
            Block::Fixed(v) => vec![v.clone()],
            Block::Absorber {
                base,
                vertex,
                absorbed: false,
            } => vec![base.clone(), absorbed_sequence(base, *vertex, k)],
            Block::Absorber { base, vertex, .. } => vec![absorbed_sequence(base, *vertex, k)],
        }
    }

    fn current(&self, k: usize) -> Vec<usize> {
        match self {
            Block::Fixed(v) => v.clone(),
            Block::Absorber {
                base,
                vertex,
                absorbed,
            } => {
                if *absorbed {
                    absorbed_sequence(base, *vertex, k)
                } else {
                    base.clone()
                }
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub(crate) struct Piece {
    pub blocks: Vec<Block>,
}

impl Piece {
    pub fn single(b: Block) -> Self {
        Piece { blocks: vec![b] }
    }

    /// Last `len` vertices under every combination of the absorbers reaching them.
    pub fn tail_variants(&self, len: usize, k: usize) -> Vec<Vec<usize>> {
        let mut acc: Vec<Vec<usize>> = vec![Vec::new()];
        let mut covered = 0;
        for b in self.blocks.iter().rev() {
            let vs = b.variants(k);
            acc = vs
                .iter()
                .flat_map(|v| acc.iter().map(move |a| [v.as_slice(), a].concat()))
                .collect();
            covered += b.plain_len();
            if covered >= len {
                break;
            }
        }
        let mut out: Vec<Vec<usize>> = acc
            .into_iter()
            .map(|s| s[s.len().saturating_sub(len)..].to_vec())
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// First `len` vertices under every combination of the absorbers reaching them.
    pub fn head_variants(&self, len: usize, k: usize) -> Vec<Vec<usize>> {
        let mut acc: Vec<Vec<usize>> = vec![Vec::new()];
        let mut covered = 0;
        for b in &self.blocks {
            let vs = b.variants(k);
            acc = acc
                .iter()
                .flat_map(|a| vs.iter().map(move |v| [a.as_slice(), v].concat()))
                .collect();
            covered += b.plain_len();
            if covered >= len {
                break;
            }
        }
        let mut out: Vec<Vec<usize>> = acc.into_iter().map(|s| s[..len.min(s.len())].to_vec()).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn append(&mut self, interior: Vec<usize>, next: Piece) {
        if !interior.is_empty() {
            self.blocks.push(Block::Fixed(interior));
        }
        self.blocks.extend(next.blocks);
    }

    pub fn flatten(&self, k: usize) -> Vec<usize> {
        self.blocks.iter().flat_map(|b| b.current(k)).collect()
    }
}
