use std::sync::Arc;

use crate::{Error, Result};

/// A contiguous run of generators owned by one entity (a particle's `c`
/// spinor, a string coefficient set, ...). The first `n_pos` generators of the
/// block square to `+2` under the bullet product, the next `n_neg` to `-2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub label: String,
    pub offset: usize,
    pub n_pos: usize,
    pub n_neg: usize,
}

impl Block {
    pub fn len(&self) -> usize {
        self.n_pos + self.n_neg
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn range(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.len()
    }

    /// Number of `E`/`F` pairs the block supports (`n_pos = n_neg = 2 * rank`).
    pub fn rank(&self) -> Result<usize> {
        if self.n_pos != self.n_neg || !self.n_pos.is_multiple_of(2) {
            return Err(Error::BadSignature {
                label: self.label.clone(),
                n_pos: self.n_pos,
                n_neg: self.n_neg,
            });
        }
        Ok(self.n_pos / 2)
    }
}

/// Signature bookkeeping for a real Clifford algebra `Cl(p, q)` whose grade-1
/// generators are partitioned into labelled, disjoint blocks.
///
/// The signature is fixed at construction; spaces are shared through `Arc`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSpace {
    signs: Vec<i8>,
    blocks: Vec<Block>,
}

impl GeneratorSpace {
    /// One block labelled `main` holding `n_pos` positive then `n_neg`
    /// negative generators.
    pub fn allocate(n_pos: usize, n_neg: usize) -> Result<Arc<Self>> {
        if n_pos + n_neg == 0 {
            return Err(Error::EmptySpace);
        }
        let mut signs = vec![1; n_pos];
        signs.extend(std::iter::repeat_n(-1, n_neg));
        Ok(Arc::new(Self {
            signs,
            blocks: vec![Block {
                label: "main".into(),
                offset: 0,
                n_pos,
                n_neg,
            }],
        }))
    }

    /// Disjoint blocks, each able to host `rank` standard-basis pairs
    /// (`2 * rank` positive and `2 * rank` negative generators).
    pub fn with_blocks<S: AsRef<str>>(blocks: &[(S, usize)]) -> Result<Arc<Self>> {
        let mut signs = Vec::new();
        let mut out = Vec::with_capacity(blocks.len());
        for (label, rank) in blocks {
            let label = label.as_ref();
            if out.iter().any(|b: &Block| b.label == label) {
                return Err(Error::Domain(format!("duplicate block label `{label}`")));
            }
            let offset = signs.len();
            signs.extend(std::iter::repeat_n(1, 2 * rank));
            signs.extend(std::iter::repeat_n(-1, 2 * rank));
            out.push(Block {
                label: label.to_string(),
                offset,
                n_pos: 2 * rank,
                n_neg: 2 * rank,
            });
        }
        if signs.is_empty() {
            return Err(Error::EmptySpace);
        }
        Ok(Arc::new(Self { signs, blocks: out }))
    }

    /// Total generator count.
    pub fn dim(&self) -> usize {
        self.signs.len()
    }

    pub fn n_pos(&self) -> usize {
        self.signs.iter().filter(|s| **s > 0).count()
    }

    pub fn n_neg(&self) -> usize {
        self.signs.iter().filter(|s| **s < 0).count()
    }

    pub fn sign(&self, k: usize) -> Result<i8> {
        self.signs.get(k).copied().ok_or(Error::IndexOutOfRange {
            index: k,
            len: self.dim(),
        })
    }

    pub(crate) fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block(&self, label: &str) -> Result<&Block> {
        self.blocks
            .iter()
            .find(|b| b.label == label)
            .ok_or_else(|| Error::MissingBlock(label.to_string()))
    }
}

pub(crate) fn same_space(a: &Arc<GeneratorSpace>, b: &Arc<GeneratorSpace>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}
