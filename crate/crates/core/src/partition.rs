//! Splits of the axis index set into disjoint, exhaustive blocks.

use std::fmt;

use crate::dist::JointDistribution;
use crate::error::{Error, Result};

/// An ordered sequence of disjoint, nonempty blocks covering `0..axis_count`.
///
/// Indices inside a block are kept sorted; block order is the caller's and is
/// significant for chain-rule decompositions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
    axis_count: usize,
}

impl Partition {
    pub fn new(blocks: Vec<Vec<usize>>, axis_count: usize) -> Result<Self> {
        let mut seen = vec![false; axis_count];
        let mut blocks = blocks;
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            block.sort_unstable();
            for &i in block.iter() {
                if i >= axis_count {
                    return Err(Error::InvalidPartition(format!(
                        "index {i} out of range for {axis_count} axes"
                    )));
                }
                if std::mem::replace(&mut seen[i], true) {
                    return Err(Error::InvalidPartition(format!("index {i} appears twice")));
                }
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!(
                "index {missing} is not covered"
            )));
        }
        Ok(Partition { blocks, axis_count })
    }

    /// Every axis in its own block: the split used by total correlation.
    pub fn singletons(axis_count: usize) -> Self {
        Partition {
            blocks: (0..axis_count).map(|i| vec![i]).collect(),
            axis_count,
        }
    }

    /// One block holding every axis.
    pub fn whole(axis_count: usize) -> Self {
        Partition {
            blocks: vec![(0..axis_count).collect()],
            axis_count,
        }
    }

    /// Parses the `"0,1|2|3"` grammar: comma-separated indices, blocks joined by `|`.
    pub fn parse(text: &str, axis_count: usize) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::Syntax("empty partition".into()));
        }
        let blocks = text
            .split('|')
            .map(|block| {
                block
                    .split(',')
                    .map(|tok| {
                        let tok = tok.trim();
                        tok.parse::<usize>()
                            .map_err(|_| Error::Syntax(format!("`{tok}` is not an axis index")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(blocks, axis_count)
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn axis_count(&self) -> usize {
        self.axis_count
    }

    pub fn is_singletons(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }

    /// Same blocks in a different order; `order` lists old block positions.
    pub fn reordered(&self, order: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.blocks.len()];
        if order.len() != self.blocks.len()
            || order
                .iter()
                .any(|&o| o >= seen.len() || std::mem::replace(&mut seen[o], true))
        {
            return Err(Error::InvalidPartition(format!(
                "{order:?} is not a block permutation"
            )));
        }
        Ok(Partition {
            blocks: order.iter().map(|&o| self.blocks[o].clone()).collect(),
            axis_count: self.axis_count,
        })
    }

    /// Blocks sorted by their least element.
    pub fn canonical(&self) -> Self {
        let mut blocks = self.blocks.clone();
        blocks.sort_by_key(|b| b[0]);
        Partition {
            blocks,
            axis_count: self.axis_count,
        }
    }

    pub(crate) fn check_for(&self, dist: &JointDistribution) -> Result<()> {
        if self.axis_count != dist.axis_count() {
            return Err(Error::InvalidPartition(format!(
                "partition covers {} axes, distribution has {}",
                self.axis_count,
                dist.axis_count()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, block) in self.blocks.iter().enumerate() {
            if k > 0 {
                f.write_str("|")?;
            }
            for (j, i) in block.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{i}")?;
            }
        }
        Ok(())
    }
}
