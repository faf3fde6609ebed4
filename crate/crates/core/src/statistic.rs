//! Deterministic maps from the joint labels of a block of axes onto a new axis.

use std::collections::HashMap;

use crate::dist::{Axis, JointDistribution};
use crate::error::{Error, Result};
use crate::tensor;

/// `y = f(x)` for `x` ranging over the joint label space of `block`.
///
/// The table is indexed row-major over the block's axes, in block order, and
/// stores the position of the image in `output`'s labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Statistic {
    block: Vec<usize>,
    domain_cards: Vec<usize>,
    output: Axis,
    table: Vec<usize>,
}

impl Statistic {
    pub fn new(
        block: Vec<usize>,
        domain_cards: Vec<usize>,
        output: Axis,
        table: Vec<usize>,
    ) -> Result<Self> {
        if block.is_empty() {
            return Err(Error::OverlappingBlocks("statistic block is empty".into()));
        }
        if block.len() != domain_cards.len() {
            return Err(Error::ShapeMismatch {
                expected: block.len(),
                found: domain_cards.len(),
            });
        }
        let mut sorted = block.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::OverlappingBlocks(format!(
                "statistic block {block:?} repeats an axis"
            )));
        }
        let size = tensor::cell_count(&domain_cards);
        if table.len() != size {
            return Err(Error::IncompleteMap(format!(
                "{} images for {} input combinations",
                table.len(),
                size
            )));
        }
        if let Some(bad) = table.iter().find(|&&t| t >= output.cardinality()) {
            return Err(Error::IncompleteMap(format!(
                "image index {bad} outside output axis `{}`",
                output.name()
            )));
        }
        Ok(Statistic {
            block,
            domain_cards,
            output,
            table,
        })
    }

    /// Builds the table by calling `f` on the per-axis label positions of
    /// every input combination. `f` returns a position in `output`'s labels.
    pub fn from_fn(
        dist: &JointDistribution,
        block: Vec<usize>,
        output: Axis,
        f: impl Fn(&[usize]) -> usize,
    ) -> Result<Self> {
        dist.check_axes(&block)?;
        let cards: Vec<usize> = block
            .iter()
            .map(|&i| dist.axes()[i].cardinality())
            .collect();
        let mut coords = vec![0; cards.len()];
        let table = (0..tensor::cell_count(&cards))
            .map(|cell| {
                tensor::unravel(cell, &cards, &mut coords);
                f(&coords)
            })
            .collect();
        Statistic::new(block, cards, output, table)
    }

    /// Builds a statistic from a map keyed by comma-joined input labels (in
    /// block order) with output labels as values.
    pub fn from_labels(
        axes: &[Axis],
        block: Vec<usize>,
        output: Axis,
        map: &HashMap<String, String>,
    ) -> Result<Self> {
        for &i in &block {
            if i >= axes.len() {
                return Err(Error::BadAxisIndex {
                    index: i,
                    count: axes.len(),
                });
            }
        }
        let cards: Vec<usize> = block.iter().map(|&i| axes[i].cardinality()).collect();
        let mut coords = vec![0; cards.len()];
        let mut table = Vec::with_capacity(tensor::cell_count(&cards));
        for cell in 0..tensor::cell_count(&cards) {
            tensor::unravel(cell, &cards, &mut coords);
            let key = join_key(axes, &block, &coords);
            let image = map
                .get(&key)
                .ok_or_else(|| Error::IncompleteMap(format!("no image for `{key}`")))?;
            let pos = output.position(image).ok_or_else(|| {
                Error::IncompleteMap(format!(
                    "image `{image}` is not a label of `{}`",
                    output.name()
                ))
            })?;
            table.push(pos);
        }
        if map.len() != table.len() {
            return Err(Error::IncompleteMap(format!(
                "map has {} keys, input space has {} combinations",
                map.len(),
                table.len()
            )));
        }
        Statistic::new(block, cards, output, table)
    }

    /// Copies one axis onto a new axis called `name`.
    pub fn identity(dist: &JointDistribution, axis: usize, name: &str) -> Result<Self> {
        let output = dist.axis(axis)?.with_name(name.to_string());
        Statistic::from_fn(dist, vec![axis], output, |c| c[0])
    }

    /// Maps every input combination of `block` to the single label `"const"`.
    pub fn constant(dist: &JointDistribution, block: Vec<usize>, name: &str) -> Result<Self> {
        Statistic::from_fn(dist, block, Axis::new(name, ["const"])?, |_| 0)
    }

    pub fn block(&self) -> &[usize] {
        &self.block
    }

    pub fn output(&self) -> &Axis {
        &self.output
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn domain_cards(&self) -> &[usize] {
        &self.domain_cards
    }

    /// Output label position for a row-major index into the block's label space.
    pub fn image(&self, input: usize) -> usize {
        self.table[input]
    }

    /// The same map with a differently named output axis.
    pub fn renamed(&self, name: &str) -> Statistic {
        Statistic {
            output: self.output.with_name(name.to_string()),
            ..self.clone()
        }
    }

    /// The same map acting on a different set of axis positions with identical
    /// cardinalities (used when a distribution's axes are re-indexed).
    pub(crate) fn moved_to(&self, block: Vec<usize>) -> Statistic {
        Statistic {
            block,
            ..self.clone()
        }
    }

    /// Comma-joined input key to output label, in row-major input order.
    pub fn label_map(&self, axes: &[Axis]) -> Vec<(String, String)> {
        let mut coords = vec![0; self.domain_cards.len()];
        (0..self.table.len())
            .map(|cell| {
                tensor::unravel(cell, &self.domain_cards, &mut coords);
                (
                    join_key(axes, &self.block, &coords),
                    self.output.labels()[self.table[cell]].clone(),
                )
            })
            .collect()
    }

    pub(crate) fn check_against(&self, dist: &JointDistribution) -> Result<()> {
        dist.check_axes(&self.block)?;
        for (&i, &card) in self.block.iter().zip(&self.domain_cards) {
            let axis = &dist.axes()[i];
            if axis.cardinality() != card {
                return Err(Error::IncompleteMap(format!(
                    "statistic expects {card} labels on axis `{}`, found {}",
                    axis.name(),
                    axis.cardinality()
                )));
            }
        }
        Ok(())
    }
}

fn join_key(axes: &[Axis], block: &[usize], coords: &[usize]) -> String {
    block
        .iter()
        .zip(coords)
        .map(|(&i, &c)| axes[i].labels()[c].as_str())
        .collect::<Vec<_>>()
        .join(",")
}
