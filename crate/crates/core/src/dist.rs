//! Discrete joint distributions over named finite axes.
//!
//! A [`JointDistribution`] is an immutable, normalized probability tensor stored
//! row-major over its axes (the last axis varies fastest). Every transformation
//! returns a new value and documents the axis order of its output.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::statistic::Statistic;
use crate::tensor;

/// Construction tolerance on the total probability mass.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// A named finite proposition space with ordered, distinct labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Axis {
    name: String,
    labels: Vec<String>,
}

impl Axis {
    pub fn new<S: Into<String>, L: Into<String>>(
        name: S,
        labels: impl IntoIterator<Item = L>,
    ) -> Result<Self> {
        let name = name.into();
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyAxis(name));
        }
        let mut seen = HashSet::with_capacity(labels.len());
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(Error::DuplicateLabel {
                    axis: name,
                    label: label.clone(),
                });
            }
        }
        Ok(Axis { name, labels })
    }

    /// An axis labelled `"0"`, `"1"`, ..., `"{card-1}"`.
    pub fn indexed<S: Into<String>>(name: S, card: usize) -> Result<Self> {
        Axis::new(name, (0..card).map(|i| i.to_string()))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn cardinality(&self) -> usize {
        self.labels.len()
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub(crate) fn with_name(&self, name: String) -> Axis {
        Axis {
            name,
            labels: self.labels.clone(),
        }
    }
}

/// An immutable joint probability tensor over an ordered list of axes.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    axes: Vec<Axis>,
    probs: Vec<f64>,
}

impl JointDistribution {
    /// Validates and stores a joint distribution.
    ///
    /// The entries must be nonnegative and sum to one within
    /// [`NORMALIZATION_TOLERANCE`]; they are divided by their sum before
    /// storage unless the sum is already one up to summation rounding.
    pub fn new(axes: Vec<Axis>, probs: Vec<f64>) -> Result<Self> {
        let mut names = HashSet::with_capacity(axes.len());
        for axis in &axes {
            if !names.insert(axis.name()) {
                return Err(Error::AxisNameCollision(axis.name().to_string()));
            }
        }
        let expected = axes.iter().map(Axis::cardinality).product();
        if probs.len() != expected {
            return Err(Error::ShapeMismatch {
                expected,
                found: probs.len(),
            });
        }
        for (index, &value) in probs.iter().enumerate() {
            if !(value >= 0.0) {
                return Err(Error::NegativeProbability { index, value });
            }
        }
        let sum: f64 = probs.iter().sum();
        if !((sum - 1.0).abs() <= NORMALIZATION_TOLERANCE) {
            return Err(Error::Normalization { sum });
        }
        let probs = if (sum - 1.0).abs() <= probs.len() as f64 * f64::EPSILON {
            probs
        } else {
            probs.into_iter().map(|p| p / sum).collect()
        };
        Ok(JointDistribution { axes, probs })
    }

    /// Builds a distribution whose entries are known to be a valid
    /// pushforward/product of an already validated one.
    pub(crate) fn from_parts(axes: Vec<Axis>, probs: Vec<f64>) -> Self {
        debug_assert_eq!(
            probs.len(),
            axes.iter().map(Axis::cardinality).product::<usize>()
        );
        JointDistribution { axes, probs }
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn axis(&self, index: usize) -> Result<&Axis> {
        self.axes.get(index).ok_or(Error::BadAxisIndex {
            index,
            count: self.axes.len(),
        })
    }

    pub fn axis_count(&self) -> usize {
        self.axes.len()
    }

    pub fn axis_index(&self, name: &str) -> Option<usize> {
        self.axes.iter().position(|a| a.name() == name)
    }

    pub fn cards(&self) -> Vec<usize> {
        self.axes.iter().map(Axis::cardinality).collect()
    }

    /// Flat row-major probability tensor.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn cell_count(&self) -> usize {
        self.probs.len()
    }

    /// Probability of the cell addressed by one label per axis.
    pub fn prob_of(&self, labels: &[&str]) -> Result<f64> {
        if labels.len() != self.axes.len() {
            return Err(Error::ShapeMismatch {
                expected: self.axes.len(),
                found: labels.len(),
            });
        }
        let strides = tensor::strides(&self.cards());
        let mut cell = 0;
        for ((axis, label), stride) in self.axes.iter().zip(labels).zip(strides) {
            let pos = axis.position(label).ok_or_else(|| Error::BadLabel {
                axis: axis.name().to_string(),
                label: label.to_string(),
            })?;
            cell += pos * stride;
        }
        Ok(self.probs[cell])
    }

    pub(crate) fn check_axes(&self, indices: &[usize]) -> Result<()> {
        for &index in indices {
            if index >= self.axes.len() {
                return Err(Error::BadAxisIndex {
                    index,
                    count: self.axes.len(),
                });
            }
        }
        Ok(())
    }

    /// Marginal probabilities over `positions`, row-major in the listed order.
    pub fn marginal_probs(&self, positions: &[usize]) -> Result<Vec<f64>> {
        self.check_axes(positions)?;
        Ok(tensor::marginal(&self.probs, &self.cards(), positions))
    }

    /// Renames the labels of one axis without moving any probability mass.
    ///
    /// `new_labels[i]` is the image of the axis's `i`-th label. Label order
    /// follows the images, so every cell keeps its position and value.
    pub fn relabel(&self, axis: usize, new_labels: Vec<String>) -> Result<Self> {
        let old = self.axis(axis)?;
        if new_labels.len() != old.cardinality() {
            return Err(Error::NotABijection(format!(
                "{} images for {} labels",
                new_labels.len(),
                old.cardinality()
            )));
        }
        let renamed = Axis::new(old.name(), new_labels).map_err(|e| match e {
            Error::DuplicateLabel { label, .. } => {
                Error::NotABijection(format!("label `{label}` is the image of two labels"))
            }
            other => other,
        })?;
        let mut axes = self.axes.clone();
        axes[axis] = renamed;
        Ok(JointDistribution::from_parts(axes, self.probs.clone()))
    }

    /// [`relabel`](Self::relabel) driven by an explicit old-to-new label map.
    pub fn relabel_with(&self, axis: usize, mapping: &HashMap<String, String>) -> Result<Self> {
        let old = self.axis(axis)?;
        if mapping.len() != old.cardinality() {
            return Err(Error::NotABijection(format!(
                "map has {} entries for {} labels",
                mapping.len(),
                old.cardinality()
            )));
        }
        let images = old
            .labels()
            .iter()
            .map(|l| {
                mapping
                    .get(l)
                    .cloned()
                    .ok_or_else(|| Error::NotABijection(format!("label `{l}` has no image")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.relabel(axis, images)
    }

    /// Permutes the labels of one axis into `order` (old label positions),
    /// moving the cells along with them.
    pub fn reorder_labels(&self, axis: usize, order: &[usize]) -> Result<Self> {
        let old = self.axis(axis)?;
        let card = old.cardinality();
        let mut seen = vec![false; card];
        if order.len() != card
            || order
                .iter()
                .any(|&o| o >= card || std::mem::replace(&mut seen[o], true))
        {
            return Err(Error::NotABijection(format!(
                "{order:?} is not a permutation of 0..{card}"
            )));
        }
        let labels: Vec<String> = order.iter().map(|&o| old.labels()[o].clone()).collect();
        let mut axes = self.axes.clone();
        axes[axis] = Axis::new(old.name(), labels)?;
        let cards = self.cards();
        let mut inverse = vec![0; card];
        for (new_pos, &old_pos) in order.iter().enumerate() {
            inverse[old_pos] = new_pos;
        }
        let strides = tensor::strides(&cards);
        let mut coords = vec![0; cards.len()];
        let mut probs = vec![0.0; self.probs.len()];
        for (cell, &p) in self.probs.iter().enumerate() {
            tensor::unravel(cell, &cards, &mut coords);
            let moved = cell - coords[axis] * strides[axis] + inverse[coords[axis]] * strides[axis];
            probs[moved] = p;
        }
        Ok(JointDistribution::from_parts(axes, probs))
    }

    /// Sorts an axis's labels lexicographically, moving cells accordingly.
    pub fn sort_labels(&self, axis: usize) -> Result<Self> {
        let labels = self.axis(axis)?.labels();
        let mut order: Vec<usize> = (0..labels.len()).collect();
        order.sort_by(|&a, &b| labels[a].cmp(&labels[b]));
        self.reorder_labels(axis, &order)
    }

    /// Sums out every axis not in `keep`. Output axes are in ascending index order.
    pub fn marginalize(&self, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::EmptyKeepSet);
        }
        self.check_axes(keep)?;
        let mut positions = keep.to_vec();
        positions.sort_unstable();
        positions.dedup();
        Ok(self.project(&positions))
    }

    /// Marginal over `positions` in exactly the listed order. Callers validate.
    pub(crate) fn project(&self, positions: &[usize]) -> Self {
        if positions.len() == self.axes.len() && positions.iter().enumerate().all(|(i, &p)| i == p)
        {
            return self.clone();
        }
        let axes = positions.iter().map(|&p| self.axes[p].clone()).collect();
        JointDistribution::from_parts(
            axes,
            tensor::marginal(&self.probs, &self.cards(), positions),
        )
    }

    /// Conditions on `axis == label`. The remaining axes keep their order.
    pub fn condition(&self, axis: usize, label: &str) -> Result<Self> {
        let ax = self.axis(axis)?;
        let pos = ax.position(label).ok_or_else(|| Error::BadLabel {
            axis: ax.name().to_string(),
            label: label.to_string(),
        })?;
        let cards = self.cards();
        let mut coords = vec![0; cards.len()];
        let mut slice = Vec::with_capacity(self.probs.len() / cards[axis]);
        for (cell, &p) in self.probs.iter().enumerate() {
            tensor::unravel(cell, &cards, &mut coords);
            if coords[axis] == pos {
                slice.push(p);
            }
        }
        let mass: f64 = slice.iter().sum();
        if mass <= 0.0 {
            return Err(Error::ZeroConditioningEvent {
                axis: ax.name().to_string(),
                label: label.to_string(),
            });
        }
        let axes = self
            .axes
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != axis)
            .map(|(_, a)| a.clone())
            .collect();
        Ok(JointDistribution::from_parts(
            axes,
            slice.into_iter().map(|p| p / mass).collect(),
        ))
    }

    /// Independent product `p(x, y) = p(x) p(y)`; axes of `self` come first.
    pub fn product_independent(&self, other: &JointDistribution) -> Result<Self> {
        for axis in &other.axes {
            if self.axis_index(axis.name()).is_some() {
                return Err(Error::AxisNameCollision(axis.name().to_string()));
            }
        }
        let axes = self.axes.iter().chain(&other.axes).cloned().collect();
        let mut probs = Vec::with_capacity(self.probs.len() * other.probs.len());
        for &a in &self.probs {
            probs.extend(other.probs.iter().map(|&b| a * b));
        }
        Ok(JointDistribution::from_parts(axes, probs))
    }

    /// Appends a new last axis carrying `y = f(x)` for a deterministic statistic.
    pub fn embed_statistic(&self, stat: &Statistic) -> Result<Self> {
        stat.check_against(self)?;
        if self.axis_index(stat.output().name()).is_some() {
            return Err(Error::AxisNameCollision(stat.output().name().to_string()));
        }
        let cards = self.cards();
        let out_card = stat.output().cardinality();
        let block_index = tensor::projection(&cards, stat.block());
        let mut probs = vec![0.0; self.probs.len() * out_card];
        for (cell, (&p, &b)) in self.probs.iter().zip(&block_index).enumerate() {
            probs[cell * out_card + stat.image(b)] = p;
        }
        let mut axes = self.axes.clone();
        axes.push(stat.output().clone());
        Ok(JointDistribution::from_parts(axes, probs))
    }

    /// The independent product of the block marginals, `m(x) = prod_k p(x^(k))`,
    /// laid out over the original axes in their original order.
    pub fn product_marginal(&self, partition: &Partition) -> Result<Self> {
        partition.check_for(self)?;
        let cards = self.cards();
        let mut probs = vec![1.0; self.probs.len()];
        for block in partition.blocks() {
            let marginal = tensor::marginal(&self.probs, &cards, block);
            for (m, idx) in probs.iter_mut().zip(tensor::projection(&cards, block)) {
                *m *= marginal[idx];
            }
        }
        Ok(JointDistribution::from_parts(self.axes.clone(), probs))
    }

    /// True when both distributions are over identical axes in identical order.
    pub fn same_axes(&self, other: &JointDistribution) -> bool {
        self.axes == other.axes
    }
}
