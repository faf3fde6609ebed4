#![allow(dead_code)]

use globcorr::{Axis, JointDistribution};
use proptest::prelude::*;

/// Axis cardinalities: 1 to `max_axes` axes of 2 to `max_labels` labels.
pub fn shape(max_axes: usize, max_labels: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(2..=max_labels, 1..=max_axes)
}

/// Nonnegative weights with roughly one zero in five, not all zero.
pub fn weights(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![1 => Just(0.0), 4 => 0.001f64..1.0], n)
        .prop_filter("some mass", |w| w.iter().any(|&x| x > 0.0))
}

pub fn build(prefix: &str, cards: &[usize], weights: &[f64]) -> JointDistribution {
    let axes = cards
        .iter()
        .enumerate()
        .map(|(i, &c)| Axis::indexed(format!("{prefix}{i}"), c).unwrap())
        .collect();
    let total: f64 = weights.iter().sum();
    JointDistribution::new(axes, weights.iter().map(|w| w / total).collect()).unwrap()
}

pub fn distribution(
    max_axes: usize,
    max_labels: usize,
) -> impl Strategy<Value = JointDistribution> {
    shape(max_axes, max_labels).prop_flat_map(|cards| {
        let n = cards.iter().product();
        weights(n).prop_map(move |w| build("x", &cards, &w))
    })
}

/// A distribution with at least `min_axes` axes.
pub fn distribution_min(
    min_axes: usize,
    max_axes: usize,
    max_labels: usize,
) -> impl Strategy<Value = JointDistribution> {
    prop::collection::vec(2..=max_labels, min_axes..=max_axes).prop_flat_map(|cards| {
        let n = cards.iter().product();
        weights(n).prop_map(move |w| build("x", &cards, &w))
    })
}
