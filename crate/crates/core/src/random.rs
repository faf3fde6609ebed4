//! Seeded generators for random distributions and statistics.
//!
//! Streams are ChaCha20 keyed by a 64-bit seed, with one stream per trial
//! index, so trial `i` draws the same values regardless of how many other
//! trials run or in which order. Distributions are uniform on the simplex
//! (Dirichlet(1, ..., 1)), sampled as normalized unit-rate exponentials.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::Exp1;

use crate::dist::{Axis, JointDistribution};
use crate::error::Result;
use crate::statistic::Statistic;

pub type TrialRng = ChaCha20Rng;

/// The generator for trial `trial` under `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> TrialRng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// A point drawn uniformly from the `n - 1` simplex.
pub fn simplex<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let draws: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let total: f64 = draws.iter().sum();
        if total > 0.0 {
            return draws.into_iter().map(|d| d / total).collect();
        }
    }
}

/// A uniformly random distribution over axes named `{prefix}1, {prefix}2, ...`
/// with the given cardinalities and labels `"0"..`.
pub fn distribution<R: Rng + ?Sized>(
    rng: &mut R,
    prefix: &str,
    cards: &[usize],
) -> Result<JointDistribution> {
    let axes = cards
        .iter()
        .enumerate()
        .map(|(i, &c)| Axis::indexed(format!("{prefix}{}", i + 1), c))
        .collect::<Result<Vec<_>>>()?;
    let n = cards.iter().product();
    JointDistribution::new(axes, simplex(rng, n))
}

/// Between `min_axes` and `max_axes` axes, each with 2 to `max_labels` labels.
pub fn shape<R: Rng + ?Sized>(
    rng: &mut R,
    min_axes: usize,
    max_axes: usize,
    max_labels: usize,
) -> Vec<usize> {
    let n = rng.random_range(min_axes..=max_axes.max(min_axes));
    (0..n)
        .map(|_| rng.random_range(2..=max_labels.max(2)))
        .collect()
}

/// A random deterministic map from `block`'s label space onto a new axis
/// with 1 to `max_out` labels.
pub fn statistic<R: Rng + ?Sized>(
    rng: &mut R,
    dist: &JointDistribution,
    block: Vec<usize>,
    name: &str,
    max_out: usize,
) -> Result<Statistic> {
    let out = rng.random_range(1..=max_out.max(1));
    let size: usize = block
        .iter()
        .map(|&i| dist.axes()[i].cardinality())
        .product();
    let table: Vec<usize> = (0..size).map(|_| rng.random_range(0..out)).collect();
    let cards = block
        .iter()
        .map(|&i| dist.axes()[i].cardinality())
        .collect();
    Statistic::new(block, cards, Axis::indexed(name, out)?, table)
}

/// A uniformly random permutation of `0..n`.
pub fn permutation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        p.swap(i, j);
    }
    p
}
