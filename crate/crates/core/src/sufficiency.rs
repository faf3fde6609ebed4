//! Sufficiency of deterministic statistics and posterior-ratio invariance.
//!
//! A statistic `f` applied to a block `X` can only lose correlation with the
//! rest of the system. Sufficiency is the fraction it keeps: 1 means nothing
//! was lost, which for a binary parameter happens exactly when `f` only merges
//! observations sharing the same posterior ratio.

use crate::dist::{Axis, JointDistribution};
use crate::error::{Error, Result};
use crate::info::{block_information, check_disjoint};
use crate::partition::Partition;
use crate::statistic::Statistic;
use crate::tensor;

/// Baseline information at or below which a ratio is not reported.
pub const BASELINE_THRESHOLD: f64 = 1e-12;
/// Overshoot above 1 that is attributed to rounding and clipped.
pub const CLIP_TOLERANCE: f64 = 1e-10;

/// Pushes a block through a statistic.
///
/// With `replace == false` this is [`JointDistribution::embed_statistic`].
/// With `replace == true` the block's axes are summed out after embedding:
/// the output keeps the other axes in their original order and appends the
/// statistic's axis last.
pub fn apply_statistic(
    dist: &JointDistribution,
    stat: &Statistic,
    replace: bool,
) -> Result<JointDistribution> {
    if !replace {
        return dist.embed_statistic(stat);
    }
    stat.check_against(dist)?;
    let rest: Vec<usize> = (0..dist.axis_count())
        .filter(|i| !stat.block().contains(i))
        .collect();
    if rest
        .iter()
        .any(|&i| dist.axes()[i].name() == stat.output().name())
    {
        return Err(Error::AxisNameCollision(stat.output().name().to_string()));
    }
    let cards = dist.cards();
    let rest_index = tensor::projection(&cards, &rest);
    let block_index = tensor::projection(&cards, stat.block());
    let out_card = stat.output().cardinality();
    let rest_size: usize = rest.iter().map(|&i| cards[i]).product();
    let mut probs = vec![0.0; rest_size * out_card];
    for (cell, &p) in dist.probs().iter().enumerate() {
        probs[rest_index[cell] * out_card + stat.image(block_index[cell])] += p;
    }
    let mut axes: Vec<Axis> = rest.iter().map(|&i| dist.axes()[i].clone()).collect();
    axes.push(stat.output().clone());
    Ok(JointDistribution::from_parts(axes, probs))
}

/// `I[f(X); Theta] / I[X; Theta]` for the statistic's block `X`.
///
/// Axes outside `X` and `theta` are summed out. Fails with
/// [`Error::NoBaselineCorrelation`] when `I[X; Theta] <= 1e-12`.
pub fn sufficiency(dist: &JointDistribution, stat: &Statistic, theta: &[usize]) -> Result<f64> {
    Ok(sufficiency_parts(dist, stat, theta)?.ratio())
}

/// Numerator and denominator of a sufficiency ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SufficiencyParts {
    pub after: f64,
    pub before: f64,
}

impl SufficiencyParts {
    pub fn ratio(&self) -> f64 {
        clip_ratio(self.after / self.before)
    }
}

pub fn sufficiency_parts(
    dist: &JointDistribution,
    stat: &Statistic,
    theta: &[usize],
) -> Result<SufficiencyParts> {
    stat.check_against(dist)?;
    check_disjoint(dist, &[stat.block(), theta], 2)?;
    let before = block_information(dist, &[stat.block().to_vec(), theta.to_vec()]);
    if !(before > BASELINE_THRESHOLD) {
        return Err(Error::NoBaselineCorrelation(before));
    }
    let mut union: Vec<usize> = [stat.block(), theta].concat();
    union.sort_unstable();
    let local = |i: &usize| union.binary_search(i).expect("axis in union");
    let marginal = dist.project(&union);
    let moved = stat.moved_to(stat.block().iter().map(local).collect());
    let pushed = apply_statistic(&marginal, &moved, true)?;
    // theta occupies every axis but the appended last one
    let out = pushed.axis_count() - 1;
    let after = block_information(&pushed, &[vec![out], (0..out).collect()]);
    Ok(SufficiencyParts { after, before })
}

/// n-partite information after applying each statistic in turn (replacing
/// its block), starting with the untouched value. Every statistic's block
/// must equal a distinct block of the partition.
pub fn npartite_processing_chain(
    dist: &JointDistribution,
    partition: &Partition,
    stats: &[Statistic],
) -> Result<Vec<f64>> {
    partition.check_for(dist)?;
    let mut owner = vec![None; partition.block_count()];
    for (s, stat) in stats.iter().enumerate() {
        stat.check_against(dist)?;
        let mut block = stat.block().to_vec();
        block.sort_unstable();
        let k = partition
            .blocks()
            .iter()
            .position(|b| *b == block)
            .ok_or_else(|| {
                Error::BlockMismatch(format!(
                    "statistic {s} acts on {block:?}, not a partition block"
                ))
            })?;
        if owner[k].replace(s).is_some() {
            return Err(Error::BlockMismatch(format!(
                "two statistics act on block {k}"
            )));
        }
    }
    let mut named: Vec<Vec<String>> = name_blocks(dist, partition.blocks());
    let mut current = dist.clone();
    let mut values = vec![block_information(&current, partition.blocks())];
    for stat in stats {
        let names: Vec<&str> = stat
            .block()
            .iter()
            .map(|&i| dist.axes()[i].name())
            .collect();
        let positions = resolve(&current, &names)?;
        current = apply_statistic(&current, &stat.moved_to(positions), true)?;
        let mut sorted = stat.block().to_vec();
        sorted.sort_unstable();
        let k = partition
            .blocks()
            .iter()
            .position(|b| *b == sorted)
            .expect("checked above");
        named[k] = vec![stat.output().name().to_string()];
        values.push(block_information(
            &current,
            &resolve_blocks(&current, &named)?,
        ));
    }
    Ok(values)
}

/// Ratio of the n-partite information after applying all statistics to that
/// before. Blocks without a statistic are left alone.
pub fn npartite_sufficiency(
    dist: &JointDistribution,
    partition: &Partition,
    stats: &[Statistic],
) -> Result<f64> {
    partition.check_for(dist)?;
    let before = block_information(dist, partition.blocks());
    if !(before > BASELINE_THRESHOLD) {
        return Err(Error::NoBaselineCorrelation(before));
    }
    let chain = npartite_processing_chain(dist, partition, stats)?;
    Ok(clip_ratio(chain[chain.len() - 1] / before))
}

/// n-partite information of `(f(X1, .., Xm); X(m+1); ..; Xn)` where the
/// statistic's block is the union of the first `m >= 2` partition blocks and
/// at least one block remains.
pub fn joint_processed_information(
    dist: &JointDistribution,
    partition: &Partition,
    joint_stat: &Statistic,
) -> Result<f64> {
    partition.check_for(dist)?;
    joint_stat.check_against(dist)?;
    let mut domain = joint_stat.block().to_vec();
    domain.sort_unstable();
    let mut prefix = Vec::new();
    let mut merged = None;
    for (k, block) in partition.blocks().iter().enumerate() {
        prefix.extend_from_slice(block);
        prefix.sort_unstable();
        if prefix == domain {
            merged = Some(k + 1);
            break;
        }
        if prefix.len() >= domain.len() {
            break;
        }
    }
    let m = merged.ok_or_else(|| {
        Error::BlockMismatch(format!(
            "{domain:?} is not a union of leading partition blocks"
        ))
    })?;
    if m < 2 || m >= partition.block_count() {
        return Err(Error::BlockMismatch(format!(
            "joint statistic merges {m} of {} blocks; need 2 <= m < n",
            partition.block_count()
        )));
    }
    let rest = &partition.blocks()[m..];
    let mut named = vec![vec![joint_stat.output().name().to_string()]];
    named.extend(name_blocks(dist, rest));
    let pushed = apply_statistic(dist, joint_stat, true)?;
    Ok(block_information(
        &pushed,
        &resolve_blocks(&pushed, &named)?,
    ))
}

/// Ratio of [`joint_processed_information`] to the n-partite information.
pub fn joint_sufficiency(
    dist: &JointDistribution,
    partition: &Partition,
    joint_stat: &Statistic,
) -> Result<f64> {
    partition.check_for(dist)?;
    let before = block_information(dist, partition.blocks());
    let after = joint_processed_information(dist, partition, joint_stat)?;
    if !(before > BASELINE_THRESHOLD) {
        return Err(Error::NoBaselineCorrelation(before));
    }
    Ok(clip_ratio(after / before))
}

fn clip_ratio(ratio: f64) -> f64 {
    if ratio > 1.0 && ratio <= 1.0 + CLIP_TOLERANCE {
        1.0
    } else {
        ratio.max(0.0)
    }
}

fn name_blocks(dist: &JointDistribution, blocks: &[Vec<usize>]) -> Vec<Vec<String>> {
    blocks
        .iter()
        .map(|b| {
            b.iter()
                .map(|&i| dist.axes()[i].name().to_string())
                .collect()
        })
        .collect()
}

fn resolve(dist: &JointDistribution, names: &[&str]) -> Result<Vec<usize>> {
    names
        .iter()
        .map(|n| {
            dist.axis_index(n)
                .ok_or_else(|| Error::BlockMismatch(format!("axis `{n}` no longer present")))
        })
        .collect()
}

fn resolve_blocks(dist: &JointDistribution, named: &[Vec<String>]) -> Result<Vec<Vec<usize>>> {
    named
        .iter()
        .map(|b| resolve(dist, &b.iter().map(String::as_str).collect::<Vec<_>>()))
        .collect()
}

/// Posterior ratio `p(theta1 | x) / p(theta2 | x)` of one observation cell.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorRatio {
    /// One label per observation axis, in axis order.
    pub labels: Vec<String>,
    pub ratio: f64,
    /// Marginal probability `p(x)`.
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorRatios {
    pub observation_axes: Vec<usize>,
    pub theta_labels: [String; 2],
    pub entries: Vec<PosteriorRatio>,
}

impl PosteriorRatios {
    /// Distinct ratio values with the total mass carrying each, sorted by
    /// ratio. Ratios within `rel_tol` (relative) are merged.
    pub fn classes(&self, rel_tol: f64) -> Vec<(f64, f64)> {
        let mut pairs: Vec<(f64, f64)> = self.entries.iter().map(|e| (e.ratio, e.mass)).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut out: Vec<(f64, f64)> = Vec::new();
        for (r, m) in pairs {
            match out.last_mut() {
                Some((last, mass)) if same_ratio(*last, r, rel_tol) => *mass += m,
                _ => out.push((r, m)),
            }
        }
        out
    }
}

fn same_ratio(a: f64, b: f64, rel_tol: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a - b).abs() <= rel_tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Posterior ratios for a binary parameter block over every joint label of
/// the remaining (observation) axes. `+inf` where `p(theta2 | x) = 0`.
pub fn posterior_ratio(dist: &JointDistribution, theta: &[usize]) -> Result<PosteriorRatios> {
    check_disjoint(dist, &[theta], 1)?;
    let cards = dist.cards();
    let theta_size: usize = theta.iter().map(|&i| cards[i]).product();
    if theta_size != 2 {
        return Err(Error::NotBinaryTheta(theta_size));
    }
    let observation: Vec<usize> = (0..dist.axis_count())
        .filter(|i| !theta.contains(i))
        .collect();
    let order: Vec<usize> = observation.iter().chain(theta).copied().collect();
    let table = tensor::marginal(dist.probs(), &cards, &order);
    let theta_labels = theta_joint_labels(dist, theta);
    let obs_cards: Vec<usize> = observation.iter().map(|&i| cards[i]).collect();
    let mut coords = vec![0; obs_cards.len()];
    let mut entries = Vec::with_capacity(table.len() / 2);
    for (x, pair) in table.chunks_exact(2).enumerate() {
        tensor::unravel(x, &obs_cards, &mut coords);
        let labels: Vec<String> = observation
            .iter()
            .zip(&coords)
            .map(|(&i, &c)| dist.axes()[i].labels()[c].clone())
            .collect();
        let mass = pair[0] + pair[1];
        if !(mass > 0.0) {
            return Err(Error::ZeroMarginal(labels.join(",")));
        }
        let ratio = if pair[1] > 0.0 {
            pair[0] / pair[1]
        } else {
            f64::INFINITY
        };
        entries.push(PosteriorRatio {
            labels,
            ratio,
            mass,
        });
    }
    Ok(PosteriorRatios {
        observation_axes: observation,
        theta_labels,
        entries,
    })
}

fn theta_joint_labels(dist: &JointDistribution, theta: &[usize]) -> [String; 2] {
    let cards: Vec<usize> = theta
        .iter()
        .map(|&i| dist.axes()[i].cardinality())
        .collect();
    let mut coords = vec![0; cards.len()];
    [0, 1].map(|cell| {
        tensor::unravel(cell, &cards, &mut coords);
        theta
            .iter()
            .zip(&coords)
            .map(|(&i, &c)| dist.axes()[i].labels()[c].as_str())
            .collect::<Vec<_>>()
            .join(",")
    })
}
