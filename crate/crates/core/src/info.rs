//! Scalar information functionals, all in nats.
//!
//! Sums run over cells in row-major order with `0 log 0 = 0`, so every value is
//! a deterministic function of the probability tensor and the axis sets. The
//! correlation functionals (total correlation, n-partite information, mutual
//! and conditional mutual information) are relative entropies against a
//! product of marginals; by dominance those references are positive wherever
//! the joint is, so the values are always finite.

use crate::dist::JointDistribution;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::partition::Partition;
use crate::tensor;

/// `-sum p ln p` over the cells of the distribution.
pub fn shannon_entropy(dist: &JointDistribution) -> f64 {
    entropy_of(dist.probs())
}

pub(crate) fn entropy_of(probs: &[f64]) -> f64 {
    -probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.ln())
        .sum::<f64>()
}

/// The divergence `D(p || q) = sum p ln(p / q)`, which is nonnegative.
///
/// This is the negative of the entropy that MaxEnt updating maximizes. Returns
/// `+inf` when `q` vanishes somewhere `p` does not.
pub fn relative_entropy(p: &JointDistribution, q: &JointDistribution) -> Result<f64> {
    if !p.same_axes(q) {
        return Err(Error::AxisMismatch);
    }
    let mut total = 0.0;
    for (&a, &b) in p.probs().iter().zip(q.probs()) {
        if a > 0.0 {
            if b <= 0.0 {
                return Ok(f64::INFINITY);
            }
            total += a * (a / b).ln();
        }
    }
    Ok(total)
}

/// Relative entropy between the joint and the product of its single-axis marginals.
pub fn total_correlation(dist: &JointDistribution) -> f64 {
    let blocks: Vec<Vec<usize>> = (0..dist.axis_count()).map(|i| vec![i]).collect();
    block_information(dist, &blocks)
}

/// Relative entropy between the joint and the product of the block marginals.
pub fn npartite_information(dist: &JointDistribution, partition: &Partition) -> Result<f64> {
    partition.check_for(dist)?;
    Ok(block_information(dist, partition.blocks()))
}

/// n-partite information for many partitions of the same distribution.
pub fn npartite_information_batch(
    dist: &JointDistribution,
    partitions: &[Partition],
    exec: Execution,
) -> Result<Vec<f64>> {
    for p in partitions {
        p.check_for(dist)?;
    }
    Ok(exec.map(partitions, |p| block_information(dist, p.blocks())))
}

/// Mutual information between two blocks that together cover every axis.
pub fn mutual_information(
    dist: &JointDistribution,
    block_a: &[usize],
    block_b: &[usize],
) -> Result<f64> {
    let partition = Partition::new(vec![block_a.to_vec(), block_b.to_vec()], dist.axis_count())?;
    Ok(block_information(dist, partition.blocks()))
}

/// `I[A; B | Z]`. Axes outside `A`, `B` and `Z` are summed out first; an empty
/// `given` reduces to the mutual information of the `A`,`B` marginal.
pub fn conditional_mutual_information(
    dist: &JointDistribution,
    block_a: &[usize],
    block_b: &[usize],
    given: &[usize],
) -> Result<f64> {
    check_disjoint(dist, &[block_a, block_b, given], 2)?;
    if given.is_empty() {
        return Ok(block_information(
            dist,
            &[block_a.to_vec(), block_b.to_vec()],
        ));
    }
    let mut union: Vec<usize> = [block_a, block_b, given].concat();
    union.sort_unstable();
    let local = |block: &[usize]| -> Vec<usize> {
        block
            .iter()
            .map(|i| union.binary_search(i).expect("axis in union"))
            .collect()
    };
    let cards: Vec<usize> = union
        .iter()
        .map(|&i| dist.axes()[i].cardinality())
        .collect();
    let joint = tensor::marginal(dist.probs(), &dist.cards(), &union);
    let az = [local(block_a), local(given)].concat();
    let bz = [local(block_b), local(given)].concat();
    let z = local(given);
    let (p_az, i_az) = marginal_with_index(&joint, &cards, &az);
    let (p_bz, i_bz) = marginal_with_index(&joint, &cards, &bz);
    let (p_z, i_z) = marginal_with_index(&joint, &cards, &z);
    let mut total = 0.0;
    for (cell, &p) in joint.iter().enumerate() {
        if p > 0.0 {
            total += p * ((p * p_z[i_z[cell]]) / (p_az[i_az[cell]] * p_bz[i_bz[cell]])).ln();
        }
    }
    Ok(total)
}

/// The `n - 1` mutual informations `I[X1 x ... x X(k-1); Xk]` for `k = 2..n`,
/// in the partition's block order. Their sum is the n-partite information.
pub fn chain_rule_terms(dist: &JointDistribution, partition: &Partition) -> Result<Vec<f64>> {
    partition.check_for(dist)?;
    if partition.block_count() < 2 {
        return Err(Error::InvalidPartition(
            "chain rule needs at least two blocks".into(),
        ));
    }
    let blocks = partition.blocks();
    let mut head: Vec<usize> = blocks[0].clone();
    let mut terms = Vec::with_capacity(blocks.len() - 1);
    for block in &blocks[1..] {
        terms.push(block_information(dist, &[head.clone(), block.clone()]));
        head.extend_from_slice(block);
    }
    Ok(terms)
}

/// Block entropies and the joint entropy of a partitioned distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyDecomposition {
    pub block_entropies: Vec<f64>,
    pub joint_entropy: f64,
}

impl EntropyDecomposition {
    /// `sum_k S_k - S_joint`, which equals the n-partite information.
    pub fn information(&self) -> f64 {
        self.block_entropies.iter().sum::<f64>() - self.joint_entropy
    }
}

pub fn entropy_decomposition(
    dist: &JointDistribution,
    partition: &Partition,
) -> Result<EntropyDecomposition> {
    partition.check_for(dist)?;
    let cards = dist.cards();
    let block_entropies = partition
        .blocks()
        .iter()
        .map(|b| entropy_of(&tensor::marginal(dist.probs(), &cards, b)))
        .collect();
    Ok(EntropyDecomposition {
        block_entropies,
        joint_entropy: shannon_entropy(dist),
    })
}

/// Causation entropy `C(source -> target | conditioning) = I[target; source | conditioning]`.
pub fn causation_entropy(
    dist: &JointDistribution,
    target: &[usize],
    source: &[usize],
    conditioning: &[usize],
) -> Result<f64> {
    conditional_mutual_information(dist, target, source, conditioning)
}

/// Transfer entropy from `source` into `target_future`, conditioned on the
/// declared history axes of the target.
pub fn transfer_entropy(
    dist: &JointDistribution,
    target_future: &[usize],
    source: &[usize],
    target_history: &[usize],
) -> Result<f64> {
    causation_entropy(dist, target_future, source, target_history)
}

/// `min(S[A], S[B])`, an upper bound on `I[A; B]`.
pub fn mi_upper_bound(
    dist: &JointDistribution,
    block_a: &[usize],
    block_b: &[usize],
) -> Result<f64> {
    let partition = Partition::new(vec![block_a.to_vec(), block_b.to_vec()], dist.axis_count())?;
    let cards = dist.cards();
    let [a, b] = [0, 1].map(|k| {
        entropy_of(&tensor::marginal(
            dist.probs(),
            &cards,
            &partition.blocks()[k],
        ))
    });
    Ok(a.min(b))
}

/// `sum p ln(p / prod_k p_k)` over the marginal on the union of `blocks`.
///
/// Blocks must be disjoint, nonempty and index valid axes.
pub(crate) fn block_information(dist: &JointDistribution, blocks: &[Vec<usize>]) -> f64 {
    let mut union: Vec<usize> = blocks.concat();
    union.sort_unstable();
    let full = union.len() == dist.axis_count();
    let owned;
    let (joint, cards): (&[f64], Vec<usize>) = if full {
        (dist.probs(), dist.cards())
    } else {
        owned = tensor::marginal(dist.probs(), &dist.cards(), &union);
        (
            &owned,
            union
                .iter()
                .map(|&i| dist.axes()[i].cardinality())
                .collect(),
        )
    };
    let local: Vec<Vec<usize>> = blocks
        .iter()
        .map(|b| {
            b.iter()
                .map(|i| union.binary_search(i).expect("axis in union"))
                .collect()
        })
        .collect();
    let marginals: Vec<(Vec<f64>, Vec<usize>)> = local
        .iter()
        .map(|b| marginal_with_index(joint, &cards, b))
        .collect();
    let mut total = 0.0;
    for (cell, &p) in joint.iter().enumerate() {
        if p > 0.0 {
            let reference: f64 = marginals.iter().map(|(m, idx)| m[idx[cell]]).product();
            total += p * (p / reference).ln();
        }
    }
    total
}

fn marginal_with_index(
    probs: &[f64],
    cards: &[usize],
    positions: &[usize],
) -> (Vec<f64>, Vec<usize>) {
    let index = tensor::projection(cards, positions);
    let size = positions.iter().map(|&p| cards[p]).product();
    let mut marginal = vec![0.0; size];
    for (&p, &i) in probs.iter().zip(&index) {
        marginal[i] += p;
    }
    (marginal, index)
}

/// Validates pairwise-disjoint axis sets; the first `nonempty` sets must be nonempty.
pub(crate) fn check_disjoint(
    dist: &JointDistribution,
    sets: &[&[usize]],
    nonempty: usize,
) -> Result<()> {
    let mut seen = vec![false; dist.axis_count()];
    for (k, set) in sets.iter().enumerate() {
        dist.check_axes(set)?;
        if k < nonempty && set.is_empty() {
            return Err(Error::OverlappingBlocks(format!("axis set {k} is empty")));
        }
        for &i in set.iter() {
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::OverlappingBlocks(format!(
                    "axis {i} appears in two sets"
                )));
            }
        }
    }
    Ok(())
}
