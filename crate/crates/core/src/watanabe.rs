//! Recursive splitting trees and the branch-point sum of correlations.
//!
//! Splitting the full axis set into blocks, then each block into sub-blocks,
//! and so on, the n-partite informations at the branch points add up to the
//! n-partite information of the leaf partition. When every leaf is a single
//! axis this is the total correlation, whatever the shape of the tree.

use crate::combinatorics::partitions_of;
use crate::dist::JointDistribution;
use crate::error::{Error, Result};
use crate::info::block_information;
use crate::partition::Partition;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchTree {
    block: Vec<usize>,
    children: Vec<BranchTree>,
}

impl BranchTree {
    pub fn leaf(block: Vec<usize>) -> Result<Self> {
        BranchTree::new(block, Vec::new())
    }

    /// A node splitting `block` into `children`, which must be disjoint,
    /// nonempty, at least two, and cover `block` exactly.
    pub fn new(mut block: Vec<usize>, children: Vec<BranchTree>) -> Result<Self> {
        block.sort_unstable();
        if block.is_empty() {
            return Err(Error::InvalidTree("empty block".into()));
        }
        if block.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidTree(format!(
                "block {block:?} repeats an index"
            )));
        }
        if children.len() == 1 {
            return Err(Error::InvalidTree(format!(
                "node {block:?} has a single child"
            )));
        }
        if !children.is_empty() {
            let mut union: Vec<usize> = children
                .iter()
                .flat_map(|c| c.block.iter().copied())
                .collect();
            union.sort_unstable();
            if union != block {
                return Err(Error::InvalidTree(format!(
                    "children of {block:?} cover {union:?}"
                )));
            }
        }
        Ok(BranchTree { block, children })
    }

    /// Root with one leaf per index.
    pub fn flat(indices: Vec<usize>) -> Result<Self> {
        let children = indices
            .iter()
            .map(|&i| BranchTree::leaf(vec![i]))
            .collect::<Result<Vec<_>>>()?;
        BranchTree::new(indices, children)
    }

    pub fn block(&self) -> &[usize] {
        &self.block
    }

    pub fn children(&self) -> &[BranchTree] {
        &self.children
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// True when every leaf holds a single index.
    pub fn is_full(&self) -> bool {
        if self.is_leaf() {
            self.block.len() == 1
        } else {
            self.children.iter().all(BranchTree::is_full)
        }
    }

    pub fn leaves(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<Vec<usize>>) {
        if self.is_leaf() {
            out.push(self.block.clone());
        } else {
            for c in &self.children {
                c.collect_leaves(out);
            }
        }
    }

    /// The partition formed by the leaves, for a tree rooted at `0..axis_count`.
    pub fn leaf_partition(&self, axis_count: usize) -> Result<Partition> {
        Partition::new(self.leaves(), axis_count)
    }

    fn internal_nodes<'a>(&'a self, out: &mut Vec<&'a BranchTree>) {
        if !self.is_leaf() {
            out.push(self);
            for c in &self.children {
                c.internal_nodes(out);
            }
        }
    }
}

/// Sums, over every internal node, the n-partite information of that node's
/// block marginal split by its children.
pub fn watanabe_sum(dist: &JointDistribution, tree: &BranchTree) -> Result<f64> {
    let all: Vec<usize> = (0..dist.axis_count()).collect();
    if tree.block != all {
        return Err(Error::InvalidTree(format!(
            "root block {:?} is not the full axis set 0..{}",
            tree.block,
            dist.axis_count()
        )));
    }
    let mut nodes = Vec::new();
    tree.internal_nodes(&mut nodes);
    Ok(nodes
        .into_iter()
        .map(|node| {
            let blocks: Vec<Vec<usize>> = node.children.iter().map(|c| c.block.clone()).collect();
            block_information(dist, &blocks)
        })
        .sum())
}

/// Every tree over `indices` whose leaves are single indices.
pub fn full_branch_trees(indices: &[usize]) -> Vec<BranchTree> {
    trees(indices, true)
}

/// Every tree over `indices`, including partial trees whose leaves are
/// arbitrary blocks and the bare root leaf.
pub fn branch_trees(indices: &[usize]) -> Vec<BranchTree> {
    trees(indices, false)
}

fn trees(indices: &[usize], full: bool) -> Vec<BranchTree> {
    let mut block = indices.to_vec();
    block.sort_unstable();
    let mut out = Vec::new();
    if block.len() == 1 || !full {
        out.push(BranchTree {
            block: block.clone(),
            children: Vec::new(),
        });
    }
    if block.len() == 1 {
        return out;
    }
    for split in partitions_of(&block, 2) {
        let options: Vec<Vec<BranchTree>> = split.iter().map(|b| trees(b, full)).collect();
        // cartesian product over per-child options
        let mut combos: Vec<Vec<BranchTree>> = vec![Vec::new()];
        for opts in &options {
            let mut next = Vec::with_capacity(combos.len() * opts.len());
            for prefix in &combos {
                for o in opts {
                    let mut c = prefix.clone();
                    c.push(o.clone());
                    next.push(c);
                }
            }
            combos = next;
        }
        for children in combos {
            out.push(BranchTree {
                block: block.clone(),
                children,
            });
        }
    }
    out
}
