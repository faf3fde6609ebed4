//! Brute-force reference implementations used to cross-check the library.
//!
//! Everything here works on a bare `(cards, probs)` table with explicit
//! coordinate tuples and hash maps, and shares no code with the crate.

#![allow(dead_code)]

use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub cards: Vec<usize>,
    pub probs: Vec<f64>,
}

impl Table {
    pub fn new(cards: Vec<usize>, probs: Vec<f64>) -> Self {
        assert_eq!(cards.iter().product::<usize>(), probs.len());
        Table { cards, probs }
    }

    pub fn of(dist: &globcorr::JointDistribution) -> Self {
        Table::new(dist.cards(), dist.probs().to_vec())
    }

    /// All `(coordinates, probability)` pairs; the last axis varies fastest.
    pub fn cells(&self) -> Vec<(Vec<usize>, f64)> {
        let mut out = Vec::with_capacity(self.probs.len());
        let mut coords = vec![0usize; self.cards.len()];
        for &p in &self.probs {
            out.push((coords.clone(), p));
            for axis in (0..coords.len()).rev() {
                coords[axis] += 1;
                if coords[axis] < self.cards[axis] {
                    break;
                }
                coords[axis] = 0;
            }
        }
        out
    }

    pub fn axis_count(&self) -> usize {
        self.cards.len()
    }
}

fn pick(coords: &[usize], axes: &[usize]) -> Vec<usize> {
    axes.iter().map(|&a| coords[a]).collect()
}

pub fn marginal(t: &Table, axes: &[usize]) -> HashMap<Vec<usize>, f64> {
    let mut m = HashMap::new();
    for (c, p) in t.cells() {
        *m.entry(pick(&c, axes)).or_insert(0.0) += p;
    }
    m
}

pub fn entropy_of(axes: &[usize], t: &Table) -> f64 {
    marginal(t, axes)
        .values()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.ln())
        .sum()
}

pub fn entropy(t: &Table) -> f64 {
    let all: Vec<usize> = (0..t.axis_count()).collect();
    entropy_of(&all, t)
}

/// `sum p(x) ln(p(x_B) / prod_k p(x_Bk))` over the union `B` of the blocks.
pub fn block_information(t: &Table, blocks: &[Vec<usize>]) -> f64 {
    let union: Vec<usize> = blocks.iter().flatten().copied().collect();
    let joint = marginal(t, &union);
    let margins: Vec<HashMap<Vec<usize>, f64>> = blocks.iter().map(|b| marginal(t, b)).collect();
    let mut total = 0.0;
    for (c, p) in t.cells() {
        if p <= 0.0 {
            continue;
        }
        let pj = joint[&pick(&c, &union)];
        let prod: f64 = blocks
            .iter()
            .zip(&margins)
            .map(|(b, m)| m[&pick(&c, b)])
            .product();
        total += p * (pj / prod).ln();
    }
    total
}

pub fn total_correlation(t: &Table) -> f64 {
    let singles: Vec<Vec<usize>> = (0..t.axis_count()).map(|i| vec![i]).collect();
    block_information(t, &singles)
}

pub fn mutual_information(t: &Table, a: &[usize], b: &[usize]) -> f64 {
    block_information(t, &[a.to_vec(), b.to_vec()])
}

/// `H(AC) + H(BC) - H(ABC) - H(C)`.
pub fn conditional_mutual_information(t: &Table, a: &[usize], b: &[usize], c: &[usize]) -> f64 {
    let ac: Vec<usize> = a.iter().chain(c).copied().collect();
    let bc: Vec<usize> = b.iter().chain(c).copied().collect();
    let abc: Vec<usize> = a.iter().chain(b).chain(c).copied().collect();
    entropy_of(&ac, t) + entropy_of(&bc, t) - entropy_of(&abc, t) - entropy_of(c, t)
}

pub fn relative_entropy(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .filter(|(&a, _)| a > 0.0)
        .map(|(&a, &b)| {
            if b > 0.0 {
                a * (a / b).ln()
            } else {
                f64::INFINITY
            }
        })
        .sum()
}

/// Table of `(X without block, f(X_block))` or `(X, f(X_block))` when
/// `replace` is false; the new axis comes last.
pub fn push_forward(
    t: &Table,
    block: &[usize],
    out_card: usize,
    f: impl Fn(&[usize]) -> usize,
    replace: bool,
) -> Table {
    let kept: Vec<usize> = (0..t.axis_count())
        .filter(|a| !(replace && block.contains(a)))
        .collect();
    let mut cards: Vec<usize> = kept.iter().map(|&a| t.cards[a]).collect();
    cards.push(out_card);
    let mut acc: HashMap<Vec<usize>, f64> = HashMap::new();
    for (c, p) in t.cells() {
        let mut key = pick(&c, &kept);
        key.push(f(&pick(&c, block)));
        *acc.entry(key).or_insert(0.0) += p;
    }
    let shape = Table::new(cards.clone(), vec![0.0; cards.iter().product()]);
    let probs = shape
        .cells()
        .into_iter()
        .map(|(c, _)| acc.get(&c).copied().unwrap_or(0.0))
        .collect();
    Table::new(cards, probs)
}

/// `p(x | axis = label)` over the remaining axes, by dividing each
/// surviving cell by the column total.
pub fn condition(t: &Table, axis: usize, label: usize) -> Table {
    let mut cards = t.cards.clone();
    cards.remove(axis);
    let column: Vec<f64> = t
        .cells()
        .into_iter()
        .filter(|(c, _)| c[axis] == label)
        .map(|(_, p)| p)
        .collect();
    let total: f64 = column.iter().sum();
    Table::new(cards, column.into_iter().map(|p| p / total).collect())
}

/// Set partitions of `items` by inserting each item into an existing block
/// or a fresh one.
pub fn set_partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let Some((&last, rest)) = items.split_last() else {
        return vec![vec![]];
    };
    let mut out = Vec::new();
    for smaller in set_partitions(rest) {
        for k in 0..smaller.len() {
            let mut p = smaller.clone();
            p[k].push(last);
            out.push(p);
        }
        let mut p = smaller;
        p.push(vec![last]);
        out.push(p);
    }
    out
}

/// Number of set partitions of `big_n` items into `n` blocks, by counting
/// surjections onto `n` labels and dividing out label orderings.
pub fn stirling2_bruteforce(big_n: usize, n: usize) -> u64 {
    if n == 0 {
        return u64::from(big_n == 0);
    }
    let total = (n as u64).pow(big_n as u32);
    let mut surjections = 0u64;
    let mut hit = vec![false; n];
    for code in 0..total {
        hit.iter_mut().for_each(|h| *h = false);
        let mut c = code;
        for _ in 0..big_n {
            hit[(c % n as u64) as usize] = true;
            c /= n as u64;
        }
        if hit.iter().all(|&h| h) {
            surjections += 1;
        }
    }
    let factorial: u64 = (1..=n as u64).product();
    surjections / factorial
}

/// Every composition of `total` into `parts` nonnegative integers.
pub fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut tail in compositions(total - first, parts - 1) {
            tail.insert(0, first);
            out.push(tail);
        }
    }
    out
}

/// Binary-support exponential tilt with mean `target` for values `(0, 1)`
/// under prior `(q0, q1)`: posterior `(1 - target, target)` and multiplier
/// `ln(q1 (1 - target) / (q0 target))`.
pub fn binary_tilt(q0: f64, q1: f64, target: f64) -> ([f64; 2], f64) {
    (
        [1.0 - target, target],
        (q1 * (1.0 - target) / (q0 * target)).ln(),
    )
}
