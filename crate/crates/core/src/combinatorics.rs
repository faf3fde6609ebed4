//! Counting and enumerating set partitions of axis indices.

use crate::error::{Error, Result};
use crate::partition::Partition;

/// Largest `N` accepted by [`stirling2`]; `20^20` still fits the `i128` terms.
pub const STIRLING_MAX: usize = 20;
/// Largest `N` accepted by [`enumerate_partitions`].
pub const ENUMERATION_MAX: usize = 12;

/// Stirling number of the second kind, from the alternating binomial sum
///
/// `S(N, n) = (1/n!) sum_{i=0}^{n-1} (-1)^i C(n, i) (n - i)^N`
///
/// evaluated in exact integer arithmetic.
pub fn stirling2(big_n: usize, n: usize) -> Result<u64> {
    if n == 0 || n > big_n || big_n > STIRLING_MAX {
        return Err(Error::OutOfRange(format!(
            "stirling2 needs 1 <= n <= N <= {STIRLING_MAX}, got N={big_n}, n={n}"
        )));
    }
    let binom = pascal_row(n);
    let mut sum: i128 = 0;
    for (i, &b) in binom.iter().enumerate().take(n) {
        let term = b * (n as i128 - i as i128).pow(big_n as u32);
        if i % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let factorial: i128 = (1..=n as i128).product();
    debug_assert_eq!(sum % factorial, 0);
    Ok((sum / factorial) as u64)
}

/// Row `n` of Pascal's triangle built by the additive recurrence.
fn pascal_row(n: usize) -> Vec<i128> {
    let mut row = vec![1i128];
    for _ in 0..n {
        let mut next = vec![1i128; row.len() + 1];
        for j in 1..row.len() {
            next[j] = row[j - 1] + row[j];
        }
        row = next;
    }
    row
}

/// All partitions of `{0, .., N-1}` into exactly `n` blocks.
///
/// Blocks are ordered by least element and partitions come out in
/// lexicographic order of their restricted growth strings.
pub fn enumerate_partitions(big_n: usize, n: usize) -> Result<Vec<Partition>> {
    if n == 0 || n > big_n || big_n > ENUMERATION_MAX {
        return Err(Error::OutOfRange(format!(
            "enumerate_partitions needs 1 <= n <= N <= {ENUMERATION_MAX}, got N={big_n}, n={n}"
        )));
    }
    let mut out = Vec::new();
    let mut rgs = vec![0usize; big_n];
    grow(&mut rgs, 1, 1, n, &mut out);
    Ok(out)
}

/// Every partition of `{0, .., N-1}`, grouped by block count `1..=N`.
pub fn enumerate_all_partitions(big_n: usize) -> Result<Vec<Partition>> {
    let mut all = Vec::new();
    for n in 1..=big_n {
        all.extend(enumerate_partitions(big_n, n)?);
    }
    Ok(all)
}

fn grow(rgs: &mut [usize], pos: usize, used: usize, target: usize, out: &mut Vec<Partition>) {
    let len = rgs.len();
    if pos == len {
        if used == target {
            out.push(from_rgs(rgs, target));
        }
        return;
    }
    // not enough elements left to open the remaining blocks
    if target - used > len - pos {
        return;
    }
    for block in 0..used {
        rgs[pos] = block;
        grow(rgs, pos + 1, used, target, out);
    }
    if used < target {
        rgs[pos] = used;
        grow(rgs, pos + 1, used + 1, target, out);
    }
}

fn from_rgs(rgs: &[usize], blocks: usize) -> Partition {
    let mut out = vec![Vec::new(); blocks];
    for (i, &b) in rgs.iter().enumerate() {
        out[b].push(i);
    }
    Partition::new(out, rgs.len()).expect("restricted growth string is a partition")
}

/// Set partitions of an arbitrary index list, with `min_blocks..` blocks.
/// Blocks keep the relative order of `items`.
pub(crate) fn partitions_of(items: &[usize], min_blocks: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    if items.is_empty() {
        return out;
    }
    let mut rgs = vec![0usize; items.len()];
    fn rec(
        items: &[usize],
        rgs: &mut [usize],
        pos: usize,
        used: usize,
        min_blocks: usize,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        if pos == items.len() {
            if used >= min_blocks {
                let mut blocks = vec![Vec::new(); used];
                for (i, &b) in rgs.iter().enumerate() {
                    blocks[b].push(items[i]);
                }
                out.push(blocks);
            }
            return;
        }
        for b in 0..=used {
            rgs[pos] = b;
            rec(items, rgs, pos + 1, used.max(b + 1), min_blocks, out);
        }
    }
    rec(items, &mut rgs, 1, 1, min_blocks, &mut out);
    out
}

/// All orderings of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if current.len() == used.len() {
            out.push(current.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                current.push(i);
                rec(current, used, out);
                current.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}
