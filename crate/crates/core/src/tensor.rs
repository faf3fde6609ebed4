//! Row-major index arithmetic shared by the distribution and functional code.

pub(crate) fn cell_count(cards: &[usize]) -> usize {
    cards.iter().product()
}

pub(crate) fn strides(cards: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; cards.len()];
    for i in (0..cards.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * cards[i + 1];
    }
    strides
}

/// Decodes a flat row-major index into per-axis coordinates.
pub(crate) fn unravel(mut cell: usize, cards: &[usize], out: &mut [usize]) {
    for i in (0..cards.len()).rev() {
        out[i] = cell % cards[i];
        cell /= cards[i];
    }
}

/// For every cell of the tensor with shape `cards`, the row-major index of
/// that cell's projection onto `positions` (taken in the given order).
pub(crate) fn projection(cards: &[usize], positions: &[usize]) -> Vec<usize> {
    let sub_cards: Vec<usize> = positions.iter().map(|&p| cards[p]).collect();
    let sub_strides = strides(&sub_cards);
    let n = cell_count(cards);
    let mut coords = vec![0usize; cards.len()];
    let mut out = Vec::with_capacity(n);
    for cell in 0..n {
        unravel(cell, cards, &mut coords);
        let idx = positions
            .iter()
            .zip(&sub_strides)
            .map(|(&p, &s)| coords[p] * s)
            .sum();
        out.push(idx);
    }
    out
}

/// Sums `probs` onto the axes at `positions`; the result is row-major in
/// the order the positions are listed. Cells are visited in row-major order.
pub(crate) fn marginal(probs: &[f64], cards: &[usize], positions: &[usize]) -> Vec<f64> {
    let size = positions.iter().map(|&p| cards[p]).product();
    let mut out = vec![0.0; size];
    for (&p, idx) in probs.iter().zip(projection(cards, positions)) {
        out[idx] += p;
    }
    out
}
