//! Orderings `g₁,…,g_{v−t}` of `G \ J` and the multiset Ω fed to the
//! constructions.

use thiserror::Error;

use crate::groups::{Elem, FiniteGroup, Subgroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderingError {
    #[error("no ordering with the requested properties exists")]
    Unsatisfiable,
    #[error("lambda is odd but G\\J contains an involution")]
    OddLambdaWithInvolution,
    #[error("odd lambda needs a ±-split ordering")]
    NeedsSplit,
    #[error("tile sizes sum to {found}, expected {expected}")]
    SizeMismatch { found: usize, expected: usize },
    #[error("slice {0} repeats an element")]
    RepeatedElement(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedComplement {
    pub sequence: Vec<Elem>,
    /// The second half lists the negatives of the first half, in order.
    pub plusminus_split: bool,
    /// `gᵢ + gᵢ₊₁ ≠ 0` cyclically.
    pub adjacent_nonzero: bool,
}

impl OrderedComplement {
    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    /// `g_i` with the index taken cyclically, 1-based.
    pub fn g(&self, i: isize) -> Elem {
        let n = self.sequence.len() as isize;
        self.sequence[((i - 1).rem_euclid(n)) as usize]
    }

    /// `{g₁,…,g_{(v−t)/2}}` for split orderings.
    pub fn half(&self) -> &[Elem] {
        assert!(self.plusminus_split, "half set needs a split ordering");
        &self.sequence[..self.sequence.len() / 2]
    }
}

pub fn ordered_complement(
    g: &FiniteGroup,
    j: &Subgroup,
    want_split: bool,
    want_adjacent_nonzero: bool,
) -> Result<OrderedComplement, OrderingError> {
    ordered_complement_with_lead(g, j, want_split, want_adjacent_nonzero, &[])
}

/// As [`ordered_complement`], with `lead` forced into the first positions.
pub fn ordered_complement_with_lead(
    g: &FiniteGroup,
    j: &Subgroup,
    want_split: bool,
    want_adjacent: bool,
    lead: &[Elem],
) -> Result<OrderedComplement, OrderingError> {
    let pool = j.complement();
    if pool.is_empty() {
        return Err(OrderingError::Unsatisfiable);
    }
    if lead.iter().any(|&x| j.contains(x)) {
        return Err(OrderingError::Unsatisfiable);
    }
    let sequence = if want_split {
        if pool.iter().any(|&x| g.neg(x) == x) {
            return Err(OrderingError::Unsatisfiable);
        }
        let half_len = pool.len() / 2;
        let mut half = Vec::with_capacity(half_len);
        let mut used = vec![false; g.order()];
        if !split_search(g, &pool, half_len, want_adjacent, lead, &mut half, &mut used) {
            return Err(OrderingError::Unsatisfiable);
        }
        let mut seq = half.clone();
        seq.extend(half.iter().map(|&x| g.neg(x)));
        seq
    } else {
        let mut seq = Vec::with_capacity(pool.len());
        let mut used = vec![false; g.order()];
        if !plain_search(g, &pool, want_adjacent, lead, &mut seq, &mut used) {
            return Err(OrderingError::Unsatisfiable);
        }
        seq
    };
    Ok(OrderedComplement {
        sequence,
        plusminus_split: want_split,
        adjacent_nonzero: want_adjacent,
    })
}

fn adjacent_ok(g: &FiniteGroup, seq: &[Elem]) -> bool {
    let n = seq.len();
    (0..n).all(|i| g.add(seq[i], seq[(i + 1) % n]) != 0)
}

fn split_search(
    g: &FiniteGroup,
    pool: &[Elem],
    half_len: usize,
    adjacent: bool,
    lead: &[Elem],
    half: &mut Vec<Elem>,
    used: &mut [bool],
) -> bool {
    if half.len() == half_len {
        if !adjacent {
            return true;
        }
        let mut seq = half.clone();
        seq.extend(half.iter().map(|&x| g.neg(x)));
        return adjacent_ok(g, &seq);
    }
    let candidates: Vec<Elem> = match lead.get(half.len()) {
        Some(&x) => vec![x],
        None => pool.to_vec(),
    };
    for x in candidates {
        if used[x] || used[g.neg(x)] {
            continue;
        }
        if adjacent {
            if let Some(&prev) = half.last() {
                // Both g_i + g_{i+1} and (-g_i) + (-g_{i+1}) must be nonzero.
                if g.add(prev, x) == 0 || g.add(g.neg(prev), g.neg(x)) == 0 {
                    continue;
                }
            }
        }
        used[x] = true;
        used[g.neg(x)] = true;
        half.push(x);
        if split_search(g, pool, half_len, adjacent, lead, half, used) {
            return true;
        }
        half.pop();
        used[x] = false;
        used[g.neg(x)] = false;
    }
    false
}

fn plain_search(
    g: &FiniteGroup,
    pool: &[Elem],
    adjacent: bool,
    lead: &[Elem],
    seq: &mut Vec<Elem>,
    used: &mut [bool],
) -> bool {
    if seq.len() == pool.len() {
        return !adjacent || adjacent_ok(g, seq);
    }
    let candidates: Vec<Elem> = match lead.get(seq.len()) {
        Some(&x) => vec![x],
        None => pool.to_vec(),
    };
    for x in candidates {
        if used[x] {
            continue;
        }
        if adjacent && seq.last().is_some_and(|&prev| g.add(prev, x) == 0) {
            continue;
        }
        used[x] = true;
        seq.push(x);
        if plain_search(g, pool, adjacent, lead, seq, used) {
            return true;
        }
        seq.pop();
        used[x] = false;
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Omega {
    /// Concatenation of λ/2 copies of the ordering (λ even), or (λ−1)/2
    /// copies followed by the half set (λ odd).
    pub order: Vec<Elem>,
    pub lambda: usize,
    pub half_set: Vec<Elem>,
}

pub fn omega(
    g: &FiniteGroup,
    j: &Subgroup,
    lambda: usize,
    ordering: &OrderedComplement,
) -> Result<Omega, OrderingError> {
    let outside = j.complement();
    let mut order = Vec::with_capacity(lambda * outside.len() / 2);
    let mut half_set = Vec::new();
    if lambda.is_multiple_of(2) {
        for _ in 0..lambda / 2 {
            order.extend_from_slice(&ordering.sequence);
        }
    } else {
        if outside.iter().any(|&x| g.neg(x) == x) {
            return Err(OrderingError::OddLambdaWithInvolution);
        }
        if !ordering.plusminus_split {
            return Err(OrderingError::NeedsSplit);
        }
        for _ in 0..(lambda - 1) / 2 {
            order.extend_from_slice(&ordering.sequence);
        }
        half_set = ordering.half().to_vec();
        order.extend_from_slice(&half_set);
    }
    let cover = pm_cover(g, &order);
    for x in g.elements() {
        let expected = if j.contains(x) { 0 } else { lambda };
        assert_eq!(cover[x], expected, "±Ω misses element {x}");
    }
    Ok(Omega { order, lambda, half_set })
}

/// `occ(x) + occ(-x)` for every element (involutions counted twice).
pub fn pm_cover(g: &FiniteGroup, elems: &[Elem]) -> Vec<usize> {
    let mut occ = vec![0usize; g.order()];
    for &x in elems {
        occ[x] += 1;
    }
    g.elements().map(|x| occ[x] + occ[g.neg(x)]).collect()
}

/// Consecutive slices of `order` with the given sizes; each slice must be
/// repeat-free.
pub fn slice_lists(order: &[Elem], sizes: &[usize]) -> Result<Vec<Vec<Elem>>, OrderingError> {
    let total: usize = sizes.iter().sum();
    if total != order.len() {
        return Err(OrderingError::SizeMismatch { found: total, expected: order.len() });
    }
    let mut out = Vec::with_capacity(sizes.len());
    let mut at = 0;
    for (i, &s) in sizes.iter().enumerate() {
        let slice = order[at..at + s].to_vec();
        let mut sorted = slice.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(OrderingError::RepeatedElement(i));
        }
        out.push(slice);
        at += s;
    }
    Ok(out)
}
