//! Single-limb word helpers for lengths up to 64.

use crate::gf2::{BitWord, LinearCode};
use crate::types::{conditional_entropy, TypePair};

use super::DecoderError;

pub(crate) const MAX_PACKED: usize = 64;

pub(crate) fn pack(w: &BitWord) -> u64 {
    w.to_u64().expect("word fits in one limb")
}

pub(crate) fn pack_code(code: &LinearCode) -> Vec<u64> {
    code.basis().iter().map(pack).collect()
}

/// Key whose numeric order is the lexicographic order of the bit string.
pub(crate) fn lex_key(w: u64) -> u64 {
    w.reverse_bits()
}

/// `H_c` of every joint type, plus a rank that orders types by `H_c` with
/// numerically equal values sharing a rank.
#[derive(Clone, Debug)]
pub(crate) struct HcTable {
    half: usize,
    first_mask: u64,
    second_mask: u64,
    ranks: Vec<u16>,
}

/// Values closer than this are treated as the same `H_c`.
const TIE_TOLERANCE: f64 = 1e-12;

impl HcTable {
    pub(crate) fn new(n: usize) -> Result<Self, DecoderError> {
        if n < 2 || n % 2 != 0 {
            return Err(DecoderError::OddLength(n));
        }
        if n > MAX_PACKED {
            return Err(DecoderError::TooLong { n, cap: MAX_PACKED });
        }
        let half = n / 2;
        let first_mask = (1u64 << half) - 1;
        let second_mask = if n == 64 { !first_mask } else { ((1u64 << n) - 1) & !first_mask };
        let side = half + 1;
        let mut values = Vec::with_capacity(side * side);
        for a in 0..side {
            for b in 0..side {
                let t = TypePair::new(half, a, b).expect("counts within block");
                values.push(conditional_entropy(&t));
            }
        }
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        let mut ranks = vec![0u16; values.len()];
        let mut rank = 0u16;
        for w in 0..order.len() {
            if w > 0 && values[order[w]] - values[order[w - 1]] > TIE_TOLERANCE {
                rank += 1;
            }
            ranks[order[w]] = rank;
        }
        Ok(Self {
            half,
            first_mask,
            second_mask,
            ranks,
        })
    }

    #[inline]
    pub(crate) fn type_index(&self, w: u64) -> usize {
        let a = (w & self.first_mask).count_ones() as usize;
        let b = (w & self.second_mask).count_ones() as usize;
        a * (self.half + 1) + b
    }

    #[inline]
    pub(crate) fn rank(&self, w: u64) -> u16 {
        self.ranks[self.type_index(w)]
    }

    pub(crate) fn half(&self) -> usize {
        self.half
    }

    pub(crate) fn rank_of_index(&self, idx: usize) -> u16 {
        self.ranks[idx]
    }
}

/// Column `j` of a parity-check matrix as a bit mask over its rows.
pub(crate) fn columns(rows: &[u64], n: usize) -> Vec<u64> {
    (0..n)
        .map(|j| {
            rows.iter()
                .enumerate()
                .fold(0u64, |acc, (i, r)| acc | ((r >> j) & 1) << i)
        })
        .collect()
}

#[inline]
pub(crate) fn syndrome_of(cols: &[u64], mut w: u64) -> u64 {
    let mut s = 0;
    while w != 0 {
        let j = w.trailing_zeros() as usize;
        s ^= cols[j];
        w &= w - 1;
    }
    s
}

/// Visits every element of the span of `basis`, in Gray-code order.
pub(crate) fn for_each_in_span(basis: &[u64], mut f: impl FnMut(u64) -> bool) -> bool {
    let mut acc = 0u64;
    if f(acc) {
        return true;
    }
    let count = 1u64 << basis.len();
    for i in 1..count {
        acc ^= basis[i.trailing_zeros() as usize];
        if f(acc) {
            return true;
        }
    }
    false
}
