//! Coset-leader tables for minimum-conditional-entropy decoding.

use crate::gf2::LinearCode;

use super::packed::{columns, lex_key, pack_code, syndrome_of, HcTable};
use super::DecoderError;

/// Largest number of parity rows (syndrome bits) a table will cover.
pub const MAX_SYNDROME_BITS: usize = 24;

/// For every syndrome of a code, the word of least `H_c` with that syndrome,
/// ties going to the lexicographically least word.
///
/// Built by walking joint types in increasing `H_c`; each group of equal `H_c`
/// is visited in lexicographic order, and the first word to reach a syndrome
/// becomes its leader. The walk stops once every syndrome has a leader, so only
/// the low-entropy corner of `F2^n` is generated.
#[derive(Clone, Debug)]
pub struct LeaderTable {
    n: usize,
    cols: Vec<u64>,
    leaders: Vec<u64>,
}

impl LeaderTable {
    pub fn new(code: &LinearCode) -> Result<Self, DecoderError> {
        let n = code.len();
        let hc = HcTable::new(n)?;
        let rows = pack_code(&code.dual());
        if rows.len() > MAX_SYNDROME_BITS {
            return Err(DecoderError::SyndromeTooWide {
                bits: rows.len(),
                cap: MAX_SYNDROME_BITS,
            });
        }
        let cols = columns(&rows, n);
        let total = 1usize << rows.len();
        let mut leaders = vec![u64::MAX; total];
        let mut filled = 0usize;

        let half = hc.half();
        let side = half + 1;
        let mut type_ids: Vec<usize> = (0..side * side).collect();
        type_ids.sort_by_key(|&i| hc.rank_of_index(i));

        let mut start = 0;
        while start < type_ids.len() && filled < total {
            let rank = hc.rank_of_index(type_ids[start]);
            let end = type_ids[start..]
                .iter()
                .position(|&i| hc.rank_of_index(i) != rank)
                .map_or(type_ids.len(), |p| start + p);
            let mut group = Vec::new();
            for &id in &type_ids[start..end] {
                let (a, b) = (id / side, id % side);
                for lo in combinations(half, a) {
                    for hi in combinations(half, b) {
                        group.push(lo | (hi << half));
                    }
                }
            }
            group.sort_unstable_by_key(|&w| lex_key(w));
            for w in group {
                let s = syndrome_of(&cols, w) as usize;
                if leaders[s] == u64::MAX {
                    leaders[s] = w;
                    filled += 1;
                }
            }
            start = end;
        }
        debug_assert_eq!(filled, total);
        Ok(Self { n, cols, leaders })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Syndrome of `w` under the code's canonical parity check, packed.
    pub fn syndrome(&self, w: u64) -> u64 {
        syndrome_of(&self.cols, w)
    }

    pub fn leader(&self, syndrome: u64) -> u64 {
        self.leaders[syndrome as usize]
    }

    /// The error estimate for a received error pattern's syndrome class.
    pub fn estimate(&self, w: u64) -> u64 {
        self.leader(self.syndrome(w))
    }
}

/// All `width`-bit masks with exactly `k` ones, increasing.
fn combinations(width: usize, k: usize) -> impl Iterator<Item = u64> {
    let limit = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
    let mut next = if k == 0 {
        Some(0u64)
    } else if k > width {
        None
    } else if k == 64 {
        Some(u64::MAX)
    } else {
        Some((1u64 << k) - 1)
    };
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 || cur == limit {
            None
        } else {
            // Gosper's hack
            let c = cur & cur.wrapping_neg();
            let r = cur.wrapping_add(c);
            if r == 0 {
                None
            } else {
                let n = (((r ^ cur) >> 2) / c) | r;
                (n <= limit).then_some(n)
            }
        };
        Some(cur)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(5, 0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(combinations(5, 2).count(), 10);
        assert_eq!(combinations(5, 5).collect::<Vec<_>>(), vec![0b11111]);
        assert_eq!(combinations(32, 2).count(), 496);
        assert!(combinations(5, 2).all(|m| m.count_ones() == 2 && m < 32));
        assert_eq!(combinations(3, 4).count(), 0);
    }
}
