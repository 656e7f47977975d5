//! Exhaustive construction of the uncorrectable-error set.
//!
//! A word `e` is uncorrectable when some `e + c` with `c ∈ outer \ inner` has
//! `H_c` at most `H_c(e)`. Within one coset of `outer` the candidates split
//! into `2^b` cosets of `inner`; `e` fails iff the smallest `H_c` among the
//! *other* inner cosets is `<= H_c(e)`. Tracking the best and second-best
//! inner coset per outer coset decides every word in two passes over `F2^n`.

use rayon::prelude::*;

use crate::gf2::{BitWord, Echelon};
use crate::types::{enumerate_types, type_class_probability, ChannelSpec, TypePair};

use super::leader::LeaderTable;
use super::packed::{columns, pack, syndrome_of, HcTable};
use super::{DecoderError, NestedCodes};

/// The set `E` of uncorrectable words for a nested pair, with per-type counts.
#[derive(Clone, Debug)]
pub struct ErrorSet {
    n: usize,
    bits: Vec<u64>,
    counts: Vec<u64>,
    hc: HcTable,
}

impl ErrorSet {
    pub(crate) fn compute(codes: &NestedCodes, cap: usize) -> Result<Self, DecoderError> {
        let n = codes.n();
        if n > cap {
            return Err(DecoderError::TooLong { n, cap });
        }
        let hc = HcTable::new(n)?;

        // parity rows of inner⊥ ordered as [extension rows | outer⊥ rows]
        let outer_rows = codes.outer().parity_check().to_vec();
        let mut spanned = outer_rows.clone();
        let mut ext_rows = Vec::new();
        for row in codes.inner().parity_check() {
            let mut trial = spanned.clone();
            trial.push(row.clone());
            if Echelon::new(n, &trial)?.rank() == trial.len() {
                spanned = trial;
                ext_rows.push(row.clone());
            }
        }
        let b = ext_rows.len();
        let a = outer_rows.len();
        let rows: Vec<u64> = ext_rows.iter().chain(&outer_rows).map(pack).collect();
        let cols = columns(&rows, n);
        let low_mask = (1u64 << b) - 1;

        let mut min_rank = vec![u16::MAX; 1usize << (a + b)];
        gray_walk(n, &cols, |w, s| {
            let r = hc.rank(w);
            let slot = &mut min_rank[s as usize];
            if r < *slot {
                *slot = r;
            }
        });

        let outer_cosets = 1usize << a;
        let sub = 1usize << b;
        let mut best1 = vec![u16::MAX; outer_cosets];
        let mut arg1 = vec![0u64; outer_cosets];
        let mut best2 = vec![u16::MAX; outer_cosets];
        for o in 0..outer_cosets {
            for j in 0..sub {
                let v = min_rank[(o << b) | j];
                if v < best1[o] {
                    best2[o] = best1[o];
                    best1[o] = v;
                    arg1[o] = j as u64;
                } else if v < best2[o] {
                    best2[o] = v;
                }
            }
        }

        let words = 1usize << n;
        let mut bits = vec![0u64; words.div_ceil(64)];
        let mut counts = vec![0u64; (hc.half() + 1) * (hc.half() + 1)];
        gray_walk(n, &cols, |w, s| {
            let o = (s >> b) as usize;
            let competitor = if s & low_mask == arg1[o] { best2[o] } else { best1[o] };
            if competitor <= hc.rank(w) {
                bits[(w / 64) as usize] |= 1 << (w % 64);
                counts[hc.type_index(w)] += 1;
            }
        });

        Ok(Self { n, bits, counts, hc })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn contains(&self, e: &BitWord) -> Result<bool, DecoderError> {
        if e.len() != self.n {
            return Err(DecoderError::Gf2(crate::gf2::Gf2Error::LengthMismatch {
                expected: self.n,
                found: e.len(),
            }));
        }
        Ok(self.contains_packed(pack(e)))
    }

    pub(crate) fn contains_packed(&self, w: u64) -> bool {
        (self.bits[(w / 64) as usize] >> (w % 64)) & 1 == 1
    }

    /// Number of uncorrectable words.
    pub fn size(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `Σ_{e ∈ E} Q(e)`, summed word by word.
    pub fn probability(&self, ch: &ChannelSpec) -> f64 {
        let half = self.hc.half();
        let side = half + 1;
        let word_prob: Vec<f64> = (0..side * side)
            .map(|i| {
                let t = TypePair::new(half, i / side, i % side).expect("valid counts");
                ch.word_probability(&t)
            })
            .collect();
        const CHUNK: usize = 1 << 12;
        let partials: Vec<(f64, f64)> = self
            .bits
            .par_chunks(CHUNK / 64)
            .enumerate()
            .map(|(ci, limbs)| {
                let mut acc = Neumaier::default();
                for (li, &limb) in limbs.iter().enumerate() {
                    let base = ((ci * CHUNK / 64 + li) * 64) as u64;
                    let mut l = limb;
                    while l != 0 {
                        let w = base + l.trailing_zeros() as u64;
                        acc.add(word_prob[self.hc.type_index(w)]);
                        l &= l - 1;
                    }
                }
                (acc.sum, acc.comp)
            })
            .collect();
        let mut total = Neumaier::default();
        for (s, c) in partials {
            total.add(s);
            total.add(c);
        }
        total.value()
    }

    /// Fraction of each type class lying in the set.
    pub fn profile(&self) -> ErrorProfile {
        let types = enumerate_types(self.n).expect("even length");
        let entries = types
            .into_iter()
            .map(|t| {
                let size = crate::types::type_class_size(&t);
                let size = num_traits::ToPrimitive::to_f64(&size).expect("n <= 64");
                (t, self.counts[t.index()] as f64 / size)
            })
            .collect();
        ErrorProfile { entries }
    }
}

/// Per-type error ratios `|E ∩ T| / |T|`, in [`enumerate_types`] order.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorProfile {
    entries: Vec<(TypePair, f64)>,
}

impl ErrorProfile {
    pub fn entries(&self) -> &[(TypePair, f64)] {
        &self.entries
    }

    pub fn ratio(&self, t: &TypePair) -> Option<f64> {
        self.entries.get(t.index()).filter(|(u, _)| u == t).map(|&(_, r)| r)
    }

    /// `Σ_t ratio(t) · Q(T_t)`.
    pub fn probability(&self, ch: &ChannelSpec) -> f64 {
        let mut acc = Neumaier::default();
        for (t, ratio) in &self.entries {
            if *ratio > 0.0 {
                acc.add(ratio * type_class_probability(t, ch));
            }
        }
        acc.value()
    }
}

/// Probability that the decoder's residual `e + ê` leaves `inner`, summed
/// exactly over all `2^n` words. Ties resolved by the decoder's own rule, so
/// this never exceeds the uncorrectable-set probability.
pub(crate) fn decoder_failure_probability(
    codes: &NestedCodes,
    ch: &ChannelSpec,
    cap: usize,
) -> Result<f64, DecoderError> {
    let n = codes.n();
    if n > cap {
        return Err(DecoderError::TooLong { n, cap });
    }
    let hc = HcTable::new(n)?;
    let table = LeaderTable::new(codes.outer())?;
    let inner_rows: Vec<u64> = codes.inner().parity_check().iter().map(pack).collect();
    let inner_cols = columns(&inner_rows, n);
    let half = hc.half();
    let side = half + 1;
    let word_prob: Vec<f64> = (0..side * side)
        .map(|i| ch.word_probability(&TypePair::new(half, i / side, i % side).expect("valid counts")))
        .collect();
    const CHUNK: u64 = 1 << 12;
    let words = 1u64 << n;
    let partials: Vec<(f64, f64)> = (0..words.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut acc = Neumaier::default();
            for w in c * CHUNK..((c + 1) * CHUNK).min(words) {
                if syndrome_of(&inner_cols, w ^ table.estimate(w)) != 0 {
                    acc.add(word_prob[hc.type_index(w)]);
                }
            }
            (acc.sum, acc.comp)
        })
        .collect();
    let mut total = Neumaier::default();
    for (s, c) in partials {
        total.add(s);
        total.add(c);
    }
    Ok(total.value())
}

// Visits all 2^n words in Gray-code order with their syndromes.
fn gray_walk(n: usize, cols: &[u64], mut f: impl FnMut(u64, u64)) {
    let mut w = 0u64;
    let mut s = 0u64;
    f(w, s);
    for i in 1u64..(1u64 << n) {
        let j = i.trailing_zeros() as usize;
        w ^= 1 << j;
        s ^= cols[j];
        f(w, s);
    }
}

/// Compensated summation.
#[derive(Default, Clone, Copy, Debug)]
pub(crate) struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neumaier_recovers_small_terms() {
        let mut acc = Neumaier::default();
        acc.add(1.0);
        for _ in 0..10 {
            acc.add(1e-17);
        }
        acc.add(-1.0);
        assert!((acc.value() - 1e-16).abs() < 1e-30);
    }
}
