//! Minimum-conditional-entropy decoding and decoding error probabilities.
//!
//! Decoding is analysed on a nested pair `inner ⊆ outer`: the decoder sees the
//! syndrome of the error under `outer`, returns the candidate of least `H_c`,
//! and the result is harmful only when the residual lands in `outer \ inner`.
//! For phase errors the pair is `C1⊥ ⊆ C2⊥` with `p1` on the first block; for
//! bit errors it is `C2 ⊆ C1` with `p0` on the first block. The functions taking
//! a [`CodePair`] use the phase orientation.

mod error_set;
mod leader;
mod packed;

use rayon::prelude::*;
use thiserror::Error;

use crate::gf2::{BitWord, CodePair, Gf2Error, LinearCode};
use crate::rng;
use crate::types::{ChannelSpec, TypesError};

pub use error_set::{ErrorProfile, ErrorSet};
pub use leader::{LeaderTable, MAX_SYNDROME_BITS};

use packed::{for_each_in_span, lex_key, pack, pack_code, HcTable, MAX_PACKED};

/// Default largest `n` for exhaustive sums over `F2^n`.
pub const DEFAULT_EXHAUSTIVE_CAP: usize = 20;

/// Largest `dim outer` for which competitors are enumerated one by one.
pub const MAX_ENUMERATED_DIM: usize = 30;

const MC_BLOCK: u64 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecoderError {
    #[error("n = {n} exceeds the exhaustive cap {cap}; use monte_carlo_perr instead")]
    TooLong { n: usize, cap: usize },
    #[error("decoding needs an even length of at least 2, got {0}")]
    OddLength(usize),
    #[error("outer code dimension {dim} is too large to enumerate (cap {cap})")]
    OuterTooLarge { dim: usize, cap: usize },
    #[error("syndrome has {bits} bits; leader tables support at most {cap}")]
    SyndromeTooWide { bits: usize, cap: usize },
    #[error("syndrome length {found} does not match the {expected} parity checks")]
    SyndromeLength { expected: usize, found: usize },
    #[error("at least one Monte Carlo trial is required")]
    NoTrials,
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error(transparent)]
    Types(#[from] TypesError),
}

/// Which of the two nested codes a residual fell into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidualClass {
    /// Residual in the inner code: the error is fixed even if mis-estimated.
    Harmless,
    /// Residual in `outer \ inner`: a decoding error.
    Harmful,
}

/// Outcome of decoding one error word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodingVerdict {
    pub error_word: BitWord,
    pub estimated: BitWord,
    /// Whether the error word lies in the uncorrectable set (ties count as
    /// failures).
    pub failed: bool,
    pub residual_class: ResidualClass,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerrMethod {
    Exact,
    MonteCarlo,
}

impl PerrMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            PerrMethod::Exact => "exact",
            PerrMethod::MonteCarlo => "monte_carlo",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerrEstimate {
    pub value: f64,
    pub method: PerrMethod,
    /// Zero for exact sums.
    pub trials: u64,
    /// 95% normal-approximation half-width; zero for exact sums.
    pub ci_halfwidth: f64,
}

impl PerrEstimate {
    fn exact(value: f64) -> Self {
        Self {
            value: value.clamp(0.0, 1.0),
            method: PerrMethod::Exact,
            trials: 0,
            ci_halfwidth: 0.0,
        }
    }
}

/// A nested pair `inner ⊆ outer` of codes of even length `n <= 64`.
#[derive(Clone, Debug)]
pub struct NestedCodes {
    inner: LinearCode,
    outer: LinearCode,
    /// Rows extending the inner basis to an outer basis.
    extension: Vec<BitWord>,
}

impl NestedCodes {
    pub fn new(inner: LinearCode, outer: LinearCode) -> Result<Self, DecoderError> {
        let pair = CodePair::new(inner, outer)?;
        let n = pair.n();
        if n < 2 || n % 2 != 0 {
            return Err(DecoderError::OddLength(n));
        }
        if n > MAX_PACKED {
            return Err(DecoderError::TooLong { n, cap: MAX_PACKED });
        }
        Ok(Self {
            extension: pair.extension().to_vec(),
            inner: pair.c1_dual().clone(),
            outer: pair.c2_dual().clone(),
        })
    }

    /// Phase errors: `C1⊥ ⊆ C2⊥`.
    pub fn phase(pair: &CodePair) -> Result<Self, DecoderError> {
        Self::new(pair.c1_dual().clone(), pair.c2_dual().clone())
    }

    /// Bit errors: `C2 ⊆ C1`.
    pub fn bit(pair: &CodePair) -> Result<Self, DecoderError> {
        Self::new(pair.c2(), pair.c1())
    }

    /// `C1` on its own, with every nonzero codeword counted as harmful.
    pub fn standalone(code: &LinearCode) -> Result<Self, DecoderError> {
        Self::new(LinearCode::zero(code.len()), code.clone())
    }

    pub fn n(&self) -> usize {
        self.outer.len()
    }

    pub fn inner(&self) -> &LinearCode {
        &self.inner
    }

    pub fn outer(&self) -> &LinearCode {
        &self.outer
    }

    fn check_len(&self, e: &BitWord) -> Result<(), DecoderError> {
        if e.len() != self.n() {
            return Err(Gf2Error::LengthMismatch {
                expected: self.n(),
                found: e.len(),
            }
            .into());
        }
        Ok(())
    }

    fn enumerable(&self) -> Result<(), DecoderError> {
        if self.outer.dim() > MAX_ENUMERATED_DIM {
            return Err(DecoderError::OuterTooLarge {
                dim: self.outer.dim(),
                cap: MAX_ENUMERATED_DIM,
            });
        }
        Ok(())
    }

    /// True iff some competitor `c ∈ outer \ inner` has `H_c(e + c) <= H_c(e)`.
    pub fn is_uncorrectable(&self, e: &BitWord) -> Result<bool, DecoderError> {
        self.check_len(e)?;
        self.enumerable()?;
        let hc = HcTable::new(self.n())?;
        Ok(Competitors::new(self).hits(pack(e), &hc))
    }

    /// The least-`H_c` word with the given syndrome under `outer`, ties to the
    /// lexicographically least word.
    pub fn decode(&self, syndrome: &BitWord) -> Result<BitWord, DecoderError> {
        self.enumerable()?;
        let parity = self.outer.parity_check();
        if syndrome.len() != parity.len() {
            return Err(DecoderError::SyndromeLength {
                expected: parity.len(),
                found: syndrome.len(),
            });
        }
        let n = self.n();
        let hc = HcTable::new(n)?;
        // parity rows are in echelon form: set the pivot bits to the syndrome
        let pivots = self.outer.dual().echelon().pivots().to_vec();
        let mut base = 0u64;
        for (i, &p) in pivots.iter().enumerate() {
            if syndrome.get(i) {
                base |= 1 << p;
            }
        }
        let mut best = (u16::MAX, u64::MAX, 0u64);
        for_each_in_span(&pack_code(&self.outer), |c| {
            let w = base ^ c;
            let key = (hc.rank(w), lex_key(w), w);
            if (key.0, key.1) < (best.0, best.1) {
                best = key;
            }
            false
        });
        Ok(BitWord::from_u64(n, best.2))
    }

    /// Decodes the syndrome of `e` and classifies the residual.
    pub fn verdict(&self, e: &BitWord) -> Result<DecodingVerdict, DecoderError> {
        let estimated = self.decode(&self.outer.syndrome(e)?)?;
        let residual = e.xor(&estimated)?;
        let residual_class = if self.inner.contains(&residual)? {
            ResidualClass::Harmless
        } else {
            ResidualClass::Harmful
        };
        Ok(DecodingVerdict {
            failed: self.is_uncorrectable(e)?,
            error_word: e.clone(),
            estimated,
            residual_class,
        })
    }

    pub fn error_set(&self, cap: usize) -> Result<ErrorSet, DecoderError> {
        ErrorSet::compute(self, cap)
    }

    pub fn exact_perr(&self, ch: &ChannelSpec, cap: usize) -> Result<PerrEstimate, DecoderError> {
        Ok(PerrEstimate::exact(self.error_set(cap)?.probability(ch)))
    }

    /// Exact probability that [`NestedCodes::decode`] leaves a residual outside
    /// `inner`. Bounded above by [`NestedCodes::exact_perr`], which also counts
    /// words whose competitor only ties.
    pub fn exact_decoder_failure(&self, ch: &ChannelSpec, cap: usize) -> Result<PerrEstimate, DecoderError> {
        error_set::decoder_failure_probability(self, ch, cap).map(PerrEstimate::exact)
    }

    /// Frequency of uncorrectable words among `trials` channel draws.
    ///
    /// Trials are processed in blocks of 4096, block `i` drawing from substream
    /// `i` of `seed`, so the estimate does not depend on the thread count.
    pub fn monte_carlo_perr(
        &self,
        ch: &ChannelSpec,
        trials: u64,
        seed: u64,
    ) -> Result<PerrEstimate, DecoderError> {
        if trials == 0 {
            return Err(DecoderError::NoTrials);
        }
        self.enumerable()?;
        let n = self.n();
        let hc = HcTable::new(n)?;
        let competitors = Competitors::new(self);
        let blocks = trials.div_ceil(MC_BLOCK);
        let failures: u64 = (0..blocks)
            .into_par_iter()
            .map(|block| {
                let mut rng = rng::substream(seed, block);
                let count = MC_BLOCK.min(trials - block * MC_BLOCK);
                (0..count)
                    .filter(|_| {
                        let e = sample_error(n, ch, &mut rng);
                        competitors.hits(e, &hc)
                    })
                    .count() as u64
            })
            .sum();
        let p = failures as f64 / trials as f64;
        Ok(PerrEstimate {
            value: p,
            method: PerrMethod::MonteCarlo,
            trials,
            ci_halfwidth: 1.96 * (p * (1.0 - p) / trials as f64).sqrt(),
        })
    }
}

/// Draws a channel error word of length `n <= 64`, packed.
pub(crate) fn sample_error<R: rand::Rng + ?Sized>(n: usize, ch: &ChannelSpec, rng: &mut R) -> u64 {
    let half = n / 2;
    let mut e = 0u64;
    for i in 0..n {
        let p = if i < half { ch.p_first() } else { ch.p_second() };
        if rng.random::<f64>() < p {
            e |= 1 << i;
        }
    }
    e
}

/// The competitor set `outer \ inner` as (nonzero extension part) + inner.
struct Competitors {
    inner: Vec<u64>,
    extension: Vec<u64>,
}

impl Competitors {
    fn new(codes: &NestedCodes) -> Self {
        Self {
            inner: pack_code(&codes.inner),
            extension: codes.extension.iter().map(pack).collect(),
        }
    }

    fn hits(&self, e: u64, hc: &HcTable) -> bool {
        let target = hc.rank(e);
        for_each_in_span(&self.extension, |x| {
            x != 0 && for_each_in_span(&self.inner, |y| hc.rank(e ^ x ^ y) <= target)
        })
    }
}

/// `e ∈ E(C2⊥)`: some `ê` with `e + ê ∈ C2⊥ \ C1⊥` has `H_c(ê) <= H_c(e)`.
pub fn is_uncorrectable(e: &BitWord, pair: &CodePair) -> Result<bool, DecoderError> {
    NestedCodes::phase(pair)?.is_uncorrectable(e)
}

/// Least-`H_c` phase-error estimate for a syndrome of length `n - (r + m)`.
pub fn min_entropy_decode(syndrome: &BitWord, pair: &CodePair) -> Result<BitWord, DecoderError> {
    NestedCodes::phase(pair)?.decode(syndrome)
}

/// `P_err(C2⊥)` by exhaustive summation, with the default cap of 20 bits.
pub fn exact_perr(pair: &CodePair, ch: &ChannelSpec) -> Result<PerrEstimate, DecoderError> {
    NestedCodes::phase(pair)?.exact_perr(ch, DEFAULT_EXHAUSTIVE_CAP)
}

pub fn monte_carlo_perr(
    pair: &CodePair,
    ch: &ChannelSpec,
    trials: u64,
    seed: u64,
) -> Result<PerrEstimate, DecoderError> {
    NestedCodes::phase(pair)?.monte_carlo_perr(ch, trials, seed)
}

/// Fraction of every type class that is uncorrectable for `C2⊥`.
pub fn error_set_profile(pair: &CodePair) -> Result<ErrorProfile, DecoderError> {
    Ok(NestedCodes::phase(pair)?
        .error_set(DEFAULT_EXHAUSTIVE_CAP)?
        .profile())
}
