//! Method of types over words split into two equal blocks.
//!
//! All logarithms are base 2. The convention `0 log 0 = 0` is used throughout.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use thiserror::Error;

use crate::gf2::{BitWord, Gf2Error};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TypesError {
    #[error("probability {0} is outside [0, 1]")]
    NotAProbability(f64),
    #[error("crossover probability {0} must lie in [0, 1/2)")]
    Crossover(f64),
    #[error("block length n = {0} must be even and at least 2")]
    BadLength(usize),
    #[error("count {count} exceeds the block length {half_n}")]
    CountTooLarge { count: usize, half_n: usize },
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
}

/// Binary entropy `H(p)` in bits.
pub fn binary_entropy(p: f64) -> Result<f64, TypesError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(TypesError::NotAProbability(p));
    }
    Ok(h2(p))
}

pub(crate) fn h2(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

/// Binary divergence `D(q || p)` in bits; `+inf` when `q` puts mass where `p`
/// has none.
pub fn kl_binary(q: f64, p: f64) -> Result<f64, TypesError> {
    for x in [q, p] {
        if !(0.0..=1.0).contains(&x) {
            return Err(TypesError::NotAProbability(x));
        }
    }
    Ok(d2(q, p))
}

pub(crate) fn d2(q: f64, p: f64) -> f64 {
    term(q, p) + term(1.0 - q, 1.0 - p)
}

fn term(a: f64, b: f64) -> f64 {
    if a <= 0.0 {
        0.0
    } else if b <= 0.0 {
        f64::INFINITY
    } else {
        a * (a / b).log2()
    }
}

/// `H(k / half_n)`, computed from the smaller of `k` and `half_n - k` so that
/// mirror-image counts give bit-identical values.
pub(crate) fn count_entropy(k: usize, half_n: usize) -> f64 {
    let k = k.min(half_n - k);
    h2(k as f64 / half_n as f64)
}

/// `(a + b) / 2` with the operands summed in a fixed order, so the result is
/// symmetric in its arguments bit for bit.
pub(crate) fn mean_sym(a: f64, b: f64) -> f64 {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    (lo + hi) / 2.0
}

/// The joint type of a two-block word: the number of ones in each block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypePair {
    half_n: usize,
    k_first: usize,
    k_second: usize,
}

impl TypePair {
    pub fn new(half_n: usize, k_first: usize, k_second: usize) -> Result<Self, TypesError> {
        if half_n == 0 {
            return Err(TypesError::BadLength(0));
        }
        for count in [k_first, k_second] {
            if count > half_n {
                return Err(TypesError::CountTooLarge { count, half_n });
            }
        }
        Ok(Self {
            half_n,
            k_first,
            k_second,
        })
    }

    pub fn half_n(&self) -> usize {
        self.half_n
    }

    pub fn k_first(&self) -> usize {
        self.k_first
    }

    pub fn k_second(&self) -> usize {
        self.k_second
    }

    pub fn frac_first(&self) -> f64 {
        self.k_first as f64 / self.half_n as f64
    }

    pub fn frac_second(&self) -> f64 {
        self.k_second as f64 / self.half_n as f64
    }

    /// Position of this type in [`enumerate_types`] order.
    pub fn index(&self) -> usize {
        self.k_first * (self.half_n + 1) + self.k_second
    }
}

/// `H_c = (H(P_first(1)) + H(P_second(1))) / 2`.
pub fn conditional_entropy(t: &TypePair) -> f64 {
    mean_sym(
        count_entropy(t.k_first, t.half_n),
        count_entropy(t.k_second, t.half_n),
    )
}

pub fn type_of(e: &BitWord) -> Result<TypePair, TypesError> {
    if e.len() < 2 {
        return Err(TypesError::BadLength(e.len()));
    }
    let (a, b) = e.block_weights()?;
    TypePair::new(e.len() / 2, a, b)
}

pub(crate) fn binomial(n: usize, k: usize) -> BigUint {
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `|T| = C(n/2, k_first) * C(n/2, k_second)`, exact.
pub fn type_class_size(t: &TypePair) -> BigUint {
    binomial(t.half_n, t.k_first) * binomial(t.half_n, t.k_second)
}

/// Natural log of a big integer.
fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit value");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// A memoryless channel flipping each bit of the first block with
/// `p_first` and each bit of the second block with `p_second`.
///
/// The struct itself is orientation-neutral; [`ChannelSpec::phase`] and
/// [`ChannelSpec::bit`] place the two estimated error rates on the blocks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    p_first: f64,
    p_second: f64,
}

impl ChannelSpec {
    pub fn new(p_first: f64, p_second: f64) -> Result<Self, TypesError> {
        for p in [p_first, p_second] {
            if !(0.0..0.5).contains(&p) {
                return Err(TypesError::Crossover(p));
            }
        }
        Ok(Self { p_first, p_second })
    }

    /// Phase-error channel for `C2⊥`: `p1` on the first block, `p0` on the second.
    pub fn phase(p0: f64, p1: f64) -> Result<Self, TypesError> {
        Self::new(p1, p0)
    }

    /// Bit-error channel for `C1`: `p0` on the first block, `p1` on the second.
    pub fn bit(p0: f64, p1: f64) -> Result<Self, TypesError> {
        Self::new(p0, p1)
    }

    pub fn noiseless() -> Self {
        Self {
            p_first: 0.0,
            p_second: 0.0,
        }
    }

    pub fn p_first(&self) -> f64 {
        self.p_first
    }

    pub fn p_second(&self) -> f64 {
        self.p_second
    }

    /// Probability of one particular word of type `t`.
    pub fn word_probability(&self, t: &TypePair) -> f64 {
        block_power(self.p_first, t.k_first, t.half_n)
            * block_power(self.p_second, t.k_second, t.half_n)
    }
}

fn block_power(p: f64, k: usize, half_n: usize) -> f64 {
    p.powi(k as i32) * (1.0 - p).powi((half_n - k) as i32)
}

fn ln_block_power(p: f64, k: usize, half_n: usize) -> f64 {
    let mut acc = 0.0;
    if k > 0 {
        acc += k as f64 * p.ln();
    }
    if half_n > k {
        acc += (half_n - k) as f64 * (-p).ln_1p();
    }
    acc
}

/// `Q(T)`: probability that the channel output falls in the type class of `t`.
pub fn type_class_probability(t: &TypePair, ch: &ChannelSpec) -> f64 {
    let size = type_class_size(t);
    match size.to_f64().filter(|s| s.is_finite() && *s < 2f64.powi(53)) {
        Some(s) => s * ch.word_probability(t),
        None => (ln_big(&size)
            + ln_block_power(ch.p_first, t.k_first, t.half_n)
            + ln_block_power(ch.p_second, t.k_second, t.half_n))
        .exp(),
    }
}

/// All `(n/2 + 1)^2` types, ordered lexicographically by `(k_first, k_second)`.
pub fn enumerate_types(n: usize) -> Result<Vec<TypePair>, TypesError> {
    if n < 2 || n % 2 != 0 {
        return Err(TypesError::BadLength(n));
    }
    let half = n / 2;
    Ok((0..=half)
        .flat_map(|a| (0..=half).map(move |b| (a, b)))
        .map(|(a, b)| TypePair {
            half_n: half,
            k_first: a,
            k_second: b,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn entropy_examples() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        // high-precision value of H(0.11)
        assert!((binary_entropy(0.11).unwrap() - 0.499_915_958_164_528).abs() < 1e-14);
        assert!(binary_entropy(-0.1).is_err());
        assert!(binary_entropy(1.5).is_err());
    }

    #[test]
    fn divergence_examples() {
        assert_eq!(kl_binary(0.3, 0.3).unwrap(), 0.0);
        assert!((kl_binary(1.0, 0.5).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(kl_binary(0.5, 0.0).unwrap(), f64::INFINITY);
        assert_eq!(kl_binary(0.0, 0.0).unwrap(), 0.0);
        assert!(kl_binary(0.2, 1.2).is_err());
    }

    #[test]
    fn conditional_entropy_examples() {
        let t = |h, a, b| TypePair::new(h, a, b).unwrap();
        assert_eq!(conditional_entropy(&t(4, 0, 0)), 0.0);
        assert_eq!(conditional_entropy(&t(4, 2, 2)), 1.0);
        let v = conditional_entropy(&t(4, 1, 2));
        assert!((v - 0.905_639_062_229_566_4).abs() < 1e-15, "{v}");
    }

    #[test]
    fn type_of_examples() {
        let ty = |s: &str| type_of(&s.parse().unwrap()).unwrap();
        assert_eq!((ty("0000").k_first(), ty("0000").k_second()), (0, 0));
        assert_eq!((ty("1100").k_first(), ty("1100").k_second()), (2, 0));
        assert_eq!((ty("1011").k_first(), ty("1011").k_second()), (1, 2));
        assert!(type_of(&"101".parse().unwrap()).is_err());
    }

    #[test]
    fn class_sizes() {
        assert_eq!(type_class_size(&TypePair::new(2, 0, 0).unwrap()), BigUint::from(1u32));
        assert_eq!(type_class_size(&TypePair::new(2, 1, 1).unwrap()), BigUint::from(4u32));
        for n in [2usize, 8, 20, 64, 130] {
            let total: BigUint = enumerate_types(n).unwrap().iter().map(type_class_size).sum();
            assert_eq!(total, BigUint::one() << n, "n = {n}");
        }
    }

    #[test]
    fn enumeration_counts_and_order() {
        assert_eq!(enumerate_types(2).unwrap().len(), 4);
        assert_eq!(enumerate_types(8).unwrap().len(), 25);
        assert_eq!(enumerate_types(100).unwrap().len(), 2601);
        let ts = enumerate_types(6).unwrap();
        assert!(ts.windows(2).all(|w| w[0] < w[1]));
        assert!(ts.iter().enumerate().all(|(i, t)| t.index() == i));
        assert!(enumerate_types(7).is_err());
        assert!(enumerate_types(0).is_err());
    }

    #[test]
    fn class_probability_examples() {
        let noiseless = ChannelSpec::noiseless();
        assert_eq!(type_class_probability(&TypePair::new(3, 0, 0).unwrap(), &noiseless), 1.0);
        assert_eq!(type_class_probability(&TypePair::new(3, 1, 0).unwrap(), &noiseless), 0.0);
        // p = 1/2 is outside ChannelSpec's domain; exercise the formula directly
        let half = ChannelSpec {
            p_first: 0.5,
            p_second: 0.5,
        };
        for t in enumerate_types(4).unwrap() {
            let size = type_class_size(&t).to_f64().unwrap();
            assert!((type_class_probability(&t, &half) - size / 16.0).abs() < 1e-16);
        }
    }

    #[test]
    fn channel_domain() {
        assert!(ChannelSpec::new(0.5, 0.1).is_err());
        assert!(ChannelSpec::new(0.1, -0.1).is_err());
        let ph = ChannelSpec::phase(0.1, 0.2).unwrap();
        assert_eq!((ph.p_first(), ph.p_second()), (0.2, 0.1));
        let bit = ChannelSpec::bit(0.1, 0.2).unwrap();
        assert_eq!((bit.p_first(), bit.p_second()), (0.1, 0.2));
    }

    #[test]
    fn self_type_lower_bound() {
        // the channel's own type has probability at least (n/2 + 1)^-2
        for (half, k1, k2) in [(10, 1, 3), (20, 2, 5), (50, 5, 10), (8, 0, 3)] {
            let ch = ChannelSpec::new(k1 as f64 / half as f64, k2 as f64 / half as f64).unwrap();
            let t = TypePair::new(half, k1, k2).unwrap();
            let bound = ((half + 1) as f64).powi(-2);
            assert!(type_class_probability(&t, &ch) >= bound);
        }
    }

    #[test]
    fn large_n_uses_log_path() {
        let ch = ChannelSpec::new(0.1, 0.2).unwrap();
        let total: f64 = enumerate_types(2400)
            .unwrap()
            .iter()
            .map(|t| type_class_probability(t, &ch))
            .sum();
        assert!((total - 1.0).abs() < 1e-9, "{total}");
    }

    proptest! {
        #[test]
        fn normalization(n2 in 1usize..40, p1 in 0.0f64..0.5, p2 in 0.0f64..0.5) {
            let ch = ChannelSpec::new(p1, p2).unwrap();
            let total: f64 = enumerate_types(2 * n2)
                .unwrap()
                .iter()
                .map(|t| type_class_probability(t, &ch))
                .sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
        }

        #[test]
        fn conditional_entropy_is_symmetric(half in 1usize..60, a in 0usize..60, b in 0usize..60) {
            let (a, b) = (a % (half + 1), b % (half + 1));
            let x = TypePair::new(half, a, b).unwrap();
            let y = TypePair::new(half, b, a).unwrap();
            prop_assert_eq!(conditional_entropy(&x), conditional_entropy(&y));
        }

        #[test]
        fn entropy_mirror(q in 0.0f64..=1.0) {
            prop_assert!((h2(q) - h2(1.0 - q)).abs() < 1e-15);
            prop_assert!(d2(q, 0.3) >= 0.0);
        }
    }
}
