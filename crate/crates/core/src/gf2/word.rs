use std::cmp::Ordering;
use std::fmt;
use std::ops::{BitXor, BitXorAssign};
use std::str::FromStr;

use super::Gf2Error;

const WORD_BITS: usize = 64;

/// A fixed-length binary vector, bit-packed into `u64` limbs.
///
/// Position `i` lives in bit `i % 64` of limb `i / 64`. Unused high bits of the
/// last limb are always zero.
///
/// Words used as channel errors are split into two equal blocks (positions
/// `0..n/2` and `n/2..n`); the block helpers require an even length.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitWord {
    len: usize,
    limbs: Vec<u64>,
}

impl BitWord {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            limbs: vec![0; len.div_ceil(WORD_BITS)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut w = Self::zeros(len);
        for limb in &mut w.limbs {
            *limb = u64::MAX;
        }
        w.trim();
        w
    }

    /// Word with a single one at `pos`.
    pub fn unit(len: usize, pos: usize) -> Self {
        let mut w = Self::zeros(len);
        w.set(pos, true);
        w
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut w = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                w.set(i, true);
            }
        }
        w
    }

    /// Builds a word of length `len <= 64` from the low bits of `value`.
    pub fn from_u64(len: usize, value: u64) -> Self {
        assert!(len <= WORD_BITS, "from_u64 needs len <= 64, got {len}");
        let mut w = Self::zeros(len);
        if len > 0 {
            w.limbs[0] = value;
            w.trim();
        }
        w
    }

    /// The packed value for words of at most 64 bits.
    pub fn to_u64(&self) -> Option<u64> {
        match self.limbs.len() {
            0 => Some(0),
            1 => Some(self.limbs[0]),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn limbs(&self) -> &[u64] {
        &self.limbs
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.limbs[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.limbs[i / WORD_BITS] |= mask;
        } else {
            self.limbs[i / WORD_BITS] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.limbs[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn weight(&self) -> usize {
        self.limbs.iter().map(|l| l.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.iter().all(|&l| l == 0)
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitWord) -> Result<bool, Gf2Error> {
        self.check_len(other.len)?;
        let parity = self
            .limbs
            .iter()
            .zip(&other.limbs)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones());
        Ok(parity & 1 == 1)
    }

    pub fn xor(&self, other: &BitWord) -> Result<BitWord, Gf2Error> {
        self.check_len(other.len)?;
        let mut out = self.clone();
        out ^= other;
        Ok(out)
    }

    /// Number of ones in the first and second half.
    pub fn block_weights(&self) -> Result<(usize, usize), Gf2Error> {
        if self.len % 2 != 0 {
            return Err(Gf2Error::OddLength(self.len));
        }
        let half = self.len / 2;
        let first = (0..half).filter(|&i| self.get(i)).count();
        Ok((first, self.weight() - first))
    }

    /// Positions holding a one, ascending.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    /// Applies a coordinate permutation: position `i` moves to `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> BitWord {
        assert_eq!(perm.len(), self.len, "permutation length mismatch");
        let mut out = BitWord::zeros(self.len);
        for i in self.support() {
            out.set(perm[i], true);
        }
        out
    }

    /// Concatenation `self || other`.
    pub fn concat(&self, other: &BitWord) -> BitWord {
        let mut out = BitWord::zeros(self.len + other.len);
        for i in self.support() {
            out.set(i, true);
        }
        for i in other.support() {
            out.set(self.len + i, true);
        }
        out
    }

    pub(crate) fn check_len(&self, other: usize) -> Result<(), Gf2Error> {
        if self.len == other {
            Ok(())
        } else {
            Err(Gf2Error::LengthMismatch {
                expected: self.len,
                found: other,
            })
        }
    }

    fn trim(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.limbs.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl BitXorAssign<&BitWord> for BitWord {
    fn bitxor_assign(&mut self, rhs: &BitWord) {
        assert_eq!(self.len, rhs.len, "xor of words with different lengths");
        for (a, b) in self.limbs.iter_mut().zip(&rhs.limbs) {
            *a ^= b;
        }
    }
}

impl BitXor for &BitWord {
    type Output = BitWord;

    fn bitxor(self, rhs: &BitWord) -> BitWord {
        let mut out = self.clone();
        out ^= rhs;
        out
    }
}

/// Lexicographic order on the bit string `b_0 b_1 ... b_{n-1}` with `0 < 1`;
/// shorter words sort first.
impl Ord for BitWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| {
            for (a, b) in self.limbs.iter().zip(&other.limbs) {
                if a != b {
                    // lowest differing position decides
                    let low = (a ^ b).trailing_zeros();
                    return if (a >> low) & 1 == 0 {
                        Ordering::Less
                    } else {
                        Ordering::Greater
                    };
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for BitWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitWord({self})")
    }
}

impl FromStr for BitWord {
    type Err = Gf2Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let mut w = BitWord::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => w.set(i, true),
                other => {
                    return Err(Gf2Error::Parse {
                        line: 0,
                        msg: format!("unexpected character {other:?} in bit string"),
                    })
                }
            }
        }
        Ok(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let w: BitWord = "1011".parse().unwrap();
        assert_eq!(w.len(), 4);
        assert!(w.get(0) && !w.get(1) && w.get(2) && w.get(3));
        assert_eq!(w.to_string(), "1011");
        assert!("10x1".parse::<BitWord>().is_err());
    }

    #[test]
    fn ones_trims_tail() {
        let w = BitWord::ones(70);
        assert_eq!(w.weight(), 70);
        assert_eq!(w.limbs()[1], (1 << 6) - 1);
    }

    #[test]
    fn lexicographic_order() {
        let a: BitWord = "0011".parse().unwrap();
        let b: BitWord = "0100".parse().unwrap();
        let c: BitWord = "1000".parse().unwrap();
        assert!(a < b && b < c);
        assert!(BitWord::zeros(4) < a);
        let long_a = BitWord::unit(100, 80);
        let long_b = BitWord::unit(100, 3);
        assert!(long_a < long_b);
    }

    #[test]
    fn dot_and_xor() {
        let a: BitWord = "1101".parse().unwrap();
        let b: BitWord = "1011".parse().unwrap();
        assert!(!a.dot(&b).unwrap());
        assert_eq!((&a ^ &b).to_string(), "0110");
        assert!(a.xor(&BitWord::zeros(3)).is_err());
    }

    #[test]
    fn block_weights_need_even_length() {
        let w: BitWord = "1011".parse().unwrap();
        assert_eq!(w.block_weights().unwrap(), (1, 2));
        assert_eq!(
            "101".parse::<BitWord>().unwrap().block_weights(),
            Err(Gf2Error::OddLength(3))
        );
    }

    #[test]
    fn permute_and_concat() {
        let w: BitWord = "1100".parse().unwrap();
        assert_eq!(w.permuted(&[1, 0, 3, 2]).to_string(), "1100");
        assert_eq!(w.permuted(&[2, 3, 0, 1]).to_string(), "0011");
        let a: BitWord = "10".parse().unwrap();
        assert_eq!(a.concat(&w).to_string(), "101100");
    }
}
