use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use super::matrix::{syndrome, Echelon};
use super::{BitWord, Gf2Error};

/// A binary linear code held as a basis of independent rows.
///
/// The basis is kept in the order it was supplied; the canonical echelon form
/// and the systematic parity-check matrix are computed on first use.
pub struct LinearCode {
    n: usize,
    basis: Vec<BitWord>,
    echelon: OnceLock<Echelon>,
    parity: OnceLock<Vec<BitWord>>,
}

impl LinearCode {
    /// Builds a code from linearly independent rows.
    pub fn new(n: usize, basis: Vec<BitWord>) -> Result<Self, Gf2Error> {
        let echelon = Echelon::new(n, &basis)?;
        if echelon.rank() != basis.len() {
            return Err(Gf2Error::DependentRows {
                rank: echelon.rank(),
                rows: basis.len(),
            });
        }
        Ok(Self {
            n,
            basis,
            echelon: OnceLock::from(echelon),
            parity: OnceLock::new(),
        })
    }

    /// The row space of arbitrary (possibly dependent) rows, in echelon basis.
    pub fn from_spanning(n: usize, rows: &[BitWord]) -> Result<Self, Gf2Error> {
        let echelon = Echelon::new(n, rows)?;
        Ok(Self {
            n,
            basis: echelon.rows().to_vec(),
            echelon: OnceLock::from(echelon),
            parity: OnceLock::new(),
        })
    }

    pub fn zero(n: usize) -> Self {
        Self::new(n, Vec::new()).expect("empty basis is independent")
    }

    pub fn full(n: usize) -> Self {
        Self::new(n, (0..n).map(|i| BitWord::unit(n, i)).collect()).expect("identity rows")
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BitWord] {
        &self.basis
    }

    pub fn echelon(&self) -> &Echelon {
        self.echelon
            .get_or_init(|| Echelon::new(self.n, &self.basis).expect("validated at construction"))
    }

    /// Systematic parity-check rows: the echelon basis of the dual code.
    pub fn parity_check(&self) -> &[BitWord] {
        self.parity.get_or_init(|| {
            let null = self.echelon().null_space();
            Echelon::new(self.n, &null)
                .expect("null space rows have length n")
                .rows()
                .to_vec()
        })
    }

    /// The dual code `{x : x · c = 0 for all c}`; dimension `n - k`.
    pub fn dual(&self) -> LinearCode {
        LinearCode::new(self.n, self.parity_check().to_vec()).expect("parity rows independent")
    }

    pub fn contains(&self, v: &BitWord) -> Result<bool, Gf2Error> {
        self.echelon().contains(v)
    }

    /// True if every basis row of `other` lies in `self`.
    pub fn contains_code(&self, other: &LinearCode) -> Result<bool, Gf2Error> {
        for row in other.basis() {
            if !self.contains(row)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn syndrome(&self, v: &BitWord) -> Result<BitWord, Gf2Error> {
        syndrome(self.parity_check(), v)
    }

    /// Label of the coset `v + C`: the syndrome under the canonical parity
    /// check. Two words share a label iff their sum is a codeword.
    pub fn coset_label(&self, v: &BitWord) -> Result<BitWord, Gf2Error> {
        self.syndrome(v)
    }

    /// The same code with coordinates permuted (`i` moves to `perm[i]`).
    pub fn permuted(&self, perm: &[usize]) -> LinearCode {
        let rows = self.basis.iter().map(|b| b.permuted(perm)).collect();
        LinearCode::new(self.n, rows).expect("permutation preserves independence")
    }

    /// Whether two codes span the same space.
    pub fn same_space(&self, other: &LinearCode) -> bool {
        self.n == other.n && self.echelon().rows() == other.echelon().rows()
    }

    /// All `2^k` codewords, in the order of the binary counter over the basis.
    pub fn codewords(&self) -> Vec<BitWord> {
        assert!(self.dim() < 32, "refusing to enumerate 2^{} codewords", self.dim());
        let mut out = Vec::with_capacity(1 << self.dim());
        for mask in 0u64..(1u64 << self.dim()) {
            let mut w = BitWord::zeros(self.n);
            for (i, row) in self.basis.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    w ^= row;
                }
            }
            out.push(w);
        }
        out
    }

    /// Plain-text form: a header line `n k`, then one row of `0`/`1` per basis
    /// vector.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn from_text(text: &str) -> Result<Self, Gf2Error> {
        text.parse()
    }
}

impl Clone for LinearCode {
    fn clone(&self) -> Self {
        Self {
            n: self.n,
            basis: self.basis.clone(),
            echelon: self.echelon.clone(),
            parity: self.parity.clone(),
        }
    }
}

/// Equal when the stored bases are identical row for row; see
/// [`LinearCode::same_space`] for equality of the spanned spaces.
impl PartialEq for LinearCode {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.basis == other.basis
    }
}

impl fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LinearCode")
            .field("n", &self.n)
            .field("k", &self.dim())
            .field("basis", &self.basis)
            .finish()
    }
}

impl fmt::Display for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n, self.dim())?;
        for row in &self.basis {
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

impl FromStr for LinearCode {
    type Err = Gf2Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse_err = |line: usize, msg: String| Gf2Error::Parse { line, msg };
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines
            .next()
            .ok_or_else(|| parse_err(1, "missing `n k` header".into()))?;
        let mut fields = header.split_whitespace();
        let mut number = |name: &str| -> Result<usize, Gf2Error> {
            fields
                .next()
                .ok_or_else(|| parse_err(hline, format!("header is missing {name}")))?
                .parse()
                .map_err(|e| parse_err(hline, format!("bad {name}: {e}")))
        };
        let n = number("n")?;
        let k = number("k")?;
        let mut rows = Vec::with_capacity(k);
        for (line, text) in lines {
            if text.len() != n {
                return Err(parse_err(
                    line,
                    format!("row has {} bits, header says n = {n}", text.len()),
                ));
            }
            let row: BitWord = text.parse().map_err(|e| match e {
                Gf2Error::Parse { msg, .. } => parse_err(line, msg),
                other => other,
            })?;
            rows.push(row);
        }
        if rows.len() != k {
            return Err(parse_err(
                hline,
                format!("header says k = {k} but {} rows follow", rows.len()),
            ));
        }
        LinearCode::new(n, rows)
    }
}

/// The nested pair behind a CSS code, stored through the duals:
/// `C1⊥ ⊆ C2⊥`, i.e. `C2 ⊆ C1`.
///
/// The basis of `c2_dual` always starts with the basis of `c1_dual`, followed
/// by `m` extension rows.
#[derive(Clone, Debug, PartialEq)]
pub struct CodePair {
    c1_dual: LinearCode,
    c2_dual: LinearCode,
    m: usize,
}

impl CodePair {
    /// Pairs `C1⊥` with a supercode `C2⊥ ⊇ C1⊥`.
    pub fn new(c1_dual: LinearCode, c2_dual: LinearCode) -> Result<Self, Gf2Error> {
        if c1_dual.len() != c2_dual.len() {
            return Err(Gf2Error::LengthMismatch {
                expected: c1_dual.len(),
                found: c2_dual.len(),
            });
        }
        if !c2_dual.contains_code(&c1_dual)? {
            return Err(Gf2Error::NotNested);
        }
        let n = c1_dual.len();
        let mut rows = c1_dual.basis().to_vec();
        for row in c2_dual.basis() {
            let mut trial = rows.clone();
            trial.push(row.clone());
            if Echelon::new(n, &trial)?.rank() == trial.len() {
                rows = trial;
            }
        }
        let extension = rows.split_off(c1_dual.dim());
        Self::from_extension(c1_dual, extension)
    }

    /// Pairs `C1⊥` with the span of `C1⊥` and `extension`.
    pub fn from_extension(c1_dual: LinearCode, extension: Vec<BitWord>) -> Result<Self, Gf2Error> {
        let n = c1_dual.len();
        let m = extension.len();
        let mut rows = c1_dual.basis().to_vec();
        rows.extend(extension);
        let c2_dual = LinearCode::new(n, rows)?;
        Ok(Self { c1_dual, c2_dual, m })
    }

    pub fn n(&self) -> usize {
        self.c1_dual.len()
    }

    /// `dim C1⊥`.
    pub fn r(&self) -> usize {
        self.c1_dual.dim()
    }

    /// `dim C2⊥ - dim C1⊥`, the number of key bits per block.
    pub fn m(&self) -> usize {
        self.m
    }

    /// `R = (r + m) / n`.
    pub fn rate(&self) -> f64 {
        (self.r() + self.m) as f64 / self.n() as f64
    }

    pub fn c1_dual(&self) -> &LinearCode {
        &self.c1_dual
    }

    pub fn c2_dual(&self) -> &LinearCode {
        &self.c2_dual
    }

    /// The `m` rows that extend the `C1⊥` basis to a `C2⊥` basis.
    pub fn extension(&self) -> &[BitWord] {
        &self.c2_dual.basis()[self.r()..]
    }

    pub fn c1(&self) -> LinearCode {
        self.c1_dual.dual()
    }

    pub fn c2(&self) -> LinearCode {
        self.c2_dual.dual()
    }

    pub fn permuted(&self, perm: &[usize]) -> CodePair {
        let c1_dual = self.c1_dual.permuted(perm);
        let ext = self.extension().iter().map(|b| b.permuted(perm)).collect();
        CodePair::from_extension(c1_dual, ext).expect("permutation preserves nesting")
    }
}
