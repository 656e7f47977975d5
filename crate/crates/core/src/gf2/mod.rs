//! Bit-packed linear algebra over GF(2): words, row reduction, linear codes,
//! nested code pairs and the supercode ensemble.

mod code;
mod ensemble;
mod matrix;
mod word;

use thiserror::Error;

pub use code::{CodePair, LinearCode};
pub use ensemble::{membership_probability, random_code, sample_supercode};
pub use matrix::{rank, syndrome, Echelon};
pub use word::BitWord;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("length mismatch: expected {expected} bits, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("basis rows are linearly dependent (rank {rank} of {rows} rows)")]
    DependentRows { rank: usize, rows: usize },
    #[error("C1⊥ is not contained in C2⊥")]
    NotNested,
    #[error("supercode dimension {dim} exceeds the length {n}")]
    DimensionTooLarge { dim: usize, n: usize },
    #[error("the dimension increment m must be at least 1")]
    ZeroIncrement,
    #[error("two-block operations need an even length, got {0}")]
    OddLength(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
