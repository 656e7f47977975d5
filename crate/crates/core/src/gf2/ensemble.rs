//! Uniform sampling from the supercode ensemble: all `(r + m)`-dimensional
//! codes that contain a fixed `r`-dimensional code.

use rand::Rng;

use super::{matrix::Echelon, BitWord, CodePair, Gf2Error, LinearCode};

/// Draws `C2⊥` uniformly among the `(r + m)`-dimensional supercodes of `c1_dual`.
///
/// Works in the quotient `F2^n / C1⊥`, identified with the `n - r` free
/// columns of the echelon form of `C1⊥`. A uniform `m × (n - r)` matrix is
/// redrawn until it has full rank; its row space is then a uniform
/// `m`-dimensional subspace of the quotient, and lifting it (zeros on the pivot
/// columns) and adjoining `C1⊥` gives a uniform member of the ensemble.
pub fn sample_supercode<R: Rng + ?Sized>(
    c1_dual: &LinearCode,
    m: usize,
    rng: &mut R,
) -> Result<CodePair, Gf2Error> {
    let n = c1_dual.len();
    let r = c1_dual.dim();
    if m == 0 {
        return Err(Gf2Error::ZeroIncrement);
    }
    if r + m > n {
        return Err(Gf2Error::DimensionTooLarge { dim: r + m, n });
    }
    let free = c1_dual.echelon().free_columns();
    let quotient_dim = free.len();
    let extension = loop {
        let draw: Vec<BitWord> = (0..m)
            .map(|_| {
                let mut row = BitWord::zeros(quotient_dim);
                for j in 0..quotient_dim {
                    if rng.random::<bool>() {
                        row.set(j, true);
                    }
                }
                row
            })
            .collect();
        if Echelon::new(quotient_dim, &draw)?.rank() == m {
            break draw;
        }
    };
    let lifted = extension
        .iter()
        .map(|row| {
            let mut v = BitWord::zeros(n);
            for j in row.support() {
                v.set(free[j], true);
            }
            v
        })
        .collect();
    CodePair::from_extension(c1_dual.clone(), lifted)
}

/// A uniformly random `k`-dimensional code of length `n`.
pub fn random_code<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<LinearCode, Gf2Error> {
    if k == 0 {
        return Ok(LinearCode::zero(n));
    }
    Ok(sample_supercode(&LinearCode::zero(n), k, rng)?.c2_dual().clone())
}

/// `Pr[e ∈ C2⊥]` for a fixed `e ∉ C1⊥` under the uniform ensemble:
/// `(2^{r+m} - 2^r) / (2^n - 2^r)`.
pub fn membership_probability(n: usize, r: usize, m: usize) -> f64 {
    let p2 = |k: usize| (k as f64).exp2();
    (p2(r + m) - p2(r)) / (p2(n) - p2(r))
}
