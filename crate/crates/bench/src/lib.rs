//! Shared fixtures for the benchmarks.

use cssqkd_core::gf2::{random_code, sample_supercode};
use cssqkd_core::{rng, CodePair};

/// A seeded random nested pair with `dim C1⊥ = r` and `dim C2⊥ = r + m`.
pub fn random_pair(n: usize, r: usize, m: usize, seed: u64) -> CodePair {
    let mut g = rng::master(seed);
    let c1_dual = random_code(n, r, &mut g).expect("r <= n");
    sample_supercode(&c1_dual, m, &mut g).expect("r + m <= n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_shape_and_determinism() {
        let p = random_pair(12, 3, 4, 1);
        assert_eq!((p.n(), p.r(), p.m()), (12, 3, 4));
        assert_eq!(p, random_pair(12, 3, 4, 1));
    }
}
