//! Fixed bit-error-correcting codes `C1` the protocol may use, keyed by
//! family and block length.

use crate::gf2::{BitWord, LinearCode};

/// Reed–Muller family: `C1⊥ = RM(1, log₂ n) + ⟨u₀, u_{n/2}⟩` with `u_i` the
/// unit vectors, so `C1` is the subcode of the extended Hamming code that
/// vanishes on positions `0` and `n/2`.
///
/// `H_c` cannot tell `e` from `e + b` for `b` in the span `B` of the two
/// block-all-ones words. Extended Hamming codes contain `B`, which makes every
/// error uncorrectable; the two unit rows remove it. Since `B` lies inside the
/// extended Hamming code, `wt(c + b) >= 4` for all nonzero `c ∈ C1` and `b ∈ B`.
pub const REED_MULLER: &str = "rm";

/// Largest estimated crossover probability any registry code is used at.
pub const DEFAULT_P_CAP: f64 = 0.12;

/// Exact uncorrectable-set probability of `C1` alone at `(p_cap, p_cap)`,
/// for the lengths small enough to enumerate.
const CERTIFICATES: [(usize, f64); 1] = [(16, 0.588_471_330_014_574_1)];

const LENGTHS: [usize; 3] = [16, 32, 64];

#[derive(Clone, Debug)]
pub struct RegistryEntry {
    family: &'static str,
    c1_dual: LinearCode,
    p_cap: f64,
    certificate: Option<f64>,
}

impl RegistryEntry {
    pub fn family(&self) -> &str {
        self.family
    }

    pub fn n(&self) -> usize {
        self.c1_dual.len()
    }

    /// `r = dim C1⊥`.
    pub fn r(&self) -> usize {
        self.c1_dual.dim()
    }

    pub fn c1_dual(&self) -> &LinearCode {
        &self.c1_dual
    }

    pub fn c1(&self) -> LinearCode {
        self.c1_dual.dual()
    }

    pub fn p_cap(&self) -> f64 {
        self.p_cap
    }

    /// Stored decoding error probability of `C1` at `(p_cap, p_cap)`, if any.
    pub fn certificate(&self) -> Option<f64> {
        self.certificate
    }
}

/// The first-order Reed–Muller code `RM(1, m)` of length `2^m`: the all-ones
/// word plus the `m` coordinate functions.
pub fn reed_muller_first_order(m: usize) -> LinearCode {
    let n = 1usize << m;
    let mut rows = vec![BitWord::ones(n)];
    for j in 0..m {
        let mut row = BitWord::zeros(n);
        for i in 0..n {
            if (i >> j) & 1 == 1 {
                row.set(i, true);
            }
        }
        rows.push(row);
    }
    LinearCode::new(n, rows).expect("coordinate functions are independent")
}

/// Looks up a registry code. `None` for unknown families or lengths.
pub fn lookup(family: &str, n: usize) -> Option<RegistryEntry> {
    if family != REED_MULLER || !LENGTHS.contains(&n) {
        return None;
    }
    let m = n.trailing_zeros() as usize;
    let mut rows = reed_muller_first_order(m).basis().to_vec();
    rows.push(BitWord::unit(n, 0));
    rows.push(BitWord::unit(n, n / 2));
    Some(RegistryEntry {
        family: REED_MULLER,
        c1_dual: LinearCode::new(n, rows).expect("units lie outside RM(1, m)"),
        p_cap: DEFAULT_P_CAP,
        certificate: CERTIFICATES.iter().find(|c| c.0 == n).map(|c| c.1),
    })
}

/// Every length available in a family.
pub fn lengths(family: &str) -> Vec<usize> {
    LENGTHS
        .into_iter()
        .filter(|&n| lookup(family, n).is_some())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decoder::{NestedCodes, DEFAULT_EXHAUSTIVE_CAP};
    use crate::types::ChannelSpec;

    #[test]
    fn shapes() {
        for (n, r) in [(16, 7), (32, 8), (64, 9)] {
            let e = lookup(REED_MULLER, n).unwrap();
            assert_eq!(e.n(), n);
            assert_eq!(e.r(), r);
            assert_eq!(e.c1().dim(), n - r);
        }
        assert!(lookup(REED_MULLER, 8).is_none());
        assert!(lookup(REED_MULLER, 12).is_none());
        assert!(lookup(REED_MULLER, 128).is_none());
        assert!(lookup("bch", 16).is_none());
        assert_eq!(lengths(REED_MULLER), vec![16, 32, 64]);
        assert!(lengths("bch").is_empty());
    }

    #[test]
    fn rm_1_3_is_self_dual() {
        let c = reed_muller_first_order(3);
        assert!(c.same_space(&c.dual()));
    }

    #[test]
    fn folded_distance_is_four() {
        let n = 16;
        let c1 = lookup(REED_MULLER, n).unwrap().c1();
        let half = BitWord::from_u64(n, 0xff);
        let blocks = [BitWord::zeros(n), half.clone(), &half ^ &BitWord::ones(n), BitWord::ones(n)];
        let min = c1
            .codewords()
            .iter()
            .filter(|c| !c.is_zero())
            .flat_map(|c| blocks.iter().map(move |b| (c ^ b).weight()))
            .min();
        assert_eq!(min, Some(4));
    }

    #[test]
    fn larger_entries_avoid_block_words() {
        for n in [32, 64] {
            let e = lookup(REED_MULLER, n).unwrap();
            let ext_hamming = reed_muller_first_order(n.trailing_zeros() as usize).dual();
            assert!(ext_hamming.contains_code(&e.c1()).unwrap());
            let first = BitWord::from_u64(n, if n == 64 { u32::MAX as u64 } else { 0xffff });
            for b in [first.clone(), &first ^ &BitWord::ones(n), BitWord::ones(n)] {
                assert!(!e.c1().contains(&b).unwrap());
            }
        }
    }

    #[test]
    fn certificates_match_recomputation() {
        for (n, cert) in CERTIFICATES {
            let e = lookup(REED_MULLER, n).unwrap();
            let codes = NestedCodes::standalone(&e.c1()).unwrap();
            let ch = ChannelSpec::bit(e.p_cap(), e.p_cap()).unwrap();
            let p = codes.exact_perr(&ch, DEFAULT_EXHAUSTIVE_CAP).unwrap().value;
            assert_eq!(e.certificate(), Some(cert));
            assert!((p - cert).abs() < 1e-12, "n = {n}: {p} vs {cert}");
        }
        assert!(lookup(REED_MULLER, 32).unwrap().certificate().is_none());
    }
}
