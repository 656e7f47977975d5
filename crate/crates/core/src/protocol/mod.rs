//! Classical simulation of BB84 with CSS-code reconciliation and random
//! privacy amplification.
//!
//! Qubits are tracked as `(bit, basis)` pairs. Every channel and eavesdropper
//! model here is a measure-and-resend or bit-flip process, which this
//! representation captures exactly.

mod conditions;
pub mod registry;
mod transcript;

use std::fmt;

use rand::seq::{index, SliceRandom};
use rand::Rng;
use thiserror::Error;

use crate::decoder::{DecoderError, LeaderTable};
use crate::exponent::hc;
use crate::gf2::{sample_supercode, syndrome, BitWord, CodePair, Gf2Error};
use crate::rng;

pub use conditions::{check_conditions, ConditionReport, VERIFICATION_GRID};
pub use registry::RegistryEntry;
pub use transcript::CSV_HEADER;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProtocolError {
    #[error("block length n = {0} must be even and at least 2")]
    OddLength(usize),
    #[error("(4 + theta) * n = {0} is not an integer")]
    RawLength(f64),
    #[error("theta = {0} must be non-negative")]
    Theta(f64),
    #[error("delta = {0} must be non-negative")]
    Delta(f64),
    #[error("m must be at least 1")]
    ZeroIncrement,
    #[error("channel flip probability {0} must lie in [0, 1/2)")]
    FlipProbability(f64),
    #[error("intercept fraction {0} must lie in [0, 1]")]
    InterceptFraction(f64),
    #[error("test strings have lengths {0} and {1}; expected equal and non-zero")]
    TestLength(usize, usize),
    #[error("estimated error rate {0} is not below 1/2")]
    EstimateTooHigh(f64),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error(transparent)]
    Decoder(#[from] DecoderError),
}

/// Independent bit flips whose probability depends on the basis the qubit
/// travels in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelModel {
    Noiseless,
    Bsc { pz: f64, px: f64 },
}

impl ChannelModel {
    fn validate(&self) -> Result<(), ProtocolError> {
        if let ChannelModel::Bsc { pz, px } = *self {
            for p in [pz, px] {
                if !(0.0..0.5).contains(&p) {
                    return Err(ProtocolError::FlipProbability(p));
                }
            }
        }
        Ok(())
    }

    fn flip_probability(&self, basis: bool) -> f64 {
        match *self {
            ChannelModel::Noiseless => 0.0,
            ChannelModel::Bsc { pz, px } => {
                if basis {
                    px
                } else {
                    pz
                }
            }
        }
    }
}

impl fmt::Display for ChannelModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelModel::Noiseless => f.write_str("noiseless"),
            ChannelModel::Bsc { pz, px } => write!(f, "bsc({pz},{px})"),
        }
    }
}

/// Eavesdropper: intercept-resend measures a fraction of the qubits in a
/// uniformly random basis and forwards the outcome in that basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EveModel {
    None,
    InterceptResend { fraction: f64 },
}

impl EveModel {
    fn validate(&self) -> Result<(), ProtocolError> {
        if let EveModel::InterceptResend { fraction } = *self {
            if !(0.0..=1.0).contains(&fraction) {
                return Err(ProtocolError::InterceptFraction(fraction));
            }
        }
        Ok(())
    }
}

impl fmt::Display for EveModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EveModel::None => f.write_str("none"),
            EveModel::InterceptResend { fraction } => write!(f, "intercept_resend({fraction})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolConfig {
    /// Post-sifting block length.
    pub n: usize,
    /// Oversampling: `(4 + theta) n` qubits are sent.
    pub theta: f64,
    /// Margin added to the observed test error fractions.
    pub delta: f64,
    pub code_registry_id: String,
    /// Key bits per block, `dim C2⊥ − dim C1⊥`.
    pub m: usize,
    pub channel: ChannelModel,
    pub eve: EveModel,
    pub seed: u64,
}

pub const DEFAULT_THETA: f64 = 0.5;
pub const DEFAULT_DELTA: f64 = 0.02;

impl ProtocolConfig {
    /// Defaults: `theta = 0.5`, `delta = 0.02`, Reed–Muller registry, `m = 1`,
    /// noiseless channel, no eavesdropper, seed 0.
    pub fn new(n: usize) -> Self {
        Self {
            n,
            theta: DEFAULT_THETA,
            delta: DEFAULT_DELTA,
            code_registry_id: registry::REED_MULLER.to_string(),
            m: 1,
            channel: ChannelModel::Noiseless,
            eve: EveModel::None,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<(), ProtocolError> {
        if self.n < 2 || self.n % 2 != 0 {
            return Err(ProtocolError::OddLength(self.n));
        }
        if !(self.theta >= 0.0) {
            return Err(ProtocolError::Theta(self.theta));
        }
        if !(self.delta >= 0.0) {
            return Err(ProtocolError::Delta(self.delta));
        }
        if self.m == 0 {
            return Err(ProtocolError::ZeroIncrement);
        }
        self.raw_len()?;
        self.channel.validate()?;
        self.eve.validate()
    }

    /// `(4 + theta) n`.
    pub fn raw_len(&self) -> Result<usize, ProtocolError> {
        let raw = (4.0 + self.theta) * self.n as f64;
        let rounded = raw.round();
        if (raw - rounded).abs() > 1e-9 {
            return Err(ProtocolError::RawLength(raw));
        }
        Ok(rounded as usize)
    }

    /// The same configuration with seed `seed + index`.
    pub fn session(&self, index: u64) -> Self {
        Self {
            seed: self.seed.wrapping_add(index),
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AbortReason {
    InsufficientSifted,
    ErrorRateTooHigh,
    RegistryMiss,
}

impl AbortReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            AbortReason::InsufficientSifted => "insufficient_sifted",
            AbortReason::ErrorRateTooHigh => "error_rate_too_high",
            AbortReason::RegistryMiss => "registry_miss",
        }
    }
}

impl fmt::Display for AbortReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Everything that happened in one session. Fields after the failing step
/// of an aborted session are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct SessionTranscript {
    pub seed: u64,
    pub n: usize,
    pub raw_len: usize,
    /// Positions where both parties used the Z basis.
    pub sifted_z: Vec<usize>,
    /// Positions where both parties used the X basis.
    pub sifted_x: Vec<usize>,
    /// Error fraction over all sifted positions of each basis.
    pub qber_z: Option<f64>,
    pub qber_x: Option<f64>,
    /// Positions forming `c0 ‖ c1`.
    pub key_positions: Option<Vec<usize>>,
    pub test_positions_z: Option<Vec<usize>>,
    pub test_positions_x: Option<Vec<usize>>,
    pub f0: Option<BitWord>,
    pub f1: Option<BitWord>,
    pub p0_hat: Option<f64>,
    pub p1_hat: Option<f64>,
    pub pair: Option<CodePair>,
    pub permutation: Option<Vec<usize>>,
    /// `e = e0 ‖ e1`, the bit errors on the key positions.
    pub bit_error: Option<BitWord>,
    pub codeword: Option<BitWord>,
    pub public_message: Option<BitWord>,
    pub corrected: Option<BitWord>,
    pub alice_key: Option<BitWord>,
    pub bob_key: Option<BitWord>,
    pub abort: Option<AbortReason>,
}

impl SessionTranscript {
    fn empty(seed: u64, n: usize, raw_len: usize) -> Self {
        Self {
            seed,
            n,
            raw_len,
            sifted_z: Vec::new(),
            sifted_x: Vec::new(),
            qber_z: None,
            qber_x: None,
            key_positions: None,
            test_positions_z: None,
            test_positions_x: None,
            f0: None,
            f1: None,
            p0_hat: None,
            p1_hat: None,
            pair: None,
            permutation: None,
            bit_error: None,
            codeword: None,
            public_message: None,
            corrected: None,
            alice_key: None,
            bob_key: None,
            abort: None,
        }
    }

    pub fn aborted(&self) -> bool {
        self.abort.is_some()
    }

    pub fn keys_agree(&self) -> Option<bool> {
        Some(self.alice_key.as_ref()? == self.bob_key.as_ref()?)
    }

    pub fn key_len(&self) -> usize {
        self.alice_key.as_ref().map_or(0, BitWord::len)
    }
}

/// A uniformly random permutation of `0..n` that maps each half onto itself.
pub fn sample_block_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Vec<usize>, ProtocolError> {
    if n < 2 || n % 2 != 0 {
        return Err(ProtocolError::OddLength(n));
    }
    let half = n / 2;
    let mut first: Vec<usize> = (0..half).collect();
    let mut second: Vec<usize> = (half..n).collect();
    first.shuffle(rng);
    second.shuffle(rng);
    first.extend(second);
    Ok(first)
}

/// `(wt(f0)/|f0| + δ, wt(f1)/|f1| + δ)`; an error if either reaches 1/2.
pub fn estimate_rates(f0: &BitWord, f1: &BitWord, delta: f64) -> Result<(f64, f64), ProtocolError> {
    if f0.is_empty() || f0.len() != f1.len() {
        return Err(ProtocolError::TestLength(f0.len(), f1.len()));
    }
    let est = |f: &BitWord| f.weight() as f64 / f.len() as f64 + delta;
    let (p0, p1) = (est(f0), est(f1));
    for p in [p0, p1] {
        if p >= 0.5 {
            return Err(ProtocolError::EstimateTooHigh(p));
        }
    }
    Ok((p0, p1))
}

struct Qubit {
    alice_bit: bool,
    alice_basis: bool,
    bob_basis: bool,
    bob_bit: bool,
}

fn transmit<R: Rng + ?Sized>(cfg: &ProtocolConfig, rng: &mut R) -> Qubit {
    let alice_bit = rng.random::<bool>();
    let alice_basis = rng.random::<bool>();
    let bob_basis = rng.random::<bool>();
    let (mut bit, mut basis) = (alice_bit, alice_basis);
    if let EveModel::InterceptResend { fraction } = cfg.eve {
        if rng.random::<f64>() < fraction {
            let eve_basis = rng.random::<bool>();
            if eve_basis != basis {
                bit = rng.random::<bool>();
            }
            basis = eve_basis;
        }
    }
    if rng.random::<f64>() < cfg.channel.flip_probability(basis) {
        bit = !bit;
    }
    let bob_bit = if bob_basis == basis {
        bit
    } else {
        rng.random::<bool>()
    };
    Qubit {
        alice_bit,
        alice_basis,
        bob_basis,
        bob_bit,
    }
}

fn word_at(qubits: &[Qubit], positions: &[usize], bob: bool) -> BitWord {
    let bits: Vec<bool> = positions
        .iter()
        .map(|&i| if bob { qubits[i].bob_bit } else { qubits[i].alice_bit })
        .collect();
    BitWord::from_bits(&bits)
}

fn qber(qubits: &[Qubit], positions: &[usize]) -> Option<f64> {
    if positions.is_empty() {
        return None;
    }
    let errors = positions
        .iter()
        .filter(|&&i| qubits[i].alice_bit != qubits[i].bob_bit)
        .count();
    Some(errors as f64 / positions.len() as f64)
}

/// Runs one session. Protocol aborts are reported in the transcript; only an
/// invalid configuration is an error.
pub fn run_bb84(cfg: &ProtocolConfig) -> Result<SessionTranscript, ProtocolError> {
    cfg.validate()?;
    let n = cfg.n;
    let half = n / 2;
    let raw_len = cfg.raw_len()?;
    let mut rng = rng::master(cfg.seed);
    let mut t = SessionTranscript::empty(cfg.seed, n, raw_len);

    // (1)-(6)
    let permutation = sample_block_permutation(n, &mut rng)?;
    let qubits: Vec<Qubit> = (0..raw_len).map(|_| transmit(cfg, &mut rng)).collect();

    // (7)-(8)
    for (i, q) in qubits.iter().enumerate() {
        if q.alice_basis == q.bob_basis {
            if q.alice_basis {
                t.sifted_x.push(i);
            } else {
                t.sifted_z.push(i);
            }
        }
    }
    t.qber_z = qber(&qubits, &t.sifted_z);
    t.qber_x = qber(&qubits, &t.sifted_x);
    if t.sifted_z.len() < n || t.sifted_x.len() < n {
        t.abort = Some(AbortReason::InsufficientSifted);
        return Ok(t);
    }

    // (9)
    let mut choose = |sifted: &[usize]| -> Vec<usize> {
        index::sample(&mut rng, sifted.len(), n)
            .into_iter()
            .map(|j| sifted[j])
            .collect()
    };
    let chosen_z = choose(&t.sifted_z);
    let chosen_x = choose(&t.sifted_x);
    let (c0, d0) = chosen_z.split_at(half);
    let (c1, d1) = chosen_x.split_at(half);
    let key_positions: Vec<usize> = c0.iter().chain(c1).copied().collect();

    // (10)
    let f0 = &word_at(&qubits, d0, false) ^ &word_at(&qubits, d0, true);
    let f1 = &word_at(&qubits, d1, false) ^ &word_at(&qubits, d1, true);
    t.key_positions = Some(key_positions.clone());
    t.test_positions_z = Some(d0.to_vec());
    t.test_positions_x = Some(d1.to_vec());
    let estimate = estimate_rates(&f0, &f1, cfg.delta);
    t.f0 = Some(f0);
    t.f1 = Some(f1);
    let (p0, p1) = match estimate {
        Ok(p) => p,
        Err(ProtocolError::EstimateTooHigh(_)) => {
            t.abort = Some(AbortReason::ErrorRateTooHigh);
            return Ok(t);
        }
        Err(e) => return Err(e),
    };
    t.p0_hat = Some(p0);
    t.p1_hat = Some(p1);
    let Some(entry) = registry::lookup(&cfg.code_registry_id, n) else {
        t.abort = Some(AbortReason::RegistryMiss);
        return Ok(t);
    };
    let rate = (entry.r() + cfg.m) as f64 / n as f64;
    if p0.max(p1) > entry.p_cap() || rate >= 1.0 - hc(p0, p1) {
        t.abort = Some(AbortReason::ErrorRateTooHigh);
        return Ok(t);
    }
    let pair = sample_supercode(entry.c1_dual(), cfg.m, &mut rng)?;
    let scrambled = pair.permuted(&permutation);
    let c1 = scrambled.c1();

    // (11)
    let mut v = BitWord::zeros(n);
    for row in c1.basis() {
        if rng.random::<bool>() {
            v ^= row;
        }
    }
    let c = word_at(&qubits, &key_positions, false);
    let c_tilde = word_at(&qubits, &key_positions, true);
    let x = &v ^ &c;

    // (12)
    let received = &x ^ &c_tilde;
    let table = LeaderTable::new(&c1)?;
    let packed = received.to_u64().expect("n <= 64");
    let v_hat = &received ^ &BitWord::from_u64(n, table.estimate(packed));

    // (13) the key is the coset of v + π(C2) inside π(C1), labelled by the
    // inner products with the permuted extension rows
    let ext = scrambled.extension();
    t.alice_key = Some(syndrome(ext, &v)?);
    t.bob_key = Some(syndrome(ext, &v_hat)?);
    t.bit_error = Some(&c ^ &c_tilde);
    t.codeword = Some(v);
    t.public_message = Some(x);
    t.corrected = Some(v_hat);
    t.pair = Some(pair);
    t.permutation = Some(permutation);
    Ok(t)
}
