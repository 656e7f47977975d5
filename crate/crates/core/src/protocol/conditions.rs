//! Verification of the code-pair conditions at desk scale.

use crate::decoder::{DecoderError, ErrorSet, NestedCodes, DEFAULT_EXHAUSTIVE_CAP};
use crate::gf2::CodePair;
use crate::types::ChannelSpec;

use super::ProtocolError;

/// Points per axis of the crossover grid checked by [`check_conditions`].
pub const VERIFICATION_GRID: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    /// `C2 ⊆ C1`.
    pub containment: bool,
    /// Largest bit-flip error probability of `C1` over the grid.
    pub worst_bit: f64,
    /// Largest phase-flip error probability of `C2⊥` over the grid.
    pub worst_phase: f64,
    /// Both probabilities were non-decreasing along each grid axis.
    pub monotone: bool,
    pub passed: bool,
}

fn grid(p: f64) -> Vec<f64> {
    (0..VERIFICATION_GRID)
        .map(|i| {
            if i + 1 == VERIFICATION_GRID {
                p
            } else {
                p * i as f64 / (VERIFICATION_GRID - 1) as f64
            }
        })
        .collect()
}

/// Worst value over the grid and whether the values grow along both axes.
fn scan(
    set: &ErrorSet,
    p0: f64,
    p1: f64,
    channel: impl Fn(f64, f64) -> Result<ChannelSpec, crate::types::TypesError>,
) -> Result<(f64, bool), ProtocolError> {
    let (g0, g1) = (grid(p0), grid(p1));
    let mut table = vec![vec![0.0; g1.len()]; g0.len()];
    for (i, &a) in g0.iter().enumerate() {
        for (j, &b) in g1.iter().enumerate() {
            let ch = channel(a, b).map_err(DecoderError::from)?;
            table[i][j] = set.probability(&ch);
        }
    }
    let slack = 1e-12;
    let mut monotone = true;
    for i in 0..g0.len() {
        for j in 0..g1.len() {
            if i > 0 && table[i][j] < table[i - 1][j] - slack {
                monotone = false;
            }
            if j > 0 && table[i][j] < table[i][j - 1] - slack {
                monotone = false;
            }
        }
    }
    let worst = table.iter().flatten().copied().fold(0.0, f64::max);
    Ok((worst, monotone))
}

/// Checks that `C2 ⊆ C1`, that `C1` decodes bit flips and `C2⊥` decodes phase
/// flips with error probability at most `epsilon` for every crossover pair on
/// a grid below `(p0, p1)`.
///
/// Bit flips put `p0` on the first block, phase flips put `p1` there.
pub fn check_conditions(
    pair: &CodePair,
    p0: f64,
    p1: f64,
    epsilon: f64,
) -> Result<ConditionReport, ProtocolError> {
    let containment = pair.c1().contains_code(&pair.c2())?;
    let bit = NestedCodes::bit(pair)?.error_set(DEFAULT_EXHAUSTIVE_CAP)?;
    let phase = NestedCodes::phase(pair)?.error_set(DEFAULT_EXHAUSTIVE_CAP)?;
    let (worst_bit, mono_bit) = scan(&bit, p0, p1, ChannelSpec::bit)?;
    let (worst_phase, mono_phase) = scan(&phase, p0, p1, ChannelSpec::phase)?;
    Ok(ConditionReport {
        containment,
        worst_bit,
        worst_phase,
        monotone: mono_bit && mono_phase,
        passed: containment && worst_bit <= epsilon && worst_phase <= epsilon,
    })
}
