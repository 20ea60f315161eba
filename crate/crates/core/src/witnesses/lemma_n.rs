//! Extracting infinitely many atoms from an injection `fin(A) -> A^2`.
//!
//! Start from five known atoms. With `k` atoms known there are `2^k` finite
//! subsets but only `k^2` pairs over them, so for `k >= 5` some subset is
//! sent to a pair with a component outside the known atoms. The first such
//! subset in canonical order contributes its first unknown component.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{InjectionOracle, WitnessError};
use crate::universe::{mask_positions, AllMasks, Atom, Hf, KindTag};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionRound {
    pub known: Vec<Atom>,
    pub probe: Hf,
    pub answer: Hf,
    pub found: Option<Atom>,
    /// Subsets examined in this round, including the successful one.
    pub scanned: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionTrace {
    pub seed: Option<u64>,
    pub rounds: Vec<ExtractionRound>,
}

pub fn extract_from_fin_to_square(
    h: &mut InjectionOracle,
    seed: &[Atom],
    n: usize,
) -> Result<(Vec<Atom>, ExtractionTrace), WitnessError> {
    if h.domain() != KindTag::FinSubsets || h.codomain() != KindTag::OrderedPairs {
        return Err(WitnessError::Argument("oracle must map fin(A) to A^2".into()));
    }
    if seed.len() != 5 || seed.iter().collect::<BTreeSet<_>>().len() != 5 {
        return Err(WitnessError::Argument("seed must be five distinct atoms".into()));
    }
    if n < 5 {
        return Err(WitnessError::Argument(format!("n must be at least 5, got {n}")));
    }
    let mut known: Vec<Atom> = seed.to_vec();
    let mut members: BTreeSet<Atom> = seed.iter().cloned().collect();
    let mut trace = ExtractionTrace { seed: h.seed(), rounds: Vec::new() };
    while known.len() < n {
        let k = known.len();
        let mut scanned = 0u64;
        let mut hit = None;
        // by counting, at most k^2 subsets can land inside known^2
        let limit = (k as u128) * (k as u128) + 1;
        for mask in AllMasks::new(k as u32) {
            scanned += 1;
            let probe = Hf::set(mask_positions(mask).into_iter().map(|i| Hf::Atom(known[i].clone())));
            let answer = h.query(&probe)?;
            let (x, y) = answer.as_atom_pair().ok_or_else(|| WitnessError::BadAnswer {
                input: probe.clone(),
                answer: answer.clone(),
                expected: KindTag::OrderedPairs,
            })?;
            let new = if !members.contains(&x) {
                Some(x)
            } else if !members.contains(&y) {
                Some(y)
            } else {
                None
            };
            if let Some(a) = new {
                hit = Some((probe, answer, a));
                break;
            }
            if u128::from(scanned) >= limit {
                break;
            }
        }
        let Some((probe, answer, a)) = hit else {
            return Err(WitnessError::InvariantViolation {
                message: format!("no subset of the {k} known atoms leaves them after {scanned} probes"),
                table: serde_json::to_value(&trace).unwrap_or_default(),
            });
        };
        trace.rounds.push(ExtractionRound {
            known: known.clone(),
            probe,
            answer,
            found: Some(a.clone()),
            scanned,
        });
        members.insert(a.clone());
        known.push(a);
    }
    Ok((known, trace))
}

/// Rerun an extraction against the recorded answers of `h` and compare.
pub fn replay_fin_to_square(
    h: &InjectionOracle,
    seed: &[Atom],
    n: usize,
    expected: &ExtractionTrace,
) -> Result<bool, WitnessError> {
    let mut table = h.replay();
    let (_, trace) = extract_from_fin_to_square(&mut table, seed, n)?;
    Ok(trace.rounds == expected.rounds)
}
