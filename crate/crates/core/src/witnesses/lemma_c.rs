//! Extracting atoms from a pair of injections `A^2 -> [A]^2` and
//! `fin(A) -> seq11(A)`.
//!
//! `E_0 = {a0}`; `E_{m+1}` collects the atoms of `f`-images of pairs over
//! `E_0 ∪ … ∪ E_m` that are not yet known. Since `k^2 > C(k,2)` each `E_{m+1}`
//! is non-empty, and the sequences `g(E_m)` are pairwise distinct. Their
//! concatenation lists infinitely many atoms.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{InjectionOracle, WitnessError};
use crate::universe::{Atom, Hf, KindTag};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerRound {
    pub layer: Vec<Atom>,
    pub sequence: Vec<Atom>,
    pub queries: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerTrace {
    pub f_seed: Option<u64>,
    pub g_seed: Option<u64>,
    pub rounds: Vec<LayerRound>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerConfig {
    /// Atoms to produce.
    pub atoms: usize,
    /// Layers to build even if enough atoms appear earlier.
    pub min_rounds: usize,
    /// Give up after this many layers.
    pub max_rounds: usize,
}

impl LayerConfig {
    pub fn atoms(n: usize) -> Self {
        LayerConfig { atoms: n, min_rounds: 0, max_rounds: 256 }
    }
}

pub fn extract_from_pair_maps(
    f: &mut InjectionOracle,
    g: &mut InjectionOracle,
    a0: &Atom,
    config: LayerConfig,
) -> Result<(Vec<Atom>, LayerTrace), WitnessError> {
    if f.domain() != KindTag::OrderedPairs || f.codomain() != KindTag::UnorderedPairs {
        return Err(WitnessError::Argument("f must map A^2 to [A]^2".into()));
    }
    if g.domain() != KindTag::FinSubsets || g.codomain() != KindTag::InjSeq {
        return Err(WitnessError::Argument("g must map fin(A) to seq11(A)".into()));
    }
    let mut trace = LayerTrace { f_seed: f.seed(), g_seed: g.seed(), rounds: Vec::new() };
    let mut known: Vec<Atom> = vec![a0.clone()];
    let mut members: BTreeSet<Atom> = BTreeSet::from([a0.clone()]);
    let mut layer: Vec<Atom> = vec![a0.clone()];
    let mut out: Vec<Atom> = Vec::new();
    let mut listed: BTreeSet<Atom> = BTreeSet::new();
    loop {
        let seq = g.query(&Hf::atom_set(&layer))?;
        let seq = seq.as_atom_seq().ok_or_else(|| WitnessError::BadAnswer {
            input: Hf::atom_set(&layer),
            answer: seq.clone(),
            expected: KindTag::InjSeq,
        })?;
        for a in &seq {
            if out.len() < config.atoms && listed.insert(a.clone()) {
                out.push(a.clone());
            }
        }
        let done = out.len() >= config.atoms && trace.rounds.len() + 1 >= config.min_rounds;
        if done {
            trace.rounds.push(LayerRound { layer, sequence: seq, queries: 0 });
            return Ok((out, trace));
        }
        if trace.rounds.len() + 1 >= config.max_rounds {
            trace.rounds.push(LayerRound { layer, sequence: seq, queries: 0 });
            return Err(WitnessError::InvariantViolation {
                message: format!("{} atoms after {} layers", out.len(), config.max_rounds),
                table: serde_json::to_value(&trace).unwrap_or_default(),
            });
        }
        // pairs over the earlier layers were answered in previous rounds
        let fresh: BTreeSet<&Atom> = layer.iter().collect();
        let mut next: BTreeSet<Atom> = BTreeSet::new();
        let mut queries = 0u64;
        for x in &known {
            for y in &known {
                if !fresh.contains(x) && !fresh.contains(y) {
                    continue;
                }
                let img = f.query(&Hf::atom_pair(x, y))?;
                queries += 1;
                let pair = img.as_atom_set().ok_or_else(|| WitnessError::BadAnswer {
                    input: Hf::atom_pair(x, y),
                    answer: img.clone(),
                    expected: KindTag::UnorderedPairs,
                })?;
                next.extend(pair.into_iter().filter(|a| !members.contains(a)));
            }
        }
        trace.rounds.push(LayerRound { layer, sequence: seq, queries });
        if next.is_empty() {
            return Err(WitnessError::InvariantViolation {
                message: format!("layer {} is empty over {} known atoms", trace.rounds.len(), known.len()),
                table: serde_json::to_value(&trace).unwrap_or_default(),
            });
        }
        layer = next.into_iter().collect();
        members.extend(layer.iter().cloned());
        known.extend(layer.iter().cloned());
    }
}
