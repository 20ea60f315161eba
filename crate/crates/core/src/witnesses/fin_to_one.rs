//! A finite-to-one map `seq(A) -> fin(A)` built from an injective list
//! `x_0, x_1, …` of atoms.
//!
//! `iota` sends `x_i` to `x_{2i+1}` and fixes every other atom, so ranges of
//! shifted sequences never meet the even-indexed atoms. A sequence `s` goes
//! to `ran(iota∘s) ∪ {x_{2c}}` where `c` is the code of `iota∘s`; the even
//! marker recovers the code, and the range with the code recovers `s`.

use std::collections::{BTreeMap, BTreeSet};

use super::WitnessError;
use crate::universe::{seq_code, seq_decode, Atom, Reason};

/// Injective list of atoms: an explicit prefix followed by supply atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomEmbedding {
    prefix: Vec<Atom>,
    index: BTreeMap<Atom, u128>,
}

impl AtomEmbedding {
    pub fn new(prefix: Vec<Atom>) -> Result<Self, WitnessError> {
        let mut index = BTreeMap::new();
        for (i, a) in prefix.iter().enumerate() {
            if matches!(a, Atom::Fresh(f) if f.reason == Reason::Supply) {
                return Err(WitnessError::Argument(format!("{a} is reserved for the supply")));
            }
            if index.insert(a.clone(), i as u128).is_some() {
                return Err(WitnessError::Argument(format!("embedding repeats {a}")));
            }
        }
        Ok(AtomEmbedding { prefix, index })
    }

    /// `x_i`.
    pub fn atom(&self, i: u128) -> Result<Atom, WitnessError> {
        match usize::try_from(i).ok().and_then(|j| self.prefix.get(j)) {
            Some(a) => Ok(a.clone()),
            None => {
                let idx = u64::try_from(i).map_err(|_| WitnessError::Overflow)?;
                Ok(Atom::fresh(0, Reason::Supply, idx, 0))
            }
        }
    }

    /// `i` with `x_i = a`, if `a` is listed.
    pub fn position(&self, a: &Atom) -> Option<u128> {
        if let Some(i) = self.index.get(a) {
            return Some(*i);
        }
        match a {
            Atom::Fresh(f) if f.reason == Reason::Supply && f.stage == 0 && f.role == 0 => {
                let i = u128::from(f.index);
                (i >= self.prefix.len() as u128).then_some(i)
            }
            _ => None,
        }
    }

    pub fn iota(&self, a: &Atom) -> Result<Atom, WitnessError> {
        match self.position(a) {
            Some(i) => self.atom(2 * i + 1),
            None => Ok(a.clone()),
        }
    }

    fn iota_inverse(&self, a: &Atom) -> Option<Atom> {
        match self.position(a) {
            Some(i) if i % 2 == 1 => self.atom(i / 2).ok(),
            Some(_) => None,
            None => Some(a.clone()),
        }
    }
}

pub fn finite_to_one_seq_to_fin(embed: &AtomEmbedding, s: &[Atom]) -> Result<BTreeSet<Atom>, WitnessError> {
    let shifted: Vec<Atom> = s.iter().map(|a| embed.iota(a)).collect::<Result<_, _>>()?;
    let code = seq_code(&shifted)?;
    let marker = embed.atom(code.checked_mul(2).ok_or(WitnessError::Overflow)?)?;
    let mut out: BTreeSet<Atom> = shifted.into_iter().collect();
    out.insert(marker);
    Ok(out)
}

/// Every sequence sent to `f`. The fiber has at most one element.
pub fn fiber_of(embed: &AtomEmbedding, f: &BTreeSet<Atom>) -> Vec<Vec<Atom>> {
    let markers: Vec<(&Atom, u128)> = f
        .iter()
        .filter_map(|a| embed.position(a).filter(|i| i % 2 == 0).map(|i| (a, i)))
        .collect();
    let mut out = Vec::new();
    for (m, i) in markers {
        let range: BTreeSet<Atom> = f.iter().filter(|a| *a != m).cloned().collect();
        let Some(shifted) = seq_decode(&range, i / 2) else { continue };
        let Some(s) = shifted.iter().map(|a| embed.iota_inverse(a)).collect::<Option<Vec<Atom>>>() else {
            continue;
        };
        if finite_to_one_seq_to_fin(embed, &s).ok().as_ref() == Some(f) {
            out.push(s);
        }
    }
    out.sort();
    out
}
