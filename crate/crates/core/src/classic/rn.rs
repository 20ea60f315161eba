//! The epsilon-flip tower and its permutation group.
//!
//! `A_0` is a finite set of base atoms; level `n+1` adds `(n+1, p, eps)` for
//! every tuple `p` over `A_n` of length at most `n+1` and both bits `eps`.
//! A group element is a base permutation together with one flip bit per
//! `(level, p)`; it sends `(n+1, p, eps)` to `(n+1, pi(p), flip(p) xor eps)`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::ClassicError;
use crate::universe::{PositionSeqs, RnAtom};

/// Environment variable capping the size of built universes.
pub const MAX_ATOMS_ENV: &str = "CHOICELESS_LAB_MAX_ATOMS";
pub const DEFAULT_MAX_ATOMS: u128 = 250_000;

pub fn max_atoms() -> u128 {
    std::env::var(MAX_ATOMS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_ATOMS)
}

/// `|A_depth|` by the level recursion, without building anything.
pub fn rn_size(base_size: u32, depth: u32) -> Option<u128> {
    let mut size = u128::from(base_size);
    for n in 0..depth {
        let mut tuples: u128 = 0;
        let mut power: u128 = 1;
        for _ in 0..=n + 1 {
            tuples = tuples.checked_add(power)?;
            power = power.checked_mul(size)?;
        }
        size = size.checked_add(tuples.checked_mul(2)?)?;
    }
    Some(size)
}

/// Tuple keys `(level, p)` of every level up to `depth`.
pub type FlipKey = (u32, Vec<RnAtom>);

/// The universe `A_depth` ordered by level, then by construction order.
pub fn rn_build(base_size: u32, depth: u32) -> Result<Vec<RnAtom>, ClassicError> {
    rn_build_capped(base_size, depth, max_atoms())
}

pub fn rn_build_capped(base_size: u32, depth: u32, cap: u128) -> Result<Vec<RnAtom>, ClassicError> {
    if base_size == 0 {
        return Err(ClassicError::Argument("base size must be at least 1".into()));
    }
    let size = rn_size(base_size, depth).ok_or(ClassicError::TooLarge { size: None, cap })?;
    if size > cap {
        return Err(ClassicError::TooLarge { size: Some(size), cap });
    }
    let mut atoms: Vec<RnAtom> = (0..base_size).map(RnAtom::Base).collect();
    for level in 1..=depth {
        let prev = atoms.clone();
        for p in rn_keys_at(&prev, level) {
            for eps in 0..2u8 {
                atoms.push(RnAtom::Tup { level, p: p.clone(), eps });
            }
        }
    }
    Ok(atoms)
}

/// Tuples usable at `level`: all sequences of length `<= level` over `prev`.
fn rn_keys_at(prev: &[RnAtom], level: u32) -> impl Iterator<Item = Vec<RnAtom>> + '_ {
    PositionSeqs::new(prev.len(), level as usize, false)
        .map(move |pos| pos.into_iter().map(|i| prev[i].clone()).collect())
}

/// Every flip key of the tower `A_depth`.
pub fn rn_flip_keys(base_size: u32, depth: u32) -> Result<Vec<FlipKey>, ClassicError> {
    let atoms = rn_build(base_size, depth)?;
    let mut keys = Vec::new();
    for level in 1..=depth {
        let prev: Vec<RnAtom> = atoms.iter().filter(|a| a.level() < level).cloned().collect();
        keys.extend(rn_keys_at(&prev, level).map(|p| (level, p)));
    }
    Ok(keys)
}

/// Group element of the flip tower. Only non-identity data is stored: base
/// atoms absent from `base` are fixed and keys absent from `flips` carry bit 0.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RnPerm {
    base: BTreeMap<u32, u32>,
    flips: BTreeSet<FlipKey>,
}

impl RnPerm {
    pub fn identity() -> Self {
        RnPerm::default()
    }

    pub fn new(base: BTreeMap<u32, u32>, flips: BTreeSet<FlipKey>) -> Result<Self, ClassicError> {
        let images: BTreeSet<u32> = base.values().copied().collect();
        let domain: BTreeSet<u32> = base.keys().copied().collect();
        if images != domain {
            return Err(ClassicError::Argument("base map is not a permutation of its carrier".into()));
        }
        let base = base.into_iter().filter(|(k, v)| k != v).collect();
        Ok(RnPerm { base, flips })
    }

    pub fn transposition(i: u32, j: u32) -> Self {
        let mut base = BTreeMap::new();
        if i != j {
            base.insert(i, j);
            base.insert(j, i);
        }
        RnPerm { base, flips: BTreeSet::new() }
    }

    pub fn flip(level: u32, p: Vec<RnAtom>) -> Self {
        RnPerm { base: BTreeMap::new(), flips: BTreeSet::from([(level, p)]) }
    }

    pub fn base_map(&self) -> &BTreeMap<u32, u32> {
        &self.base
    }

    pub fn flips(&self) -> &BTreeSet<FlipKey> {
        &self.flips
    }

    pub fn flip_bit(&self, level: u32, p: &[RnAtom]) -> u8 {
        u8::from(self.flips.contains(&(level, p.to_vec())))
    }

    pub fn is_identity(&self) -> bool {
        self.base.is_empty() && self.flips.is_empty()
    }

    pub fn apply(&self, x: &RnAtom) -> RnAtom {
        match x {
            RnAtom::Base(i) => RnAtom::Base(*self.base.get(i).unwrap_or(i)),
            RnAtom::Tup { level, p, eps } => RnAtom::Tup {
                level: *level,
                p: self.apply_tuple(p),
                eps: eps ^ self.flip_bit(*level, p),
            },
        }
    }

    pub fn apply_tuple(&self, p: &[RnAtom]) -> Vec<RnAtom> {
        p.iter().map(|y| self.apply(y)).collect()
    }

    pub fn inverse(&self) -> RnPerm {
        let base = self.base.iter().map(|(k, v)| (*v, *k)).collect();
        let flips = self.flips.iter().map(|(l, p)| (*l, self.apply_tuple(p))).collect();
        RnPerm { base, flips }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &RnPerm) -> RnPerm {
        let mut carrier: BTreeSet<u32> = self.base.keys().copied().collect();
        carrier.extend(other.base.keys().copied());
        let base = carrier
            .into_iter()
            .filter_map(|i| {
                let mid = *other.base.get(&i).unwrap_or(&i);
                let img = *self.base.get(&mid).unwrap_or(&mid);
                (img != i).then_some((i, img))
            })
            .collect();
        let mut flips = other.flips.clone();
        let back = other.inverse();
        for (l, q) in &self.flips {
            let key = (*l, back.apply_tuple(q));
            if !flips.remove(&key) {
                flips.insert(key);
            }
        }
        RnPerm { base, flips }
    }
}
