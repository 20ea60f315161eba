use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::model::next_stage;
use super::model_n::ENUM_LIMIT;
use super::{Class, FraisseError, MapTag, ModelN};
use crate::universe::{mask_positions, Atom, Hf, Reason};

/// One round of the tower, with its input ground list in position order.
///
/// Subsets of `ground` are bitmasks. Masks below `block` live over the previous
/// ground and are already decided; `extras` are the decided masks at or above it.
/// Every other mask gets a fresh `<x, y>` pair, indexed by its rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerStage {
    pub ground: Vec<Atom>,
    pub block: u128,
    pub extras: Vec<u128>,
    pub fresh: u128,
}

impl TowerStage {
    fn width(&self) -> usize {
        self.ground.len()
    }

    fn rank(&self, mask: u128) -> Option<u128> {
        if mask < self.block || mask >> self.width() != 0 || self.extras.binary_search(&mask).is_ok() {
            return None;
        }
        let below = self.extras.partition_point(|e| *e < mask) as u128;
        Some(mask - self.block - below)
    }

    fn unrank(&self, rank: u128) -> Option<u128> {
        if rank >= self.fresh {
            return None;
        }
        let mut m = self.block + rank;
        for e in &self.extras {
            if *e <= m {
                m += 1;
            } else {
                break;
            }
        }
        Some(m)
    }

    fn forward_masks(&self) -> impl Iterator<Item = u128> + '_ {
        let mut extras = self.extras.iter().peekable();
        (self.block..1u128 << self.width()).filter(move |m| {
            while extras.peek().is_some_and(|e| **e < *m) {
                extras.next();
            }
            if extras.peek() == Some(&m) {
                extras.next();
                return false;
            }
            true
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Loc {
    /// Base atom or member of the distinguished triple, by position in the first ground.
    Root(usize),
    Pair { stage: usize, rank: u128, second: bool },
    Copy { stage: usize, index: usize },
}

impl Loc {
    fn level(self) -> usize {
        match self {
            Loc::Root(_) => 0,
            Loc::Pair { stage, .. } | Loc::Copy { stage, .. } => stage + 1,
        }
    }
}

/// Tower over a base model: a fresh triple `u`, a fresh pair `<x_E, y_E>` for every
/// open subset `E` at each round, and a copy of the non-base atoms whose image of
/// `E` is sent to `<y_E, x_E>`.
///
/// Subsets lying inside the base that are still open receive a pair but no copy.
/// The last round is kept implicit: its pair atoms are decoded from their rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CopyTower {
    pub base: ModelN,
    pub rounds: usize,
    pub first_stage: u32,
    pub stages: Vec<TowerStage>,
    base_len: usize,
}

/// Sizes of the three sets of one round.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundSizes {
    pub input: usize,
    pub with_pairs: u128,
    pub with_copies: u128,
}

pub fn copy_tower_n(base: &ModelN, rounds: usize) -> Result<CopyTower, FraisseError> {
    if base.class != Class::N {
        return Err(FraisseError::WrongClass(base.class));
    }
    let first_stage = next_stage([base]);
    let base_len = base.atoms.len();
    let mut ground = base.atom_list();
    ground.extend((0..3).map(|r| Atom::fresh(first_stage, Reason::TowerU, 0, r)));
    let pos: BTreeMap<&Atom, usize> = ground.iter().enumerate().map(|(i, a)| (a, i)).collect();
    let mut extras: Vec<u128> = base
        .h()
        .iter()
        .map(|(e, _)| e.atoms().iter().fold(0u128, |m, a| m | 1 << pos[a]))
        .collect();
    extras.sort_unstable();
    let mut block = 0u128;
    let mut stages = Vec::new();
    for s in 0..rounds {
        if ground.len() > ENUM_LIMIT {
            return Err(FraisseError::TooLarge { needed: 1u128 << ground.len().min(127), cap: 1 << ENUM_LIMIT });
        }
        let fresh = (1u128 << ground.len()) - block - extras.len() as u128;
        let stage = TowerStage { ground: ground.clone(), block, extras: extras.clone(), fresh };
        if s + 1 < rounds {
            let width = ground.len();
            let copy_at = width as u128 + 2 * fresh;
            let next_len = copy_at + (width - base_len) as u128;
            if next_len > ENUM_LIMIT as u128 {
                return Err(FraisseError::TooLarge { needed: next_len, cap: ENUM_LIMIT as u128 });
            }
            let st = first_stage + s as u32;
            for r in 0..fresh as u64 {
                ground.push(Atom::fresh(st, Reason::TowerX, r, 0));
                ground.push(Atom::fresh(st, Reason::TowerY, r, 0));
            }
            ground.extend((0..width - base_len).map(|j| Atom::fresh(st, Reason::TowerCopy, j as u64, 0)));
            let low = (1u128 << base_len) - 1;
            extras = stage
                .forward_masks()
                .filter(|m| m >> base_len != 0)
                .map(|m| (m & low) | ((m >> base_len) << copy_at))
                .collect();
            extras.sort_unstable();
            block = 1u128 << width;
        }
        stages.push(stage);
    }
    Ok(CopyTower { base: base.clone(), rounds, first_stage, stages, base_len })
}

impl CopyTower {
    pub fn u(&self) -> [Atom; 3] {
        [0u8, 1, 2].map(|r| Atom::fresh(self.first_stage, Reason::TowerU, 0, r))
    }

    pub fn pair_atom(&self, stage: usize, rank: u128, second: bool) -> Atom {
        let reason = if second { Reason::TowerY } else { Reason::TowerX };
        Atom::fresh(self.first_stage + stage as u32, reason, rank as u64, 0)
    }

    pub fn copy_atom(&self, stage: usize, index: usize) -> Atom {
        Atom::fresh(self.first_stage + stage as u32, Reason::TowerCopy, index as u64, 0)
    }

    /// The copy map of a round, defined on its ground minus the base.
    pub fn tau(&self, stage: usize, a: &Atom) -> Option<Atom> {
        let st = self.stages.get(stage)?;
        let p = st.ground.iter().position(|g| g == a)?;
        (p >= self.base_len).then(|| self.copy_atom(stage, p - self.base_len))
    }

    pub fn sizes(&self) -> Vec<RoundSizes> {
        self.stages
            .iter()
            .map(|s| {
                let with_pairs = s.width() as u128 + 2 * s.fresh;
                RoundSizes {
                    input: s.width(),
                    with_pairs,
                    with_copies: with_pairs + (s.width() - self.base_len) as u128,
                }
            })
            .collect()
    }

    pub fn entry_count(&self) -> u128 {
        let copies: u128 = self
            .stages
            .iter()
            .map(|s| s.forward_masks().filter(|m| m >> self.base_len != 0).count() as u128)
            .sum();
        self.base.h().len() as u128 + self.stages.iter().map(|s| s.fresh).sum::<u128>() + copies
    }

    fn locate(&self, a: &Atom) -> Option<Loc> {
        if let Some(p) = self.stages.first().and_then(|s| s.ground[..self.base_len].binary_search(a).ok()) {
            return Some(Loc::Root(p));
        }
        let f = a.as_fresh()?;
        let s = f.stage.checked_sub(self.first_stage)? as usize;
        let st = self.stages.get(s)?;
        if f.role != 0 && f.reason != Reason::TowerU {
            return None;
        }
        match f.reason {
            Reason::TowerU if s == 0 && f.index == 0 && f.role < 3 => Some(Loc::Root(self.base_len + f.role as usize)),
            Reason::TowerX | Reason::TowerY if (f.index as u128) < st.fresh => {
                Some(Loc::Pair { stage: s, rank: f.index as u128, second: f.reason == Reason::TowerY })
            }
            Reason::TowerCopy if (f.index as usize) < st.width() - self.base_len => {
                Some(Loc::Copy { stage: s, index: f.index as usize })
            }
            _ => None,
        }
    }

    /// Position of a located atom inside the ground of round `level`.
    fn position(&self, loc: Loc) -> usize {
        match loc {
            Loc::Root(p) => p,
            Loc::Pair { stage, rank, second } => self.stages[stage].width() + 2 * rank as usize + second as usize,
            Loc::Copy { stage, index } => {
                let st = &self.stages[stage];
                st.width() + 2 * st.fresh as usize + index
            }
        }
    }

    fn mask_atoms(&self, stage: usize, mask: u128) -> Vec<Atom> {
        let g = &self.stages[stage].ground;
        mask_positions(mask).into_iter().map(|p| g[p].clone()).collect()
    }

    /// Value of the tower map on a set of atoms, if fulfilled.
    pub fn lookup(&self, set: &[Atom]) -> Option<(Atom, Atom)> {
        let locs: Vec<Loc> = set.iter().map(|a| self.locate(a)).collect::<Option<_>>()?;
        if locs.iter().all(|l| matches!(l, Loc::Root(p) if *p < self.base_len)) {
            if let Some(v) = self.base.h().get(&Hf::atom_set(set)) {
                return v.as_atom_pair();
            }
        }
        let level = locs.iter().map(|l| l.level()).max().unwrap_or(0);
        let off_base: Vec<&Loc> = locs.iter().filter(|l| !matches!(l, Loc::Root(p) if *p < self.base_len)).collect();
        if level >= 1
            && !off_base.is_empty()
            && off_base.iter().all(|l| matches!(l, Loc::Copy { stage, .. } if *stage == level - 1))
        {
            let s = level - 1;
            let mask = locs.iter().fold(0u128, |m, l| match l {
                Loc::Root(p) => m | 1 << p,
                Loc::Copy { index, .. } => m | 1 << (self.base_len + index),
                Loc::Pair { .. } => unreachable!(),
            });
            if let Some(r) = self.stages[s].rank(mask) {
                return Some((self.pair_atom(s, r, true), self.pair_atom(s, r, false)));
            }
        }
        if level < self.rounds {
            let mask = locs.iter().fold(0u128, |m, l| m | 1 << self.position(*l));
            let r = self.stages[level].rank(mask)?;
            return Some((self.pair_atom(level, r, false), self.pair_atom(level, r, true)));
        }
        None
    }

    /// Streams every entry; stops early when `visit` returns false.
    pub fn for_each_entry(&self, mut visit: impl FnMut(&[Atom], &Atom, &Atom) -> bool) {
        for (e, p) in self.base.h().iter() {
            let set: Vec<Atom> = e.atoms().into_iter().collect();
            let (a, b) = p.as_atom_pair().expect("pair value");
            if !visit(&set, &a, &b) {
                return;
            }
        }
        for (s, st) in self.stages.iter().enumerate() {
            for (r, m) in st.forward_masks().enumerate() {
                let (x, y) = (self.pair_atom(s, r as u128, false), self.pair_atom(s, r as u128, true));
                let set = self.mask_atoms(s, m);
                if !visit(&set, &x, &y) {
                    return;
                }
                if m >> self.base_len == 0 {
                    continue;
                }
                let mut copy: Vec<Atom> = mask_positions(m)
                    .into_iter()
                    .map(|p| if p < self.base_len { st.ground[p].clone() } else { self.copy_atom(s, p - self.base_len) })
                    .collect();
                copy.sort();
                if !visit(&copy, &y, &x) {
                    return;
                }
            }
        }
    }

    /// Explicit model of the whole tower, when it fits under `cap` entries.
    pub fn to_model(&self, cap: u128) -> Result<ModelN, FraisseError> {
        let n = self.entry_count();
        if n > cap {
            return Err(FraisseError::TooLarge { needed: n, cap });
        }
        let mut m = self.base.clone();
        let mut err = None;
        self.for_each_entry(|set, x, y| {
            m.atoms.extend(set.iter().cloned());
            m.atoms.insert(x.clone());
            m.atoms.insert(y.clone());
            if let Err(e) = m.assign(MapTag::H, Hf::atom_set(set), Hf::atom_pair(x, y)) {
                err = Some(e);
                return false;
            }
            true
        });
        err.map_or(Ok(m), Err)
    }

    /// The automorphism that fixes the base, swaps `u` with its first copy and
    /// exchanges `x_E` and `y_E` for every first-round subset `E` off the base.
    pub fn transposing_automorphism(&self) -> Result<TowerAutomorphism<'_>, FraisseError> {
        let mut auto = TowerAutomorphism { tower: self, perms: vec![Vec::new()] };
        for s in 1..self.rounds {
            let st = &self.stages[s];
            let mut perm = Vec::with_capacity(st.width());
            for a in &st.ground {
                let b = auto.apply(a).ok_or_else(|| FraisseError::Precondition(format!("cannot move {a}")))?;
                let loc = self.locate(&b).filter(|l| l.level() <= s);
                let loc = loc.ok_or_else(|| FraisseError::Precondition(format!("{b} leaves round {s}")))?;
                perm.push(self.position(loc));
            }
            auto.perms.push(perm);
        }
        Ok(auto)
    }
}

pub struct TowerAutomorphism<'a> {
    tower: &'a CopyTower,
    /// Position permutation of each round's ground, from round 1 on.
    perms: Vec<Vec<usize>>,
}

/// Result of checking a permutation against every tower entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryAudit {
    pub checked: u128,
    pub violation: Option<(Vec<Atom>, Atom, Atom)>,
}

impl TowerAutomorphism<'_> {
    pub fn apply(&self, a: &Atom) -> Option<Atom> {
        let t = self.tower;
        let base_len = t.base_len;
        Some(match t.locate(a)? {
            Loc::Root(p) if p < base_len => a.clone(),
            Loc::Root(p) => t.copy_atom(0, p - base_len),
            Loc::Copy { stage: 0, index } => t.stages[0].ground[base_len + index].clone(),
            Loc::Pair { stage: 0, rank, second } => {
                let m = t.stages[0].unrank(rank)?;
                if m >> base_len == 0 {
                    a.clone()
                } else {
                    t.pair_atom(0, rank, !second)
                }
            }
            Loc::Pair { stage, rank, second } => {
                let st = &t.stages[stage];
                let m = st.unrank(rank)?;
                let moved = mask_positions(m).into_iter().fold(0u128, |acc, p| acc | 1 << self.perms[stage][p]);
                t.pair_atom(stage, st.rank(moved)?, second)
            }
            Loc::Copy { stage, index } => t.copy_atom(stage, self.perms[stage][base_len + index] - base_len),
        })
    }

    /// Checks that every entry is sent to an entry and that the map is an involution.
    pub fn audit(&self) -> EntryAudit {
        let mut checked = 0u128;
        let mut violation = None;
        self.tower.for_each_entry(|set, x, y| {
            checked += 1;
            let ok = (|| {
                let mut img: Vec<Atom> = set.iter().map(|a| self.apply(a)).collect::<Option<_>>()?;
                img.sort();
                let (px, py) = (self.apply(x)?, self.apply(y)?);
                let back = (self.apply(&px)? == *x) && (self.apply(&py)? == *y);
                Some(back && self.tower.lookup(&img) == Some((px, py)))
            })();
            if ok != Some(true) {
                violation = Some((set.to_vec(), x.clone(), y.clone()));
                return false;
            }
            true
        });
        EntryAudit { checked, violation }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fraisse::{leq_n, Model};

    #[test]
    fn first_round_over_empty_base() {
        let t = copy_tower_n(&Model::empty(Class::N), 1).unwrap();
        let s = t.sizes()[0];
        assert_eq!((s.input, s.with_pairs, s.with_copies), (3, 19, 22));
        assert_eq!(t.entry_count(), 8 + 7);
        let m = t.to_model(1000).unwrap();
        assert_eq!(m.atoms.len(), 22);
        assert_eq!(leq_n(&t.base, &m).unwrap(), None);
        let auto = t.transposing_automorphism().unwrap();
        for a in t.u() {
            assert_eq!(auto.apply(&a), t.tau(0, &a));
        }
        assert_eq!(auto.audit().violation, None);
    }

    #[test]
    fn copies_swap_pairs() {
        let t = copy_tower_n(&Model::empty(Class::N), 1).unwrap();
        let u = t.u();
        let e = vec![u[0].clone(), u[2].clone()];
        let (x, y) = t.lookup(&e).unwrap();
        let mut c: Vec<Atom> = e.iter().map(|a| t.tau(0, a).unwrap()).collect();
        c.sort();
        assert_eq!(t.lookup(&c), Some((y, x)));
    }

    #[test]
    fn base_with_point_two_rounds_is_refused() {
        let b = Model::with_atoms(Class::N, [Atom::base(0)]);
        assert!(copy_tower_n(&b, 1).is_ok());
        assert!(matches!(copy_tower_n(&b, 2), Err(FraisseError::TooLarge { .. })));
    }
}
