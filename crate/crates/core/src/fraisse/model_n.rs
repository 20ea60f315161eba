use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::model::next_stage;
use super::{leq_n, Class, FraisseError, MapTag, Model, ModelN};
use crate::classic::max_atoms;
use crate::symmetry::FinitePerm;
use crate::universe::{enum_kind, mask_positions, AllMasks, Atom, Hf, KindTag, Reason};

/// Largest atom count whose subsets are enumerated explicitly.
pub(crate) const ENUM_LIMIT: usize = 24;

pub(crate) fn check_budget(current: usize, new_sets: u128, per_set: u128) -> Result<(), FraisseError> {
    let needed = new_sets.saturating_mul(per_set).saturating_add(current as u128);
    let cap = max_atoms();
    if current > ENUM_LIMIT || needed > cap {
        return Err(FraisseError::TooLarge { needed, cap });
    }
    Ok(())
}

fn subset_of(mask: u128, ground: &[Atom]) -> BTreeSet<Atom> {
    mask_positions(mask).into_iter().map(|i| ground[i].clone()).collect()
}

/// Joins two compatible models and then fulfils every open subset, `stages` times.
pub fn amalgamate_n(m1: &ModelN, m2: &ModelN, stages: usize) -> Result<ModelN, FraisseError> {
    for m in [m1, m2] {
        if m.class != Class::N {
            return Err(FraisseError::WrongClass(m.class));
        }
    }
    let shared: BTreeSet<Atom> = m1.atoms.intersection(&m2.atoms).cloned().collect();
    if m1.restrict(&shared) != m2.restrict(&shared) {
        return Err(FraisseError::Precondition("the models disagree on their common atoms".into()));
    }
    let base = m1.restrict(&shared);
    for m in [m1, m2] {
        if let Some(v) = leq_n(&base, m)? {
            return Err(FraisseError::Precondition(format!("common part is not a strong submodel: {v:?}")));
        }
    }

    let mut out = Model::with_atoms(Class::N, m1.atoms.union(&m2.atoms).cloned());
    for (t, x, y) in m1.entries().chain(m2.entries()) {
        out.assign(t, x.clone(), y.clone())?;
    }
    let stage0 = next_stage([m1, m2]);
    for i in 0..stages {
        let ground = out.atom_list();
        let open = (1u128 << ground.len().min(127)) - out.h().len() as u128;
        check_budget(ground.len(), open, 2)?;
        let stage = stage0 + i as u32;
        let mut pending = Vec::new();
        for mask in AllMasks::new(ground.len() as u32) {
            let e = Hf::atom_set(&subset_of(mask, &ground));
            if out.h().contains(&e) {
                continue;
            }
            let idx = pending.len() as u64;
            let a = Atom::fresh(stage, Reason::Amalgam, idx, 0);
            let b = Atom::fresh(stage, Reason::Amalgam, idx, 1);
            pending.push((e, a, b));
        }
        for (e, a, b) in pending {
            out.atoms.insert(a.clone());
            out.atoms.insert(b.clone());
            out.assign(MapTag::H, e, Hf::atom_pair(&a, &b))?;
        }
    }
    Ok(out)
}

/// Extension of a base model by three interchangeable atoms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct XyzExtension {
    pub base: ModelN,
    pub model: ModelN,
    pub xyz: [Atom; 3],
    pub rounds: usize,
}

impl XyzExtension {
    /// The six permutations of the distinguished triple.
    pub fn triple_permutations(&self) -> Vec<FinitePerm> {
        const ORDERS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        ORDERS
            .iter()
            .map(|o| {
                let map: BTreeMap<Atom, Atom> =
                    (0..3).map(|i| (self.xyz[i].clone(), self.xyz[o[i]].clone())).collect();
                FinitePerm::from_map(map).expect("permutation of three atoms")
            })
            .collect()
    }

    /// Permutations of the triple that fail to be automorphisms.
    pub fn non_automorphisms(&self) -> Vec<FinitePerm> {
        self.triple_permutations().into_iter().filter(|p| !self.model.is_automorphism(p)).collect()
    }
}

/// Counts over the distinguished triple: injective sequences of length 2 or 3,
/// and ordered pairs with distinct entries.
pub fn xyz_sequence_counts(xyz: &[Atom; 3]) -> (usize, usize) {
    let seqs = enum_kind(KindTag::InjSeq, xyz, None)
        .expect("three distinct atoms")
        .filter(|s| matches!(s.as_seq().map(<[Hf]>::len), Some(2 | 3)))
        .count();
    let pairs = enum_kind(KindTag::OrderedPairs, xyz, None)
        .expect("three distinct atoms")
        .filter(|p| p.as_pair().is_some_and(|(a, b)| a != b))
        .count();
    (seqs, pairs)
}

/// Adds `x, y, z` to `base` and fulfils every new subset for `rounds` rounds.
///
/// A subset `E` with `r = E \ {x,y,z}` is sent by its number of triple members:
/// none or all three go to a fresh pair, one member `u` goes to `<u, a>`, two
/// members missing `v` go to `<v, a>`. The fresh atoms depend only on `(r, class)`,
/// so every permutation of the triple is an automorphism.
pub fn xyz_extension_n(base: &ModelN, rounds: usize) -> Result<XyzExtension, FraisseError> {
    if base.class != Class::N {
        return Err(FraisseError::WrongClass(base.class));
    }
    let stage = next_stage([base]);
    let xyz = [0u8, 1, 2].map(|r| Atom::fresh(stage, Reason::Xyz, 0, r));
    let triple: BTreeSet<Atom> = xyz.iter().cloned().collect();
    let mut model = base.clone();
    model.atoms.extend(triple.iter().cloned());

    let mut slots: BTreeMap<(BTreeSet<Atom>, u8), (Atom, Atom)> = BTreeMap::new();
    let mut counters = [0u64; 4];
    for _ in 0..rounds {
        let ground = model.atom_list();
        check_budget(ground.len(), 1u128 << ground.len().min(127), 2)?;
        let mut pending = Vec::new();
        for mask in AllMasks::new(ground.len() as u32) {
            let e = subset_of(mask, &ground);
            let key = Hf::atom_set(&e);
            if e.is_subset(&base.atoms) || model.h().contains(&key) {
                continue;
            }
            let rest: BTreeSet<Atom> = e.difference(&triple).cloned().collect();
            let class = (e.len() - rest.len()) as u8;
            let (a, b) = slots
                .entry((rest, class))
                .or_insert_with(|| {
                    let idx = counters[class as usize];
                    counters[class as usize] += 1;
                    let r = Reason::XyzClass(class);
                    (Atom::fresh(stage, r, idx, 0), Atom::fresh(stage, r, idx, 1))
                })
                .clone();
            let pair = match class {
                1 => Hf::atom_pair(e.intersection(&triple).next().expect("one member"), &a),
                2 => Hf::atom_pair(triple.difference(&e).next().expect("one missing"), &a),
                _ => Hf::atom_pair(&a, &b),
            };
            pending.push((key, pair));
        }
        for (e, pair) in pending {
            model.atoms.extend(pair.atoms());
            model.assign(MapTag::H, e, pair)?;
        }
    }
    Ok(XyzExtension { base: base.clone(), model, xyz, rounds })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(id: u64) -> ModelN {
        Model::with_atoms(Class::N, [Atom::base(id)])
    }

    #[test]
    fn amalgam_of_two_points_has_ten_atoms() {
        let out = amalgamate_n(&single(0), &single(1), 1).unwrap();
        assert_eq!(out.atoms.len(), 10);
        assert_eq!(out.h().len(), 4);
        assert_eq!(leq_n(&single(0), &out).unwrap(), None);
        assert_eq!(leq_n(&single(1), &out).unwrap(), None);
        assert_eq!(out.frontier().count, 1024 - 4);
    }

    #[test]
    fn amalgam_rejects_disagreement() {
        let mut m1 = Model::with_atoms(Class::N, [Atom::base(0)]);
        let mut m2 = m1.clone();
        let a = Atom::base(0);
        m1.assign(MapTag::H, Hf::empty(), Hf::atom_pair(&a, &a)).unwrap();
        m2.atoms.insert(Atom::base(1));
        m2.assign(MapTag::H, Hf::empty(), Hf::atom_pair(&a, &Atom::base(1))).unwrap();
        assert!(amalgamate_n(&m1, &m2, 1).is_err());
    }

    #[test]
    fn xyz_permutations_are_automorphisms() {
        let ext = xyz_extension_n(&Model::empty(Class::N), 2).unwrap();
        assert!(ext.non_automorphisms().is_empty());
        assert_eq!(leq_n(&ext.base, &ext.model).unwrap(), None);
        assert_eq!(xyz_sequence_counts(&ext.xyz), (12, 6));
    }

    #[test]
    fn xyz_over_a_point() {
        let ext = xyz_extension_n(&single(7), 1).unwrap();
        assert!(ext.non_automorphisms().is_empty());
        assert_eq!(ext.model.h().len(), 14);
    }
}
