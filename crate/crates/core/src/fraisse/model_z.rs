use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::model::next_stage;
use super::model_n::check_budget;
use super::{Class, FraisseError, MapTag, ModelZ};
use crate::symmetry::FinitePerm;
use crate::universe::{count_kind, enum_kind, Atom, Hf, Reason};

/// Fresh atoms added for one open input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub stage: usize,
    pub map: MapTag,
    pub input: Hf,
    pub atoms: Vec<Atom>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlainExtension {
    pub seed: ModelZ,
    pub model: ModelZ,
    pub blocks: Vec<Block>,
    /// Atom count after each stage, starting with the seed.
    pub sizes: Vec<usize>,
}

fn block_width(tag: MapTag) -> usize {
    match tag {
        MapTag::F => 2,
        MapTag::G | MapTag::H => 3,
    }
}

fn block_output(tag: MapTag, atoms: &[Atom]) -> Hf {
    match tag {
        MapTag::G => Hf::atom_seq(atoms),
        MapTag::F | MapTag::H => Hf::atom_set(atoms),
    }
}

/// Fulfils every open input with a block of fresh atoms, `stages` times: pairs
/// get a fresh 2-set, 2-sets a fresh injective triple, injective sequences a
/// fresh 3-set.
pub fn plain_extension_z(seed: &ModelZ, stages: usize) -> Result<PlainExtension, FraisseError> {
    if seed.class != Class::Z {
        return Err(FraisseError::WrongClass(seed.class));
    }
    let stage0 = next_stage([seed]);
    let mut model = seed.clone();
    let mut blocks = Vec::new();
    let mut sizes = vec![model.atoms.len()];
    for j in 0..stages {
        let ground = model.atom_list();
        let k = ground.len() as u64;
        let mut needed: u128 = 0;
        for tag in Class::Z.tags() {
            let (dom, _) = Class::Z.kinds(*tag);
            let open = count_kind(dom, k, None)
                .unwrap_or(u128::MAX)
                .saturating_sub(model.map(*tag).len() as u128);
            needed = needed.saturating_add(open.saturating_mul(block_width(*tag) as u128));
        }
        check_budget(ground.len().min(super::model_n::ENUM_LIMIT), needed, 1)?;
        let stage = stage0 + j as u32;
        let mut fresh = Vec::new();
        for tag in Class::Z.tags() {
            let (dom, _) = Class::Z.kinds(*tag);
            let reason = match tag {
                MapTag::F => Reason::PlainF,
                MapTag::G => Reason::PlainG,
                MapTag::H => Reason::PlainH,
            };
            let open: Vec<Hf> = enum_kind(dom, &ground, None)
                .expect("model atoms are distinct")
                .filter(|x| !model.map(*tag).contains(x))
                .collect();
            for (idx, input) in open.into_iter().enumerate() {
                let atoms: Vec<Atom> = (0..block_width(*tag))
                    .map(|r| Atom::fresh(stage, reason, idx as u64, r as u8))
                    .collect();
                fresh.push(Block { stage: j, map: *tag, input, atoms });
            }
        }
        for b in &fresh {
            model.atoms.extend(b.atoms.iter().cloned());
        }
        for b in &fresh {
            model.assign(b.map, b.input.clone(), block_output(b.map, &b.atoms))?;
        }
        blocks.extend(fresh);
        sizes.push(model.atoms.len());
    }
    Ok(PlainExtension { seed: seed.clone(), model, blocks, sizes })
}

impl PlainExtension {
    /// Atoms present after `stage` rounds.
    pub fn atoms_at(&self, stage: usize) -> BTreeSet<Atom> {
        let mut out = self.seed.atoms.clone();
        for b in self.blocks.iter().filter(|b| b.stage < stage) {
            out.extend(b.atoms.iter().cloned());
        }
        out
    }

    pub fn block_of(&self, map: MapTag, input: &Hf) -> Option<&Block> {
        self.blocks.iter().find(|b| b.map == map && &b.input == input)
    }

    /// Extends an automorphism of the structure present after `from` rounds to the
    /// whole extension, sending each later block to the block of the image input.
    pub fn lift(&self, pi: &FinitePerm, from: usize) -> Result<FinitePerm, FraisseError> {
        let carrier = self.atoms_at(from);
        let partial = self.model.restrict(&carrier);
        if let Some((t, x, y)) = partial.automorphism_violation(pi) {
            return Err(FraisseError::Precondition(format!(
                "not an automorphism after {from} rounds: {t:?} {x} -> {y}"
            )));
        }
        let index: BTreeMap<(MapTag, &Hf), &Block> =
            self.blocks.iter().map(|b| ((b.map, &b.input), b)).collect();
        let mut map: BTreeMap<Atom, Atom> = carrier.iter().map(|a| (a.clone(), pi.apply(a))).collect();
        for b in self.blocks.iter().filter(|b| b.stage >= from) {
            let image = b.input.map_atoms(&mut |a| map.get(a).cloned().unwrap_or_else(|| a.clone()));
            let target = index.get(&(b.map, &image)).ok_or_else(|| {
                FraisseError::Precondition(format!("no block for the image input {image}"))
            })?;
            for (s, d) in b.atoms.iter().zip(&target.atoms) {
                map.insert(s.clone(), d.clone());
            }
        }
        FinitePerm::from_map(map).map_err(|e| FraisseError::Precondition(e.to_string()))
    }

    /// Swaps the two atoms of the `f`-block of `input` and lifts the swap.
    pub fn f_block_swap(&self, input: &Hf) -> Result<FinitePerm, FraisseError> {
        let b = self
            .block_of(MapTag::F, input)
            .ok_or_else(|| FraisseError::Precondition(format!("no f-block for {input}")))?;
        let swap = FinitePerm::transposition(&b.atoms[0], &b.atoms[1]);
        self.lift(&swap, b.stage + 1)
    }
}
