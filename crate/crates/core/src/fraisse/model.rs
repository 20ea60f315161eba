use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::FraisseError;
use crate::symmetry::FinitePerm;
use crate::universe::{
    count_kind, enum_kind, Atom, Hf, KindTag,
};

/// Which amalgamation class a model belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Class {
    /// `(A, h)` with `h: fin(A) -> A^2`.
    N,
    /// `(A, f, g, h)` with `f: A^2 -> [A]^2`, `g: [A]^2 -> seq11(A)`, `h: seq11(A) -> fin(A)`.
    Z,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapTag {
    F,
    G,
    H,
}

impl Class {
    pub fn tags(self) -> &'static [MapTag] {
        match self {
            Class::N => &[MapTag::H],
            Class::Z => &[MapTag::F, MapTag::G, MapTag::H],
        }
    }

    /// Domain and codomain kinds of a map.
    pub fn kinds(self, tag: MapTag) -> (KindTag, KindTag) {
        match (self, tag) {
            (Class::N, _) => (KindTag::FinSubsets, KindTag::OrderedPairs),
            (Class::Z, MapTag::F) => (KindTag::OrderedPairs, KindTag::UnorderedPairs),
            (Class::Z, MapTag::G) => (KindTag::UnorderedPairs, KindTag::InjSeq),
            (Class::Z, MapTag::H) => (KindTag::InjSeq, KindTag::FinSubsets),
        }
    }
}

/// Finite injective partial map between objects.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "Vec<(Hf, Hf)>", try_from = "Vec<(Hf, Hf)>")]
pub struct PartialInjection {
    fwd: BTreeMap<Hf, Hf>,
    rev: BTreeMap<Hf, Hf>,
}

impl From<PartialInjection> for Vec<(Hf, Hf)> {
    fn from(p: PartialInjection) -> Self {
        p.fwd.into_iter().collect()
    }
}

impl TryFrom<Vec<(Hf, Hf)>> for PartialInjection {
    type Error = FraisseError;

    fn try_from(v: Vec<(Hf, Hf)>) -> Result<Self, Self::Error> {
        let mut p = PartialInjection::default();
        for (x, y) in v {
            p.insert(MapTag::H, x, y)?;
        }
        Ok(p)
    }
}

impl PartialInjection {
    /// Adds `x -> y`; re-adding an identical entry is a no-op.
    pub fn insert(&mut self, tag: MapTag, x: Hf, y: Hf) -> Result<(), FraisseError> {
        if let Some(old) = self.fwd.get(&x) {
            if *old == y {
                return Ok(());
            }
            return Err(FraisseError::Conflict { map: tag, input: x, first: old.clone(), second: y });
        }
        if let Some(other) = self.rev.get(&y) {
            return Err(FraisseError::NotInjective { map: tag, first: other.clone(), second: x, image: y });
        }
        self.rev.insert(y.clone(), x.clone());
        self.fwd.insert(x, y);
        Ok(())
    }

    pub fn get(&self, x: &Hf) -> Option<&Hf> {
        self.fwd.get(x)
    }

    pub fn preimage(&self, y: &Hf) -> Option<&Hf> {
        self.rev.get(y)
    }

    pub fn contains(&self, x: &Hf) -> bool {
        self.fwd.contains_key(x)
    }

    pub fn len(&self) -> usize {
        self.fwd.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fwd.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Hf, &Hf)> {
        self.fwd.iter()
    }
}

/// Unfulfilled inputs of a model. The list is only materialised when short.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Frontier {
    pub count: u128,
    pub complete: bool,
    pub inputs: Vec<(MapTag, Hf)>,
}

/// A finite partial structure of either class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Model {
    pub class: Class,
    pub atoms: BTreeSet<Atom>,
    pub maps: BTreeMap<MapTag, PartialInjection>,
}

pub type ModelN = Model;
pub type ModelZ = Model;

/// Frontier lists longer than this are reported by count only.
pub const FRONTIER_LIST_LIMIT: u128 = 4096;

impl Model {
    pub fn empty(class: Class) -> Self {
        Model::with_atoms(class, [])
    }

    pub fn with_atoms<I: IntoIterator<Item = Atom>>(class: Class, atoms: I) -> Self {
        let maps = class.tags().iter().map(|t| (*t, PartialInjection::default())).collect();
        Model { class, atoms: atoms.into_iter().collect(), maps }
    }

    pub fn map(&self, tag: MapTag) -> &PartialInjection {
        &self.maps[&tag]
    }

    pub fn h(&self) -> &PartialInjection {
        self.map(MapTag::H)
    }

    /// Adds an entry after checking shapes, atoms and injectivity.
    pub fn assign(&mut self, tag: MapTag, x: Hf, y: Hf) -> Result<(), FraisseError> {
        let (dom, cod) = self.class.kinds(tag);
        if !crate::witnesses::has_kind(&x, dom) || !crate::witnesses::has_kind(&y, cod) {
            return Err(FraisseError::Shape { map: tag, input: x, output: y });
        }
        for a in x.atoms().into_iter().chain(y.atoms()) {
            if !self.atoms.contains(&a) {
                return Err(FraisseError::ForeignAtom { map: tag, atom: a });
            }
        }
        self.maps
            .get_mut(&tag)
            .ok_or(FraisseError::WrongClass(self.class))?
            .insert(tag, x, y)
    }

    pub fn entries(&self) -> impl Iterator<Item = (MapTag, &Hf, &Hf)> {
        self.maps.iter().flat_map(|(t, m)| m.iter().map(move |(x, y)| (*t, x, y)))
    }

    pub fn entry_count(&self) -> usize {
        self.maps.values().map(PartialInjection::len).sum()
    }

    pub fn atom_list(&self) -> Vec<Atom> {
        self.atoms.iter().cloned().collect()
    }

    /// The induced structure on `sub`: entries whose input and output both lie over `sub`.
    pub fn restrict(&self, sub: &BTreeSet<Atom>) -> Model {
        let mut out = Model::with_atoms(self.class, sub.iter().cloned());
        for (t, x, y) in self.entries() {
            if x.atoms().is_subset(sub) && y.atoms().is_subset(sub) {
                out.maps.get_mut(&t).expect("same class").insert(t, x.clone(), y.clone()).expect("restriction of an injection");
            }
        }
        out
    }

    pub fn frontier(&self) -> Frontier {
        self.frontier_limited(FRONTIER_LIST_LIMIT)
    }

    pub fn frontier_limited(&self, limit: u128) -> Frontier {
        let k = self.atoms.len() as u64;
        let mut count: u128 = 0;
        for tag in self.class.tags() {
            let (dom, _) = self.class.kinds(*tag);
            let total = count_kind(dom, k, None).unwrap_or(u128::MAX);
            count = count.saturating_add(total.saturating_sub(self.map(*tag).len() as u128));
        }
        let mut inputs = Vec::new();
        let complete = count <= limit;
        if complete {
            let ground = self.atom_list();
            for tag in self.class.tags() {
                let (dom, _) = self.class.kinds(*tag);
                if let Ok(it) = enum_kind(dom, &ground, None) {
                    inputs.extend(it.filter(|x| !self.map(*tag).contains(x)).map(|x| (*tag, x)));
                }
            }
        }
        Frontier { count, complete, inputs }
    }

    /// True when every input over the atoms has a value.
    pub fn is_total(&self) -> bool {
        self.frontier_limited(0).count == 0
    }

    /// Checks that `pi` maps the table onto itself. Returns the first entry
    /// whose image is not an entry.
    pub fn automorphism_violation(&self, pi: &FinitePerm) -> Option<(MapTag, Hf, Hf)> {
        for a in pi.support() {
            if !self.atoms.contains(a) || !self.atoms.contains(&pi.apply(a)) {
                return Some((MapTag::H, Hf::Atom(a.clone()), Hf::Atom(pi.apply(a))));
            }
        }
        for (t, x, y) in self.entries() {
            let px = x.map_atoms(&mut |a| pi.apply(a));
            let py = y.map_atoms(&mut |a| pi.apply(a));
            if self.map(t).get(&px) != Some(&py) {
                return Some((t, x.clone(), y.clone()));
            }
        }
        None
    }

    pub fn is_automorphism(&self, pi: &FinitePerm) -> bool {
        self.automorphism_violation(pi).is_none()
    }
}

/// Outcome of a strong-order check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LeqViolation {
    /// An atom of the smaller model is missing from the larger one.
    MissingAtom { atom: Atom },
    /// An entry of the smaller model is absent or changed.
    NotExtended { map: MapTag, input: Hf, expected: Hf, found: Option<Hf> },
    /// A new input is sent to an output that touches the smaller model.
    Range { map: MapTag, input: Hf, output: Hf },
}

/// `small ≤ large`: inclusion of atoms and maps, and every input not over the
/// smaller atom set is sent to an output over the new atoms only.
pub fn leq(small: &Model, large: &Model) -> Result<Option<LeqViolation>, FraisseError> {
    if small.class != large.class {
        return Err(FraisseError::WrongClass(small.class));
    }
    if let Some(a) = small.atoms.iter().find(|a| !large.atoms.contains(*a)) {
        return Ok(Some(LeqViolation::MissingAtom { atom: a.clone() }));
    }
    for (t, x, y) in small.entries() {
        let found = large.map(t).get(x);
        if found != Some(y) {
            return Ok(Some(LeqViolation::NotExtended {
                map: t,
                input: x.clone(),
                expected: y.clone(),
                found: found.cloned(),
            }));
        }
    }
    for (t, x, y) in large.entries() {
        if x.atoms().is_subset(&small.atoms) {
            continue;
        }
        if y.atoms().iter().any(|a| small.atoms.contains(a)) {
            return Ok(Some(LeqViolation::Range { map: t, input: x.clone(), output: y.clone() }));
        }
    }
    Ok(None)
}

pub fn leq_n(small: &ModelN, large: &ModelN) -> Result<Option<LeqViolation>, FraisseError> {
    if small.class != Class::N {
        return Err(FraisseError::WrongClass(small.class));
    }
    leq(small, large)
}

pub fn leq_z(small: &ModelZ, large: &ModelZ) -> Result<Option<LeqViolation>, FraisseError> {
    if small.class != Class::Z {
        return Err(FraisseError::WrongClass(small.class));
    }
    leq(small, large)
}

/// Stage number to use for atoms minted from `models`: one past every stage seen.
pub(crate) fn next_stage<'a, I: IntoIterator<Item = &'a Model>>(models: I) -> u32 {
    models
        .into_iter()
        .flat_map(|m| m.atoms.iter())
        .filter_map(Atom::stage)
        .max()
        .map_or(0, |s| s + 1)
}
