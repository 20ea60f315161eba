use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::SymmetryError;
use crate::classic::RnPerm;
use crate::universe::{Atom, Hf, Rational};

/// Bijection of a finite carrier, identity elsewhere.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "FiniteRepr", try_from = "FiniteRepr")]
pub struct FinitePerm {
    map: BTreeMap<Atom, Atom>,
}

#[derive(Serialize, Deserialize)]
struct FiniteRepr {
    carrier: Vec<Atom>,
    images: Vec<Atom>,
}

impl From<FinitePerm> for FiniteRepr {
    fn from(p: FinitePerm) -> Self {
        let (carrier, images) = p.map.into_iter().unzip();
        FiniteRepr { carrier, images }
    }
}

impl TryFrom<FiniteRepr> for FinitePerm {
    type Error = SymmetryError;

    fn try_from(r: FiniteRepr) -> Result<Self, Self::Error> {
        if r.carrier.len() != r.images.len() {
            return Err(SymmetryError::NotBijection);
        }
        FinitePerm::from_map(r.carrier.into_iter().zip(r.images).collect())
    }
}

impl FinitePerm {
    pub fn from_map(map: BTreeMap<Atom, Atom>) -> Result<Self, SymmetryError> {
        let dom: BTreeSet<&Atom> = map.keys().collect();
        let img: BTreeSet<&Atom> = map.values().collect();
        if dom != img {
            return Err(SymmetryError::NotBijection);
        }
        Ok(FinitePerm { map: map.into_iter().filter(|(k, v)| k != v).collect() })
    }

    pub fn transposition(a: &Atom, b: &Atom) -> Self {
        let mut map = BTreeMap::new();
        if a != b {
            map.insert(a.clone(), b.clone());
            map.insert(b.clone(), a.clone());
        }
        FinitePerm { map }
    }

    /// Cycle `c0 -> c1 -> … -> c0`.
    pub fn cycle(atoms: &[Atom]) -> Result<Self, SymmetryError> {
        let mut map = BTreeMap::new();
        for (i, a) in atoms.iter().enumerate() {
            map.insert(a.clone(), atoms[(i + 1) % atoms.len()].clone());
        }
        if map.len() != atoms.len() {
            return Err(SymmetryError::NotBijection);
        }
        FinitePerm::from_map(map)
    }

    pub fn apply(&self, a: &Atom) -> Atom {
        self.map.get(a).unwrap_or(a).clone()
    }

    pub fn support(&self) -> impl Iterator<Item = &Atom> {
        self.map.keys()
    }

    pub fn map(&self) -> &BTreeMap<Atom, Atom> {
        &self.map
    }

    pub fn inverse(&self) -> Self {
        FinitePerm { map: self.map.iter().map(|(k, v)| (v.clone(), k.clone())).collect() }
    }

    pub fn compose(&self, other: &FinitePerm) -> Self {
        let carrier: BTreeSet<&Atom> = self.map.keys().chain(other.map.keys()).collect();
        let map = carrier
            .into_iter()
            .filter_map(|a| {
                let img = self.apply(&other.apply(a));
                (img != *a).then(|| (a.clone(), img))
            })
            .collect();
        FinitePerm { map }
    }
}

/// Rotation amount in Z/3 per triple; unlisted triples stay put.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RcRotation {
    rotations: BTreeMap<u64, u8>,
}

impl RcRotation {
    pub fn new(rotations: BTreeMap<u64, u8>) -> Self {
        let rotations = rotations
            .into_iter()
            .map(|(k, v)| (k, v % 3))
            .filter(|(_, v)| *v != 0)
            .collect();
        RcRotation { rotations }
    }

    pub fn single(triple: u64, by: u8) -> Self {
        RcRotation::new(BTreeMap::from([(triple, by)]))
    }

    pub fn amount(&self, triple: u64) -> u8 {
        self.rotations.get(&triple).copied().unwrap_or(0)
    }

    pub fn rotations(&self) -> &BTreeMap<u64, u8> {
        &self.rotations
    }

    pub fn apply(&self, a: &Atom) -> Atom {
        match a {
            Atom::Rc(r) => Atom::rc(r.triple, r.pos.rotate(self.amount(r.triple))),
            other => other.clone(),
        }
    }

    pub fn compose(&self, other: &RcRotation) -> Self {
        let mut rot = other.rotations.clone();
        for (k, v) in &self.rotations {
            *rot.entry(*k).or_insert(0) += v;
        }
        RcRotation::new(rot)
    }

    pub fn inverse(&self) -> Self {
        RcRotation::new(self.rotations.iter().map(|(k, v)| (*k, 3 - v)).collect())
    }
}

/// Strictly increasing finite partial map on rational atoms.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<(Rational, Rational)>", try_from = "Vec<(Rational, Rational)>")]
pub struct RzPartial {
    map: BTreeMap<Rational, Rational>,
}

impl From<RzPartial> for Vec<(Rational, Rational)> {
    fn from(p: RzPartial) -> Self {
        p.map.into_iter().collect()
    }
}

impl TryFrom<Vec<(Rational, Rational)>> for RzPartial {
    type Error = SymmetryError;

    fn try_from(v: Vec<(Rational, Rational)>) -> Result<Self, Self::Error> {
        RzPartial::new(v.into_iter().collect())
    }
}

impl RzPartial {
    pub fn new(map: BTreeMap<Rational, Rational>) -> Result<Self, SymmetryError> {
        let images: Vec<&Rational> = map.values().collect();
        if images.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SymmetryError::NotOrderPreserving);
        }
        Ok(RzPartial { map })
    }

    pub fn domain(&self) -> impl Iterator<Item = &Rational> {
        self.map.keys()
    }

    pub fn map(&self) -> &BTreeMap<Rational, Rational> {
        &self.map
    }

    pub fn apply(&self, a: &Atom) -> Result<Atom, SymmetryError> {
        match a {
            Atom::Rz(q) => self
                .map
                .get(q)
                .map(|v| Atom::Rz(*v))
                .ok_or_else(|| SymmetryError::OutsideDomain(a.clone())),
            other => Ok(other.clone()),
        }
    }

    pub fn inverse(&self) -> Self {
        RzPartial { map: self.map.iter().map(|(k, v)| (*v, *k)).collect() }
    }

    /// `self ∘ other` on the points where both steps are defined.
    pub fn compose(&self, other: &RzPartial) -> Self {
        let map = other
            .map
            .iter()
            .filter_map(|(k, v)| self.map.get(v).map(|w| (*k, *w)))
            .collect();
        RzPartial { map }
    }
}

/// A permutation of atoms in one of the supported shapes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "group", content = "data", rename_all = "kebab-case")]
pub enum Permutation {
    Finite(FinitePerm),
    Rc(RcRotation),
    Rn(RnPerm),
    Rz(RzPartial),
}

impl Permutation {
    pub fn identity() -> Self {
        Permutation::Finite(FinitePerm::default())
    }

    pub fn transposition(a: &Atom, b: &Atom) -> Self {
        Permutation::Finite(FinitePerm::transposition(a, b))
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Permutation::Finite(p) => p.map.is_empty(),
            Permutation::Rc(r) => r.rotations.is_empty(),
            Permutation::Rn(r) => r.is_identity(),
            Permutation::Rz(r) => r.map.iter().all(|(k, v)| k == v),
        }
    }

    pub fn apply_atom(&self, a: &Atom) -> Result<Atom, SymmetryError> {
        Ok(match self {
            Permutation::Finite(p) => p.apply(a),
            Permutation::Rc(r) => r.apply(a),
            Permutation::Rn(r) => match a {
                Atom::Rn(x) => Atom::Rn(r.apply(x)),
                other => other.clone(),
            },
            Permutation::Rz(r) => r.apply(a)?,
        })
    }

    /// The action on objects: atoms are moved, sets, pairs and sequences are
    /// mapped member by member.
    pub fn act(&self, x: &Hf) -> Result<Hf, SymmetryError> {
        x.try_map_atoms(&mut |a| self.apply_atom(a))
    }

    pub fn inverse(&self) -> Self {
        match self {
            Permutation::Finite(p) => Permutation::Finite(p.inverse()),
            Permutation::Rc(r) => Permutation::Rc(r.inverse()),
            Permutation::Rn(r) => Permutation::Rn(r.inverse()),
            Permutation::Rz(r) => Permutation::Rz(r.inverse()),
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, SymmetryError> {
        use Permutation::*;
        Ok(match (self, other) {
            (Finite(a), Finite(b)) => Finite(a.compose(b)),
            (Rc(a), Rc(b)) => Rc(a.compose(b)),
            (Rn(a), Rn(b)) => Rn(a.compose(b)),
            (Rz(a), Rz(b)) => Rz(a.compose(b)),
            (a, b) if b.is_identity() && !matches!(b, Rz(_)) => a.clone(),
            (a, b) if a.is_identity() && !matches!(a, Rz(_)) => b.clone(),
            _ => return Err(SymmetryError::MixedGroups),
        })
    }

    /// Restriction to `universe` as an explicit finite bijection.
    pub fn restrict(&self, universe: &[Atom]) -> Result<FinitePerm, SymmetryError> {
        let inside: BTreeSet<&Atom> = universe.iter().collect();
        let mut map = BTreeMap::new();
        for a in universe {
            let b = self.apply_atom(a)?;
            if !inside.contains(&b) {
                return Err(SymmetryError::NotClosed(a.clone()));
            }
            map.insert(a.clone(), b);
        }
        FinitePerm::from_map(map)
    }

    pub fn fixes_pointwise<'a, I: IntoIterator<Item = &'a Atom>>(&self, atoms: I) -> bool {
        atoms.into_iter().all(|a| self.apply_atom(a).ok().as_ref() == Some(a))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Permutation::Finite(p) if p.map.is_empty() => write!(f, "id"),
            Permutation::Finite(p) => {
                let parts: Vec<String> = p.map.iter().map(|(k, v)| format!("{k}->{v}")).collect();
                write!(f, "[{}]", parts.join(" "))
            }
            Permutation::Rc(r) => {
                let parts: Vec<String> =
                    r.rotations.iter().map(|(k, v)| format!("P{k}+{v}")).collect();
                write!(f, "rot[{}]", parts.join(" "))
            }
            Permutation::Rn(r) => write!(
                f,
                "flip[base {} moved, {} flips]",
                r.base_map().len(),
                r.flips().len()
            ),
            Permutation::Rz(r) => {
                let parts: Vec<String> = r.map.iter().map(|(k, v)| format!("{k}->{v}")).collect();
                write!(f, "ord[{}]", parts.join(" "))
            }
        }
    }
}
