//! Hereditarily finite objects over atoms.
//!
//! Ordered pairs and sequences are first-class constructors; [`Hf::lower_to_sets`]
//! gives their pure-set encoding when a check needs one.
//!
//! The derived `Ord` is the canonical total order used everywhere a set is
//! written out: atoms first (by tag, then payload), then sets, pairs, sequences.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use super::Atom;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Hf {
    Atom(Atom),
    Set(BTreeSet<Hf>),
    Pair(Box<Hf>, Box<Hf>),
    Seq(Vec<Hf>),
}

impl Hf {
    pub fn atom(a: Atom) -> Self {
        Hf::Atom(a)
    }

    pub fn empty() -> Self {
        Hf::Set(BTreeSet::new())
    }

    pub fn set<I: IntoIterator<Item = Hf>>(items: I) -> Self {
        Hf::Set(items.into_iter().collect())
    }

    pub fn atom_set<'a, I: IntoIterator<Item = &'a Atom>>(atoms: I) -> Self {
        Hf::Set(atoms.into_iter().cloned().map(Hf::Atom).collect())
    }

    pub fn pair(x: Hf, y: Hf) -> Self {
        Hf::Pair(Box::new(x), Box::new(y))
    }

    pub fn atom_pair(x: &Atom, y: &Atom) -> Self {
        Hf::pair(Hf::Atom(x.clone()), Hf::Atom(y.clone()))
    }

    pub fn seq<I: IntoIterator<Item = Hf>>(items: I) -> Self {
        Hf::Seq(items.into_iter().collect())
    }

    pub fn atom_seq<'a, I: IntoIterator<Item = &'a Atom>>(atoms: I) -> Self {
        Hf::Seq(atoms.into_iter().cloned().map(Hf::Atom).collect())
    }

    /// Von Neumann natural number `n = {0, …, n-1}`.
    pub fn ordinal(n: usize) -> Self {
        let mut cur = BTreeSet::new();
        for _ in 0..n {
            let next = Hf::Set(cur.clone());
            cur.insert(next);
        }
        Hf::Set(cur)
    }

    pub fn as_atom(&self) -> Option<&Atom> {
        match self {
            Hf::Atom(a) => Some(a),
            _ => None,
        }
    }

    pub fn as_set(&self) -> Option<&BTreeSet<Hf>> {
        match self {
            Hf::Set(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_pair(&self) -> Option<(&Hf, &Hf)> {
        match self {
            Hf::Pair(x, y) => Some((x, y)),
            _ => None,
        }
    }

    pub fn as_seq(&self) -> Option<&[Hf]> {
        match self {
            Hf::Seq(s) => Some(s),
            _ => None,
        }
    }

    /// Members of a set of atoms, or `None` if some member is not an atom.
    pub fn as_atom_set(&self) -> Option<BTreeSet<Atom>> {
        self.as_set()?.iter().map(|x| x.as_atom().cloned()).collect()
    }

    pub fn as_atom_pair(&self) -> Option<(Atom, Atom)> {
        let (x, y) = self.as_pair()?;
        Some((x.as_atom()?.clone(), y.as_atom()?.clone()))
    }

    pub fn as_atom_seq(&self) -> Option<Vec<Atom>> {
        self.as_seq()?.iter().map(|x| x.as_atom().cloned()).collect()
    }

    /// Every atom occurring anywhere inside the object.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        match self {
            Hf::Atom(a) => {
                out.insert(a.clone());
            }
            Hf::Set(s) => s.iter().for_each(|x| x.collect_atoms(out)),
            Hf::Pair(x, y) => {
                x.collect_atoms(out);
                y.collect_atoms(out);
            }
            Hf::Seq(s) => s.iter().for_each(|x| x.collect_atoms(out)),
        }
    }

    /// True when no atom occurs in the object (it lives in the kernel).
    pub fn is_kernel(&self) -> bool {
        match self {
            Hf::Atom(_) => false,
            Hf::Set(s) => s.iter().all(Hf::is_kernel),
            Hf::Pair(x, y) => x.is_kernel() && y.is_kernel(),
            Hf::Seq(s) => s.iter().all(Hf::is_kernel),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Hf::Atom(_) => 0,
            Hf::Set(s) => 1 + s.iter().map(Hf::depth).max().unwrap_or(0),
            Hf::Pair(x, y) => 1 + x.depth().max(y.depth()),
            Hf::Seq(s) => 1 + s.iter().map(Hf::depth).max().unwrap_or(0),
        }
    }

    /// Applies `f` to every atom, rebuilding the object around the results.
    pub fn try_map_atoms<E>(&self, f: &mut impl FnMut(&Atom) -> Result<Atom, E>) -> Result<Hf, E> {
        Ok(match self {
            Hf::Atom(a) => Hf::Atom(f(a)?),
            Hf::Set(s) => Hf::Set(s.iter().map(|x| x.try_map_atoms(f)).collect::<Result<_, E>>()?),
            Hf::Pair(x, y) => Hf::pair(x.try_map_atoms(f)?, y.try_map_atoms(f)?),
            Hf::Seq(s) => Hf::Seq(s.iter().map(|x| x.try_map_atoms(f)).collect::<Result<_, E>>()?),
        })
    }

    pub fn map_atoms(&self, f: &mut impl FnMut(&Atom) -> Atom) -> Hf {
        let res: Result<Hf, std::convert::Infallible> = self.try_map_atoms(&mut |a| Ok(f(a)));
        match res {
            Ok(h) => h,
            Err(never) => match never {},
        }
    }

    /// Pure-set encoding.
    ///
    /// A pair becomes the Kuratowski set `{{x},{x,y}}`. A sequence `s` becomes
    /// the Kuratowski pair of its length (a von Neumann ordinal) and the
    /// right-nested chain `(s0,(s1,(…,∅)))`; the length tag keeps sequences
    /// apart from pairs and sets built over atoms.
    pub fn lower_to_sets(&self) -> Hf {
        match self {
            Hf::Atom(a) => Hf::Atom(a.clone()),
            Hf::Set(s) => Hf::Set(s.iter().map(Hf::lower_to_sets).collect()),
            Hf::Pair(x, y) => kuratowski(x.lower_to_sets(), y.lower_to_sets()),
            Hf::Seq(s) => {
                let mut body = Hf::empty();
                for x in s.iter().rev() {
                    body = kuratowski(x.lower_to_sets(), body);
                }
                kuratowski(Hf::ordinal(s.len()), body)
            }
        }
    }

    /// Canonical JSON: atoms as tagged objects, sets as arrays sorted by the
    /// canonical order, pairs as `["pair", x, y]`, sequences as `["seq", …]`.
    pub fn to_json(&self) -> Value {
        match self {
            Hf::Atom(a) => serde_json::to_value(a).expect("atoms always serialize"),
            Hf::Set(s) => Value::Array(s.iter().map(Hf::to_json).collect()),
            Hf::Pair(x, y) => Value::Array(vec!["pair".into(), x.to_json(), y.to_json()]),
            Hf::Seq(s) => {
                let mut v = Vec::with_capacity(s.len() + 1);
                v.push("seq".into());
                v.extend(s.iter().map(Hf::to_json));
                Value::Array(v)
            }
        }
    }

    pub fn from_json(v: &Value) -> Result<Hf, String> {
        match v {
            Value::Object(_) => serde_json::from_value::<Atom>(v.clone())
                .map(Hf::Atom)
                .map_err(|e| format!("bad atom {v}: {e}")),
            Value::Array(items) => match items.first() {
                Some(Value::String(tag)) if tag == "pair" => {
                    if items.len() != 3 {
                        return Err(format!("pair needs two components: {v}"));
                    }
                    Ok(Hf::pair(Hf::from_json(&items[1])?, Hf::from_json(&items[2])?))
                }
                Some(Value::String(tag)) if tag == "seq" => {
                    Ok(Hf::Seq(items[1..].iter().map(Hf::from_json).collect::<Result<_, _>>()?))
                }
                Some(Value::String(tag)) => Err(format!("unknown constructor `{tag}`")),
                _ => Ok(Hf::Set(items.iter().map(Hf::from_json).collect::<Result<_, _>>()?)),
            },
            _ => Err(format!("not an object encoding: {v}")),
        }
    }
}

fn kuratowski(x: Hf, y: Hf) -> Hf {
    let single = Hf::set([x.clone()]);
    let double = Hf::set([x, y]);
    Hf::set([single, double])
}

impl From<Atom> for Hf {
    fn from(a: Atom) -> Self {
        Hf::Atom(a)
    }
}

impl Serialize for Hf {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Hf {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Hf::from_json(&v).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Hf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hf::Atom(a) => write!(f, "{a}"),
            Hf::Set(s) => {
                write!(f, "{{")?;
                for (i, x) in s.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "}}")
            }
            Hf::Pair(x, y) => write!(f, "<{x},{y}>"),
            Hf::Seq(s) => {
                write!(f, "[")?;
                for (i, x) in s.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "]")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(i: u64) -> Hf {
        Hf::Atom(Atom::base(i))
    }

    #[test]
    fn sets_have_no_duplicates() {
        let s = Hf::set([a(1), a(2), a(1)]);
        assert_eq!(s.as_set().unwrap().len(), 2);
    }

    #[test]
    fn json_round_trip() {
        let x = Hf::set([Hf::pair(a(0), Hf::seq([a(1), a(2)])), Hf::empty(), a(3)]);
        let v = x.to_json();
        assert_eq!(Hf::from_json(&v).unwrap(), x);
        let s = serde_json::to_string(&x).unwrap();
        let back: Hf = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn lowering_separates_constructors() {
        assert_ne!(Hf::seq([]).lower_to_sets(), Hf::empty().lower_to_sets());
        assert_ne!(Hf::seq([a(0)]).lower_to_sets(), Hf::pair(a(0), Hf::empty()).lower_to_sets());
        assert_ne!(
            Hf::pair(a(0), a(1)).lower_to_sets(),
            Hf::pair(a(1), a(0)).lower_to_sets()
        );
        assert_eq!(
            Hf::pair(a(0), a(0)).lower_to_sets(),
            Hf::set([Hf::set([a(0)])])
        );
    }

    #[test]
    fn ordinals() {
        assert_eq!(Hf::ordinal(0), Hf::empty());
        assert_eq!(Hf::ordinal(2), Hf::set([Hf::empty(), Hf::set([Hf::empty()])]));
        assert!(Hf::ordinal(3).is_kernel());
    }
}
