//! Ground elements of a model universe.
//!
//! Every atom is tagged with the construction that produced it. Equality is
//! structural, so two atoms built with different payloads are different atoms
//! and fresh atoms minted with distinct `(stage, reason, index, role)` tuples
//! never collide.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "tag", content = "payload")]
pub enum Atom {
    #[serde(rename = "base")]
    Base(u64),
    #[serde(rename = "rn-tuple")]
    Rn(RnAtom),
    #[serde(rename = "rc-position")]
    Rc(RcAtom),
    #[serde(rename = "rz-rational")]
    Rz(Rational),
    #[serde(rename = "fresh")]
    Fresh(FreshAtom),
}

impl Atom {
    pub fn base(id: u64) -> Self {
        Atom::Base(id)
    }

    pub fn fresh(stage: u32, reason: Reason, index: u64, role: u8) -> Self {
        Atom::Fresh(FreshAtom { stage, reason, index, role })
    }

    pub fn rc(triple: u64, pos: Pos) -> Self {
        Atom::Rc(RcAtom { triple, pos })
    }

    pub fn rz(num: i64, den: i64) -> Self {
        Atom::Rz(Rational::new(num, den))
    }

    pub fn as_rc(&self) -> Option<&RcAtom> {
        match self {
            Atom::Rc(a) => Some(a),
            _ => None,
        }
    }

    pub fn as_rz(&self) -> Option<&Rational> {
        match self {
            Atom::Rz(q) => Some(q),
            _ => None,
        }
    }

    pub fn as_fresh(&self) -> Option<&FreshAtom> {
        match self {
            Atom::Fresh(f) => Some(f),
            _ => None,
        }
    }

    /// Stage recorded on a fresh atom; `None` for every other tag.
    pub fn stage(&self) -> Option<u32> {
        self.as_fresh().map(|f| f.stage)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Base(id) => write!(f, "#{id}"),
            Atom::Rn(a) => write!(f, "{a}"),
            Atom::Rc(a) => write!(f, "{a}"),
            Atom::Rz(q) => write!(f, "q{q}"),
            Atom::Fresh(x) => write!(
                f,
                "{}@{}[{}.{}]",
                x.reason.label(),
                x.stage,
                x.index,
                x.role
            ),
        }
    }
}

/// Provenance of an atom minted by a construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FreshAtom {
    pub stage: u32,
    pub reason: Reason,
    pub index: u64,
    pub role: u8,
}

/// The construction step that created a fresh atom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reason {
    /// Lazily extended atom supply used by oracles and embeddings.
    Supply,
    /// Stand-in atoms used when enumerating extension patterns.
    Placeholder,
    /// Fresh output pair of the amalgamation recursion.
    Amalgam,
    /// Relabelled copy of a submodel made before amalgamating.
    AmalgamCopy,
    /// The three distinguished atoms of the x/y/z extension.
    Xyz,
    /// Output atoms of the x/y/z extension; the payload carries the rule class.
    XyzClass(u8),
    /// The distinguished triple of the copy tower.
    TowerU,
    TowerX,
    TowerY,
    TowerCopy,
    /// Output block of the plain extension, keyed by the map being fulfilled.
    PlainF,
    PlainG,
    PlainH,
    /// Copy of a one-step extension pattern placed by the limit builder.
    LimitPattern,
    /// Seed atoms created by generators and tests.
    Seed,
}

impl Reason {
    pub fn label(&self) -> String {
        match self {
            Reason::Supply => "supply".into(),
            Reason::Placeholder => "ph".into(),
            Reason::Amalgam => "amal".into(),
            Reason::AmalgamCopy => "acopy".into(),
            Reason::Xyz => "xyz".into(),
            Reason::XyzClass(c) => format!("xyz{c}"),
            Reason::TowerU => "u".into(),
            Reason::TowerX => "tx".into(),
            Reason::TowerY => "ty".into(),
            Reason::TowerCopy => "tau".into(),
            Reason::PlainF => "pf".into(),
            Reason::PlainG => "pg".into(),
            Reason::PlainH => "ph3".into(),
            Reason::LimitPattern => "lim".into(),
            Reason::Seed => "seed".into(),
        }
    }
}

/// Atom of the epsilon-flip tower: a base atom, or `(level, p, eps)` with `p`
/// a tuple of atoms from the previous level.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RnAtom {
    Base(u32),
    Tup { level: u32, p: Vec<RnAtom>, eps: u8 },
}

impl RnAtom {
    /// Level of the tower at which the atom first appears.
    pub fn level(&self) -> u32 {
        match self {
            RnAtom::Base(_) => 0,
            RnAtom::Tup { level, .. } => *level,
        }
    }
}

impl fmt::Display for RnAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RnAtom::Base(i) => write!(f, "b{i}"),
            RnAtom::Tup { level, p, eps } => {
                write!(f, "({level},<")?;
                for (i, x) in p.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ">,{eps})")
            }
        }
    }
}

/// Position inside a cyclically ordered triple `P_n = {a_n, b_n, c_n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pos {
    A,
    B,
    C,
}

impl Pos {
    pub const ALL: [Pos; 3] = [Pos::A, Pos::B, Pos::C];

    pub fn index(self) -> u8 {
        self as u8
    }

    pub fn from_index(i: u8) -> Pos {
        Pos::ALL[(i % 3) as usize]
    }

    /// Cyclic successor: a -> b -> c -> a.
    pub fn rotate(self, by: u8) -> Pos {
        Pos::from_index(self.index() + by % 3)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RcAtom {
    pub triple: u64,
    pub pos: Pos,
}

impl fmt::Display for RcAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.pos {
            Pos::A => 'a',
            Pos::B => 'b',
            Pos::C => 'c',
        };
        write!(f, "{c}{}", self.triple)
    }
}

/// Exact rational, serialized as `"p/q"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(pub Ratio<i64>);

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        Rational(Ratio::new(num, den))
    }

    pub fn integer(n: i64) -> Self {
        Rational(Ratio::from_integer(n))
    }

    pub fn midpoint(&self, other: &Rational) -> Rational {
        Rational((self.0 + other.0) / Ratio::from_integer(2))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

#[derive(Debug, thiserror::Error)]
#[error("malformed rational `{0}`")]
pub struct ParseRationalError(String);

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseRationalError(s.to_string());
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p, q),
            None => (s, "1"),
        };
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        Ok(Rational::new(p, q))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atom_json_is_tagged() {
        let a = Atom::rc(3, Pos::B);
        let v = serde_json::to_value(&a).unwrap();
        assert_eq!(v, serde_json::json!({"tag": "rc-position", "payload": {"triple": 3, "pos": "b"}}));
        let q = Atom::rz(6, 4);
        assert_eq!(
            serde_json::to_value(&q).unwrap(),
            serde_json::json!({"tag": "rz-rational", "payload": "3/2"})
        );
        let back: Atom = serde_json::from_value(serde_json::to_value(&q).unwrap()).unwrap();
        assert_eq!(back, q);
    }

    #[test]
    fn fresh_atoms_differ_by_provenance() {
        let x = Atom::fresh(0, Reason::Amalgam, 1, 0);
        let y = Atom::fresh(0, Reason::Amalgam, 1, 1);
        let z = Atom::fresh(1, Reason::Amalgam, 1, 0);
        assert_ne!(x, y);
        assert_ne!(x, z);
        let v = serde_json::to_string(&Atom::fresh(2, Reason::XyzClass(1), 4, 0)).unwrap();
        let back: Atom = serde_json::from_str(&v).unwrap();
        assert_eq!(back, Atom::fresh(2, Reason::XyzClass(1), 4, 0));
    }

    #[test]
    fn rotation_cycles() {
        assert_eq!(Pos::A.rotate(1), Pos::B);
        assert_eq!(Pos::C.rotate(1), Pos::A);
        assert_eq!(Pos::B.rotate(2), Pos::A);
        assert_eq!(Pos::B.rotate(3), Pos::B);
    }
}
