//! Explicit maps in the ordered model whose atoms are the rationals.
//!
//! `unordered_to_square` and `fin_to_iseq` only use the order, so they are
//! invariant under every order automorphism. `square_to_fin` also reads four
//! fixed markers `m1 < m2 < m3 < m4` and is invariant under the automorphisms
//! fixing them.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::ClassicError;
use crate::universe::{Atom, Hf, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RzMap {
    UnorderedToSquare,
    SquareToFin,
    FinToIseq,
}

impl std::str::FromStr for RzMap {
    type Err = ClassicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "unordered_to_square" | "unordered-to-square" => Ok(RzMap::UnorderedToSquare),
            "square_to_fin" | "square-to-fin" => Ok(RzMap::SquareToFin),
            "fin_to_iseq" | "fin-to-iseq" => Ok(RzMap::FinToIseq),
            other => Err(ClassicError::Argument(format!("unknown rz map `{other}`"))),
        }
    }
}

fn rz_atoms<'a, I: IntoIterator<Item = &'a Hf>>(items: I) -> Result<Vec<Rational>, ClassicError> {
    items
        .into_iter()
        .map(|x| {
            x.as_atom()
                .and_then(Atom::as_rz)
                .copied()
                .ok_or_else(|| ClassicError::Argument(format!("{x} is not a rational atom")))
        })
        .collect()
}

fn q(x: Rational) -> Hf {
    Hf::Atom(Atom::Rz(x))
}

pub fn rz_inject(kind: RzMap, x: &Hf, markers: &[Rational]) -> Result<Hf, ClassicError> {
    match kind {
        RzMap::UnorderedToSquare => {
            let set = x
                .as_set()
                .ok_or_else(|| ClassicError::Argument(format!("{x} is not a set")))?;
            let v = rz_atoms(set)?;
            let [lo, hi] = v[..] else {
                return Err(ClassicError::Argument(format!("{x} is not a 2-set")));
            };
            Ok(Hf::pair(q(lo), q(hi)))
        }
        RzMap::FinToIseq => {
            let set = x
                .as_set()
                .ok_or_else(|| ClassicError::Argument(format!("{x} is not a set")))?;
            Ok(Hf::seq(rz_atoms(set)?.into_iter().map(q)))
        }
        RzMap::SquareToFin => {
            let m = sorted_markers(markers)?;
            let (a, b) = x
                .as_pair()
                .ok_or_else(|| ClassicError::Argument(format!("{x} is not a pair")))?;
            let v = rz_atoms([a, b])?;
            let out = square_to_fin(v[0], v[1], &m)?;
            Ok(Hf::set(out.into_iter().map(q)))
        }
    }
}

fn sorted_markers(markers: &[Rational]) -> Result<[Rational; 4], ClassicError> {
    let set: BTreeSet<Rational> = markers.iter().copied().collect();
    if markers.len() != 4 || set.len() != 4 {
        return Err(ClassicError::TableGap(format!(
            "square_to_fin needs four distinct markers, got {}",
            markers.len()
        )));
    }
    let v: Vec<Rational> = set.into_iter().collect();
    Ok([v[0], v[1], v[2], v[3]])
}

/// The marker case table for `A^2 -> fin(A)`.
///
/// | input `⟨x,y⟩`                        | output                         |
/// |--------------------------------------|--------------------------------|
/// | `x < y`                              | `{x, y}`                       |
/// | `x = y`                              | `{x}`                          |
/// | `x > y`, no markers                  | `{x, y, m1}`                   |
/// | `x > y`, one marker `mi`, other `u`  | `{u, mi, m(i+1 mod 4)}`        |
/// | `x > y`, markers `mi > mj`           | see `BOTH_MARKERS`             |
pub fn square_to_fin(x: Rational, y: Rational, m: &[Rational; 4]) -> Result<BTreeSet<Rational>, ClassicError> {
    use std::cmp::Ordering::*;
    let marker = |r: Rational| m.iter().position(|v| *v == r);
    Ok(match x.cmp(&y) {
        Less => BTreeSet::from([x, y]),
        Equal => BTreeSet::from([x]),
        Greater => match (marker(x), marker(y)) {
            (None, None) => BTreeSet::from([x, y, m[0]]),
            (Some(i), None) => BTreeSet::from([y, m[i], m[(i + 1) % 4]]),
            (None, Some(i)) => BTreeSet::from([x, m[i], m[(i + 1) % 4]]),
            (Some(i), Some(j)) => {
                let (lo, hi) = (j.min(i), j.max(i));
                let picks = BOTH_MARKERS
                    .iter()
                    .find(|(a, b, _)| *a == lo && *b == hi)
                    .map(|(_, _, p)| *p)
                    .ok_or_else(|| ClassicError::TableGap(format!("markers {lo},{hi}")))?;
                picks.iter().map(|k| m[*k]).collect()
            }
        },
    })
}

/// Descending pairs of two markers `⟨m_hi, m_lo⟩` (0-based indices).
const BOTH_MARKERS: [(usize, usize, &[usize]); 6] = [
    (0, 1, &[0, 1, 3]),
    (0, 2, &[0, 2, 3]),
    (1, 2, &[1, 2, 3]),
    (0, 3, &[0, 1, 2]),
    (1, 3, &[0, 1, 2, 3]),
    (2, 3, &[]),
];
