use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::WitnessError;
use crate::universe::{Atom, Hf, KindTag};

/// Where unanswered queries get their answers.
#[derive(Clone, Debug)]
enum Source {
    Table(BTreeMap<Hf, Hf>),
    Random { seed: u64, rng: ChaCha8Rng, slack: u64 },
}

/// A memoised function between two kinds, checked for injectivity as it
/// answers.
///
/// A table oracle answers from a fixed graph. A random oracle draws answers
/// over base atoms `#0, #1, …` from a seeded generator: ids range up to the
/// largest id asked about plus a small slack, and an answer already given is
/// redrawn, widening the slack after repeated misses. It is therefore
/// injective by construction.
#[derive(Clone, Debug)]
pub struct InjectionOracle {
    domain: KindTag,
    codomain: KindTag,
    source: Source,
    memo: BTreeMap<Hf, Hf>,
    reverse: BTreeMap<Hf, Hf>,
    order: Vec<Hf>,
    ceiling: u64,
}

/// Serialized oracle table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleTable {
    pub domain: KindTag,
    pub codomain: KindTag,
    pub table: Vec<(Hf, Hf)>,
}

impl InjectionOracle {
    pub fn from_table(domain: KindTag, codomain: KindTag, table: BTreeMap<Hf, Hf>) -> Self {
        InjectionOracle {
            domain,
            codomain,
            source: Source::Table(table),
            memo: BTreeMap::new(),
            reverse: BTreeMap::new(),
            order: Vec::new(),
            ceiling: 0,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, WitnessError> {
        let t: OracleTable =
            serde_json::from_str(text).map_err(|e| WitnessError::Argument(format!("oracle table: {e}")))?;
        Ok(InjectionOracle::from_table(t.domain, t.codomain, t.table.into_iter().collect()))
    }

    pub fn random(domain: KindTag, codomain: KindTag, seed: u64) -> Self {
        InjectionOracle {
            domain,
            codomain,
            source: Source::Random { seed, rng: ChaCha8Rng::seed_from_u64(seed), slack: 2 },
            memo: BTreeMap::new(),
            reverse: BTreeMap::new(),
            order: Vec::new(),
            ceiling: 0,
        }
    }

    pub fn domain(&self) -> KindTag {
        self.domain
    }

    pub fn codomain(&self) -> KindTag {
        self.codomain
    }

    pub fn seed(&self) -> Option<u64> {
        match self.source {
            Source::Random { seed, .. } => Some(seed),
            Source::Table(_) => None,
        }
    }

    /// Answered queries.
    pub fn memo(&self) -> &BTreeMap<Hf, Hf> {
        &self.memo
    }

    /// Answered queries in the order they were first asked.
    pub fn queries(&self) -> &[Hf] {
        &self.order
    }

    pub fn to_table(&self) -> OracleTable {
        OracleTable {
            domain: self.domain,
            codomain: self.codomain,
            table: self.memo.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
        }
    }

    /// Table oracle answering exactly like this one on every answered query.
    pub fn replay(&self) -> InjectionOracle {
        InjectionOracle::from_table(self.domain, self.codomain, self.memo.clone())
    }

    pub fn query(&mut self, x: &Hf) -> Result<Hf, WitnessError> {
        if let Some(y) = self.memo.get(x) {
            return Ok(y.clone());
        }
        if !has_kind(x, self.domain) {
            return Err(WitnessError::Argument(format!("{x} is not in {}", self.domain.notation())));
        }
        for a in x.atoms() {
            if let Atom::Base(i) = a {
                self.ceiling = self.ceiling.max(i + 1);
            }
        }
        let answer = match &mut self.source {
            Source::Table(t) => {
                let y = t.get(x).cloned().ok_or_else(|| WitnessError::OracleUndefined(x.clone()))?;
                if !has_kind(&y, self.codomain) {
                    return Err(WitnessError::BadAnswer {
                        input: x.clone(),
                        answer: y,
                        expected: self.codomain,
                    });
                }
                if let Some(first) = self.reverse.get(&y) {
                    return Err(WitnessError::OracleFault {
                        first: first.clone(),
                        second: x.clone(),
                        image: y,
                    });
                }
                y
            }
            Source::Random { rng, slack, .. } => {
                let width = x.atoms().len().clamp(3, 32);
                let mut tries = 0u32;
                loop {
                    let y = draw(rng, self.codomain, self.ceiling + *slack, width);
                    if !self.reverse.contains_key(&y) {
                        break y;
                    }
                    tries += 1;
                    if tries.is_multiple_of(8) {
                        *slack += 1;
                    }
                }
            }
        };
        self.memo.insert(x.clone(), answer.clone());
        self.reverse.insert(answer.clone(), x.clone());
        self.order.push(x.clone());
        Ok(answer)
    }
}

/// Random element of `kind` over ids below `bound`; sets and sequences have
/// at most `width` entries.
fn draw(rng: &mut ChaCha8Rng, kind: KindTag, bound: u64, width: usize) -> Hf {
    let bound = bound.max(2);
    let mut atom = || Hf::Atom(Atom::base(rng.gen_range(0..bound)));
    match kind {
        KindTag::OrderedPairs => {
            let x = atom();
            Hf::pair(x, atom())
        }
        KindTag::UnorderedPairs => loop {
            let (x, y) = (atom(), atom());
            if x != y {
                break Hf::set([x, y]);
            }
        },
        KindTag::FinSubsets => {
            let len = rng.gen_range(0..=width);
            let mut s = BTreeSet::new();
            for _ in 0..len {
                s.insert(Hf::Atom(Atom::base(rng.gen_range(0..bound))));
            }
            Hf::Set(s)
        }
        KindTag::InjSeq | KindTag::Seq => {
            let len = rng.gen_range(0..=width);
            let mut v: Vec<Hf> = Vec::new();
            while v.len() < len {
                let a = Hf::Atom(Atom::base(rng.gen_range(0..bound)));
                if kind == KindTag::Seq || !v.contains(&a) {
                    v.push(a);
                }
                if kind == KindTag::InjSeq && v.len() as u64 >= bound {
                    break;
                }
            }
            Hf::Seq(v)
        }
    }
}

/// Shape check of an object against a kind.
pub fn has_kind(x: &Hf, kind: KindTag) -> bool {
    match kind {
        KindTag::FinSubsets => x.as_atom_set().is_some(),
        KindTag::UnorderedPairs => x.as_atom_set().is_some_and(|s| s.len() == 2),
        KindTag::OrderedPairs => x.as_atom_pair().is_some(),
        KindTag::InjSeq => x
            .as_atom_seq()
            .is_some_and(|s| s.iter().collect::<BTreeSet<_>>().len() == s.len()),
        KindTag::Seq => x.as_atom_seq().is_some(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_oracle_is_stable_and_injective() {
        let mut h = InjectionOracle::random(KindTag::FinSubsets, KindTag::OrderedPairs, 7);
        let sets: Vec<Hf> = (0..40u64)
            .map(|i| Hf::set((0..6).filter(|b| i >> b & 1 == 1).map(|b| Hf::Atom(Atom::base(b)))))
            .collect();
        let first: Vec<Hf> = sets.iter().map(|s| h.query(s).unwrap()).collect();
        let again: Vec<Hf> = sets.iter().map(|s| h.query(s).unwrap()).collect();
        assert_eq!(first, again);
        let distinct: BTreeSet<&Hf> = first.iter().collect();
        assert_eq!(distinct.len(), first.len());
    }

    #[test]
    fn table_collision_names_both_inputs() {
        let a = |i| Hf::Atom(Atom::base(i));
        let img = Hf::pair(a(0), a(1));
        let table = BTreeMap::from([(Hf::empty(), img.clone()), (Hf::set([a(0)]), img)]);
        let mut h = InjectionOracle::from_table(KindTag::FinSubsets, KindTag::OrderedPairs, table);
        h.query(&Hf::empty()).unwrap();
        match h.query(&Hf::set([a(0)])) {
            Err(WitnessError::OracleFault { first, second, .. }) => {
                assert_eq!(first, Hf::empty());
                assert_eq!(second, Hf::set([a(0)]));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
