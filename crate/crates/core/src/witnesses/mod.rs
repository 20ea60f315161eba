//! Constructive procedures: atom extraction from `fin -> square`, extraction
//! from a pair of maps through layers, and the finite-to-one map
//! `seq -> fin`.

mod fin_to_one;
mod lemma_c;
mod lemma_n;
mod oracle;

pub use fin_to_one::{fiber_of, finite_to_one_seq_to_fin, AtomEmbedding};
pub use lemma_c::{extract_from_pair_maps, LayerConfig, LayerRound, LayerTrace};
pub use lemma_n::{extract_from_fin_to_square, replay_fin_to_square, ExtractionRound, ExtractionTrace};
pub use oracle::{has_kind, InjectionOracle, OracleTable};

use crate::universe::{Hf, KindTag, UniverseError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WitnessError {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("oracle is not injective: {first} and {second} both map to {image}")]
    OracleFault { first: Hf, second: Hf, image: Hf },
    #[error("oracle table has no entry for {0}")]
    OracleUndefined(Hf),
    #[error("oracle answered {answer} for {input}, expected an element of {expected}")]
    BadAnswer { input: Hf, answer: Hf, expected: KindTag },
    #[error("internal invariant violated: {message}")]
    InvariantViolation { message: String, table: serde_json::Value },
    #[error("index overflow")]
    Overflow,
    #[error(transparent)]
    Universe(#[from] UniverseError),
}

#[cfg(test)]
mod tests {
    use std::collections::{BTreeMap, BTreeSet};

    use super::*;
    use crate::universe::Atom;

    fn seed() -> Vec<Atom> {
        (0..5).map(Atom::base).collect()
    }

    #[test]
    fn five_returns_seed() {
        let mut h = InjectionOracle::random(KindTag::FinSubsets, KindTag::OrderedPairs, 1);
        let (atoms, trace) = extract_from_fin_to_square(&mut h, &seed(), 5).unwrap();
        assert_eq!(atoms, seed());
        assert!(trace.rounds.is_empty());
    }

    #[test]
    fn extraction_distinct_and_replayable() {
        let mut h = InjectionOracle::random(KindTag::FinSubsets, KindTag::OrderedPairs, 99);
        let (atoms, trace) = extract_from_fin_to_square(&mut h, &seed(), 20).unwrap();
        assert_eq!(atoms.iter().collect::<BTreeSet<_>>().len(), 20);
        assert!(replay_fin_to_square(&h, &seed(), 20, &trace).unwrap());
    }

    #[test]
    fn colliding_table_is_reported() {
        let a = |i| Hf::Atom(Atom::base(i));
        let img = Hf::pair(a(0), a(1));
        let table = BTreeMap::from([(Hf::empty(), img.clone()), (Hf::set([a(0)]), img)]);
        let mut h = InjectionOracle::from_table(KindTag::FinSubsets, KindTag::OrderedPairs, table);
        let err = extract_from_fin_to_square(&mut h, &seed(), 6).unwrap_err();
        assert!(matches!(err, WitnessError::OracleFault { .. }));
    }

    #[test]
    fn small_n_rejected() {
        let mut h = InjectionOracle::random(KindTag::FinSubsets, KindTag::OrderedPairs, 1);
        assert!(extract_from_fin_to_square(&mut h, &seed(), 0).is_err());
    }

    #[test]
    fn layers_are_disjoint() {
        let mut f = InjectionOracle::random(KindTag::OrderedPairs, KindTag::UnorderedPairs, 3);
        let mut g = InjectionOracle::random(KindTag::FinSubsets, KindTag::InjSeq, 4);
        let cfg = LayerConfig { atoms: 16, min_rounds: 6, max_rounds: 64 };
        let (atoms, trace) = extract_from_pair_maps(&mut f, &mut g, &Atom::base(0), cfg).unwrap();
        assert_eq!(atoms.iter().collect::<BTreeSet<_>>().len(), 16);
        let mut seen = BTreeSet::new();
        for r in &trace.rounds {
            assert!(!r.layer.is_empty());
            for a in &r.layer {
                assert!(seen.insert(a.clone()));
            }
        }
    }

    #[test]
    fn finite_to_one_examples() {
        let e = AtomEmbedding::new((0..6).map(Atom::base).collect()).unwrap();
        assert_eq!(finite_to_one_seq_to_fin(&e, &[]).unwrap(), BTreeSet::from([Atom::base(0)]));
        let a = Atom::base(100);
        let one = finite_to_one_seq_to_fin(&e, std::slice::from_ref(&a)).unwrap();
        let two = finite_to_one_seq_to_fin(&e, &[a.clone(), a.clone()]).unwrap();
        assert_ne!(one, two);
        assert_eq!(fiber_of(&e, &two), vec![vec![a.clone(), a]]);
    }
}
