//! Property tests for invariants that cut across modules.

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use crate::classic::{rc_delta, rc_f1_hf, rc_f2_hf, rc_f3, rc_f3_hf, rc_group_element, rc_triple, rc_universe};
use crate::fraisse::{closure, leq_z, plain_extension_z, strong_closure, Class, Model};
use crate::symmetry::{is_support, FinitePerm, GroupSpec, Permutation, SupportClaim, SupportVerdict};
use crate::universe::{count_kind, enum_kind, seq_code, Atom, Hf, KindTag, PositionSeqs};
use crate::verify::{check_injective, counting_gap, Direction, EdgeClaim, Method, ModelRef, Outcome};

fn atoms(n: u64) -> Vec<Atom> {
    (0..n).map(Atom::base).collect()
}

fn perm_of(images: &[usize]) -> FinitePerm {
    let g = atoms(images.len() as u64);
    FinitePerm::from_map(images.iter().enumerate().map(|(i, j)| (g[i].clone(), g[*j].clone())).collect()).unwrap()
}

fn arb_perm(n: usize) -> impl Strategy<Value = FinitePerm> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| perm_of(&v))
}

/// Objects up to depth 3 over the first four base atoms.
fn arb_object() -> impl Strategy<Value = Hf> {
    let leaf = (0..4u64).prop_map(|i| Hf::Atom(Atom::base(i)));
    leaf.prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            prop::collection::btree_set(inner.clone(), 0..3).prop_map(Hf::set),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| Hf::pair(x, y)),
            prop::collection::vec(inner, 0..3).prop_map(Hf::seq),
        ]
    })
}

fn all_objects(k: u64) -> Vec<Hf> {
    let g = atoms(k);
    let mut out = Vec::new();
    for kind in KindTag::ALL {
        let maxlen = (kind == KindTag::Seq).then_some(2);
        out.extend(enum_kind(kind, &g, maxlen).unwrap());
    }
    out
}

#[test]
fn chain_is_strict_from_five() {
    for k in 5..=10 {
        let v: Vec<u128> = KindTag::CHAIN.iter().map(|kind| count_kind(*kind, k, None).unwrap()).collect();
        assert!(v.windows(2).all(|w| w[0] < w[1]), "k={k}: {v:?}");
    }
    assert_eq!(count_kind(KindTag::OrderedPairs, 4, None), count_kind(KindTag::FinSubsets, 4, None));
}

#[test]
fn enumeration_matches_counts() {
    for k in 0..=6 {
        let g = atoms(k);
        for kind in KindTag::ALL {
            let maxlen = (kind == KindTag::Seq).then_some(3);
            let items: Vec<Hf> = enum_kind(kind, &g, maxlen).unwrap().collect();
            let distinct: BTreeSet<&Hf> = items.iter().collect();
            assert_eq!(items.len(), distinct.len(), "{kind} over {k}");
            assert_eq!(items.len() as u128, count_kind(kind, k, maxlen).unwrap(), "{kind} over {k}");
        }
    }
}

#[test]
fn lowering_is_injective() {
    let objects = all_objects(4);
    let lowered: BTreeSet<Hf> = objects.iter().map(Hf::lower_to_sets).collect();
    let distinct: BTreeSet<&Hf> = objects.iter().collect();
    assert_eq!(lowered.len(), distinct.len());
}

#[test]
fn range_and_code_determine_the_sequence() {
    let g = atoms(3);
    let mut seen: BTreeMap<(BTreeSet<Atom>, u128), Vec<Atom>> = BTreeMap::new();
    for s in PositionSeqs::new(3, 3, false) {
        let s: Vec<Atom> = s.into_iter().map(|i| g[i].clone()).collect();
        let key = (s.iter().cloned().collect(), seq_code(&s).unwrap());
        if let Some(prev) = seen.insert(key, s.clone()) {
            panic!("{prev:?} and {s:?} share range and code");
        }
    }
}

#[test]
fn kernel_objects_are_fixed() {
    let pi = Permutation::Finite(perm_of(&[1, 2, 0]));
    for n in 0..6 {
        let x = Hf::ordinal(n);
        assert_eq!(pi.act(&x).unwrap(), x);
    }
}

#[test]
fn rotations_keep_triples_and_distances() {
    let ground = rc_universe(3);
    for code in 0..27u32 {
        let rot: BTreeMap<u64, u8> = (0..3).map(|n| (n, ((code / 3u32.pow(n as u32)) % 3) as u8)).collect();
        let pi = rc_group_element(rot);
        for n in 0..3 {
            let p = Hf::atom_set(&rc_triple(n).map(Atom::Rc));
            assert_eq!(pi.act(&p).unwrap(), p);
        }
        for x in &ground {
            for y in ground.iter().filter(|y| *y != x && y.as_rc().unwrap().triple == x.as_rc().unwrap().triple) {
                let (px, py) = (pi.apply_atom(x).unwrap(), pi.apply_atom(y).unwrap());
                let d = rc_delta(*x.as_rc().unwrap(), *y.as_rc().unwrap()).unwrap();
                assert_eq!(rc_delta(*px.as_rc().unwrap(), *py.as_rc().unwrap()).unwrap(), d);
            }
        }
        let seqs: Vec<Hf> = PositionSeqs::new(ground.len(), 2, true)
            .map(|s| Hf::seq(s.into_iter().map(|i| Hf::Atom(ground[i].clone()))))
            .collect();
        let cases: [(fn(&Hf) -> Option<Hf>, Vec<Hf>); 3] = [
            (rc_f1_hf, enum_kind(KindTag::UnorderedPairs, &ground, None).unwrap().collect()),
            (rc_f2_hf, enum_kind(KindTag::OrderedPairs, &ground, None).unwrap().collect()),
            (rc_f3_hf, seqs),
        ];
        for (f, inputs) in &cases {
            for x in inputs {
                let y = f(x).unwrap();
                assert_eq!(f(&pi.act(x).unwrap()), Some(pi.act(&y).unwrap()));
            }
        }
    }
}

#[test]
fn f3_contains_exactly_one_full_triple() {
    let ground = rc_universe(3);
    for s in PositionSeqs::new(ground.len(), 3, true).filter(|s| !s.is_empty()) {
        let s: Vec<_> = s.into_iter().map(|i| *ground[i].as_rc().unwrap()).collect();
        let out = rc_f3(&s).unwrap();
        let triples: BTreeSet<u64> = out.iter().map(|a| a.triple).collect();
        let full = triples.iter().filter(|n| rc_triple(**n).iter().all(|a| out.contains(a))).count();
        assert_eq!(full, 1, "{s:?}");
    }
}

fn claim() -> EdgeClaim {
    EdgeClaim::new(KindTag::Seq, KindTag::Seq, Direction::Le, ModelRef::Empty, Method::ExplicitWitness)
}

fn z_chain(seed_atoms: u64, maps: &[(u8, u8)]) -> (Model, Model, Model) {
    let g = atoms(seed_atoms);
    let mut seed = Model::with_atoms(Class::Z, g.clone());
    for (x, y) in maps {
        let (x, y) = (&g[*x as usize % g.len()], &g[*y as usize % g.len()]);
        let _ = seed.assign(crate::fraisse::MapTag::F, Hf::atom_pair(x, y), Hf::atom_set([x, y]));
    }
    let top = plain_extension_z(&seed, 1).unwrap().model;
    let start: BTreeSet<Atom> = g.iter().take(1).cloned().collect();
    let bottom = top.restrict(&strong_closure(&top, &start));
    (bottom, seed, top)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn action_composes(p in arb_perm(6), q in arb_perm(6), x in arb_object()) {
        let (p, q) = (Permutation::Finite(p), Permutation::Finite(q));
        let pq = p.compose(&q).unwrap();
        prop_assert_eq!(pq.act(&x).unwrap(), p.act(&q.act(&x).unwrap()).unwrap());
        prop_assert_eq!(p.act(&x).unwrap().lower_to_sets(), p.act(&x.lower_to_sets()).unwrap());
    }

    #[test]
    fn supports_are_monotone(x in arb_object(), e in prop::collection::btree_set(0..4u64, 0..4), more in 0..4u64) {
        let spec = GroupSpec::free(atoms(4));
        let small: BTreeSet<Atom> = e.iter().map(|i| Atom::base(*i)).collect();
        let mut large = small.clone();
        large.insert(Atom::base(more));
        let holds = |s: &BTreeSet<Atom>| {
            matches!(is_support(&SupportClaim::new(s.iter().cloned(), x.clone()), &spec).unwrap(), SupportVerdict::Supported)
        };
        prop_assert!(!holds(&small) || holds(&large));
    }

    #[test]
    fn injectivity_matches_double_loop(table in prop::collection::vec(0..12u8, 0..16)) {
        let dom: Vec<Hf> = (0..table.len()).map(Hf::ordinal).collect();
        let f = |x: &Hf| {
            let i = dom.iter().position(|d| d == x)?;
            Some(Hf::ordinal(table[i] as usize))
        };
        let naive = (0..table.len()).all(|i| (0..table.len()).all(|j| i == j || table[i] != table[j]));
        let r = check_injective(claim(), dom.clone(), f);
        prop_assert_eq!(r.outcome == Outcome::Verified, naive);
        if r.outcome == Outcome::Refuted {
            prop_assert!(r.witness.unwrap().replay_with(&f));
        }
    }

    #[test]
    fn counting_gap_uses_the_counters(k in 0..9u64, extra in 0..4u64, a in 0..4usize, b in 0..4usize) {
        let (ka, kb) = (KindTag::CHAIN[a], KindTag::CHAIN[b]);
        let (ca, cb, gap) = counting_gap(ka, kb, k, extra).unwrap();
        prop_assert_eq!(ca, count_kind(ka, k, None).unwrap());
        prop_assert_eq!(cb, count_kind(kb, k + extra, None).unwrap());
        prop_assert_eq!(gap, ca > cb);
    }

    #[test]
    fn strong_order_is_reflexive_and_transitive(n in 1..3u64, maps in prop::collection::vec((0..3u8, 0..3u8), 0..3)) {
        let (a, b, c) = z_chain(n, &maps);
        for m in [&a, &b, &c] {
            prop_assert_eq!(leq_z(m, m).unwrap(), None);
        }
        let ab = leq_z(&a, &b).unwrap().is_none();
        let bc = leq_z(&b, &c).unwrap().is_none();
        prop_assert!(bc);
        if ab && bc {
            prop_assert_eq!(leq_z(&a, &c).unwrap(), None);
        }
        for m in [&b, &c] {
            for tag in Class::Z.tags() {
                let outs: BTreeSet<&Hf> = m.map(*tag).iter().map(|(_, y)| y).collect();
                prop_assert_eq!(outs.len(), m.map(*tag).len());
            }
        }
    }

    #[test]
    fn closure_is_closed(n in 1..3u64, maps in prop::collection::vec((0..3u8, 0..3u8), 0..3), pick in prop::collection::vec(any::<bool>(), 40)) {
        let (_, _, top) = z_chain(n, &maps);
        let start: BTreeSet<Atom> = top.atom_list().into_iter().zip(pick).filter(|(_, b)| *b).map(|(a, _)| a).collect();
        let once = closure(&top, &start);
        prop_assert!(start.is_subset(&once));
        prop_assert_eq!(closure(&top, &once), once);
    }
}
