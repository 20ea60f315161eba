use std::collections::{BTreeMap, BTreeSet};

use super::{EdgeClaim, Metrics, Outcome, VerifyError, VerifyReport, Witness};
use crate::symmetry::{fix_generators_bounded, GroupSpec, Permutation};
use crate::universe::{count_kind, Atom, Hf, KindTag};

/// Exhaustive injectivity check of `f` on `domain`.
pub fn check_injective<I, F>(claim: EdgeClaim, domain: I, f: F) -> VerifyReport
where
    I: IntoIterator<Item = Hf>,
    F: Fn(&Hf) -> Option<Hf>,
{
    let mut seen: BTreeMap<Hf, Hf> = BTreeMap::new();
    let mut metrics = Metrics::default();
    for x in domain {
        metrics.inputs += 1;
        metrics.checks += 1;
        let Some(y) = f(&x) else {
            return VerifyReport::new(claim, Outcome::Refuted, Some(Witness::Undefined { input: x }), metrics);
        };
        if let Some(first) = seen.get(&y) {
            if *first != x {
                let w = Witness::Collision { first: first.clone(), second: x, image: y };
                return VerifyReport::new(claim, Outcome::Refuted, Some(w), metrics);
            }
            continue;
        }
        seen.insert(y, x);
    }
    let w = Witness::Checked { inputs: metrics.inputs, permutations: 0 };
    VerifyReport::new(claim, Outcome::Verified, Some(w), metrics)
}

/// Checks `f(π x) = π f(x)` for every generator `π` of `Fix(support)` in the
/// window and every `x` in `domain`.
pub fn check_equivariant<F>(
    claim: EdgeClaim,
    f: F,
    spec: &GroupSpec,
    support: &BTreeSet<Atom>,
    domain: &[Hf],
    bound: usize,
) -> Result<VerifyReport, VerifyError>
where
    F: Fn(&Hf) -> Option<Hf>,
{
    let gens = fix_generators_bounded(spec, support, bound)?;
    let mut metrics = Metrics { inputs: domain.len() as u64, permutations: gens.perms.len() as u64, ..Metrics::default() };
    for pi in &gens.perms {
        for x in domain {
            metrics.checks += 1;
            let Some(fx) = f(x) else {
                let w = Witness::Undefined { input: x.clone() };
                return Ok(VerifyReport::new(claim, Outcome::Refuted, Some(w), metrics));
            };
            let moved = pi.act(x)?;
            let expected = pi.act(&fx)?;
            let found = f(&moved);
            if found.as_ref() != Some(&expected) {
                let w = Witness::NotEquivariant { permutation: pi.clone(), input: x.clone(), moved_input: moved, expected, found };
                return Ok(VerifyReport::new(claim, Outcome::Refuted, Some(w), metrics));
            }
        }
    }
    let w = Witness::Checked { inputs: metrics.inputs, permutations: metrics.permutations };
    if gens.complete {
        Ok(VerifyReport::new(claim, Outcome::Verified, Some(w), metrics))
    } else {
        Ok(VerifyReport::new(claim, Outcome::InconclusiveTruncation, Some(w), metrics)
            .with_note("group window cut off before closing"))
    }
}

/// `(|A over k|, |B over k + extra|, A > B)`.
pub fn counting_gap(a: KindTag, b: KindTag, k: u64, extra: u64) -> Result<(u128, u128, bool), VerifyError> {
    let ca = count_kind(a, k, None)?;
    let cb = count_kind(b, k + extra, None)?;
    Ok((ca, cb, ca > cb))
}

/// First contradiction between `table` and equivariance under one of `perms`.
pub(crate) fn find_contradiction(table: &[(Hf, Hf)], perms: &[Permutation], checks: &mut u64) -> Option<Witness> {
    let lookup: BTreeMap<&Hf, &Hf> = table.iter().map(|(x, y)| (x, y)).collect();
    for pi in perms {
        for (x, y) in table {
            *checks += 1;
            let (Ok(px), Ok(py)) = (pi.act(x), pi.act(y)) else { continue };
            if px == *x && py != *y {
                return Some(Witness::MovingImage { permutation: pi.clone(), input: x.clone(), image: y.clone(), moved_image: py });
            }
            if px != *x && py == *y {
                return Some(Witness::ForcedCollision { permutation: pi.clone(), input: x.clone(), moved_input: px, image: y.clone() });
            }
            if let Some(found) = lookup.get(&px) {
                if **found != py {
                    return Some(Witness::NotEquivariant {
                        permutation: pi.clone(),
                        input: x.clone(),
                        moved_input: px,
                        expected: py,
                        found: Some((*found).clone()),
                    });
                }
            }
        }
    }
    None
}

/// Tries to show that no injection supported by the group behind `perms`
/// can contain `table`.
pub fn refute_candidate_with_perms(claim: EdgeClaim, table: &[(Hf, Hf)], perms: &[Permutation]) -> VerifyReport {
    let mut metrics = Metrics { inputs: table.len() as u64, permutations: perms.len() as u64, candidates: 1, ..Metrics::default() };
    match find_contradiction(table, perms, &mut metrics.checks) {
        Some(reason) => {
            metrics.refuted = 1;
            let w = Witness::Candidate { table: table.to_vec(), reason: Box::new(reason) };
            VerifyReport::new(claim, Outcome::Refuted, Some(w), metrics)
        }
        None => {
            metrics.survivors = 1;
            VerifyReport::new(claim, Outcome::InconclusiveTruncation, None, metrics)
                .with_note("no permutation in the window contradicts the candidate")
        }
    }
}

/// Same as [`refute_candidate_with_perms`] with the generators of `Fix(support)`.
pub fn refute_candidate_with_support(
    claim: EdgeClaim,
    table: &[(Hf, Hf)],
    support: &BTreeSet<Atom>,
    spec: &GroupSpec,
    bound: usize,
) -> Result<VerifyReport, VerifyError> {
    let gens = fix_generators_bounded(spec, support, bound)?;
    Ok(refute_candidate_with_perms(claim, table, &gens.perms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classic::{rc_f1_hf, rc_f3_hf, rc_universe};
    use crate::universe::PositionSeqs;
    use crate::verify::{Direction, Method, ModelRef};

    fn claim(from: KindTag, to: KindTag) -> EdgeClaim {
        EdgeClaim::new(from, to, Direction::Le, ModelRef::Rc, Method::ExplicitWitness)
    }

    fn atoms(n: u64) -> Vec<Atom> {
        (0..n).map(Atom::base).collect()
    }

    #[test]
    fn identity_and_constant() {
        let dom: Vec<Hf> = atoms(10).into_iter().map(Hf::Atom).collect();
        let r = check_injective(claim(UP, UP), dom.clone(), |x| Some(x.clone()));
        assert_eq!(r.outcome, Outcome::Verified);
        let constant = |_: &Hf| Some(Hf::empty());
        let r = check_injective(claim(UP, UP), dom, constant);
        assert_eq!(r.outcome, Outcome::Refuted);
        assert!(matches!(r.witness, Some(Witness::Collision { .. })));
        assert!(r.witness.unwrap().replay_with(&constant));
    }

    use KindTag::UnorderedPairs as UP;

    #[test]
    fn rc_f3_short_sequences_are_injective() {
        let ground = rc_universe(3);
        let dom = PositionSeqs::new(ground.len(), 3, true)
            .map(|s| Hf::seq(s.into_iter().map(|i| Hf::Atom(ground[i].clone()))));
        let r = check_injective(claim(KindTag::InjSeq, KindTag::FinSubsets), dom, rc_f3_hf);
        assert_eq!(r.outcome, Outcome::Verified);
    }

    #[test]
    fn rc_f1_is_equivariant() {
        let ground = rc_universe(3);
        let dom: Vec<Hf> = crate::universe::enum_kind(UP, &ground, None).unwrap().collect();
        let spec = GroupSpec::RcTriples { triples: 3 };
        let r = check_equivariant(claim(UP, KindTag::OrderedPairs), rc_f1_hf, &spec, &BTreeSet::new(), &dom, 1000).unwrap();
        assert_eq!(r.outcome, Outcome::Verified);
    }

    #[test]
    fn raw_id_order_is_not_equivariant() {
        let ground = atoms(4);
        let dom: Vec<Hf> = crate::universe::enum_kind(UP, &ground, None).unwrap().collect();
        let order = |x: &Hf| {
            let s: Vec<Atom> = x.as_atom_set()?.into_iter().collect();
            Some(Hf::atom_pair(&s[0], &s[1]))
        };
        let spec = GroupSpec::free(ground.clone());
        let r = check_equivariant(claim(UP, KindTag::OrderedPairs), order, &spec, &BTreeSet::new(), &dom, 1000).unwrap();
        assert_eq!(r.outcome, Outcome::Refuted);
        let w = r.witness.unwrap();
        let Witness::NotEquivariant { permutation: Permutation::Finite(p), .. } = &w else { panic!("{w:?}") };
        assert_eq!(p.map().len(), 2);
        assert!(w.replay_with(&order));

        let all: BTreeSet<Atom> = ground.into_iter().collect();
        let r = check_equivariant(claim(UP, KindTag::OrderedPairs), order, &spec, &all, &dom, 1000).unwrap();
        assert_eq!(r.outcome, Outcome::Verified);
    }

    #[test]
    fn counting_examples() {
        use KindTag::*;
        assert_eq!(counting_gap(InjSeq, OrderedPairs, 5, 3).unwrap(), (326, 64, true));
        assert_eq!(counting_gap(FinSubsets, UnorderedPairs, 6, 3).unwrap(), (64, 36, true));
        assert_eq!(counting_gap(UnorderedPairs, OrderedPairs, 4, 0).unwrap(), (6, 16, false));
    }

    #[test]
    fn triple_sets_cannot_go_to_sequences() {
        let ground = rc_universe(5);
        let support: BTreeSet<Atom> = ground[..6].iter().cloned().collect();
        let table: Vec<(Hf, Hf)> = (0..5)
            .map(|n| {
                let p = Hf::atom_set(&ground[3 * n..3 * n + 3]);
                (p, Hf::atom_seq([&ground[(7 * n + 2) % 15], &ground[(4 * n + 9) % 15]]))
            })
            .collect();
        let spec = GroupSpec::RcTriples { triples: 5 };
        let c = EdgeClaim::new(KindTag::FinSubsets, KindTag::InjSeq, Direction::NotLe, ModelRef::Rc, Method::SupportContradiction);
        let r = refute_candidate_with_support(c.clone(), &table, &support, &spec, 1000).unwrap();
        assert_eq!(r.outcome, Outcome::Refuted);
        assert!(r.witness.unwrap().replay());

        let free = GroupSpec::free(atoms(3));
        let constant: Vec<(Hf, Hf)> = atoms(3).iter().map(|a| (Hf::Atom(a.clone()), Hf::empty())).collect();
        let everything: BTreeSet<Atom> = atoms(3).into_iter().collect();
        let r = refute_candidate_with_support(c, &constant, &everything, &free, 1000).unwrap();
        assert_eq!(r.outcome, Outcome::InconclusiveTruncation);
    }
}
