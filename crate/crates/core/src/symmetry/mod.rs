//! Permutations of atoms, the induced action on objects, and the
//! `Fix`/support/orbit machinery over finite windows of the groups.

mod group;
mod perm;

pub use group::{
    close_group, fix_generators, fix_generators_bounded, is_support, is_support_bounded, orbit,
    rz_patterns, GroupClosure, GroupSpec, Generators, SupportClaim, SupportVerdict, DEFAULT_BOUND,
};
pub use perm::{FinitePerm, Permutation, RcRotation, RzPartial};

use crate::classic::ClassicError;
use crate::universe::{Atom, Hf};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymmetryError {
    #[error("atom {0} lies outside the domain of the partial map")]
    OutsideDomain(Atom),
    #[error("map is not a bijection of its carrier")]
    NotBijection,
    #[error("map is not strictly order preserving")]
    NotOrderPreserving,
    #[error("cannot compose permutations of different groups")]
    MixedGroups,
    #[error("permutation sends {0} outside the universe")]
    NotClosed(Atom),
    #[error("orbit exceeds {bound} objects")]
    OrbitTooLarge { bound: usize, partial: Vec<Hf> },
    #[error(transparent)]
    Classic(#[from] ClassicError),
}

/// `act(pi, x)` as a free function.
pub fn act(pi: &Permutation, x: &Hf) -> Result<Hf, SymmetryError> {
    pi.act(x)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::universe::{Pos, Rational};

    fn b(i: u64) -> Atom {
        Atom::base(i)
    }
    fn h(i: u64) -> Hf {
        Hf::Atom(b(i))
    }

    #[test]
    fn action_examples() {
        let x = Hf::set([h(0), Hf::set([h(1)])]);
        assert_eq!(Permutation::identity().act(&x).unwrap(), x);
        let swap = Permutation::transposition(&b(0), &b(1));
        assert_eq!(swap.act(&x).unwrap(), Hf::set([h(1), Hf::set([h(0)])]));
        let cyc = Permutation::Finite(FinitePerm::cycle(&[b(0), b(1), b(2)]).unwrap());
        let p = Hf::pair(h(0), h(1));
        assert_eq!(cyc.act(&p).unwrap(), Hf::pair(h(1), h(2)));
        assert_eq!(cyc.act(&p).unwrap().lower_to_sets(), cyc.act(&p.lower_to_sets()).unwrap());
    }

    #[test]
    fn free_generators() {
        let spec = GroupSpec::free(vec![b(0), b(1), b(2)]);
        let all: BTreeSet<Atom> = [b(0), b(1), b(2)].into();
        let g = fix_generators(&spec, &all).unwrap();
        assert_eq!(g.perms, vec![Permutation::identity()]);
        let g = fix_generators(&spec, &BTreeSet::from([b(0)])).unwrap();
        assert_eq!(g.perms, vec![Permutation::transposition(&b(1), &b(2))]);
    }

    #[test]
    fn rc_generators_freeze_touched_triples() {
        let spec = GroupSpec::RcTriples { triples: 2 };
        let g = fix_generators(&spec, &BTreeSet::from([Atom::rc(0, Pos::A)])).unwrap();
        assert_eq!(g.perms, vec![Permutation::Rc(RcRotation::single(1, 1))]);
    }

    #[test]
    fn support_examples() {
        let spec = GroupSpec::free(vec![b(0), b(1)]);
        let v = is_support(&SupportClaim::new([b(0)], h(0)), &spec).unwrap();
        assert!(v.holds());
        let v = is_support(&SupportClaim::new([], Hf::set([h(0)])), &spec).unwrap();
        match v {
            SupportVerdict::NotSupported { witness, .. } => {
                assert_eq!(witness, Permutation::transposition(&b(0), &b(1)))
            }
            other => panic!("unexpected {other:?}"),
        }
        let v = is_support(&SupportClaim::new([], Hf::set([h(0), h(1)])), &spec).unwrap();
        assert!(v.holds());
    }

    #[test]
    fn orbit_examples() {
        let spec = GroupSpec::free(vec![b(0), b(1)]);
        let o = orbit(&h(0), &spec, &BTreeSet::new(), 100).unwrap();
        assert_eq!(o, BTreeSet::from([h(0), h(1)]));
        let o = orbit(&Hf::set([h(0), h(1)]), &spec, &BTreeSet::new(), 100).unwrap();
        assert_eq!(o.len(), 1);
        let rc = |p| Hf::Atom(Atom::rc(0, p));
        let spec = GroupSpec::RcTriples { triples: 1 };
        let o = orbit(&Hf::pair(rc(Pos::A), rc(Pos::B)), &spec, &BTreeSet::new(), 100).unwrap();
        assert_eq!(
            o,
            BTreeSet::from([
                Hf::pair(rc(Pos::A), rc(Pos::B)),
                Hf::pair(rc(Pos::B), rc(Pos::C)),
                Hf::pair(rc(Pos::C), rc(Pos::A)),
            ])
        );
    }

    #[test]
    fn orbit_bound_reports_partial() {
        let atoms: Vec<Atom> = (0..8).map(b).collect();
        let spec = GroupSpec::free(atoms);
        let x = Hf::seq([h(0), h(1), h(2)]);
        match orbit(&x, &spec, &BTreeSet::new(), 10) {
            Err(SymmetryError::OrbitTooLarge { partial, .. }) => assert!(partial.len() > 10),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rational_supports() {
        let q = |n| Atom::Rz(Rational::integer(n));
        let spec = GroupSpec::RzOrdered { points: vec![] };
        // the set {1, 3} is not supported by {2}: 1 and 3 can move independently
        let obj = Hf::set([Hf::Atom(q(1)), Hf::Atom(q(3))]);
        let v = is_support(&SupportClaim::new([q(2)], obj.clone()), &spec).unwrap();
        assert!(matches!(v, SupportVerdict::NotSupported { .. }));
        let v = is_support(&SupportClaim::new([q(1), q(3)], obj), &spec).unwrap();
        assert!(v.holds());
        // an interval endpoint relation with no atoms is supported by anything
        let v = is_support(&SupportClaim::new([], Hf::empty()), &spec).unwrap();
        assert!(v.holds());
    }

    #[test]
    fn generated_groups_close() {
        let atoms: Vec<Atom> = (0..4).map(b).collect();
        let spec = GroupSpec::Generated {
            universe: atoms.clone(),
            generators: vec![
                Permutation::transposition(&b(0), &b(1)),
                Permutation::Finite(FinitePerm::cycle(&atoms).unwrap()),
            ],
        };
        let g = fix_generators(&spec, &BTreeSet::new()).unwrap();
        assert!(g.complete);
        assert_eq!(g.perms.len(), 23);
        let g = fix_generators_bounded(&spec, &BTreeSet::new(), 5).unwrap();
        assert!(!g.complete);
        let v = is_support_bounded(&SupportClaim::new([], Hf::set(atoms.iter().cloned().map(Hf::Atom))), &spec, 5).unwrap();
        assert!(matches!(v, SupportVerdict::InconclusiveTruncation { .. }));
    }
}
