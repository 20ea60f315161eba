//! Countably many disjoint cyclically ordered triples `P_n = {a_n, b_n, c_n}`
//! and the three explicit injections of the chain `[A]^2 ≤ A^2 ≤ seq11(A) ≤ fin(A)`.

use std::collections::{BTreeMap, BTreeSet};

use super::ClassicError;
use crate::symmetry::{Permutation, RcRotation};
use crate::universe::{Atom, Hf, Pos, RcAtom};

pub fn rc_atom(triple: u64, pos: Pos) -> RcAtom {
    RcAtom { triple, pos }
}

pub fn rc_triple(n: u64) -> [RcAtom; 3] {
    Pos::ALL.map(|pos| RcAtom { triple: n, pos })
}

/// Atoms of the first `triples` triples, triple by triple.
pub fn rc_universe(triples: u64) -> Vec<Atom> {
    (0..triples)
        .flat_map(|n| rc_triple(n).into_iter().map(Atom::Rc))
        .collect()
}

/// Cyclic distance inside one triple: 1 for a successor step, 2 otherwise.
pub fn rc_delta(x: RcAtom, y: RcAtom) -> Result<u8, ClassicError> {
    if x.triple != y.triple {
        return Err(ClassicError::Argument(format!("{x} and {y} lie in different triples")));
    }
    if x == y {
        return Err(ClassicError::Argument(format!("distance of {x} to itself is undefined")));
    }
    Ok((y.pos.index() + 3 - x.pos.index()) % 3)
}

/// `[A]^2 -> A^2`.
pub fn rc_f1(x: RcAtom, y: RcAtom) -> Result<(RcAtom, RcAtom), ClassicError> {
    if x == y {
        return Err(ClassicError::Argument("an unordered pair needs two distinct atoms".into()));
    }
    let (lo, hi) = if x.triple <= y.triple { (x, y) } else { (y, x) };
    if lo.triple < hi.triple {
        return Ok((lo, hi));
    }
    let third = Pos::ALL
        .into_iter()
        .find(|p| *p != lo.pos && *p != hi.pos)
        .expect("a triple has three positions");
    let z = RcAtom { triple: lo.triple, pos: third };
    Ok((z, z))
}

/// `A^2 -> seq11(A)`.
pub fn rc_f2(x: RcAtom, y: RcAtom) -> Vec<RcAtom> {
    if x == y {
        vec![x]
    } else {
        vec![x, y]
    }
}

/// `n`-th prime with `p_0 = 2`.
pub fn nth_prime(n: usize) -> u64 {
    let mut found = 0usize;
    let mut c = 1u64;
    loop {
        c += 1;
        if is_prime(c) {
            if found == n {
                return c;
            }
            found += 1;
        }
    }
}

fn is_prime(c: u64) -> bool {
    if c < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= c {
        if c.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Intermediate values of the f3 recursion, kept for reports and tests.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct F3Trace {
    pub triples: Vec<u64>,
    pub exponents: Vec<u8>,
    pub prime_indices: Vec<u64>,
    pub representatives: BTreeSet<RcAtom>,
    pub code: u64,
}

pub fn rc_f3_trace(s: &[RcAtom]) -> Result<F3Trace, ClassicError> {
    let distinct: BTreeSet<&RcAtom> = s.iter().collect();
    if distinct.len() != s.len() {
        return Err(ClassicError::Argument("f3 takes repetition-free sequences".into()));
    }
    let mut reps: BTreeMap<u64, RcAtom> = BTreeMap::new();
    let mut exponents = Vec::with_capacity(s.len());
    let mut prime_indices: Vec<u64> = Vec::with_capacity(s.len());
    let mut code: u64 = 1;
    let overflow = || ClassicError::Overflow("f3 code exceeds 64 bits".into());
    for (i, &a) in s.iter().enumerate() {
        let eps = match reps.get(&a.triple) {
            None => {
                reps.insert(a.triple, a);
                1
            }
            Some(&r) if rc_delta(r, a)? == 2 => 2,
            Some(_) => 1,
        };
        let sigma = if i == 0 {
            a.triple
        } else {
            prime_indices[i - 1]
                .checked_add(a.triple)
                .and_then(|v| v.checked_add(1))
                .ok_or_else(overflow)?
        };
        let index = usize::try_from(sigma).map_err(|_| overflow())?;
        if index > 1 << 20 {
            return Err(overflow());
        }
        let p = nth_prime(index);
        code = code
            .checked_mul(p.checked_pow(u32::from(eps)).ok_or_else(overflow)?)
            .ok_or_else(overflow)?;
        exponents.push(eps);
        prime_indices.push(sigma);
    }
    Ok(F3Trace {
        triples: s.iter().map(|a| a.triple).collect(),
        exponents,
        prime_indices,
        representatives: reps.into_values().collect(),
        code,
    })
}

/// `seq11(A) -> fin(A)`: the first-visit representatives together with the
/// whole triple indexed by the prime-power code. `⟨⟩` goes to `∅`.
pub fn rc_f3(s: &[RcAtom]) -> Result<BTreeSet<RcAtom>, ClassicError> {
    if s.is_empty() {
        return Ok(BTreeSet::new());
    }
    let t = rc_f3_trace(s)?;
    let mut out = t.representatives;
    out.extend(rc_triple(t.code));
    Ok(out)
}

/// Inverse of [`rc_f3`]; `None` when `f` is not an image.
pub fn rc_f3_decode(f: &BTreeSet<RcAtom>) -> Option<Vec<RcAtom>> {
    if f.is_empty() {
        return Some(Vec::new());
    }
    let mut by_triple: BTreeMap<u64, Vec<RcAtom>> = BTreeMap::new();
    for a in f {
        by_triple.entry(a.triple).or_default().push(*a);
    }
    let full: Vec<u64> = by_triple
        .iter()
        .filter(|(_, v)| v.len() == 3)
        .map(|(k, _)| *k)
        .collect();
    let [q] = full[..] else { return None };
    if by_triple.values().any(|v| v.len() == 2) {
        return None;
    }
    let reps: BTreeMap<u64, RcAtom> = by_triple
        .iter()
        .filter(|(k, _)| **k != q)
        .map(|(k, v)| (*k, v[0]))
        .collect();

    // factor q into increasing prime indices with exponents in {1, 2}
    let mut rest = q;
    let mut factors: Vec<(u64, u8)> = Vec::new();
    let mut idx = 0usize;
    loop {
        let p = nth_prime(idx);
        if p.saturating_mul(p) > rest {
            break;
        }
        let mut e = 0u8;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        if e > 2 {
            return None;
        }
        if e > 0 {
            factors.push((idx as u64, e));
        }
        idx += 1;
    }
    if rest > 1 {
        let j = prime_index(rest)?;
        if factors.last().is_some_and(|(k, _)| *k >= j) {
            return None;
        }
        factors.push((j, 1));
    }
    if factors.is_empty() {
        return None;
    }

    let mut seq = Vec::with_capacity(factors.len());
    let mut visits: BTreeMap<u64, Vec<RcAtom>> = BTreeMap::new();
    let mut prev: Option<u64> = None;
    for (sigma, eps) in &factors {
        let triple = match prev {
            None => *sigma,
            Some(p) => sigma.checked_sub(p + 1)?,
        };
        prev = Some(*sigma);
        let rep = *reps.get(&triple)?;
        let seen = visits.entry(triple).or_default();
        let a = if seen.is_empty() {
            if *eps != 1 {
                return None;
            }
            rep
        } else {
            let shift = if *eps == 2 { 2 } else { 1 };
            RcAtom { triple, pos: rep.pos.rotate(shift) }
        };
        if seen.contains(&a) {
            return None;
        }
        seen.push(a);
        seq.push(a);
    }
    if visits.len() != reps.len() {
        return None;
    }
    (rc_f3(&seq).ok()? == *f).then_some(seq)
}

fn prime_index(p: u64) -> Option<u64> {
    // codes produced by rc_f3 use prime indices below 2^20, i.e. primes below 2^24
    if p >= 1 << 24 || !is_prime(p) {
        return None;
    }
    let n = p as usize;
    let mut composite = vec![false; n];
    let mut count = 0u64;
    for c in 2..n {
        if !composite[c] {
            count += 1;
            let mut m = c * c;
            while m < n {
                composite[m] = true;
                m += c;
            }
        }
    }
    Some(count)
}

/// Group element rotating each listed triple by the given amount.
pub fn rc_group_element(rotations: BTreeMap<u64, u8>) -> Permutation {
    Permutation::Rc(RcRotation::new(rotations))
}

/// Wrappers on hereditarily finite objects, `None` off the declared domain.
pub fn rc_f1_hf(x: &Hf) -> Option<Hf> {
    let s = x.as_atom_set()?;
    let v: Vec<RcAtom> = s.iter().map(|a| a.as_rc().copied()).collect::<Option<_>>()?;
    let [a, b] = v[..] else { return None };
    let (p, q) = rc_f1(a, b).ok()?;
    Some(Hf::atom_pair(&Atom::Rc(p), &Atom::Rc(q)))
}

pub fn rc_f2_hf(x: &Hf) -> Option<Hf> {
    let (a, b) = x.as_atom_pair()?;
    let s = rc_f2(*a.as_rc()?, *b.as_rc()?);
    Some(Hf::seq(s.into_iter().map(|a| Hf::Atom(Atom::Rc(a)))))
}

pub fn rc_f3_hf(x: &Hf) -> Option<Hf> {
    let s: Vec<RcAtom> = x
        .as_atom_seq()?
        .iter()
        .map(|a| a.as_rc().copied())
        .collect::<Option<_>>()?;
    let out = rc_f3(&s).ok()?;
    Some(Hf::set(out.into_iter().map(|a| Hf::Atom(Atom::Rc(a)))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: u64) -> RcAtom {
        rc_atom(n, Pos::A)
    }
    fn b(n: u64) -> RcAtom {
        rc_atom(n, Pos::B)
    }
    fn c(n: u64) -> RcAtom {
        rc_atom(n, Pos::C)
    }

    #[test]
    fn distances() {
        assert_eq!(rc_delta(a(0), b(0)).unwrap(), 1);
        assert_eq!(rc_delta(b(0), c(0)).unwrap(), 1);
        assert_eq!(rc_delta(c(0), a(0)).unwrap(), 1);
        assert_eq!(rc_delta(a(0), c(0)).unwrap(), 2);
        assert!(rc_delta(a(0), a(0)).is_err());
        assert!(rc_delta(a(0), b(1)).is_err());
    }

    #[test]
    fn f1_and_f2() {
        assert_eq!(rc_f1(a(0), b(1)).unwrap(), (a(0), b(1)));
        assert_eq!(rc_f1(b(1), a(0)).unwrap(), (a(0), b(1)));
        assert_eq!(rc_f1(a(0), b(0)).unwrap(), (c(0), c(0)));
        assert_eq!(rc_f2(a(0), a(0)), vec![a(0)]);
        assert_eq!(rc_f2(a(0), b(0)), vec![a(0), b(0)]);
    }

    #[test]
    fn f3_anchors() {
        assert!(rc_f3(&[]).unwrap().is_empty());
        let mut want: BTreeSet<RcAtom> = rc_triple(2).into_iter().collect();
        want.insert(a(0));
        assert_eq!(rc_f3(&[a(0)]).unwrap(), want);
        let mut want: BTreeSet<RcAtom> = rc_triple(18).into_iter().collect();
        want.insert(a(0));
        assert_eq!(rc_f3(&[a(0), c(0)]).unwrap(), want);
        assert!(rc_f3(&[a(0), a(0)]).is_err());
    }

    #[test]
    fn f3_decode_anchors() {
        let f = rc_f3(&[a(0)]).unwrap();
        assert_eq!(rc_f3_decode(&f), Some(vec![a(0)]));
        assert_eq!(rc_f3_decode(&BTreeSet::new()), Some(vec![]));
        assert_eq!(rc_f3_decode(&BTreeSet::from([a(0), b(0)])), None);
        let s = vec![b(1), c(1), a(0), a(1)];
        assert_eq!(rc_f3_decode(&rc_f3(&s).unwrap()), Some(s));
    }

    #[test]
    fn primes() {
        assert_eq!((0..6).map(nth_prime).collect::<Vec<_>>(), vec![2, 3, 5, 7, 11, 13]);
    }
}
