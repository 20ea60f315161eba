use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::perm::{FinitePerm, Permutation, RcRotation, RzPartial};
use super::SymmetryError;
use crate::classic::{rc_universe, rn_build, rn_flip_keys, RnPerm};
use crate::universe::{Atom, Hf, Rational, RnAtom};

/// Default cap on enumerated group elements, orbit sizes and order patterns.
pub const DEFAULT_BOUND: usize = 20_000;

/// A finite window onto one of the permutation groups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GroupSpec {
    /// All permutations of `atoms`.
    FreeSymmetric { atoms: Vec<Atom> },
    /// Rotations of the triples `P_0 … P_{triples-1}`.
    RcTriples { triples: u64 },
    /// The flip tower `A_depth` over `base` base atoms.
    RnTower { base: u32, depth: u32 },
    /// Order automorphisms of the rationals, observed on `points`.
    RzOrdered { points: Vec<Rational> },
    /// The subgroup generated by `generators` acting on `universe`.
    Generated { universe: Vec<Atom>, generators: Vec<Permutation> },
}

impl GroupSpec {
    pub fn free(atoms: Vec<Atom>) -> Self {
        GroupSpec::FreeSymmetric { atoms }
    }

    /// The atoms of the truncated universe.
    pub fn universe(&self) -> Result<Vec<Atom>, SymmetryError> {
        Ok(match self {
            GroupSpec::FreeSymmetric { atoms } => atoms.clone(),
            GroupSpec::RcTriples { triples } => rc_universe(*triples),
            GroupSpec::RnTower { base, depth } => {
                rn_build(*base, *depth)?.into_iter().map(Atom::Rn).collect()
            }
            GroupSpec::RzOrdered { points } => points.iter().copied().map(Atom::Rz).collect(),
            GroupSpec::Generated { universe, .. } => universe.clone(),
        })
    }
}

/// Generators of `Fix(E)` inside the window. `complete` is false when the
/// window had to be cut off before the subgroup was closed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generators {
    pub perms: Vec<Permutation>,
    pub complete: bool,
}

pub fn fix_generators(spec: &GroupSpec, fixed: &BTreeSet<Atom>) -> Result<Generators, SymmetryError> {
    fix_generators_bounded(spec, fixed, DEFAULT_BOUND)
}

pub fn fix_generators_bounded(
    spec: &GroupSpec,
    fixed: &BTreeSet<Atom>,
    bound: usize,
) -> Result<Generators, SymmetryError> {
    let mut complete = true;
    let mut perms: Vec<Permutation> = match spec {
        GroupSpec::FreeSymmetric { atoms } => {
            let free: Vec<&Atom> = atoms.iter().filter(|a| !fixed.contains(*a)).collect();
            free.windows(2)
                .map(|w| Permutation::transposition(w[0], w[1]))
                .collect()
        }
        GroupSpec::RcTriples { triples } => {
            let pinned: BTreeSet<u64> = fixed.iter().filter_map(|a| a.as_rc().map(|r| r.triple)).collect();
            (0..*triples)
                .filter(|n| !pinned.contains(n))
                .map(|n| Permutation::Rc(RcRotation::single(n, 1)))
                .collect()
        }
        GroupSpec::RnTower { base, depth } => rn_fix_generators(*base, *depth, fixed)?,
        GroupSpec::RzOrdered { points } => {
            let e: BTreeSet<Rational> = fixed.iter().filter_map(|a| a.as_rz().copied()).collect();
            rz_shift_generators(points, &e)?
        }
        GroupSpec::Generated { universe, generators } => {
            let closure = close_group(universe, generators, bound)?;
            complete = closure.complete;
            closure
                .elements
                .into_iter()
                .filter(|p| !p.map().is_empty())
                .map(Permutation::Finite)
                .filter(|p| p.fixes_pointwise(fixed))
                .collect()
        }
    };
    if perms.is_empty() {
        perms.push(Permutation::identity());
    }
    Ok(Generators { perms, complete })
}

/// Atoms occurring hereditarily inside tower atoms of `fixed`.
fn rn_down_closure(fixed: &BTreeSet<Atom>) -> BTreeSet<RnAtom> {
    let mut out = BTreeSet::new();
    let mut stack: Vec<RnAtom> = fixed.iter().filter_map(|a| match a {
        Atom::Rn(x) => Some(x.clone()),
        _ => None,
    }).collect();
    while let Some(x) = stack.pop() {
        if let RnAtom::Tup { p, .. } = &x {
            stack.extend(p.iter().cloned());
        }
        out.insert(x);
    }
    out
}

fn rn_fix_generators(base: u32, depth: u32, fixed: &BTreeSet<Atom>) -> Result<Vec<Permutation>, SymmetryError> {
    let pinned = rn_down_closure(fixed);
    let free_base: Vec<u32> = (0..base).filter(|i| !pinned.contains(&RnAtom::Base(*i))).collect();
    let pinned_keys: BTreeSet<(u32, Vec<RnAtom>)> = pinned
        .iter()
        .filter_map(|x| match x {
            RnAtom::Tup { level, p, .. } => Some((*level, p.clone())),
            RnAtom::Base(_) => None,
        })
        .collect();
    let mut gens: Vec<Permutation> = free_base
        .windows(2)
        .map(|w| Permutation::Rn(RnPerm::transposition(w[0], w[1])))
        .collect();
    for key in rn_flip_keys(base, depth)? {
        if !pinned_keys.contains(&key) {
            gens.push(Permutation::Rn(RnPerm::flip(key.0, key.1)));
        }
    }
    Ok(gens)
}

/// For each window point outside `fixed`, the map moving it halfway towards
/// its right neighbour (or by one past the last point) and fixing the rest.
fn rz_shift_generators(points: &[Rational], fixed: &BTreeSet<Rational>) -> Result<Vec<Permutation>, SymmetryError> {
    let sorted: BTreeSet<Rational> = points.iter().copied().chain(fixed.iter().copied()).collect();
    let sorted: Vec<Rational> = sorted.into_iter().collect();
    let mut gens = Vec::new();
    for (i, p) in sorted.iter().enumerate() {
        if fixed.contains(p) {
            continue;
        }
        let target = match sorted.get(i + 1) {
            Some(next) => p.midpoint(next),
            None => Rational(p.0 + 1),
        };
        let map: BTreeMap<Rational, Rational> = sorted
            .iter()
            .map(|x| (*x, if x == p { target } else { *x }))
            .collect();
        gens.push(Permutation::Rz(RzPartial::new(map)?));
    }
    Ok(gens)
}

/// Elements of a finite permutation group obtained by closing generators.
#[derive(Clone, Debug)]
pub struct GroupClosure {
    pub elements: Vec<FinitePerm>,
    pub complete: bool,
}

pub fn close_group(universe: &[Atom], generators: &[Permutation], bound: usize) -> Result<GroupClosure, SymmetryError> {
    let gens: Vec<FinitePerm> = generators
        .iter()
        .map(|g| g.restrict(universe))
        .collect::<Result<_, _>>()?;
    let mut seen: BTreeSet<FinitePerm> = BTreeSet::from([FinitePerm::default()]);
    let mut order = vec![FinitePerm::default()];
    let mut queue = VecDeque::from([FinitePerm::default()]);
    while let Some(cur) = queue.pop_front() {
        for g in &gens {
            let next = g.compose(&cur);
            if seen.insert(next.clone()) {
                if seen.len() > bound {
                    return Ok(GroupClosure { elements: order, complete: false });
                }
                order.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(GroupClosure { elements: order, complete: true })
}

/// Outcome of a support check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum SupportVerdict {
    Supported,
    NotSupported { witness: Permutation, moved_to: Hf },
    InconclusiveTruncation { reason: String },
}

impl SupportVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, SupportVerdict::Supported)
    }
}

/// A finite set of atoms claimed to support an object.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportClaim {
    pub support: BTreeSet<Atom>,
    pub object: Hf,
}

impl SupportClaim {
    pub fn new<I: IntoIterator<Item = Atom>>(support: I, object: Hf) -> Self {
        SupportClaim { support: support.into_iter().collect(), object }
    }
}

pub fn is_support(claim: &SupportClaim, spec: &GroupSpec) -> Result<SupportVerdict, SymmetryError> {
    is_support_bounded(claim, spec, DEFAULT_BOUND)
}

pub fn is_support_bounded(claim: &SupportClaim, spec: &GroupSpec, bound: usize) -> Result<SupportVerdict, SymmetryError> {
    if let GroupSpec::RzOrdered { .. } = spec {
        return rz_is_support(claim, bound);
    }
    let gens = fix_generators_bounded(spec, &claim.support, bound)?;
    for g in &gens.perms {
        let moved = g.act(&claim.object)?;
        if moved != claim.object {
            return Ok(SupportVerdict::NotSupported { witness: g.clone(), moved_to: moved });
        }
    }
    if !gens.complete {
        return Ok(SupportVerdict::InconclusiveTruncation {
            reason: format!("group closure exceeded {bound} elements"),
        });
    }
    Ok(SupportVerdict::Supported)
}

fn rz_is_support(claim: &SupportClaim, bound: usize) -> Result<SupportVerdict, SymmetryError> {
    let fixed: BTreeSet<Rational> = claim.support.iter().filter_map(|a| a.as_rz().copied()).collect();
    let moving: BTreeSet<Rational> = claim
        .object
        .atoms()
        .iter()
        .filter_map(|a| a.as_rz().copied())
        .filter(|q| !fixed.contains(q))
        .collect();
    let patterns = rz_patterns(&fixed, &moving, bound);
    let Some(patterns) = patterns else {
        return Ok(SupportVerdict::InconclusiveTruncation {
            reason: format!("more than {bound} order patterns"),
        });
    };
    for map in patterns {
        let perm = Permutation::Rz(map);
        let moved = perm.act(&claim.object)?;
        if moved != claim.object {
            return Ok(SupportVerdict::NotSupported { witness: perm, moved_to: moved });
        }
    }
    Ok(SupportVerdict::Supported)
}

/// Every way an order automorphism fixing `fixed` can move `moving`, up to
/// the joint order type of points and images, realised by concrete rationals.
/// `None` when there are more than `bound` patterns.
pub fn rz_patterns(fixed: &BTreeSet<Rational>, moving: &BTreeSet<Rational>, bound: usize) -> Option<Vec<RzPartial>> {
    let cuts: Vec<Rational> = fixed.iter().copied().collect();
    // moving points grouped by the gap between consecutive fixed points
    let mut gaps: Vec<(Option<Rational>, Option<Rational>, Vec<Rational>)> = Vec::new();
    for i in 0..=cuts.len() {
        let lo = if i == 0 { None } else { Some(cuts[i - 1]) };
        let hi = cuts.get(i).copied();
        let pts: Vec<Rational> = moving
            .iter()
            .copied()
            .filter(|q| lo.is_none_or(|l| *q > l) && hi.is_none_or(|h| *q < h))
            .collect();
        if !pts.is_empty() {
            gaps.push((lo, hi, pts));
        }
    }
    let mut per_gap: Vec<Vec<Vec<(Rational, Rational)>>> = Vec::new();
    for (lo, hi, pts) in &gaps {
        let mut realised = Vec::new();
        for merge in merges(pts.len()) {
            realised.push(realise(*lo, *hi, pts, &merge));
            if realised.len() > bound {
                return None;
            }
        }
        per_gap.push(realised);
    }
    let mut out: Vec<Vec<(Rational, Rational)>> = vec![Vec::new()];
    for options in per_gap {
        let mut next = Vec::new();
        for partial in &out {
            for opt in &options {
                let mut v = partial.clone();
                v.extend(opt.iter().copied());
                next.push(v);
                if next.len() > bound {
                    return None;
                }
            }
        }
        out = next;
    }
    Some(
        out.into_iter()
            .map(|pairs| {
                let mut map: BTreeMap<Rational, Rational> = fixed.iter().map(|q| (*q, *q)).collect();
                map.extend(pairs);
                RzPartial::new(map).expect("patterns are order preserving")
            })
            .collect(),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Step {
    Point,
    Image,
    Both,
}

/// Interleavings of `m` points with their `m` images, ties allowed.
fn merges(m: usize) -> Vec<Vec<Step>> {
    fn go(p: usize, i: usize, m: usize, cur: &mut Vec<Step>, out: &mut Vec<Vec<Step>>) {
        if p == m && i == m {
            out.push(cur.clone());
            return;
        }
        if p < m {
            cur.push(Step::Point);
            go(p + 1, i, m, cur, out);
            cur.pop();
        }
        if i < m {
            cur.push(Step::Image);
            go(p, i + 1, m, cur, out);
            cur.pop();
        }
        if p < m && i < m {
            cur.push(Step::Both);
            go(p + 1, i + 1, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, 0, m, &mut Vec::new(), &mut out);
    out
}

fn realise(lo: Option<Rational>, hi: Option<Rational>, pts: &[Rational], merge: &[Step]) -> Vec<(Rational, Rational)> {
    let mut images: Vec<Option<Rational>> = Vec::new();
    let mut p = 0usize;
    let mut last: Option<Rational> = lo;
    let mut pending: Vec<usize> = Vec::new();
    let fill = |pending: &mut Vec<usize>, from: Option<Rational>, to: Option<Rational>, images: &mut Vec<Option<Rational>>| {
        let t = pending.len() as i64;
        for (k, slot) in pending.drain(..).enumerate() {
            let k = k as i64 + 1;
            let v = match (from, to) {
                (Some(a), Some(b)) => Rational(a.0 + (b.0 - a.0) * num_rational::Ratio::new(k, t + 1)),
                (Some(a), None) => Rational(a.0 + num_rational::Ratio::from_integer(k)),
                (None, Some(b)) => Rational(b.0 - num_rational::Ratio::from_integer(t + 1 - k)),
                (None, None) => Rational::integer(k),
            };
            images[slot] = Some(v);
        }
    };
    for step in merge {
        match step {
            Step::Point => {
                fill(&mut pending, last, Some(pts[p]), &mut images);
                last = Some(pts[p]);
                p += 1;
            }
            Step::Image => {
                pending.push(images.len());
                images.push(None);
            }
            Step::Both => {
                fill(&mut pending, last, Some(pts[p]), &mut images);
                images.push(Some(pts[p]));
                last = Some(pts[p]);
                p += 1;
            }
        }
    }
    fill(&mut pending, last, hi, &mut images);
    pts.iter()
        .copied()
        .zip(images.into_iter().map(|v| v.expect("every image slot is filled")))
        .collect()
}

/// Orbit of `x` under `Fix(E)` inside the window.
///
/// For the rational window the orbit is taken among the window points: every
/// image of `x` under an order-preserving map fixing `E` whose values on the
/// atoms of `x` lie in `points`.
pub fn orbit(x: &Hf, spec: &GroupSpec, fixed: &BTreeSet<Atom>, bound: usize) -> Result<BTreeSet<Hf>, SymmetryError> {
    if let GroupSpec::RzOrdered { points } = spec {
        return rz_window_orbit(x, points, fixed, bound);
    }
    let gens = fix_generators_bounded(spec, fixed, bound)?;
    let mut seen = BTreeSet::from([x.clone()]);
    let mut queue = VecDeque::from([x.clone()]);
    while let Some(cur) = queue.pop_front() {
        for g in &gens.perms {
            let y = g.act(&cur)?;
            if seen.insert(y.clone()) {
                if seen.len() > bound {
                    return Err(SymmetryError::OrbitTooLarge { bound, partial: seen.into_iter().collect() });
                }
                queue.push_back(y);
            }
        }
    }
    Ok(seen)
}

fn rz_window_orbit(x: &Hf, points: &[Rational], fixed: &BTreeSet<Atom>, bound: usize) -> Result<BTreeSet<Hf>, SymmetryError> {
    let e: BTreeSet<Rational> = fixed.iter().filter_map(|a| a.as_rz().copied()).collect();
    let moving: Vec<Rational> = x
        .atoms()
        .iter()
        .filter_map(|a| a.as_rz().copied())
        .filter(|q| !e.contains(q))
        .collect();
    let window: BTreeSet<Rational> = points.iter().copied().filter(|q| !e.contains(q)).collect();
    let gap_of = |q: &Rational| e.iter().filter(|c| *c < q).count();
    // increasing injections that respect the gaps
    let mut maps: Vec<Vec<Rational>> = vec![Vec::new()];
    for m in &moving {
        let mut next = Vec::new();
        for partial in &maps {
            let floor = partial.last().copied();
            for w in &window {
                if floor.is_some_and(|f| *w <= f) || gap_of(w) != gap_of(m) {
                    continue;
                }
                let mut v = partial.clone();
                v.push(*w);
                next.push(v);
            }
        }
        maps = next;
        if maps.len() > bound {
            break;
        }
    }
    let mut seen = BTreeSet::new();
    for images in maps {
        let mut map: BTreeMap<Rational, Rational> = e.iter().map(|q| (*q, *q)).collect();
        map.extend(moving.iter().copied().zip(images));
        let y = Permutation::Rz(RzPartial::new(map)?).act(x)?;
        seen.insert(y);
        if seen.len() > bound {
            return Err(SymmetryError::OrbitTooLarge { bound, partial: seen.into_iter().collect() });
        }
    }
    Ok(seen)
}
