use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::closure::RuleIndex;
use super::model::next_stage;
use super::{leq, strong_closure, Class, FraisseError, MapTag, Model};
use crate::classic::max_atoms;
use crate::universe::{enum_kind, Atom, Hf, Reason};

/// Largest number of new atoms in a single pattern.
pub const MAX_PATTERN_WIDTH: usize = 5;
/// Submodels considered per stage, and amalgamated pairs per stage.
pub const SUBMODEL_CAP: usize = 256;
pub const PAIR_CAP: usize = 512;

/// A single new entry over a base, with placeholder atoms standing for the new atoms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pattern {
    pub map: MapTag,
    pub width: usize,
    pub input: Hf,
    pub output: Hf,
}

fn placeholder(i: usize) -> Atom {
    Atom::fresh(0, Reason::Placeholder, i as u64, 0)
}

fn placeholder_index(a: &Atom) -> Option<usize> {
    a.as_fresh().filter(|f| f.reason == Reason::Placeholder).map(|f| f.index as usize)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn rename(x: &Hf, perm: &[usize]) -> Hf {
    x.map_atoms(&mut |a| placeholder_index(a).map_or_else(|| a.clone(), |i| placeholder(perm[i])))
}

/// All single-entry extensions of `base` by `1..=max_new` new atoms, up to renaming
/// of the new atoms. The input must mention a new atom and the output must be a
/// non-empty object over the new atoms that, with the input, uses all of them.
pub fn one_step_patterns(base: &Model, max_new: usize) -> Vec<Pattern> {
    let mut out = BTreeSet::new();
    for k in 1..=max_new.min(MAX_PATTERN_WIDTH) {
        let fresh: Vec<Atom> = (0..k).map(placeholder).collect();
        let mut ground = base.atom_list();
        ground.extend(fresh.iter().cloned());
        let perms = permutations(k);
        for tag in base.class.tags() {
            let (dom, cod) = base.class.kinds(*tag);
            let outputs: Vec<Hf> = enum_kind(cod, &fresh, None)
                .expect("distinct placeholders")
                .filter(|y| !y.atoms().is_empty())
                .collect();
            for x in enum_kind(dom, &ground, None).expect("distinct atoms") {
                let xa = x.atoms();
                if !xa.iter().any(|a| placeholder_index(a).is_some()) {
                    continue;
                }
                for y in &outputs {
                    let mut used: BTreeSet<Atom> = y.atoms();
                    used.extend(xa.iter().cloned());
                    if used.iter().filter(|a| placeholder_index(a).is_some()).count() != k {
                        continue;
                    }
                    let canon = perms
                        .iter()
                        .map(|p| (rename(&x, p), rename(y, p)))
                        .min()
                        .expect("at least one permutation");
                    out.insert(Pattern { map: *tag, width: k, input: canon.0, output: canon.1 });
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Per-stage bookkeeping of the limit builder.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageSummary {
    pub stage: usize,
    pub submodels: usize,
    pub patterns_placed: usize,
    pub copies_placed: usize,
    pub atoms: usize,
    pub entries: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitModel {
    pub class: Class,
    pub size_bound: usize,
    pub model: Model,
    pub stages: Vec<StageSummary>,
    /// Set when a cap stopped a stage before it placed everything.
    pub truncated: bool,
}

fn submodels(model: &Model, size_bound: usize) -> Vec<BTreeSet<Atom>> {
    let index = RuleIndex::strong(model);
    let mut found: BTreeSet<(usize, BTreeSet<Atom>)> = BTreeSet::new();
    let starts = std::iter::once(BTreeSet::new()).chain(model.atoms.iter().map(|a| [a.clone()].into()));
    for s in starts {
        let c = index.run(&s);
        if c.len() <= size_bound {
            found.insert((c.len(), c));
        }
    }
    found.into_iter().map(|(_, c)| c).take(SUBMODEL_CAP).collect()
}

struct Placer {
    stage: u32,
    next_index: u64,
    cap: u128,
    truncated: bool,
}

impl Placer {
    fn mint(&mut self, reason: Reason, width: usize) -> Vec<Atom> {
        let idx = self.next_index;
        self.next_index += 1;
        (0..width).map(|r| Atom::fresh(self.stage, reason, idx, r as u8)).collect()
    }

    fn room(&mut self, model: &Model, width: usize) -> bool {
        if (model.atoms.len() + width) as u128 > self.cap {
            self.truncated = true;
        }
        !self.truncated
    }
}

/// Finite stages of the homogeneous-universal limit.
///
/// Each stage takes the strong submodels generated by at most one atom and of
/// size at most `size_bound`, places a fresh copy of every one-step pattern over
/// each of them that stays within the bound, and places a free amalgam of fresh
/// copies for each pair of them over their intersection.
pub fn limit_stage(
    class: Class,
    size_bound: usize,
    stage_bound: usize,
    seed: Option<&Model>,
) -> Result<LimitModel, FraisseError> {
    let mut model = match seed {
        Some(m) if m.class != class => return Err(FraisseError::WrongClass(m.class)),
        Some(m) => m.clone(),
        None => Model::empty(class),
    };
    let first = seed.map_or(0, |m| next_stage([m]));
    let mut stages = Vec::new();
    let mut truncated = false;
    for alpha in 0..stage_bound {
        let subs = submodels(&model, size_bound);
        let mut placer = Placer { stage: first + alpha as u32, next_index: 0, cap: max_atoms(), truncated: false };
        let mut patterns_placed = 0;
        let mut copies_placed = 0;
        let mut pending: Vec<(Vec<Atom>, Vec<(MapTag, Hf, Hf)>)> = Vec::new();

        for sub in &subs {
            let base = model.restrict(sub);
            for p in one_step_patterns(&base, size_bound.saturating_sub(sub.len())) {
                if !placer.room(&model, p.width) {
                    break;
                }
                let atoms = placer.mint(Reason::LimitPattern, p.width);
                let mut subst = |a: &Atom| placeholder_index(a).map_or_else(|| a.clone(), |i| atoms[i].clone());
                let entry = (p.map, p.input.map_atoms(&mut subst), p.output.map_atoms(&mut subst));
                pending.push((atoms.clone(), vec![entry]));
                patterns_placed += 1;
            }
        }

        let mut pairs = 0;
        'pairs: for (i, n1) in subs.iter().enumerate() {
            for n2 in subs.iter().skip(i + 1) {
                if pairs >= PAIR_CAP {
                    placer.truncated = true;
                    break 'pairs;
                }
                let shared: BTreeSet<Atom> = n1.intersection(n2).cloned().collect();
                let core = model.restrict(&shared);
                let (m1, m2) = (model.restrict(n1), model.restrict(n2));
                if leq(&core, &m1)?.is_some() || leq(&core, &m2)?.is_some() {
                    continue;
                }
                pairs += 1;
                let mut atoms = Vec::new();
                let mut entries = Vec::new();
                for side in [&m1, &m2] {
                    let own: Vec<Atom> = side.atoms.difference(&shared).cloned().collect();
                    if !placer.room(&model, own.len()) {
                        break 'pairs;
                    }
                    let fresh = placer.mint(Reason::AmalgamCopy, own.len());
                    let map: BTreeMap<&Atom, &Atom> = own.iter().zip(&fresh).collect();
                    let mut tr = |a: &Atom| map.get(a).map_or_else(|| a.clone(), |b| (*b).clone());
                    for (t, x, y) in side.entries() {
                        if !x.atoms().is_subset(&shared) {
                            entries.push((t, x.map_atoms(&mut tr), y.map_atoms(&mut tr)));
                        }
                    }
                    atoms.extend(fresh);
                }
                pending.push((atoms, entries));
                copies_placed += 1;
            }
        }

        for (atoms, entries) in pending {
            model.atoms.extend(atoms);
            for (t, x, y) in entries {
                model.assign(t, x, y)?;
            }
        }
        truncated |= placer.truncated;
        stages.push(StageSummary {
            stage: alpha,
            submodels: subs.len(),
            patterns_placed,
            copies_placed,
            atoms: model.atoms.len(),
            entries: model.entry_count(),
        });
    }
    Ok(LimitModel { class, size_bound, model, stages, truncated })
}

/// A placement of `pattern` (over atoms already in `model`) whose induced
/// structure is exactly the base part plus the one entry, and which is strong.
pub fn pattern_copy_in(model: &Model, base: &BTreeSet<Atom>, pattern: &Pattern) -> Option<BTreeMap<Atom, Atom>> {
    let expected_base = model.restrict(base);
    let perms = permutations(pattern.width);
    for (x, y) in model.map(pattern.map).iter() {
        let fresh: Vec<Atom> = x.atoms().union(&y.atoms()).filter(|a| !base.contains(*a)).cloned().collect();
        if fresh.len() != pattern.width {
            continue;
        }
        for p in &perms {
            let phi: BTreeMap<Atom, Atom> = (0..pattern.width).map(|i| (placeholder(i), fresh[p[i]].clone())).collect();
            let mut sub = |a: &Atom| phi.get(a).cloned().unwrap_or_else(|| a.clone());
            if pattern.input.map_atoms(&mut sub) != *x || pattern.output.map_atoms(&mut sub) != *y {
                continue;
            }
            let carrier: BTreeSet<Atom> = base.iter().cloned().chain(fresh.iter().cloned()).collect();
            let induced = model.restrict(&carrier);
            let mut want = expected_base.clone();
            want.atoms = carrier;
            want.assign(pattern.map, x.clone(), y.clone()).ok()?;
            if induced == want && leq(&induced, model).ok()?.is_none() {
                return Some(phi);
            }
        }
    }
    None
}

/// Isomorphism from `cl(fixed ∪ moved)` onto another part of the model that is the
/// identity on `fixed` and sends the rest off `moved`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MovingIsomorphism {
    pub fixed: BTreeSet<Atom>,
    pub moved: BTreeSet<Atom>,
    pub source: BTreeSet<Atom>,
    pub map: BTreeMap<Atom, Atom>,
}

impl MovingIsomorphism {
    /// Re-checks every property of the map against `model`.
    pub fn holds_in(&self, model: &Model) -> bool {
        let img = |a: &Atom| self.map.get(a).cloned().unwrap_or_else(|| a.clone());
        let target: BTreeSet<Atom> = self.source.iter().map(img).collect();
        if target.len() != self.source.len()
            || self.fixed.iter().any(|a| img(a) != *a)
            || self.source.difference(&self.fixed).any(|a| self.moved.contains(&img(a)))
        {
            return false;
        }
        let src = model.restrict(&self.source);
        let mut moved = Model::with_atoms(model.class, target.iter().cloned());
        for (t, x, y) in src.entries() {
            let mut f = |a: &Atom| img(a);
            if moved.assign(t, x.map_atoms(&mut f), y.map_atoms(&mut f)).is_err() {
                return false;
            }
        }
        model.restrict(&target) == moved
    }
}

struct Search<'a> {
    model: &'a Model,
    fixed: &'a BTreeSet<Atom>,
    forbidden: BTreeSet<Atom>,
    source: BTreeSet<Atom>,
    entries: Vec<(MapTag, Hf, Hf)>,
    steps: u64,
    budget: u64,
}

impl Search<'_> {
    fn match_atom(&self, s: &Atom, t: &Atom, phi: &mut BTreeMap<Atom, Atom>, used: &mut BTreeSet<Atom>) -> bool {
        if let Some(m) = phi.get(s) {
            return m == t;
        }
        if self.fixed.contains(s) {
            return s == t;
        }
        if self.forbidden.contains(t) || used.contains(t) {
            return false;
        }
        phi.insert(s.clone(), t.clone());
        used.insert(t.clone());
        true
    }

    /// All ways to extend `phi` so that `src` is sent to `tgt`.
    fn match_hf(&self, src: &Hf, tgt: &Hf, phi: &BTreeMap<Atom, Atom>, used: &BTreeSet<Atom>) -> Vec<(BTreeMap<Atom, Atom>, BTreeSet<Atom>)> {
        match (src, tgt) {
            (Hf::Atom(a), Hf::Atom(b)) => {
                let (mut p, mut u) = (phi.clone(), used.clone());
                if self.match_atom(a, b, &mut p, &mut u) {
                    vec![(p, u)]
                } else {
                    vec![]
                }
            }
            (Hf::Pair(a1, a2), Hf::Pair(b1, b2)) => self.match_list(&[(**a1).clone(), (**a2).clone()], &[(**b1).clone(), (**b2).clone()], phi, used),
            (Hf::Seq(xs), Hf::Seq(ys)) if xs.len() == ys.len() => self.match_list(xs, ys, phi, used),
            (Hf::Set(xs), Hf::Set(ys)) if xs.len() == ys.len() => {
                let xs: Vec<Hf> = xs.iter().cloned().collect();
                let ys: Vec<Hf> = ys.iter().cloned().collect();
                let mut out = Vec::new();
                for p in permutations(ys.len()) {
                    let order: Vec<Hf> = p.iter().map(|i| ys[*i].clone()).collect();
                    out.extend(self.match_list(&xs, &order, phi, used));
                }
                out.sort();
                out.dedup();
                out
            }
            _ => vec![],
        }
    }

    fn match_list(&self, xs: &[Hf], ys: &[Hf], phi: &BTreeMap<Atom, Atom>, used: &BTreeSet<Atom>) -> Vec<(BTreeMap<Atom, Atom>, BTreeSet<Atom>)> {
        let mut states = vec![(phi.clone(), used.clone())];
        for (x, y) in xs.iter().zip(ys) {
            states = states.iter().flat_map(|(p, u)| self.match_hf(x, y, p, u)).collect();
            if states.is_empty() {
                break;
            }
        }
        states
    }

    fn finish(&self, phi: &BTreeMap<Atom, Atom>, used: &BTreeSet<Atom>) -> Option<MovingIsomorphism> {
        let mut phi = phi.clone();
        let mut spare = self.model.atoms.iter().filter(|a| !used.contains(*a) && !self.forbidden.contains(*a));
        for a in self.source.iter().filter(|a| !self.fixed.contains(*a)) {
            if !phi.contains_key(a) {
                let t = spare.next()?.clone();
                phi.insert(a.clone(), t);
            }
        }
        for a in self.fixed {
            phi.insert(a.clone(), a.clone());
        }
        let iso = MovingIsomorphism {
            fixed: self.fixed.clone(),
            moved: self.forbidden.difference(self.fixed).cloned().collect(),
            source: self.source.clone(),
            map: phi,
        };
        iso.holds_in(self.model).then_some(iso)
    }

    fn go(&mut self, i: usize, phi: &BTreeMap<Atom, Atom>, used: &BTreeSet<Atom>) -> Option<MovingIsomorphism> {
        self.steps += 1;
        if self.steps > self.budget {
            return None;
        }
        if i == self.entries.len() {
            return self.finish(phi, used);
        }
        let (t, x, y) = self.entries[i].clone();
        let candidates: Vec<(Hf, Hf)> = self.model.map(t).iter().map(|(a, b)| (a.clone(), b.clone())).collect();
        for (tx, ty) in candidates {
            for (p1, u1) in self.match_hf(&x, &tx, phi, used) {
                for (p2, u2) in self.match_hf(&y, &ty, &p1, &u1) {
                    if let Some(found) = self.go(i + 1, &p2, &u2) {
                        return Some(found);
                    }
                }
            }
        }
        None
    }
}

/// Backtracking search for a moving isomorphism. `fixed` must induce a strong
/// submodel. Returns `Ok(None)` when no copy exists or the step budget runs out.
pub fn find_moving_isomorphism(
    model: &Model,
    fixed: &BTreeSet<Atom>,
    moved: &BTreeSet<Atom>,
    budget: u64,
) -> Result<Option<MovingIsomorphism>, FraisseError> {
    if let Some(v) = leq(&model.restrict(fixed), model)? {
        return Err(FraisseError::Precondition(format!("fixed part is not a strong submodel: {v:?}")));
    }
    let start: BTreeSet<Atom> = fixed.union(moved).cloned().collect();
    let source = strong_closure(model, &start);
    let src = model.restrict(&source);
    let entries: Vec<(MapTag, Hf, Hf)> = src
        .entries()
        .filter(|(_, x, y)| !(x.atoms().is_subset(fixed) && y.atoms().is_subset(fixed)))
        .map(|(t, x, y)| (t, x.clone(), y.clone()))
        .collect();
    let mut search = Search {
        model,
        fixed,
        forbidden: moved.union(fixed).cloned().collect(),
        source,
        entries,
        steps: 0,
        budget,
    };
    Ok(search.go(0, &BTreeMap::new(), &BTreeSet::new()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn patterns_over_empty_base() {
        let pats = one_step_patterns(&Model::empty(Class::N), 1);
        assert_eq!(pats.len(), 1);
        let pats2 = one_step_patterns(&Model::empty(Class::N), 2);
        assert!(pats2.len() > 1);
    }

    #[test]
    fn zero_bound_leaves_seed() {
        let seed = Model::with_atoms(Class::N, [Atom::base(0)]);
        let out = limit_stage(Class::N, 0, 3, Some(&seed)).unwrap();
        assert_eq!(out.model, seed);
    }

    #[test]
    fn small_limit_is_universal_and_moves() {
        let out = limit_stage(Class::N, 3, 2, None).unwrap();
        let empty = BTreeSet::new();
        for p in one_step_patterns(&Model::empty(Class::N), 3) {
            assert!(pattern_copy_in(&out.model, &empty, &p).is_some(), "{p:?}");
        }
        let a: BTreeSet<Atom> = out.model.atoms.iter().take(1).cloned().collect();
        let iso = find_moving_isomorphism(&out.model, &empty, &a, 100_000).unwrap().unwrap();
        assert!(iso.holds_in(&out.model));
    }
}
