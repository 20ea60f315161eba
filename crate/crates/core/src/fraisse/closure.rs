use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::Model;
use crate::universe::Atom;

struct Rule {
    premise: BTreeSet<Atom>,
    conclusion: BTreeSet<Atom>,
}

/// Horn rules over atoms with a watch index, reusable across start sets.
pub(crate) struct RuleIndex {
    rules: Vec<Rule>,
    watch: BTreeMap<Atom, Vec<usize>>,
    unconditional: BTreeSet<Atom>,
}

impl RuleIndex {
    fn new(rules: Vec<Rule>) -> Self {
        let mut watch: BTreeMap<Atom, Vec<usize>> = BTreeMap::new();
        let mut unconditional = BTreeSet::new();
        for (i, r) in rules.iter().enumerate() {
            if r.premise.is_empty() {
                unconditional.extend(r.conclusion.iter().cloned());
            }
            for a in &r.premise {
                watch.entry(a.clone()).or_default().push(i);
            }
        }
        RuleIndex { rules, watch, unconditional }
    }

    pub(crate) fn strong(model: &Model) -> Self {
        let mut rules = Vec::new();
        for (_, x, y) in model.entries() {
            let (xa, ya) = (x.atoms(), y.atoms());
            for a in &ya {
                rules.push(Rule { premise: [a.clone()].into(), conclusion: xa.clone() });
            }
            rules.push(Rule { premise: xa, conclusion: ya });
        }
        RuleIndex::new(rules)
    }

    pub(crate) fn run(&self, start: &BTreeSet<Atom>) -> BTreeSet<Atom> {
        let mut hits: BTreeMap<usize, usize> = BTreeMap::new();
        let mut out = BTreeSet::new();
        let mut queue: VecDeque<Atom> = start.iter().chain(&self.unconditional).cloned().collect();
        while let Some(a) = queue.pop_front() {
            if !out.insert(a.clone()) {
                continue;
            }
            for &i in self.watch.get(&a).map(Vec::as_slice).unwrap_or(&[]) {
                let h = hits.entry(i).or_insert(0);
                *h += 1;
                if *h == self.rules[i].premise.len() {
                    queue.extend(self.rules[i].conclusion.iter().cloned());
                }
            }
        }
        out
    }
}

fn closure_rules(model: &Model) -> Vec<Rule> {
    model
        .entries()
        .flat_map(|(_, x, y)| {
            let (xa, ya) = (x.atoms(), y.atoms());
            [Rule { premise: xa.clone(), conclusion: ya.clone() }, Rule { premise: ya, conclusion: xa }]
        })
        .collect()
}

/// Least superset of `start` closed under images of entries whose input lies
/// inside and under preimages of entries whose output lies inside.
pub fn closure(model: &Model, start: &BTreeSet<Atom>) -> BTreeSet<Atom> {
    RuleIndex::new(closure_rules(model)).run(start)
}

/// Fixed-point iteration of the same rules, used as a cross-check.
pub fn closure_naive(model: &Model, start: &BTreeSet<Atom>) -> BTreeSet<Atom> {
    let mut cur = start.clone();
    loop {
        let mut next = cur.clone();
        for (_, x, y) in model.entries() {
            let (xa, ya) = (x.atoms(), y.atoms());
            if xa.is_subset(&cur) {
                next.extend(ya.iter().cloned());
            }
            if ya.is_subset(&cur) {
                next.extend(xa);
            }
        }
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// Least superset of `start` whose induced structure is a strong submodel:
/// inputs inside force their outputs in, and an output touching the set forces
/// its input in.
pub fn strong_closure(model: &Model, start: &BTreeSet<Atom>) -> BTreeSet<Atom> {
    RuleIndex::strong(model).run(start)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fraisse::{amalgamate_n, leq, Class, MapTag};
    use crate::universe::Hf;

    #[test]
    fn closure_agrees_with_naive() {
        let m1 = Model::with_atoms(Class::N, [Atom::base(0)]);
        let m2 = Model::with_atoms(Class::N, [Atom::base(1)]);
        let m = amalgamate_n(&m1, &m2, 1).unwrap();
        for a in m.atoms.iter() {
            let s: BTreeSet<Atom> = [a.clone()].into();
            assert_eq!(closure(&m, &s), closure_naive(&m, &s));
        }
        assert_eq!(closure(&m, &BTreeSet::new()).len(), 2);
    }

    #[test]
    fn strong_closure_is_strong() {
        let mut m = Model::with_atoms(Class::N, (0..4).map(Atom::base));
        let a = |i| Atom::base(i);
        m.assign(MapTag::H, Hf::atom_set(&[a(0)]), Hf::atom_pair(&a(1), &a(2))).unwrap();
        m.assign(MapTag::H, Hf::atom_set(&[a(3)]), Hf::atom_pair(&a(2), &a(2))).unwrap();
        let c = strong_closure(&m, &[a(1)].into());
        assert_eq!(c.len(), 4);
        assert_eq!(leq(&m.restrict(&c), &m).unwrap(), None);
    }
}
