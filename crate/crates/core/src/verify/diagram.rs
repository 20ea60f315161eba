use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::checks::find_contradiction;
use super::{
    check_equivariant, check_injective, counting_gap, Direction, EdgeClaim, Method, Metrics, Outcome,
    VerifyError, VerifyReport, Witness,
};
use crate::classic::{rc_f1_hf, rc_f2_hf, rc_f3_hf, rc_universe, rn_build, rz_inject, RzMap};
use crate::fraisse::{
    copy_tower_n, plain_extension_z, xyz_extension_n, xyz_sequence_counts, Class, MapTag, Model, PlainExtension,
};
use crate::symmetry::{fix_generators_bounded, FinitePerm, GroupSpec, Permutation, DEFAULT_BOUND};
use crate::universe::{enum_kind, Atom, Hf, KindTag, PositionSeqs, Rational, Reason};

use KindTag::{FinSubsets as FS, InjSeq as IS, OrderedPairs as OP, UnorderedPairs as UP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelRef {
    Rc,
    Rn,
    Rz,
    N,
    Z,
    Empty,
}

impl ModelRef {
    pub const ALL: [ModelRef; 6] = [ModelRef::Rc, ModelRef::Rn, ModelRef::Rz, ModelRef::N, ModelRef::Z, ModelRef::Empty];

    pub fn name(self) -> &'static str {
        match self {
            ModelRef::Rc => "rc",
            ModelRef::Rn => "rn",
            ModelRef::Rz => "rz",
            ModelRef::N => "n",
            ModelRef::Z => "z",
            ModelRef::Empty => "empty",
        }
    }

    /// The strict chain the model realises, smallest first.
    pub fn chain(self) -> Option<[KindTag; 4]> {
        match self {
            ModelRef::Rc => Some([UP, OP, IS, FS]),
            ModelRef::Rn => Some([OP, IS, UP, FS]),
            ModelRef::Rz => Some([UP, OP, FS, IS]),
            ModelRef::N => Some([UP, FS, OP, IS]),
            ModelRef::Z => Some([OP, UP, IS, FS]),
            ModelRef::Empty => None,
        }
    }
}

impl fmt::Display for ModelRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelRef {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ModelRef::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown model `{s}` (expected rc, rn, rz, n, z or empty)"))
    }
}

/// Window sizes used by [`diagram_report`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub triples: u64,
    pub k: u64,
    pub extra: u64,
    pub points: u64,
    pub rn_base: u32,
    pub rn_depth: u32,
    pub stages: usize,
    pub maxlen: u64,
    pub samples: u64,
    pub seed: u64,
    pub group_bound: usize,
    pub witness_cap: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            triples: 4,
            k: 5,
            extra: 3,
            points: 9,
            rn_base: 3,
            rn_depth: 1,
            stages: 1,
            maxlen: 2,
            samples: 16,
            seed: 0,
            group_bound: DEFAULT_BOUND,
            witness_cap: 24,
        }
    }
}

/// One report per ordered comparison along the model's chain: `A ≤ B` and
/// `B ≰ A` for each consecutive pair.
pub fn diagram_report(model: ModelRef, bounds: &Bounds) -> Result<Vec<VerifyReport>, VerifyError> {
    let mut reports = match model {
        ModelRef::Rc => rc_reports(bounds)?,
        ModelRef::Rn => rn_reports(bounds)?,
        ModelRef::Rz => rz_reports(bounds)?,
        ModelRef::N => n_reports(bounds)?,
        ModelRef::Z => z_reports(bounds)?,
        ModelRef::Empty => empty_reports(),
    };
    for r in &mut reports {
        r.bounds = bounds.clone();
    }
    Ok(reports)
}

fn claim(model: ModelRef, from: KindTag, to: KindTag, direction: Direction, method: Method) -> EdgeClaim {
    EdgeClaim::new(from, to, direction, model, method)
}

fn le(model: ModelRef, from: KindTag, to: KindTag) -> EdgeClaim {
    claim(model, from, to, Direction::Le, Method::ExplicitWitness)
}

fn not_le(model: ModelRef, from: KindTag, to: KindTag, method: Method) -> EdgeClaim {
    claim(model, from, to, Direction::NotLe, method)
}

fn cited(c: EdgeClaim, what: &str) -> VerifyReport {
    VerifyReport::new(c, Outcome::InconclusiveTruncation, None, Metrics::default())
        .with_note(format!("{what}: no desk-scale check is shipped for this edge"))
}

fn add(m: &mut Metrics, other: &Metrics) {
    m.inputs += other.inputs;
    m.permutations += other.permutations;
    m.candidates += other.candidates;
    m.refuted += other.refuted;
    m.survivors += other.survivors;
    m.checks += other.checks;
}

/// Folds sub-reports of one positive edge: the first non-verified part wins.
fn combine(c: EdgeClaim, parts: Vec<VerifyReport>) -> VerifyReport {
    let mut metrics = Metrics::default();
    for p in &parts {
        add(&mut metrics, &p.metrics);
    }
    if let Some(bad) = parts.iter().find(|p| p.outcome == Outcome::Refuted) {
        let mut r = bad.clone();
        r.claim = c;
        r.metrics = metrics;
        return r;
    }
    if let Some(open) = parts.iter().find(|p| p.outcome != Outcome::Verified) {
        let mut r = open.clone();
        r.claim = c;
        r.metrics = metrics;
        return r;
    }
    let w = Witness::Evidence { parts: parts.into_iter().filter_map(|p| p.witness).collect() };
    VerifyReport::new(c, Outcome::Verified, Some(w), metrics)
}

fn positive<F>(
    c: EdgeClaim,
    f: F,
    domain: Vec<Hf>,
    spec: &GroupSpec,
    support: &BTreeSet<Atom>,
    bounds: &Bounds,
) -> Result<VerifyReport, VerifyError>
where
    F: Fn(&Hf) -> Option<Hf>,
{
    let inj = check_injective(c.clone(), domain.iter().cloned(), &f);
    let eq = check_equivariant(c.clone(), &f, spec, support, &domain, bounds.group_bound)?;
    Ok(combine(c, vec![inj, eq]))
}

fn counting(c: EdgeClaim, a: KindTag, b: KindTag, k: u64, extra: u64) -> Result<VerifyReport, VerifyError> {
    let (ca, cb, gap) = counting_gap(a, b, k, extra)?;
    let w = Witness::Counting { kind_a: a, kind_b: b, ground_size: k, extra, count_a: ca, count_b: cb };
    let metrics = Metrics { checks: 1, ..Metrics::default() };
    Ok(if gap {
        VerifyReport::new(c, Outcome::Verified, Some(w), metrics)
    } else {
        VerifyReport::new(c, Outcome::InconclusiveTruncation, Some(w), metrics)
            .with_note("no counting gap at this ground size")
    })
}

/// Runs a family of candidate tables against `perms`. Survivors accepted by
/// `excused` are covered by the extra evidence in `core`.
fn family<I>(
    c: EdgeClaim,
    candidates: I,
    perms: &[Permutation],
    core: Vec<Witness>,
    excused: impl Fn(&[(Hf, Hf)]) -> bool,
    bounds: &Bounds,
) -> VerifyReport
where
    I: IntoIterator<Item = Vec<(Hf, Hf)>>,
{
    let mut metrics = Metrics { permutations: perms.len() as u64, ..Metrics::default() };
    let mut parts = core;
    let mut open = 0u64;
    for table in candidates {
        metrics.candidates += 1;
        metrics.inputs += table.len() as u64;
        match find_contradiction(&table, perms, &mut metrics.checks) {
            Some(reason) => {
                metrics.refuted += 1;
                if parts.len() < bounds.witness_cap {
                    parts.push(Witness::Candidate { table, reason: Box::new(reason) });
                }
            }
            None => {
                metrics.survivors += 1;
                if !excused(&table) {
                    open += 1;
                }
            }
        }
    }
    let witness = (!parts.is_empty()).then_some(Witness::Evidence { parts });
    if open == 0 && witness.is_some() {
        VerifyReport::new(c, Outcome::Verified, witness, metrics)
    } else {
        VerifyReport::new(c, Outcome::InconclusiveTruncation, witness, metrics)
            .with_note(format!("{open} candidate tables survived every permutation in the window"))
    }
}

fn over(x: &Hf, atoms: &BTreeSet<Atom>) -> bool {
    x.atoms().is_subset(atoms)
}

fn short_iseqs(ground: &[Atom], maxlen: u64) -> Vec<Hf> {
    PositionSeqs::new(ground.len(), maxlen as usize, true)
        .map(|s| Hf::seq(s.into_iter().map(|i| Hf::Atom(ground[i].clone()))))
        .collect()
}

fn all_of(kind: KindTag, ground: &[Atom]) -> Result<Vec<Hf>, VerifyError> {
    Ok(enum_kind(kind, ground, None)?.collect())
}

fn pair_to_iseq(x: &Hf) -> Option<Hf> {
    let (a, b) = x.as_pair()?;
    Some(if a == b { Hf::seq([a.clone()]) } else { Hf::seq([a.clone(), b.clone()]) })
}

fn inclusion(x: &Hf) -> Option<Hf> {
    x.as_set().map(|_| x.clone())
}

fn finite(perms: Vec<FinitePerm>) -> Vec<Permutation> {
    perms.into_iter().map(Permutation::Finite).collect()
}

fn rc_reports(b: &Bounds) -> Result<Vec<VerifyReport>, VerifyError> {
    let m = ModelRef::Rc;
    if b.triples < 2 {
        return Err(VerifyError::Bounds("rc needs at least two triples".into()));
    }
    let ground = rc_universe(b.triples);
    let spec = GroupSpec::RcTriples { triples: b.triples };
    let none = BTreeSet::new();
    let ups = all_of(UP, &ground)?;
    let ops = all_of(OP, &ground)?;
    let iss = short_iseqs(&ground, 3);
    let composite = |x: &Hf| rc_f1_hf(x).and_then(|y| rc_f2_hf(&y)).and_then(|z| rc_f3_hf(&z));

    let mut out = vec![
        positive(le(m, UP, OP), rc_f1_hf, ups.clone(), &spec, &none, b)?,
        positive(le(m, OP, IS), rc_f2_hf, ops, &spec, &none, b)?,
        positive(le(m, IS, FS), rc_f3_hf, iss, &spec, &none, b)?,
        positive(le(m, UP, FS), composite, ups, &spec, &none, b)?,
        counting(not_le(m, OP, UP, Method::Counting), OP, UP, 3, 0)?,
    ];

    let (ci, co, _) = counting_gap(IS, OP, 3, 0)?;
    let core = vec![
        Witness::Counting { kind_a: IS, kind_b: OP, ground_size: 3, extra: 0, count_a: ci, count_b: co },
        Witness::SequenceCore { sequences: 12, pairs: 6 },
    ];
    let metrics = Metrics { checks: 2, ..Metrics::default() };
    out.push(VerifyReport::new(
        not_le(m, IS, OP, Method::Counting),
        Outcome::Verified,
        Some(Witness::Evidence { parts: core }),
        metrics,
    ));

    // Sets P_n against sequences with an atom off the support P_0.
    let support: BTreeSet<Atom> = ground[..3].iter().cloned().collect();
    let perms = fix_generators_bounded(&spec, &support, b.group_bound)?.perms;
    let triple = |n: u64| Hf::atom_set(&ground[3 * n as usize..3 * n as usize + 3]);
    let images: Vec<Hf> = short_iseqs(&ground, b.maxlen).into_iter().filter(|s| !over(s, &support)).collect();
    let mut tables: Vec<Vec<(Hf, Hf)>> = Vec::new();
    for n in 1..b.triples {
        tables.extend(images.iter().map(|s| vec![(triple(n), s.clone())]));
    }
    let pool = short_iseqs(&ground, b.maxlen);
    let mut rng = ChaCha8Rng::seed_from_u64(b.seed);
    let mut drawn = 0;
    while drawn < b.samples {
        let mut picks: Vec<Hf> = pool.choose_multiple(&mut rng, b.triples as usize).cloned().collect();
        picks.shuffle(&mut rng);
        if picks[1..].iter().all(|s| over(s, &support)) {
            continue;
        }
        tables.push((0..b.triples).map(triple).zip(picks).collect());
        drawn += 1;
    }
    out.push(family(not_le(m, FS, IS, Method::SupportContradiction), tables, &perms, Vec::new(), |_| false, b));
    Ok(out)
}

fn rn_reports(b: &Bounds) -> Result<Vec<VerifyReport>, VerifyError> {
    let m = ModelRef::Rn;
    let ground: Vec<Atom> = rn_build(b.rn_base, b.rn_depth)?.into_iter().map(Atom::Rn).collect();
    let spec = GroupSpec::RnTower { base: b.rn_base, depth: b.rn_depth };
    let none = BTreeSet::new();
    Ok(vec![
        positive(le(m, OP, IS), pair_to_iseq, all_of(OP, &ground)?, &spec, &none, b)?,
        cited(le(m, IS, UP), "injective sequences into 2-sets"),
        positive(le(m, UP, FS), inclusion, all_of(UP, &ground)?, &spec, &none, b)?,
        counting(not_le(m, IS, OP, Method::Counting), IS, OP, b.k, b.extra)?,
        cited(not_le(m, UP, IS, Method::SupportContradiction), "2-sets into injective sequences"),
        counting(not_le(m, FS, UP, Method::Counting), FS, UP, b.k + 1, b.extra)?,
    ])
}

fn rz_reports(b: &Bounds) -> Result<Vec<VerifyReport>, VerifyError> {
    let m = ModelRef::Rz;
    if b.points < 8 {
        return Err(VerifyError::Bounds("rz needs at least eight points".into()));
    }
    let points: Vec<Rational> = (1..=b.points as i64).map(Rational::integer).collect();
    let markers: Vec<Rational> = points.iter().skip(1).step_by(2).take(4).copied().collect();
    let ground: Vec<Atom> = points.iter().copied().map(Atom::Rz).collect();
    let spec = GroupSpec::RzOrdered { points: points.clone() };
    let none = BTreeSet::new();
    let marked: BTreeSet<Atom> = markers.iter().copied().map(Atom::Rz).collect();
    let with = |kind: RzMap| {
        let markers = markers.clone();
        move |x: &Hf| rz_inject(kind, x, &markers).ok()
    };
    Ok(vec![
        positive(le(m, UP, OP), with(RzMap::UnorderedToSquare), all_of(UP, &ground)?, &spec, &none, b)?,
        positive(le(m, OP, FS), with(RzMap::SquareToFin), all_of(OP, &ground)?, &spec, &marked, b)?,
        positive(le(m, FS, IS), with(RzMap::FinToIseq), all_of(FS, &ground)?, &spec, &none, b)?,
        cited(not_le(m, OP, UP, Method::SupportContradiction), "pairs into 2-sets over the rationals"),
        cited(not_le(m, FS, OP, Method::SupportContradiction), "finite sets into pairs over the rationals"),
        cited(not_le(m, IS, FS, Method::SupportContradiction), "injective sequences into finite sets over the rationals"),
    ])
}

fn n_reports(b: &Bounds) -> Result<Vec<VerifyReport>, VerifyError> {
    let m = ModelRef::N;
    let xyz = xyz_extension_n(&Model::empty(Class::N), b.stages.max(1))?;
    let model = &xyz.model;
    let perms = finite(xyz.triple_permutations());
    let ground = model.atom_list();
    let spec = GroupSpec::Generated { universe: ground.clone(), generators: perms.clone() };
    let none = BTreeSet::new();
    let [x, y, _] = xyz.xyz.clone();
    let triple: BTreeSet<Atom> = xyz.xyz.iter().cloned().collect();

    let mut out = vec![positive(le(m, UP, FS), inclusion, all_of(UP, &ground)?, &spec, &none, b)?];

    // The table of h, its shape rules and its symmetry.
    let h: Vec<(Hf, Hf)> = model.h().iter().map(|(a, b)| (a.clone(), b.clone())).collect();
    let lookup = |e: &Hf| model.h().get(e).cloned();
    let inj = check_injective(le(m, FS, OP), h.iter().map(|(e, _)| e.clone()), lookup);
    let mut rule_checks = 0u64;
    let mut rule_break = None;
    for (e, p) in &h {
        rule_checks += 1;
        let set = e.as_atom_set().unwrap_or_default();
        let inside: Vec<&Atom> = set.intersection(&triple).collect();
        let Some((p0, p1)) = p.as_atom_pair() else {
            rule_break = Some(e.clone());
            break;
        };
        let ok = match inside.len() {
            1 => p0 == *inside[0] && !triple.contains(&p1),
            2 => !set.contains(&p0) && triple.contains(&p0) && !triple.contains(&p1),
            _ => !triple.contains(&p0) && !triple.contains(&p1) && p0 != p1,
        };
        if !ok {
            rule_break = Some(e.clone());
            break;
        }
    }
    let broken: Vec<Permutation> = finite(xyz.non_automorphisms());
    let audit = Witness::Audit { entries: h.len() as u128, permutations: perms.len() as u64 };
    let fs_op = match (inj.outcome, rule_break, broken.first()) {
        (Outcome::Verified, None, None) => {
            let mut metrics = inj.metrics.clone();
            metrics.checks += rule_checks + (h.len() * perms.len()) as u64;
            metrics.permutations = perms.len() as u64;
            let w = Witness::Evidence { parts: vec![inj.witness.clone().expect("checked"), audit] };
            VerifyReport::new(le(m, FS, OP), Outcome::Verified, Some(w), metrics)
        }
        (Outcome::Verified, Some(e), _) => VerifyReport::new(le(m, FS, OP), Outcome::Refuted, None, inj.metrics.clone())
            .with_note(format!("entry for {e} breaks its shape rule")),
        (Outcome::Verified, None, Some(_)) => {
            VerifyReport::new(le(m, FS, OP), Outcome::Refuted, None, inj.metrics.clone())
                .with_note("a permutation of the triple is not an automorphism")
        }
        _ => inj,
    };
    out.push(fs_op);
    out.push(positive(le(m, OP, IS), pair_to_iseq, all_of(OP, &ground)?, &spec, &none, b)?);

    // Pairs into finite sets: the image of <x,y> over the triple and a few fresh atoms.
    let mut window: Vec<Atom> = xyz.xyz.to_vec();
    window.extend(ground.iter().filter(|a| !triple.contains(*a)).take(4).cloned());
    let input = Hf::atom_pair(&x, &y);
    let sets = all_of(FS, &window)?;
    let tables = sets.into_iter().map(|s| vec![(input.clone(), s)]);
    out.push(family(not_le(m, OP, FS, Method::SupportContradiction), tables, &perms, Vec::new(), |_| false, b));

    // Sequences of length 2 or 3 over the triple into pairs.
    let (seqs, pairs) = xyz_sequence_counts(&xyz.xyz);
    let core = vec![Witness::SequenceCore { sequences: seqs as u64, pairs: pairs as u64 }];
    let inputs: Vec<Hf> = enum_kind(IS, &xyz.xyz, None)?
        .filter(|s| matches!(s.as_seq().map(<[Hf]>::len), Some(2 | 3)))
        .collect();
    let images = all_of(OP, &window)?;
    let tables = inputs
        .iter()
        .flat_map(|s| images.iter().map(move |p| vec![(s.clone(), p.clone())]));
    let distinct_on_triple = |t: &[(Hf, Hf)]| {
        t[0].1.as_atom_pair().is_some_and(|(a, b)| a != b && triple.contains(&a) && triple.contains(&b))
    };
    out.push(family(not_le(m, IS, OP, Method::SupportContradiction), tables, &perms, core, distinct_on_triple, b));

    // Finite sets into 2-sets: u against the pairs of the copy tower.
    let tower = copy_tower_n(&Model::empty(Class::N), 1)?;
    let tower_model = tower.to_model(1 << 16)?;
    let auto = tower.transposing_automorphism()?;
    let audit = auto.audit();
    let mut map = std::collections::BTreeMap::new();
    for a in &tower_model.atoms {
        let img = auto.apply(a).ok_or_else(|| VerifyError::Bounds(format!("tower automorphism undefined on {a}")))?;
        map.insert(a.clone(), img);
    }
    let pi = FinitePerm::from_map(map)?;
    let u = Hf::atom_set(&tower.u());
    let tables = tower_model
        .h()
        .iter()
        .filter_map(|(_, p)| p.as_atom_pair().filter(|(a, b)| a != b))
        .map(|(a, b)| vec![(u.clone(), Hf::atom_set([&a, &b]))]);
    let core = match audit.violation {
        None => vec![Witness::Audit { entries: audit.checked, permutations: 1 }],
        Some(_) => Vec::new(),
    };
    out.push(family(
        not_le(m, FS, UP, Method::SupportContradiction),
        tables,
        &[Permutation::Finite(pi)],
        core,
        |_| false,
        b,
    ));
    Ok(out)
}

fn seed(class: Class, n: u8) -> Model {
    Model::with_atoms(class, (0..n).map(|r| Atom::fresh(0, Reason::Seed, 0, r)))
}

/// Automorphisms of a one-round plain extension: lifted seed transpositions,
/// `f`-block swaps and transpositions inside `h`-blocks.
fn plain_automorphisms(ext: &PlainExtension) -> Result<Vec<Permutation>, VerifyError> {
    let seed: Vec<Atom> = ext.seed.atom_list();
    let mut out = Vec::new();
    for w in seed.windows(2) {
        out.push(ext.lift(&FinitePerm::transposition(&w[0], &w[1]), 0)?);
    }
    for block in ext.blocks.iter().filter(|bl| bl.stage == 0) {
        match block.map {
            MapTag::F => out.push(ext.f_block_swap(&block.input)?),
            MapTag::H => {
                for w in block.atoms.windows(2) {
                    out.push(ext.lift(&FinitePerm::transposition(&w[0], &w[1]), 1)?);
                }
            }
            MapTag::G => {}
        }
    }
    if let Some(bad) = out.iter().find(|p| !ext.model.is_automorphism(p)) {
        return Err(VerifyError::Bounds(format!("not an automorphism: {}", Permutation::Finite(bad.clone()))));
    }
    Ok(finite(out))
}

fn z_reports(b: &Bounds) -> Result<Vec<VerifyReport>, VerifyError> {
    let m = ModelRef::Z;
    let three = plain_extension_z(&seed(Class::Z, 3), 1)?;
    let perms3 = plain_automorphisms(&three)?;

    let mut out = Vec::new();
    for tag in Class::Z.tags() {
        let (from, to) = Class::Z.kinds(*tag);
        let table = three.model.map(*tag);
        let c = le(m, from, to);
        let inj = check_injective(c.clone(), table.iter().map(|(x, _)| x.clone()), |x| table.get(x).cloned());
        let mut checks = 0;
        let entries: Vec<(Hf, Hf)> = table.iter().map(|(x, y)| (x.clone(), y.clone())).collect();
        let broken = find_contradiction(&entries, &perms3, &mut checks);
        let audit = VerifyReport::new(
            c.clone(),
            if broken.is_some() { Outcome::Refuted } else { Outcome::Verified },
            Some(match broken {
                Some(w) => Witness::Candidate { table: entries.clone(), reason: Box::new(w) },
                None => Witness::Audit { entries: entries.len() as u128, permutations: perms3.len() as u64 },
            }),
            Metrics { permutations: perms3.len() as u64, checks, ..Metrics::default() },
        );
        out.push(combine(c, vec![inj, audit]));
    }

    let fresh_meets = |x: &Hf, seed: &BTreeSet<Atom>| !over(x, seed);

    let two = plain_extension_z(&seed(Class::Z, 2), 1)?;
    let perms2 = plain_automorphisms(&two)?;
    let seed2 = two.seed.atoms.clone();
    let g2 = two.model.atom_list();
    let input = Hf::atom_set(&seed2);
    let tables: Vec<Vec<(Hf, Hf)>> = all_of(OP, &g2)?
        .into_iter()
        .filter(|p| fresh_meets(p, &seed2))
        .map(|p| vec![(input.clone(), p)])
        .collect();
    out.push(family(not_le(m, UP, OP, Method::SupportContradiction), tables, &perms2, Vec::new(), |_| false, b));

    let seed3 = three.seed.atoms.clone();
    let g3 = three.model.atom_list();
    let s3: Vec<Atom> = three.seed.atom_list();
    let input = Hf::atom_seq(&s3);
    let tables: Vec<Vec<(Hf, Hf)>> = all_of(UP, &g3)?
        .into_iter()
        .filter(|p| fresh_meets(p, &seed3))
        .map(|p| vec![(input.clone(), p)])
        .collect();
    out.push(family(not_le(m, IS, UP, Method::SupportContradiction), tables, &perms3, Vec::new(), |_| false, b));

    let input = Hf::atom_set(&seed3);
    let tables: Vec<Vec<(Hf, Hf)>> = short_iseqs(&g3, b.maxlen)
        .into_iter()
        .filter(|s| fresh_meets(s, &seed3))
        .map(|s| vec![(input.clone(), s)])
        .collect();
    out.push(family(not_le(m, FS, IS, Method::SupportContradiction), tables, &perms3, Vec::new(), |_| false, b));
    Ok(out)
}

fn empty_reports() -> Vec<VerifyReport> {
    let kinds = [UP, OP, FS, IS];
    let mut out = Vec::new();
    for a in kinds {
        for c in kinds.into_iter().filter(|c| *c != a) {
            out.push(cited(le(ModelRef::Empty, a, c), "empty model"));
        }
    }
    out
}
