//! One test per acceptance criterion. Each prints a single `PASS`/`FAIL` line.

use std::collections::{BTreeMap, BTreeSet};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use choiceless_lab::classic::{
    least_factorial_gap, least_power_gap, rc_f1_hf, rc_f2_hf, rc_f3, rc_f3_decode, rc_f3_hf, rc_triple,
    rc_universe, rn_build, rz_inject, RzMap,
};
use choiceless_lab::fraisse::{
    amalgamate_n, closure, closure_naive, copy_tower_n, leq_n, leq_z, plain_extension_z, xyz_extension_n,
    xyz_sequence_counts, Class, Model,
};
use choiceless_lab::symmetry::{fix_generators, GroupSpec, Permutation, RzPartial};
use choiceless_lab::universe::{count_kind, enum_kind, Atom, Hf, KindTag, PositionSeqs, Pos, Rational};
use choiceless_lab::verify::{
    check_equivariant, check_injective, diagram_report, Bounds, Direction, EdgeClaim, Method, ModelRef, Outcome,
    Scope, VerifyReport,
};
use choiceless_lab::witnesses::{
    extract_from_fin_to_square, extract_from_pair_maps, fiber_of, finite_to_one_seq_to_fin, replay_fin_to_square,
    AtomEmbedding, InjectionOracle, LayerConfig,
};

const CHAIN_BUDGET: Duration = Duration::from_secs(1);
const RC_BUDGET: Duration = Duration::from_secs(30);
const LEMMA_N_BUDGET: Duration = Duration::from_secs(10);
const ORACLE_RUNS: u64 = 100;
const LEMMA_N_ATOMS: usize = 64;
const LEMMA_C_ATOMS: usize = 32;
const LEMMA_C_ROUNDS: usize = 10;
const RANDOM_SEEDS: u64 = 50;

fn report(n: u32, name: &str, ok: bool, detail: impl AsRef<str>) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    println!("criterion {n:02} {name}: {verdict} ({})", detail.as_ref());
    assert!(ok, "criterion {n} failed: {}", detail.as_ref());
}

fn claim(from: KindTag, to: KindTag) -> EdgeClaim {
    EdgeClaim::new(from, to, Direction::Le, ModelRef::Rc, Method::ExplicitWitness)
}

#[test]
fn criterion_01_finite_chain() {
    let t = Instant::now();
    let row = |k: u64| -> Vec<u128> { KindTag::CHAIN.iter().map(|kind| count_kind(*kind, k, None).unwrap()).collect() };
    let strict = |v: &[u128]| v.windows(2).all(|w| w[0] < w[1]);
    let all_strict = (5..=9).all(|k| strict(&row(k)));
    let five = row(5);
    let enumerated: Vec<u128> = KindTag::CHAIN
        .iter()
        .map(|kind| {
            let ground: Vec<Atom> = (0..5).map(Atom::base).collect();
            enum_kind(*kind, &ground, None).unwrap().count() as u128
        })
        .collect();
    let four = row(4);
    let elapsed = t.elapsed();
    let ok = all_strict
        && five == [10, 25, 32, 326]
        && enumerated == five
        && four[1] == 16
        && four[2] == 16
        && !strict(&four)
        && elapsed < CHAIN_BUDGET;
    report(1, "finite chain", ok, format!("k=5 row {five:?}, k=4 row {four:?}, {elapsed:?}"));
}

#[test]
fn criterion_02_rc_injections() {
    let t = Instant::now();
    let ground = rc_universe(3);
    let spec = GroupSpec::RcTriples { triples: 3 };
    let none = BTreeSet::new();
    let ups: Vec<Hf> = enum_kind(KindTag::UnorderedPairs, &ground, None).unwrap().collect();
    let ops: Vec<Hf> = enum_kind(KindTag::OrderedPairs, &ground, None).unwrap().collect();
    let iss: Vec<Hf> = PositionSeqs::new(ground.len(), 3, true)
        .map(|s| Hf::seq(s.into_iter().map(|i| Hf::Atom(ground[i].clone()))))
        .collect();
    let mut failures = 0;
    let cases: [(KindTag, KindTag, fn(&Hf) -> Option<Hf>, &Vec<Hf>); 3] = [
        (KindTag::UnorderedPairs, KindTag::OrderedPairs, rc_f1_hf, &ups),
        (KindTag::OrderedPairs, KindTag::InjSeq, rc_f2_hf, &ops),
        (KindTag::InjSeq, KindTag::FinSubsets, rc_f3_hf, &iss),
    ];
    for (from, to, f, dom) in cases {
        let inj = check_injective(claim(from, to), dom.iter().cloned(), f);
        let eq = check_equivariant(claim(from, to), f, &spec, &none, dom, 10_000).unwrap();
        failures += usize::from(inj.outcome != Outcome::Verified) + usize::from(eq.outcome != Outcome::Verified);
    }
    let mut round_trips = 0;
    for s in &iss {
        let atoms: Vec<_> = s.as_atom_seq().unwrap().iter().map(|a| *a.as_rc().unwrap()).collect();
        if rc_f3_decode(&rc_f3(&atoms).unwrap()) == Some(atoms) {
            round_trips += 1;
        }
    }
    let elapsed = t.elapsed();
    let ok = failures == 0 && round_trips == iss.len() && elapsed < RC_BUDGET;
    report(
        2,
        "rc injections",
        ok,
        format!("{} + {} + {} inputs, {failures} failures, {round_trips} decodes, {elapsed:?}", ups.len(), ops.len(), iss.len()),
    );
}

#[test]
fn criterion_03_rc_f3_anchors() {
    use choiceless_lab::classic::rc_atom;
    let a0 = rc_atom(0, Pos::A);
    let c0 = rc_atom(0, Pos::C);
    let with = |n: u64| -> BTreeSet<_> { rc_triple(n).into_iter().chain([a0]).collect() };
    let first = rc_f3(&[a0]).unwrap() == with(2);
    let second = rc_f3(&[a0, c0]).unwrap() == with(18);
    report(3, "rc_f3 anchors", first && second, format!("<a0> -> {{a0}}+P2: {first}, <a0,c0> -> {{a0}}+P18: {second}"));
}

#[test]
fn criterion_04_lemma_n_extraction() {
    let t = Instant::now();
    let seed: Vec<Atom> = (0..5).map(Atom::base).collect();
    let mut good = 0;
    for s in 0..ORACLE_RUNS {
        let mut h = InjectionOracle::random(KindTag::FinSubsets, KindTag::OrderedPairs, s);
        let (atoms, trace) = extract_from_fin_to_square(&mut h, &seed, LEMMA_N_ATOMS).unwrap();
        let distinct = atoms.iter().collect::<BTreeSet<_>>().len() == LEMMA_N_ATOMS;
        let replays = replay_fin_to_square(&h, &seed, LEMMA_N_ATOMS, &trace).unwrap();
        if distinct && replays && atoms[..5] == seed[..] {
            good += 1;
        }
    }
    let elapsed = t.elapsed();
    let ok = good == ORACLE_RUNS && elapsed < LEMMA_N_BUDGET;
    report(4, "lemma N extraction", ok, format!("{good}/{ORACLE_RUNS} oracles, {elapsed:?}"));
}

#[test]
fn criterion_05_lemma_c_extraction() {
    let mut good = 0;
    for s in 0..ORACLE_RUNS {
        let mut f = InjectionOracle::random(KindTag::OrderedPairs, KindTag::UnorderedPairs, 2 * s);
        let mut g = InjectionOracle::random(KindTag::FinSubsets, KindTag::InjSeq, 2 * s + 1);
        let config = LayerConfig { atoms: LEMMA_C_ATOMS, min_rounds: LEMMA_C_ROUNDS, max_rounds: 256 };
        let (atoms, trace) = extract_from_pair_maps(&mut f, &mut g, &Atom::base(0), config).unwrap();
        let mut seen = BTreeSet::new();
        let disjoint = trace.rounds.iter().all(|r| !r.layer.is_empty() && r.layer.iter().all(|a| seen.insert(a.clone())));
        let distinct = atoms.iter().collect::<BTreeSet<_>>().len() == LEMMA_C_ATOMS;
        if disjoint && distinct && trace.rounds.len() >= LEMMA_C_ROUNDS {
            good += 1;
        }
    }
    report(5, "lemma C extraction", good == ORACLE_RUNS, format!("{good}/{ORACLE_RUNS} oracle pairs"));
}

#[test]
fn criterion_06_finite_to_one() {
    let ground: Vec<Atom> = (0..6).map(Atom::base).collect();
    let embed = AtomEmbedding::new(ground.clone()).unwrap();
    let seqs: Vec<Vec<Atom>> = PositionSeqs::new(6, 3, false)
        .map(|s| s.into_iter().map(|i| ground[i].clone()).collect())
        .collect();
    let images: Vec<BTreeSet<Atom>> = seqs.iter().map(|s| finite_to_one_seq_to_fin(&embed, s).unwrap()).collect();
    let mut brute: BTreeMap<&BTreeSet<Atom>, BTreeSet<&Vec<Atom>>> = BTreeMap::new();
    for (s, img) in seqs.iter().zip(&images) {
        brute.entry(img).or_default().insert(s);
    }
    let mut mismatches = 0;
    for (img, fiber) in &brute {
        let full = fiber_of(&embed, img);
        let window: BTreeSet<&Vec<Atom>> =
            full.iter().filter(|s| s.len() <= 3 && s.iter().all(|a| ground.contains(a))).collect();
        if window != *fiber || full.iter().any(|s| finite_to_one_seq_to_fin(&embed, s).unwrap() != **img) {
            mismatches += 1;
        }
    }
    report(
        6,
        "finite-to-one map",
        mismatches == 0,
        format!("{} sequences, {} fibers, {mismatches} mismatches", seqs.len(), brute.len()),
    );
}

fn random_seed(class: Class, rng: &mut ChaCha8Rng) -> Model {
    let k = rng.gen_range(1..=3u64);
    let ground: Vec<Atom> = (0..k).map(Atom::base).collect();
    let mut m = Model::with_atoms(class, ground.clone());
    for tag in class.tags() {
        let (dom, cod) = class.kinds(*tag);
        let outputs: Vec<Hf> = enum_kind(cod, &ground, None).unwrap().collect();
        for x in enum_kind(dom, &ground, None).unwrap() {
            if outputs.is_empty() || !rng.gen_bool(0.4) {
                continue;
            }
            let y = outputs[rng.gen_range(0..outputs.len())].clone();
            let _ = m.assign(*tag, x, y);
        }
    }
    m
}

#[test]
fn criterion_07_fraisse_machinery() {
    let single = |i| Model::with_atoms(Class::N, [Atom::base(i)]);
    let amalgam = amalgamate_n(&single(0), &single(1), 1).unwrap().atoms.len();
    let plain = plain_extension_z(&Model::with_atoms(Class::Z, [Atom::base(0)]), 1).unwrap().model.atoms.len();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut leq_ok = 0;
    let mut closure_ok = 0;
    for _ in 0..RANDOM_SEEDS {
        let n = random_seed(Class::N, &mut rng);
        let ext = xyz_extension_n(&n, 1).unwrap();
        let z = random_seed(Class::Z, &mut rng);
        let zext = plain_extension_z(&z, 1).unwrap();
        if leq_n(&n, &ext.model).unwrap().is_none() && leq_z(&z, &zext.model).unwrap().is_none() {
            leq_ok += 1;
        }
        let atoms = zext.model.atom_list();
        let sub: BTreeSet<Atom> = atoms.iter().filter(|_| rng.gen_bool(0.6)).cloned().collect();
        let trunc = zext.model.restrict(&sub);
        let start: BTreeSet<Atom> = sub.iter().filter(|_| rng.gen_bool(0.2)).cloned().collect();
        if closure(&trunc, &start) == closure_naive(&trunc, &start) {
            closure_ok += 1;
        }
    }
    let ok = amalgam == 10 && plain == 9 && leq_ok == RANDOM_SEEDS && closure_ok == RANDOM_SEEDS;
    report(
        7,
        "fraisse machinery",
        ok,
        format!("amalgam {amalgam} atoms, plain {plain} atoms, leq {leq_ok}/{RANDOM_SEEDS}, closure {closure_ok}/{RANDOM_SEEDS}"),
    );
}

#[test]
fn criterion_08_diagram_n_core() {
    let ext = xyz_extension_n(&Model::empty(Class::N), 1).unwrap();
    let counts = xyz_sequence_counts(&ext.xyz);
    let autos = ext.triple_permutations().iter().filter(|p| ext.model.is_automorphism(p)).count();
    let mut tower_ok = true;
    for rounds in 1..=2 {
        let tower = copy_tower_n(&Model::empty(Class::N), rounds).unwrap();
        let auto = tower.transposing_automorphism().unwrap();
        let audit = auto.audit();
        let moves_u = tower.u().iter().all(|a| auto.apply(a) == tower.tau(0, a) && auto.apply(a).as_ref() != Some(a));
        tower_ok &= audit.violation.is_none() && audit.checked == tower.entry_count() && moves_u;
    }
    let ok = counts == (12, 6) && autos == 6 && tower_ok;
    report(8, "diagram N core", ok, format!("counts {counts:?}, {autos}/6 automorphisms, tower rounds 1-2 ok: {tower_ok}"));
}

#[test]
fn criterion_09_flip_tower_and_counting_templates() {
    let atoms = rn_build(2, 1).unwrap();
    let gens = fix_generators(&GroupSpec::RnTower { base: 2, depth: 1 }, &BTreeSet::new()).unwrap().perms;
    let rn: Vec<_> = gens
        .iter()
        .filter_map(|p| match p {
            Permutation::Rn(r) => Some(r.clone()),
            _ => None,
        })
        .collect();
    let id = choiceless_lab::classic::RnPerm::identity();
    let mut laws = rn.len() == gens.len() && atoms.iter().all(|x| id.apply(x) == *x);
    for p in &rn {
        laws &= atoms.iter().all(|x| p.inverse().apply(&p.apply(x)) == *x);
        for q in &rn {
            let pq = p.compose(q);
            laws &= atoms.iter().all(|x| pq.apply(x) == p.apply(&q.apply(x)));
        }
    }
    let factorial = least_factorial_gap(3);
    let power = least_power_gap(3);
    let ok = laws && factorial == 5 && power == 6;
    report(
        9,
        "flip tower and counting templates",
        ok,
        format!("laws on {} atoms: {laws}, least k with k! > (3+k)^2 = {factorial} (want 5), least k with 2^k > C(3+k,2) = {power} (want 6)", atoms.len()),
    );
}

#[test]
fn criterion_10_rational_injections() {
    let points: Vec<Rational> = (1..=9).map(Rational::integer).collect();
    let markers = [points[1], points[3], points[5], points[7]];
    let ground: Vec<Atom> = points.iter().copied().map(Atom::Rz).collect();
    let square = |x: &Hf| rz_inject(RzMap::SquareToFin, x, &markers).ok();
    let inj = check_injective(
        claim(KindTag::OrderedPairs, KindTag::FinSubsets),
        enum_kind(KindTag::OrderedPairs, &ground, None).unwrap(),
        square,
    );

    let six = &ground[..6];
    let mut relabelings = 0;
    let mut violations = 0;
    for mask in choiceless_lab::universe::MasksOfSize::new(9, 6) {
        let targets = choiceless_lab::universe::mask_positions(mask);
        let map: BTreeMap<Rational, Rational> = (0..6).map(|i| (points[i], points[targets[i]])).collect();
        let pi = Permutation::Rz(RzPartial::new(map).unwrap());
        relabelings += 1;
        for (kind, dom) in [(RzMap::UnorderedToSquare, KindTag::UnorderedPairs), (RzMap::FinToIseq, KindTag::FinSubsets)] {
            for x in enum_kind(dom, six, None).unwrap() {
                let fx = rz_inject(kind, &x, &[]).unwrap();
                let lhs = rz_inject(kind, &pi.act(&x).unwrap(), &[]).unwrap();
                if lhs != pi.act(&fx).unwrap() {
                    violations += 1;
                }
            }
        }
    }
    let ok = inj.outcome == Outcome::Verified && relabelings == 84 && violations == 0;
    report(
        10,
        "rational injections",
        ok,
        format!("square_to_fin on 81 pairs: {:?}, {relabelings} relabelings, {violations} violations", inj.outcome),
    );
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_choiceless-lab")).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn negative_reports_stay_in_window(reports: &[VerifyReport]) -> bool {
    reports.iter().all(|r| r.scope == Scope::Window)
}

#[test]
fn criterion_11_verification_engine() {
    let schema: serde_json::Value =
        serde_json::from_str(include_str!("../../../schema/report.schema.json")).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let (code, text) = cli(&["verify", "--model", "rc", "--triples", "4", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    let valid = validator.is_valid(&doc);

    let mut replay_failures = 0;
    let mut refuted = 0;
    let mut windowed = true;
    for model in ModelRef::ALL {
        let reports = diagram_report(model, &Bounds::default()).unwrap();
        windowed &= negative_reports_stay_in_window(&reports);
        let doc = serde_json::to_value(&reports).unwrap();
        windowed &= validator.is_valid(&doc);
        for r in &reports {
            let self_contained = r.witness.as_ref().map(|w| w.replay());
            match r.outcome {
                Outcome::Refuted => {
                    refuted += 1;
                    replay_failures += usize::from(self_contained != Some(true));
                }
                Outcome::Verified => replay_failures += usize::from(self_contained != Some(true)),
                Outcome::InconclusiveTruncation => {}
            }
        }
    }
    // refuted reports from the checks themselves, replayed against their function
    let constant = |_: &Hf| Some(Hf::empty());
    let atoms: Vec<Hf> = (0..4).map(|i| Hf::Atom(Atom::base(i))).collect();
    let r = check_injective(claim(KindTag::UnorderedPairs, KindTag::UnorderedPairs), atoms, constant);
    refuted += 1;
    replay_failures += usize::from(!r.witness.unwrap().replay_with(&constant));

    let ok = code == 0 && valid && replay_failures == 0 && windowed;
    report(
        11,
        "verification engine",
        ok,
        format!("rc exit {code}, schema valid {valid}, {refuted} refuted, {replay_failures} replay failures, window scope {windowed}"),
    );
}

#[test]
fn criterion_12_determinism() {
    let runs: [&[&str]; 5] = [
        &["verify", "--model", "rc", "--triples", "4", "--format", "json", "--seed", "11"],
        &["verify", "--model", "n", "--format", "json"],
        &["witness", "lemma-n", "--n", "16", "--seed", "5", "--format", "json"],
        &["count", "--kinds", "all", "--k", "5", "--to", "7", "--format", "json"],
        &["model-build", "--model", "n", "--size-bound", "3", "--stages", "1", "--format", "json"],
    ];
    let mut identical = 0;
    let mut seeded = 0;
    for args in runs {
        let (c1, a) = cli(args);
        let (c2, b) = cli(args);
        if a == b && c1 == c2 && !a.is_empty() {
            identical += 1;
        }
        let doc: serde_json::Value = serde_json::from_str(&a).unwrap();
        let has_seed = match &doc {
            serde_json::Value::Array(items) => items.iter().all(|r| r["bounds"]["seed"].is_u64()),
            other => other["seed"].is_u64() && other["command"].is_object(),
        };
        seeded += usize::from(has_seed);
    }
    let ok = identical == runs.len() && seeded == runs.len();
    report(12, "determinism", ok, format!("{identical}/{} byte-identical, {seeded} with config and seed", runs.len()));
}
