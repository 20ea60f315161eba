use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};

use super::{
    envelope, Cli, Command, CountArgs, GroupKind, ModelArgs, ModelKind, OrbitArgs, VerifyArgs, VerifyModel,
    WitnessArgs, WitnessKind, EXIT_INCONCLUSIVE, EXIT_OK, EXIT_REFUTED,
};
use crate::classic::{rc_universe, rn_build, rn_size};
use crate::fraisse::{limit_stage, plain_extension_z, Class, Model};
use crate::symmetry::{orbit, GroupSpec};
use crate::universe::{count_kind, Atom, Hf, KindTag, PositionSeqs, Rational, Reason};
use crate::verify::{diagram_report, Bounds, ModelRef, Outcome};
use crate::witnesses::{
    extract_from_fin_to_square, extract_from_pair_maps, fiber_of, finite_to_one_seq_to_fin, replay_fin_to_square,
    AtomEmbedding, InjectionOracle, LayerConfig,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CommandError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
}

fn failed(e: impl std::fmt::Display) -> CommandError {
    CommandError::Failed(e.to_string())
}

fn usage(msg: impl Into<String>) -> CommandError {
    CommandError::Usage(msg.into())
}

pub struct Output {
    pub code: i32,
    pub document: Value,
}

pub(super) fn execute(cli: &Cli) -> Result<Output, CommandError> {
    match &cli.command {
        Command::Count(a) => count(cli, a),
        Command::Witness(a) => witness(cli, a),
        Command::ModelBuild(a) => model_build(cli, a),
        Command::Verify(a) => verify(cli, a),
        Command::Orbit(a) => orbit_cmd(cli, a),
    }
}

fn ok(cli: &Cli, result: Value) -> Result<Output, CommandError> {
    Ok(Output { code: EXIT_OK, document: envelope(cli, result) })
}

fn parse_kinds(spec: &str) -> Result<Vec<KindTag>, CommandError> {
    if spec == "all" {
        return Ok(KindTag::CHAIN.to_vec());
    }
    spec.split(',').map(|s| s.trim().parse::<KindTag>().map_err(|e| usage(e.to_string()))).collect()
}

fn count(cli: &Cli, a: &CountArgs) -> Result<Output, CommandError> {
    let kinds = parse_kinds(&a.kinds)?;
    let to = a.to.unwrap_or(a.k);
    if to < a.k {
        return Err(usage("--to must not be below --k"));
    }
    let chain = kinds.iter().filter(|k| KindTag::CHAIN.contains(k)).count() == 4;
    let mut rows = Vec::new();
    let mut all_hold = true;
    for k in a.k..=to {
        let mut counts = Vec::new();
        for kind in &kinds {
            let maxlen = (*kind == KindTag::Seq).then_some(a.maxlen);
            let c = count_kind(*kind, k, maxlen).map_err(failed)?;
            counts.push(json!({ "kind": kind, "count": c.to_string() }));
        }
        let mut row = json!({ "k": k, "counts": counts });
        if chain {
            let v: Vec<u128> = KindTag::CHAIN
                .iter()
                .map(|kind| count_kind(*kind, k, None))
                .collect::<Result<_, _>>()
                .map_err(failed)?;
            let holds = v.windows(2).all(|w| w[0] < w[1]);
            all_hold &= holds;
            row["strict_chain"] = json!(holds);
        }
        rows.push(row);
    }
    let verdict = match (chain, all_hold) {
        (false, _) => Value::Null,
        (true, true) => json!("strict chain holds"),
        (true, false) => json!("strict chain fails"),
    };
    ok(cli, json!({ "rows": rows, "verdict": verdict }))
}

fn base_atoms(n: u64) -> Vec<Atom> {
    (0..n).map(Atom::base).collect()
}

fn witness(cli: &Cli, a: &WitnessArgs) -> Result<Output, CommandError> {
    match a.kind {
        WitnessKind::LemmaN => {
            if a.n < 5 {
                return Err(usage(format!("--n must be at least 5, got {}", a.n)));
            }
            let mut h = match &a.oracle {
                Some(path) => {
                    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
                    InjectionOracle::from_json(&text).map_err(|e| usage(e.to_string()))?
                }
                None => InjectionOracle::random(KindTag::FinSubsets, KindTag::OrderedPairs, cli.seed),
            };
            let seed = base_atoms(5);
            let (atoms, trace) = extract_from_fin_to_square(&mut h, &seed, a.n).map_err(failed)?;
            let replayed = replay_fin_to_square(&h, &seed, a.n, &trace).map_err(failed)?;
            let distinct = atoms.iter().collect::<BTreeSet<_>>().len() == atoms.len();
            ok(cli, json!({ "atoms": atoms, "distinct": distinct, "replayed": replayed, "trace": trace }))
        }
        WitnessKind::LemmaC => {
            if a.n == 0 {
                return Err(usage("--n must be positive"));
            }
            let mut f = InjectionOracle::random(KindTag::OrderedPairs, KindTag::UnorderedPairs, cli.seed);
            let mut g = InjectionOracle::random(KindTag::FinSubsets, KindTag::InjSeq, cli.seed.wrapping_add(1));
            let (atoms, trace) =
                extract_from_pair_maps(&mut f, &mut g, &Atom::base(0), LayerConfig::atoms(a.n)).map_err(failed)?;
            let distinct = atoms.iter().collect::<BTreeSet<_>>().len() == atoms.len();
            ok(cli, json!({ "atoms": atoms, "distinct": distinct, "trace": trace }))
        }
        WitnessKind::FinToOne => {
            if a.k == 0 || a.k > 12 || a.maxlen > 4 {
                return Err(usage("fin-to-one needs 1 <= --k <= 12 and --maxlen <= 4"));
            }
            let ground = base_atoms(a.k);
            let embed = AtomEmbedding::new(ground.clone()).map_err(failed)?;
            let mut fibers: BTreeMap<BTreeSet<Atom>, u64> = BTreeMap::new();
            let mut sequences = 0u64;
            for s in PositionSeqs::new(ground.len(), a.maxlen as usize, false) {
                let s: Vec<Atom> = s.into_iter().map(|i| ground[i].clone()).collect();
                let image = finite_to_one_seq_to_fin(&embed, &s).map_err(failed)?;
                *fibers.entry(image).or_default() += 1;
                sequences += 1;
            }
            let mut matches = true;
            let mut largest = 0usize;
            for (image, n) in &fibers {
                let full = fiber_of(&embed, image);
                largest = largest.max(full.len());
                let inside = full.iter().filter(|s| s.len() <= a.maxlen as usize && s.iter().all(|x| ground.contains(x))).count();
                matches &= inside as u64 == *n;
            }
            let table: Vec<Value> = fibers
                .iter()
                .map(|(image, n)| json!({ "image": Hf::atom_set(image).to_json(), "in_window": n }))
                .collect();
            ok(
                cli,
                json!({
                    "sequences": sequences,
                    "images": fibers.len(),
                    "largest_fiber": largest,
                    "fibers_match": matches,
                    "fibers": table,
                }),
            )
        }
    }
}

fn model_build(cli: &Cli, a: &ModelArgs) -> Result<Output, CommandError> {
    let result = match a.model {
        ModelKind::N | ModelKind::Z => {
            let class = if a.model == ModelKind::N { Class::N } else { Class::Z };
            let limit = limit_stage(class, a.size_bound, a.stages, None).map_err(failed)?;
            let mut v = json!({
                "class": class,
                "size_bound": limit.size_bound,
                "atoms": limit.model.atoms.len(),
                "entries": limit.model.entry_count(),
                "stages": limit.stages,
                "truncated": limit.truncated,
            });
            if class == Class::Z {
                let seed = Model::with_atoms(Class::Z, [Atom::fresh(0, Reason::Seed, 0, 0)]);
                let plain = plain_extension_z(&seed, a.stages.min(2)).map_err(failed)?;
                v["plain_extension_sizes"] = json!(plain.sizes);
            }
            if a.full {
                v["model"] = serde_json::to_value(&limit.model).map_err(failed)?;
            }
            v
        }
        ModelKind::Rc => {
            let atoms = rc_universe(a.triples);
            let mut v = json!({ "triples": a.triples, "atoms": atoms.len() });
            if a.full {
                v["universe"] = json!(atoms);
            }
            v
        }
        ModelKind::Rn => {
            let depth = a.stages as u32;
            let base = u32::try_from(a.k).map_err(|_| usage("--k too large"))?;
            let size = rn_size(base, depth).map(|s| s.to_string());
            let atoms = rn_build(base, depth).map_err(failed)?;
            let mut v = json!({ "base": base, "depth": depth, "atoms": atoms.len(), "predicted": size });
            if a.full {
                v["universe"] = json!(atoms.into_iter().map(Atom::Rn).collect::<Vec<_>>());
            }
            v
        }
        ModelKind::Rz => {
            let points: Vec<Atom> = (1..=a.points as i64).map(|n| Atom::Rz(Rational::integer(n))).collect();
            json!({ "points": points })
        }
    };
    ok(cli, result)
}

fn verify(cli: &Cli, a: &VerifyArgs) -> Result<Output, CommandError> {
    if a.triples == 0 || a.k == 0 || a.stages == 0 || a.maxlen == 0 {
        return Err(usage("bounds must be positive"));
    }
    let model = match a.model {
        VerifyModel::N => ModelRef::N,
        VerifyModel::Z => ModelRef::Z,
        VerifyModel::Rn => ModelRef::Rn,
        VerifyModel::Rc => ModelRef::Rc,
        VerifyModel::Rz => ModelRef::Rz,
        VerifyModel::Empty => ModelRef::Empty,
    };
    let bounds = Bounds {
        triples: a.triples,
        k: a.k,
        extra: a.extra,
        points: a.points,
        stages: a.stages,
        maxlen: a.maxlen,
        samples: a.samples,
        seed: cli.seed,
        ..Bounds::default()
    };
    let reports = diagram_report(model, &bounds).map_err(|e| match e {
        crate::verify::VerifyError::Bounds(m) => usage(m),
        other => failed(other),
    })?;
    let code = if reports.iter().any(|r| r.outcome == Outcome::Refuted) {
        EXIT_REFUTED
    } else if reports.iter().any(|r| r.outcome == Outcome::InconclusiveTruncation) {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    };
    let document = serde_json::to_value(&reports).map_err(failed)?;
    Ok(Output { code, document })
}

fn orbit_cmd(cli: &Cli, a: &OrbitArgs) -> Result<Output, CommandError> {
    let object: Value = serde_json::from_str(&a.object).map_err(|e| usage(format!("--object: {e}")))?;
    let object = Hf::from_json(&object).map_err(|e| usage(format!("--object: {e}")))?;
    let fixed: Vec<Atom> = serde_json::from_str(&a.fix).map_err(|e| usage(format!("--fix: {e}")))?;
    let spec = match a.model {
        GroupKind::Free => GroupSpec::free(base_atoms(a.k)),
        GroupKind::Rc => GroupSpec::RcTriples { triples: a.triples },
        GroupKind::Rn => GroupSpec::RnTower {
            base: u32::try_from(a.k).map_err(|_| usage("--k too large"))?,
            depth: a.stages,
        },
        GroupKind::Rz => GroupSpec::RzOrdered { points: (1..=a.k as i64).map(Rational::integer).collect() },
    };
    let fixed: BTreeSet<Atom> = fixed.into_iter().collect();
    let members = orbit(&object, &spec, &fixed, a.size_bound).map_err(failed)?;
    let list: Vec<Value> = members.iter().map(Hf::to_json).collect();
    ok(cli, json!({ "object": object.to_json(), "size": members.len(), "orbit": list }))
}
