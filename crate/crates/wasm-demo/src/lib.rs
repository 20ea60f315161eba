//! Browser bindings for a handful of choiceless-lab operations.
//!
//! Every export returns a JSON string. Failures come back as
//! `{"error": "..."}` so the page never has to catch exceptions.

use std::collections::BTreeSet;

use choiceless_lab::classic::rc::{rc_f3, rc_f3_decode, rc_f3_trace};
use choiceless_lab::universe::{count_kind, Atom, KindTag, Pos, RcAtom};
use choiceless_lab::witnesses::{extract_from_fin_to_square, replay_fin_to_square, InjectionOracle};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const MAX_K: u64 = 30;
const MAX_ATOMS: usize = 96;

fn render(result: Result<Value, String>) -> String {
    match result {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn parse_atom(token: &str) -> Result<RcAtom, String> {
    let mut chars = token.chars();
    let pos = match chars.next() {
        Some('a') => Pos::A,
        Some('b') => Pos::B,
        Some('c') => Pos::C,
        _ => return Err(format!("`{token}`: expected a, b or c followed by a triple index")),
    };
    let triple = chars.as_str().parse::<u64>().map_err(|_| format!("`{token}`: bad triple index"))?;
    Ok(RcAtom { triple, pos })
}

fn parse_atoms(text: &str) -> Result<Vec<RcAtom>, String> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(parse_atom)
        .collect()
}

fn names<'a>(atoms: impl IntoIterator<Item = &'a RcAtom>) -> Vec<String> {
    atoms.into_iter().map(ToString::to_string).collect()
}

/// Sizes of the four chain kinds for each `k` in `from..=to`.
#[wasm_bindgen]
pub fn count_table(from: u32, to: u32) -> String {
    render(count_rows(u64::from(from), u64::from(to)))
}

fn count_rows(from: u64, to: u64) -> Result<Value, String> {
    if from > to {
        return Err("`from` must not exceed `to`".into());
    }
    if to > MAX_K {
        return Err(format!("k is capped at {MAX_K} here"));
    }
    let mut rows = Vec::new();
    for k in from..=to {
        let counts: Vec<u128> = KindTag::CHAIN
            .iter()
            .map(|kind| count_kind(*kind, k, None))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let strict = counts.windows(2).all(|w| w[0] < w[1]);
        let cells: Vec<Value> = KindTag::CHAIN
            .iter()
            .zip(&counts)
            .map(|(kind, c)| json!({ "kind": kind, "count": c.to_string() }))
            .collect();
        rows.push(json!({ "k": k, "counts": cells, "strict_chain": strict }));
    }
    Ok(json!({ "rows": rows }))
}

/// Encodes a repetition-free sequence of triple atoms such as `"a0 c0 b1"`.
#[wasm_bindgen]
pub fn f3_encode(sequence: &str) -> String {
    render(encode(sequence))
}

fn encode(sequence: &str) -> Result<Value, String> {
    let s = parse_atoms(sequence)?;
    let image = rc_f3(&s).map_err(|e| e.to_string())?;
    let trace = if s.is_empty() {
        Value::Null
    } else {
        let t = rc_f3_trace(&s).map_err(|e| e.to_string())?;
        json!({
            "triples": t.triples,
            "exponents": t.exponents,
            "prime_indices": t.prime_indices,
            "representatives": names(&t.representatives),
            "code": t.code,
        })
    };
    Ok(json!({ "sequence": names(&s), "image": names(&image), "trace": trace }))
}

/// Recovers the sequence behind a finite set, or reports that none exists.
#[wasm_bindgen]
pub fn f3_decode(set: &str) -> String {
    render(decode(set))
}

fn decode(set: &str) -> Result<Value, String> {
    let f: BTreeSet<RcAtom> = parse_atoms(set)?.into_iter().collect();
    Ok(match rc_f3_decode(&f) {
        Some(s) => json!({ "set": names(&f), "sequence": names(&s) }),
        None => json!({ "set": names(&f), "sequence": Value::Null }),
    })
}

/// Pulls `n` distinct atoms out of a seeded random injection `fin -> A^2`.
#[wasm_bindgen]
pub fn lemma_n(n: u32, seed: u32) -> String {
    render(extract(n as usize, u64::from(seed)))
}

fn extract(n: usize, seed: u64) -> Result<Value, String> {
    if !(5..=MAX_ATOMS).contains(&n) {
        return Err(format!("n must lie in 5..={MAX_ATOMS}"));
    }
    let mut h = InjectionOracle::random(KindTag::FinSubsets, KindTag::OrderedPairs, seed);
    let base: Vec<Atom> = (0..5).map(Atom::base).collect();
    let (atoms, trace) = extract_from_fin_to_square(&mut h, &base, n).map_err(|e| e.to_string())?;
    let replayed = replay_fin_to_square(&h, &base, n, &trace).map_err(|e| e.to_string())?;
    let distinct = atoms.iter().collect::<BTreeSet<_>>().len() == atoms.len();
    let rounds: Vec<Value> = trace
        .rounds
        .iter()
        .map(|r| {
            json!({
                "known": r.known.len(),
                "probe": r.probe.to_string(),
                "answer": r.answer.to_string(),
                "found": r.found.as_ref().map(ToString::to_string),
                "scanned": r.scanned,
            })
        })
        .collect();
    Ok(json!({
        "atoms": atoms.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "distinct": distinct,
        "replayed": replayed,
        "queries": h.queries().len(),
        "rounds": rounds,
    }))
}
