//! Injectivity and equivariance audits, counting gaps, support-based
//! refutation of candidate functions, and per-diagram edge reports.

mod checks;
mod diagram;

pub use checks::{
    check_equivariant, check_injective, counting_gap, refute_candidate_with_perms,
    refute_candidate_with_support,
};
pub use diagram::{diagram_report, Bounds, ModelRef};

use serde::{Deserialize, Serialize};

use crate::symmetry::Permutation;
use crate::universe::{count_kind, Atom, Hf, KindTag};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Symmetry(#[from] crate::symmetry::SymmetryError),
    #[error(transparent)]
    Universe(#[from] crate::universe::UniverseError),
    #[error(transparent)]
    Classic(#[from] crate::classic::ClassicError),
    #[error(transparent)]
    Fraisse(#[from] crate::fraisse::FraisseError),
    #[error("invalid bounds: {0}")]
    Bounds(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Le,
    NotLe,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ExplicitWitness,
    Counting,
    SupportContradiction,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Verified,
    Refuted,
    InconclusiveTruncation,
}

/// Reports only ever speak about the finite window they were computed on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scope {
    Window,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeClaim {
    pub from: KindTag,
    pub to: KindTag,
    pub direction: Direction,
    pub model: ModelRef,
    pub method: Method,
}

impl EdgeClaim {
    pub fn new(from: KindTag, to: KindTag, direction: Direction, model: ModelRef, method: Method) -> Self {
        EdgeClaim { from, to, direction, model, method }
    }
}

/// Evidence attached to a report. Every variant can be re-checked.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// Two inputs with one image.
    Collision { first: Hf, second: Hf, image: Hf },
    /// An input the function does not cover.
    Undefined { input: Hf },
    /// `f(π x)` differs from `π f(x)`.
    NotEquivariant { permutation: Permutation, input: Hf, moved_input: Hf, expected: Hf, found: Option<Hf> },
    /// `π` fixes the input but moves its image.
    MovingImage { permutation: Permutation, input: Hf, image: Hf, moved_image: Hf },
    /// `π` moves the input but fixes its image, so an equivariant map repeats a value.
    ForcedCollision { permutation: Permutation, input: Hf, moved_input: Hf, image: Hf },
    /// Exact counts with `count_a > count_b`.
    Counting { kind_a: KindTag, kind_b: KindTag, ground_size: u64, extra: u64, count_a: u128, count_b: u128 },
    /// Sequences of length 2 or 3 over a 3-set against repetition-free pairs over it.
    SequenceCore { sequences: u64, pairs: u64 },
    /// Exhaustive run: every input and permutation was checked.
    Checked { inputs: u64, permutations: u64 },
    /// A table audited entry by entry against a list of automorphisms.
    Audit { entries: u128, permutations: u64 },
    /// A candidate table together with the contradiction found for it.
    Candidate { table: Vec<(Hf, Hf)>, reason: Box<Witness> },
    Evidence { parts: Vec<Witness> },
}

fn act(p: &Permutation, x: &Hf) -> Option<Hf> {
    p.act(x).ok()
}

impl Witness {
    /// Re-checks a witness against the function it was found for.
    pub fn replay_with(&self, f: &dyn Fn(&Hf) -> Option<Hf>) -> bool {
        match self {
            Witness::Collision { first, second, image } => {
                first != second && f(first).as_ref() == Some(image) && f(second).as_ref() == Some(image)
            }
            Witness::Undefined { input } => f(input).is_none(),
            Witness::NotEquivariant { permutation, input, moved_input, expected, found } => {
                act(permutation, input).as_ref() == Some(moved_input)
                    && f(input).and_then(|y| act(permutation, &y)).as_ref() == Some(expected)
                    && f(moved_input) == *found
                    && found.as_ref() != Some(expected)
            }
            Witness::MovingImage { permutation, input, image, moved_image } => {
                act(permutation, input).as_ref() == Some(input)
                    && f(input).as_ref() == Some(image)
                    && act(permutation, image).as_ref() == Some(moved_image)
                    && moved_image != image
            }
            Witness::ForcedCollision { permutation, input, moved_input, image } => {
                act(permutation, input).as_ref() == Some(moved_input)
                    && moved_input != input
                    && f(input).as_ref() == Some(image)
                    && act(permutation, image).as_ref() == Some(image)
            }
            _ => self.replay(),
        }
    }

    /// Re-checks self-contained witnesses. Witnesses that need the original
    /// function return false here; use [`Witness::replay_with`].
    pub fn replay(&self) -> bool {
        match self {
            Witness::Counting { kind_a, kind_b, ground_size, extra, count_a, count_b } => {
                count_kind(*kind_a, *ground_size, None).ok() == Some(*count_a)
                    && count_kind(*kind_b, ground_size + extra, None).ok() == Some(*count_b)
                    && count_a > count_b
            }
            Witness::SequenceCore { sequences, pairs } => {
                let xyz = [0, 1, 2].map(Atom::base);
                let (s, p) = crate::fraisse::xyz_sequence_counts(&xyz);
                (s as u64, p as u64) == (*sequences, *pairs) && sequences > pairs
            }
            Witness::Candidate { table, reason } => {
                let f = |x: &Hf| table.iter().find(|(a, _)| a == x).map(|(_, b)| b.clone());
                reason.replay_with(&f)
            }
            Witness::Evidence { parts } => !parts.is_empty() && parts.iter().all(Witness::replay),
            Witness::Checked { .. } | Witness::Audit { .. } => true,
            _ => false,
        }
    }
}

/// Deterministic work counts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metrics {
    pub inputs: u64,
    pub permutations: u64,
    pub candidates: u64,
    pub refuted: u64,
    pub survivors: u64,
    pub checks: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub claim: EdgeClaim,
    pub outcome: Outcome,
    pub scope: Scope,
    pub witness: Option<Witness>,
    pub metrics: Metrics,
    pub bounds: Bounds,
    pub note: Option<String>,
}

impl VerifyReport {
    pub fn new(claim: EdgeClaim, outcome: Outcome, witness: Option<Witness>, metrics: Metrics) -> Self {
        VerifyReport { claim, outcome, scope: Scope::Window, witness, metrics, bounds: Bounds::default(), note: None }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn with_bounds(mut self, bounds: &Bounds) -> Self {
        self.bounds = bounds.clone();
        self
    }
}
