//! Atoms, hereditarily finite objects and the kind counters/enumerators.

mod atom;
mod enumerate;
mod hf;
mod kind;

pub use atom::{Atom, FreshAtom, ParseRationalError, Pos, RcAtom, Rational, Reason, RnAtom};
pub use enumerate::{
    check_ground, count_kind, digits_code, enum_kind, mask_positions, seq_code, seq_decode,
    AllMasks, MasksOfSize, PositionSeqs, MAX_GROUND,
};
pub use hf::Hf;
pub use kind::{KindTag, ParseKindError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum UniverseError {
    #[error("kind `seq` needs a maximum length")]
    MissingMaxlen,
    #[error("a maximum length only applies to `seq`, not `{0}`")]
    UnexpectedMaxlen(KindTag),
    #[error("ground list repeats atom {0}")]
    DuplicateGround(Atom),
    #[error("ground of {0} atoms exceeds the enumerator limit")]
    GroundTooLarge(usize),
    #[error("count of {kind} over {k} atoms overflows 128 bits")]
    Overflow { kind: KindTag, k: u64 },
    #[error("sequence code overflows 128 bits")]
    CodeOverflow,
}
