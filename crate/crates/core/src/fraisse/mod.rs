//! Finite stages of the two amalgamation classes and the constructions on them.

mod closure;
mod limit;
mod model;
mod model_n;
mod model_z;
mod tower;

pub use closure::{closure, closure_naive, strong_closure};
pub use limit::{
    find_moving_isomorphism, limit_stage, one_step_patterns, pattern_copy_in, LimitModel,
    MovingIsomorphism, Pattern, StageSummary,
};
pub use model::{
    leq, leq_n, leq_z, Class, Frontier, LeqViolation, MapTag, Model, ModelN, ModelZ,
    PartialInjection, FRONTIER_LIST_LIMIT,
};
pub use model_n::{amalgamate_n, xyz_extension_n, xyz_sequence_counts, XyzExtension};
pub use model_z::{plain_extension_z, Block, PlainExtension};
pub use tower::{copy_tower_n, CopyTower, TowerStage};

use crate::universe::{Atom, Hf};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FraisseError {
    #[error("map {map:?} already sends {input} to {first}, cannot also send it to {second}")]
    Conflict { map: MapTag, input: Hf, first: Hf, second: Hf },
    #[error("map {map:?} would send both {first} and {second} to {image}")]
    NotInjective { map: MapTag, first: Hf, second: Hf, image: Hf },
    #[error("map {map:?} entry {input} -> {output} has the wrong shape")]
    Shape { map: MapTag, input: Hf, output: Hf },
    #[error("map {map:?} mentions atom {atom} outside the model")]
    ForeignAtom { map: MapTag, atom: Atom },
    #[error("operation does not apply to class {0:?}")]
    WrongClass(Class),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("construction would need {needed} atoms, over the cap of {cap}")]
    TooLarge { needed: u128, cap: u128 },
}
