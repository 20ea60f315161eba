//! The three concrete atom constructions: the flip tower, cyclic triples and
//! the ordered rationals.

pub mod rc;
pub mod rn;
pub mod rz;

pub use rc::{
    nth_prime, rc_atom, rc_delta, rc_f1, rc_f1_hf, rc_f2, rc_f2_hf, rc_f3, rc_f3_decode, rc_f3_hf,
    rc_f3_trace, rc_group_element, rc_triple, rc_universe, F3Trace,
};
pub use rn::{max_atoms, rn_build, rn_build_capped, rn_flip_keys, rn_size, FlipKey, RnPerm, MAX_ATOMS_ENV};
pub use rz::{rz_inject, square_to_fin, RzMap};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassicError {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("universe too large: {} atoms exceeds the cap of {cap}", size.map_or("more than 2^128".to_string(), |s| s.to_string()))]
    TooLarge { size: Option<u128>, cap: u128 },
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error("case table gap: {0}")]
    TableGap(String),
}

/// Least `k` with `k! > (e + k)^2`.
pub fn least_factorial_gap(e: u64) -> u64 {
    let mut k = 0u64;
    let mut fact: u128 = 1;
    loop {
        if fact > u128::from(e + k).pow(2) {
            return k;
        }
        k += 1;
        fact *= u128::from(k);
    }
}

/// Least `k` with `2^k > C(e + k, 2)`.
pub fn least_power_gap(e: u64) -> u64 {
    let mut k = 0u64;
    loop {
        let n = u128::from(e + k);
        if (1u128 << k) > n * n.saturating_sub(1) / 2 {
            return k;
        }
        k += 1;
    }
}
