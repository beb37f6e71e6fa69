//! Toy formal systems, chains of them and their Cantor-space encoding.
//!
//! A toy system defines a real identifier only if a grant token asserts it
//! or a closure rule derives it. Definable sets are truncated at a
//! description-size budget, which keeps every comparison exact and finite.

mod cantor;
mod chain;
mod ids;
mod system;

pub use cantor::{decode_bits_to_set, encode_set_to_bits, ChainCode, Decoded};
pub use chain::{
    build_chain_condition_a, build_chain_condition_c, counterexample_noncollapse,
    cumulative_set, global_cumulative, global_level, grant_stream, is_admissible_prefix,
    level_set, noncollapse_chains, report_for, verify_strict_growth, Chain, Failure,
    NoncollapseReport, Selector, Verdict, DEFAULT_BUDGET,
};
pub use ids::RealId;
pub use system::{
    definable_set, rationals_up_to, token_by_name, token_name, token_real, Rules, ToySystem, EXP,
    HERON, LEIBNIZ, PHI, PSI,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChainError {
    #[error("condition-A chains support at most 3 levels, got {0}")]
    TooManyLevels(u32),
    #[error("enumerator not strictly increasing at position {position}: {value} after {previous}")]
    NotIncreasing {
        position: u64,
        value: u64,
        previous: u64,
    },
    #[error("bit string has a character other than 0 or 1 at offset {0}")]
    BadBit(usize),
}
