//! Fractal degree over a fixed level ladder, the budgeted definability
//! compression search, and catalog classification.
//!
//! Level 0 is the rationals of bounded height, level 1 is the level-1
//! expression grammar in [`grammar`], and level `k >= 2` is sums over sets
//! decided relative to the stage-256 jump oracle at `k - 1`.

mod catalog;
pub mod grammar;
mod search;
#[cfg(test)]
mod tests;

pub use catalog::{
    catalog, delta_membership, layer_table, lookup, CatalogEntry, Constructor, LayerRow, LayerTable,
    Membership, EXCLUDED,
};
pub use grammar::{replay, Expr, Replayed, Witness};
pub use search::{dcomp, fractal_degree, Ladder, Target};

use alloc::string::String;
use core::fmt;

use crate::creal::CRealError;
use crate::oracle_tower::OracleError;

/// Default number of enumerated witnesses per level.
pub const DEFAULT_BUDGET: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Exact,
    UpperBound,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Exact => "exact",
            Status::UpperBound => "upper_bound",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DCompResult {
    pub level: u32,
    pub witness: String,
    pub status: Status,
    pub search_budget_used: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DCompError {
    #[error("unknown id {0:?}")]
    UnknownId(String),
    #[error("{0} is excluded: {1}")]
    Excluded(String, &'static str),
    #[error("no witness found within budget ({budget_used} candidates examined)")]
    Unresolved { budget_used: u64 },
    #[error("malformed witness {0:?}")]
    BadWitness(String),
    #[error(transparent)]
    Real(#[from] CRealError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}
