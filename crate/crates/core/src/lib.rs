//! Stratified definability at desk scale.
//!
//! `stratum-core` is `no_std` (it needs `alloc`). It provides:
//!
//! * [`creal`]: exact constructive reals, each a rational Cauchy sequence
//!   paired with an explicit convergence modulus;
//! * [`oracle_tower`]: a small register machine, stage-bounded halting-set
//!   approximations and the limit-computable reals built from them;
//! * [`chains`]: toy formal systems with decidable grant/closure semantics,
//!   chains of such systems and their Cantor-space encoding;
//! * [`omega`]: a prefix-free machine and its monotone halting-probability
//!   approximants;
//! * [`dcomp`]: the level ladder and the budgeted definability-compression
//!   search.
//!
//! File formats and the command line live in the `stratum` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod chains;
pub mod creal;
pub mod dcomp;
pub mod omega;
pub mod oracle_tower;
pub mod pairing;
pub mod rational;

pub use creal::{CReal, Comparison};
pub use oracle_tower::{OracleReal, Program, StagedOracle};
pub use rational::Rational;
