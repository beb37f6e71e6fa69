//! Register machines, staged jump oracles and the reals they define.

mod machine;
mod reals;
mod staged;

use alloc::string::String;

pub use machine::{CompiledProgram, Instr, Program, RunOutcome};
pub use reals::{
    binary_sum, specker, sum_real, sum_real_with_budget, witness_real, OracleReal, SetDescriptor,
    StageSequence, SumReal, DECIDER_SPOT_CHECK, DECIDER_STEP_BUDGET,
};
pub use staged::{diagonal_halting_times, jump_stage_set, StagedOracle, MAX_LEVEL};

pub use crate::creal::{ackermann_real, ACKERMANN_MAX_CUTOFF};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("level 0 is the empty oracle, not a jump")]
    LevelZero,
    #[error("jump level {0} is above the supported maximum")]
    LevelTooHigh(u32),
    #[error("membership query for k = {k} did not halt within {budget} steps")]
    DecisionTimeout { k: u64, budget: u64 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Runs `p` on `input` for at most `steps` steps against `oracle`.
pub fn run_bounded(p: &Program, input: u64, steps: u64, oracle: &StagedOracle) -> RunOutcome {
    p.run_bounded(input, steps, oracle)
}
