//! Stage-bounded approximations of the halting set and its iterated jumps.

use alloc::vec::Vec;

use super::{OracleError, Program};

/// Largest level accepted by the jump constructions.
pub const MAX_LEVEL: u32 = 8;

/// The stage-`s` approximation of the `level`-th jump. Level 0 is the empty
/// set. Membership is precomputed, so queries are constant time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StagedOracle {
    level: u32,
    stage: u64,
    members: Vec<bool>,
}

impl StagedOracle {
    pub fn empty() -> Self {
        StagedOracle {
            level: 0,
            stage: 0,
            members: Vec::new(),
        }
    }

    pub fn new(level: u32, stage: u64) -> Result<Self, OracleError> {
        if level == 0 {
            return Ok(StagedOracle {
                stage,
                ..Self::empty()
            });
        }
        let set = jump_stage_set(level, stage)?;
        let mut members = alloc::vec![false; stage as usize];
        for k in set {
            members[k as usize] = true;
        }
        Ok(StagedOracle {
            level,
            stage,
            members,
        })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn stage(&self) -> u64 {
        self.stage
    }

    pub fn member(&self, k: u64) -> bool {
        usize::try_from(k)
            .ok()
            .and_then(|k| self.members.get(k))
            .copied()
            .unwrap_or(false)
    }
}

/// `{ k < s : program k halts on input k within s steps }` relative to the
/// stage-`s` oracle one level down. Sorted ascending.
pub fn jump_stage_set(level: u32, stage: u64) -> Result<Vec<u64>, OracleError> {
    if level == 0 {
        return Err(OracleError::LevelZero);
    }
    if level > MAX_LEVEL {
        return Err(OracleError::LevelTooHigh(level));
    }
    let oracle = StagedOracle::new(level - 1, stage)?;
    Ok((0..stage)
        .filter(|&k| {
            Program::from_u64(k)
                .compile()
                .halting_time(k, stage, &oracle)
                .is_some()
        })
        .collect())
}

/// Halting times of programs `k < count` on input `k` relative to the empty
/// oracle, each searched up to `budget` steps.
pub fn diagonal_halting_times(count: u64, budget: u64) -> Vec<Option<u64>> {
    let oracle = StagedOracle::empty();
    (0..count)
        .map(|k| {
            Program::from_u64(k)
                .compile()
                .halting_time(k, budget, &oracle)
                .map(|(t, _)| t)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn level_zero_is_empty() {
        let o = StagedOracle::new(0, 100).unwrap();
        assert!((0..200).all(|k| !o.member(k)));
        assert_eq!(jump_stage_set(0, 10), Err(OracleError::LevelZero));
    }

    #[test]
    fn empty_budget() {
        assert!(jump_stage_set(1, 0).unwrap().is_empty());
    }

    #[test]
    fn three_step_program_enters() {
        // INC 0; INC 0; HALT has index 27 and halts after 3 steps
        let k0 = 27u64;
        for s in (k0 + 1)..(k0 + 80) {
            assert!(jump_stage_set(1, s).unwrap().contains(&k0), "stage {s}");
        }
        assert!(!jump_stage_set(1, k0).unwrap().contains(&k0));
    }

    #[test]
    fn matches_halting_times() {
        let s = 200;
        let times = diagonal_halting_times(s, s);
        let direct: Vec<u64> = (0..s).filter(|&k| times[k as usize].is_some()).collect();
        assert_eq!(jump_stage_set(1, s).unwrap(), direct);
    }

    #[test]
    fn higher_levels_are_deterministic() {
        for level in 2..=3 {
            assert_eq!(jump_stage_set(level, 60), jump_stage_set(level, 60));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn level_one_monotone(s in 0u64..300) {
            let a = jump_stage_set(1, s).unwrap();
            let b = jump_stage_set(1, s + 1).unwrap();
            prop_assert!(a.iter().all(|k| b.contains(k)));
        }
    }
}
