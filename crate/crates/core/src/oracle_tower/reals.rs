//! Limit-computable reals built from stage sets.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::staged::{diagonal_halting_times, jump_stage_set};
use super::{OracleError, Program, RunOutcome, StagedOracle};
use crate::creal::{CReal, CauchySequence};
use crate::rational::Rational;

/// Default step budget for membership queries of decidable sets.
pub const DECIDER_STEP_BUDGET: u64 = 1_000_000;

/// How many leading memberships are checked when a decidable-mode sum is
/// built.
pub const DECIDER_SPOT_CHECK: u64 = 64;

/// A sequence of stage approximations.
pub trait StageSequence: Send + Sync {
    fn stage_approximant(&self, s: u64) -> Rational;

    /// Stages `0..=s_max`.
    fn trace(&self, s_max: u64) -> Vec<Rational> {
        (0..=s_max).map(|s| self.stage_approximant(s)).collect()
    }
}

/// A real given only as the limit of its stage approximants; no modulus is
/// available at the base level.
#[derive(Clone)]
pub struct OracleReal {
    seq: Arc<dyn StageSequence>,
    level: u32,
    description: String,
}

impl fmt::Debug for OracleReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OracleReal")
            .field("level", &self.level)
            .field("description", &self.description)
            .finish()
    }
}

impl OracleReal {
    pub fn new<S: StageSequence + 'static>(seq: S, level: u32, description: impl Into<String>) -> Self {
        OracleReal {
            seq: Arc::new(seq),
            level,
            description: description.into(),
        }
    }

    pub fn stage_approximant(&self, s: u64) -> Rational {
        self.seq.stage_approximant(s)
    }

    pub fn trace(&self, s_max: u64) -> Vec<Rational> {
        self.seq.trace(s_max)
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn description(&self) -> &str {
        &self.description
    }
}

/// `sum_{k in set} 2^{-(k+1)}`
pub fn binary_sum(set: impl IntoIterator<Item = u64>) -> Rational {
    let mut bits: Vec<u64> = set.into_iter().collect();
    bits.sort_unstable();
    bits.dedup();
    let Some(&top) = bits.last() else {
        return Rational::zero();
    };
    let mut num = BigInt::zero();
    for k in bits {
        num.set_bit(top - k, true);
    }
    Rational::new(num, BigInt::one() << (top + 1))
}

struct JumpWitness(u32);

impl StageSequence for JumpWitness {
    fn stage_approximant(&self, s: u64) -> Rational {
        binary_sum(jump_stage_set(self.0, s).expect("level checked at construction"))
    }
}

/// Stage sums of the `n`-th jump approximation.
pub fn witness_real(n: u32) -> Result<OracleReal, OracleError> {
    jump_stage_set(n, 0)?;
    Ok(OracleReal::new(
        JumpWitness(n),
        n,
        format!("witness_real_{n}"),
    ))
}

/// Diagonal halting set read off halting times: `k` is counted at stage `s`
/// when `k < s` and program `k` on input `k` halts within `s` steps.
struct Specker;

impl Specker {
    fn from_times(times: &[Option<u64>], s: u64) -> Rational {
        binary_sum(
            times
                .iter()
                .enumerate()
                .take(s as usize)
                .filter(|(_, t)| t.is_some_and(|t| t <= s))
                .map(|(k, _)| k as u64),
        )
    }
}

impl StageSequence for Specker {
    fn stage_approximant(&self, s: u64) -> Rational {
        Self::from_times(&diagonal_halting_times(s, s), s)
    }

    fn trace(&self, s_max: u64) -> Vec<Rational> {
        let times = diagonal_halting_times(s_max, s_max);
        (0..=s_max).map(|s| Self::from_times(&times, s)).collect()
    }
}

/// A computable, monotone, bounded sequence whose limit is the level-1
/// witness real.
pub fn specker() -> OracleReal {
    OracleReal::new(Specker, 1, "specker")
}

/// A set of naturals given by a program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetDescriptor {
    /// Members are the inputs on which the program outputs nonzero; the
    /// program must halt on every input.
    Decidable(Program),
    /// Members are the inputs on which the program halts.
    Enumerable(Program),
    /// The diagonal halting set `{ k : program k halts on input k }`.
    Halting,
}

/// Result of [`sum_real`]: a constructive real for decidable sets, a limit
/// real otherwise.
#[derive(Debug, Clone)]
pub enum SumReal {
    Constructive(CReal),
    Limit(OracleReal),
}

struct DecidableSum {
    decider: super::machine::CompiledProgram,
    budget: u64,
}

impl DecidableSum {
    fn member(&self, k: u64) -> Result<bool, OracleError> {
        match self.decider.run(k, self.budget, &StagedOracle::empty()) {
            RunOutcome::Halted(v) => Ok(v != 0),
            RunOutcome::Timeout => Err(OracleError::DecisionTimeout {
                k,
                budget: self.budget,
            }),
        }
    }
}

impl CauchySequence for DecidableSum {
    fn term(&self, j: u64) -> Rational {
        binary_sum((0..=j).filter(|&k| match self.member(k) {
            Ok(b) => b,
            Err(e) => panic!("{e}"),
        }))
    }
    fn modulus(&self, n: u32) -> u64 {
        n as u64 + 1
    }
}

struct EnumerableSum(super::machine::CompiledProgram);

impl StageSequence for EnumerableSum {
    fn stage_approximant(&self, s: u64) -> Rational {
        let oracle = StagedOracle::empty();
        binary_sum((0..s).filter(|&k| self.0.halting_time(k, s, &oracle).is_some()))
    }
}

/// `sum_{k in X} 2^{-(k+1)}` with the default step budget.
/// Index bits roughly double per instruction, so long programs are named
/// by their text.
const INDEX_LABEL_MAX_LEN: usize = 8;

fn program_label(p: &Program) -> String {
    if p.code.len() <= INDEX_LABEL_MAX_LEN {
        p.index().to_string()
    } else {
        let text = p.to_string();
        text.lines().collect::<Vec<_>>().join("; ")
    }
}

pub fn sum_real(set: &SetDescriptor) -> Result<SumReal, OracleError> {
    sum_real_with_budget(set, DECIDER_STEP_BUDGET)
}

/// As [`sum_real`]. In decidable mode the first [`DECIDER_SPOT_CHECK`]
/// memberships are checked under `budget`; a later timeout during
/// evaluation panics with the offending index.
pub fn sum_real_with_budget(set: &SetDescriptor, budget: u64) -> Result<SumReal, OracleError> {
    match set {
        SetDescriptor::Decidable(p) => {
            let seq = DecidableSum {
                decider: p.compile(),
                budget,
            };
            for k in 0..DECIDER_SPOT_CHECK {
                seq.member(k)?;
            }
            let desc = format!("sum-decidable({})", program_label(p));
            Ok(SumReal::Constructive(CReal::new(seq, 1, desc)))
        }
        SetDescriptor::Enumerable(p) => {
            let desc = format!("sum-enumerable({})", program_label(p));
            Ok(SumReal::Limit(OracleReal::new(EnumerableSum(p.compile()), 1, desc)))
        }
        SetDescriptor::Halting => {
            let seq = JumpWitness(1);
            Ok(SumReal::Limit(OracleReal::new(seq, 1, "sum-halting")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::creal::{cmp_at, to_decimal, Comparison};
    use crate::rational::{pow2_neg, ratio, within};
    use proptest::prelude::*;

    fn constructive(set: SetDescriptor) -> CReal {
        match sum_real(&set).unwrap() {
            SumReal::Constructive(r) => r,
            SumReal::Limit(_) => panic!("expected a constructive real"),
        }
    }

    #[test]
    fn binary_sums() {
        assert_eq!(binary_sum([]), Rational::zero());
        assert_eq!(binary_sum([0]), ratio(1, 2));
        assert_eq!(binary_sum([0, 2]), ratio(5, 8));
    }

    #[test]
    fn witness_stage_values() {
        let w = witness_real(1).unwrap();
        assert_eq!(w.stage_approximant(0), Rational::zero());
        let trace = w.trace(256);
        for s in 0..256 {
            assert!(trace[s] <= trace[s + 1]);
            assert!(trace[s] < Rational::one());
        }
        assert!(witness_real(0).is_err());
    }

    #[test]
    fn specker_tracks_witness() {
        let sp = specker();
        let w = witness_real(1).unwrap();
        let trace = sp.trace(512);
        assert_eq!(trace[0], Rational::zero());
        for s in 0..512 {
            assert!(trace[s] <= trace[s + 1]);
        }
        for s in [0u64, 1, 5, 28, 100, 257, 512] {
            let d = &trace[s as usize] - w.stage_approximant(s);
            let bound = pow2_neg(s) * BigInt::from(s);
            assert!(d.clone() * d.clone() <= &bound * &bound, "stage {s}");
            assert_eq!(sp.stage_approximant(s), trace[s as usize]);
        }
    }

    #[test]
    fn decidable_sums() {
        let empty = constructive(SetDescriptor::Decidable(Program::finite_set(&[])));
        for n in [0, 10, 40] {
            assert_eq!(empty.approximant(n), Rational::zero());
        }
        let single = constructive(SetDescriptor::Decidable(Program::finite_set(&[0])));
        assert_eq!(single.approximant(20), ratio(1, 2));
        let evens = constructive(SetDescriptor::Decidable(Program::evens()));
        assert_eq!(to_decimal(&evens, 6), "0.666666");
        for n in 0..40 {
            assert!(within(&evens.approximant(n), &ratio(2, 3), n as u64));
        }
    }

    #[test]
    fn decidable_timeout_names_index() {
        let err = sum_real(&SetDescriptor::Decidable(Program::looping())).unwrap_err();
        assert_eq!(err, OracleError::DecisionTimeout { k: 0, budget: DECIDER_STEP_BUDGET });
    }

    #[test]
    fn enumerable_sums() {
        let SumReal::Limit(r) = sum_real(&SetDescriptor::Enumerable(Program::evens())).unwrap() else {
            panic!()
        };
        // evens decider halts everywhere, so every k < s is enumerated eventually
        assert_eq!(r.stage_approximant(0), Rational::zero());
        assert!(r.stage_approximant(64) > ratio(99, 100));
        let SumReal::Limit(h) = sum_real(&SetDescriptor::Halting).unwrap() else { panic!() };
        assert_eq!(h.stage_approximant(100), witness_real(1).unwrap().stage_approximant(100));
    }

    #[test]
    fn long_deciders_are_labelled_by_text() {
        let short = constructive(SetDescriptor::Decidable(Program::evens()));
        assert!(short.provenance().starts_with("sum-decidable("));
        let members: Vec<u64> = (0..40).step_by(3).collect();
        let long = constructive(SetDescriptor::Decidable(Program::finite_set(&members)));
        assert!(long.provenance().contains("JZDEC 1"), "{}", long.provenance());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn distinct_sets_separate(a in proptest::collection::btree_set(0u64..16, 0..10),
                                  b in proptest::collection::btree_set(0u64..16, 0..10)) {
            prop_assume!(a != b);
            let a: Vec<u64> = a.into_iter().collect();
            let b: Vec<u64> = b.into_iter().collect();
            let ra = constructive(SetDescriptor::Decidable(Program::finite_set(&a)));
            let rb = constructive(SetDescriptor::Decidable(Program::finite_set(&b)));
            prop_assert_ne!(cmp_at(&ra, &rb, 19), Comparison::Indistinguishable(19));
        }
    }
}
