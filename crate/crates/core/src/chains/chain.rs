//! Chains of toy systems, admissibility and the collapse experiments.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;

use super::system::{Rules, ToySystem, PHI, PSI};
use super::{ChainError, RealId};

/// Level-to-system-code map of a chain.
#[derive(Clone)]
pub enum Selector {
    Prefix(Vec<BigUint>),
    Generator(Arc<dyn Fn(u64) -> BigUint + Send + Sync>),
}

#[derive(Clone)]
pub struct Chain {
    pub name: String,
    pub selector: Selector,
}

impl fmt::Debug for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.selector {
            Selector::Prefix(p) => alloc::format!("prefix of {}", p.len()),
            Selector::Generator(_) => String::from("generator"),
        };
        f.debug_struct("Chain")
            .field("name", &self.name)
            .field("selector", &kind)
            .finish()
    }
}

/// Why a chain prefix is not admissible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    /// The selector is not defined at this level.
    Undefined,
    /// The selected system code does not increase.
    SelectorNotIncreasing,
    /// A real definable at the lower level is lost; the least such id.
    Dropped(RealId),
    /// Both levels define the same reals under the budget.
    NoGrowth,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Undefined => f.write_str("selector undefined"),
            Failure::SelectorNotIncreasing => f.write_str("selector not increasing"),
            Failure::Dropped(id) => write!(f, "drops {}", id.text()),
            Failure::NoGrowth => f.write_str("no new definable real"),
        }
    }
}

/// Outcome of [`is_admissible_prefix`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// One witness per step `k -> k+1`.
    Admissible { witnesses: Vec<RealId> },
    /// The step `step -> step + 1` fails; earlier witnesses are kept.
    Fails {
        step: u64,
        failure: Failure,
        witnesses: Vec<RealId>,
    },
}

impl Verdict {
    pub fn is_admissible(&self) -> bool {
        matches!(self, Verdict::Admissible { .. })
    }

    pub fn witnesses(&self) -> &[RealId] {
        match self {
            Verdict::Admissible { witnesses } | Verdict::Fails { witnesses, .. } => witnesses,
        }
    }
}

impl Chain {
    pub fn from_systems(name: impl Into<String>, systems: &[ToySystem]) -> Self {
        Chain {
            name: name.into(),
            selector: Selector::Prefix(systems.iter().map(ToySystem::code).collect()),
        }
    }

    pub fn from_generator(
        name: impl Into<String>,
        generator: impl Fn(u64) -> ToySystem + Send + Sync + 'static,
    ) -> Self {
        Chain {
            name: name.into(),
            selector: Selector::Generator(Arc::new(move |k| generator(k).code())),
        }
    }

    pub fn code_at(&self, level: u64) -> Option<BigUint> {
        match &self.selector {
            Selector::Prefix(codes) => codes.get(level as usize).cloned(),
            Selector::Generator(g) => Some(g(level)),
        }
    }

    pub fn system_at(&self, level: u64) -> Option<ToySystem> {
        self.code_at(level).map(|c| ToySystem::from_code(&c))
    }

    /// Explicit prefix of the first `levels` codes.
    pub fn prefix(&self, levels: u64) -> Option<Vec<BigUint>> {
        (0..levels).map(|k| self.code_at(k)).collect()
    }
}

/// Least identifier definable in `b` but not in `a`, if any.
pub fn verify_strict_growth(a: &ToySystem, b: &ToySystem, budget: u32) -> Option<RealId> {
    let sa = a.definable_set(budget);
    b.definable_set(budget)
        .into_iter()
        .find(|id| !sa.contains(id))
}

/// Checks steps `0 -> 1` through `n-1 -> n`: the selector must increase and
/// each definable set must be a strict superset of the previous one.
pub fn is_admissible_prefix(c: &Chain, n: u64, budget: u32) -> Verdict {
    let mut witnesses = Vec::new();
    let fail = |step, failure, witnesses| Verdict::Fails {
        step,
        failure,
        witnesses,
    };
    let Some(mut prev_code) = c.code_at(0) else {
        return fail(0, Failure::Undefined, witnesses);
    };
    let mut prev_set = ToySystem::from_code(&prev_code).definable_set(budget);
    for step in 0..n {
        let Some(code) = c.code_at(step + 1) else {
            return fail(step, Failure::Undefined, witnesses);
        };
        if code <= prev_code {
            return fail(step, Failure::SelectorNotIncreasing, witnesses);
        }
        let set = ToySystem::from_code(&code).definable_set(budget);
        if let Some(lost) = prev_set.difference(&set).next() {
            return fail(step, Failure::Dropped(lost.clone()), witnesses);
        }
        match set.difference(&prev_set).next() {
            Some(w) => witnesses.push(w.clone()),
            None => return fail(step, Failure::NoGrowth, witnesses),
        }
        prev_code = code;
        prev_set = set;
    }
    Verdict::Admissible { witnesses }
}

/// Definable set of the level-`n` system; empty if the selector is undefined
/// there.
pub fn level_set(c: &Chain, n: u64, budget: u32) -> BTreeSet<RealId> {
    c.system_at(n)
        .map(|s| s.definable_set(budget))
        .unwrap_or_default()
}

/// Union of the level sets `0..=n`.
pub fn cumulative_set(c: &Chain, n: u64, budget: u32) -> BTreeSet<RealId> {
    let mut out = BTreeSet::new();
    for k in 0..=n {
        out.extend(level_set(c, k, budget));
    }
    out
}

pub fn global_level(family: &[Chain], n: u64, budget: u32) -> BTreeSet<RealId> {
    let mut out = BTreeSet::new();
    for c in family {
        out.extend(level_set(c, n, budget));
    }
    out
}

pub fn global_cumulative(family: &[Chain], n: u64, budget: u32) -> BTreeSet<RealId> {
    let mut out = BTreeSet::new();
    for c in family {
        out.extend(cumulative_set(c, n, budget));
    }
    out
}

/// Level `k` is the base system with the oracle rule at level `k`.
pub fn build_chain_condition_a(levels: u32) -> Result<Chain, ChainError> {
    if levels > 3 {
        return Err(ChainError::TooManyLevels(levels));
    }
    let systems: Vec<ToySystem> = (0..=levels)
        .map(|k| {
            ToySystem::new(
                [],
                Rules {
                    oracle_level: k,
                    ..Rules::base()
                },
            )
        })
        .collect();
    Ok(Chain::from_systems(
        alloc::format!("condition-A({levels})"),
        &systems,
    ))
}

/// Level `k` is the base system with the grants chosen by `rule(k)`.
pub fn build_chain_condition_c(
    name: impl Into<String>,
    rule: impl Fn(u64) -> BTreeSet<u64> + Send + Sync + 'static,
) -> Chain {
    Chain::from_generator(name, move |k| ToySystem {
        grants: rule(k),
        rules: Rules::base(),
    })
}

/// Cumulative grant rule: level `k` holds the first `k` tokens of `stream`
/// (all of them past its end).
pub fn grant_stream(stream: Vec<u64>) -> impl Fn(u64) -> BTreeSet<u64> + Send + Sync + 'static {
    move |k| stream.iter().take(k as usize).copied().collect()
}

/// The two chains of the non-collapse construction at `n = 1`, with the
/// checked conditions.
#[derive(Debug, Clone)]
pub struct NoncollapseReport {
    pub c1: Chain,
    pub c2: Chain,
    pub r: RealId,
    pub budget: u32,
    /// `r` is definable at level 0 of `C1`, hence in the cumulative set of
    /// `C1` at level 1.
    pub r_in_c1_level0: bool,
    pub r_in_cumulative_c1: bool,
    /// `r` is not definable at level 1 of `C2`.
    pub r_not_in_level_c2: bool,
    pub r_not_in_level_c1: bool,
    /// Both chains select the same level-1 system.
    pub same_level1_system: bool,
    /// `r` is in the global cumulative set but not the global level set.
    pub r_in_global_gap: bool,
    pub c1_verdict: Verdict,
    pub c2_verdict: Verdict,
}

impl NoncollapseReport {
    /// All conditions hold and `C1` is rejected at step `0 -> 1`.
    pub fn certified(&self) -> bool {
        self.r_in_c1_level0
            && self.r_in_cumulative_c1
            && self.r_not_in_level_c2
            && self.r_not_in_level_c1
            && self.same_level1_system
            && self.r_in_global_gap
            && matches!(self.c1_verdict, Verdict::Fails { step: 0, .. })
    }
}

/// Default description-size budget for chain computations.
pub const DEFAULT_BUDGET: u32 = 6;

pub fn noncollapse_chains() -> (Chain, Chain) {
    let f = ToySystem::base().with_grant(PSI);
    let c1 = Chain::from_systems("C1", &[ToySystem::base().with_grant(PHI), f.clone()]);
    let c2 = Chain::from_systems("C2", &[ToySystem::base(), f]);
    (c1, c2)
}

pub fn counterexample_noncollapse() -> NoncollapseReport {
    let (c1, c2) = noncollapse_chains();
    report_for(c1, c2, DEFAULT_BUDGET)
}

/// Evaluates the non-collapse conditions for an arbitrary pair of chains at
/// `n = 1`.
pub fn report_for(c1: Chain, c2: Chain, budget: u32) -> NoncollapseReport {
    let r = super::system::token_real(PHI);
    let family = [c1.clone(), c2.clone()];
    let gap = global_cumulative(&family, 1, budget).contains(&r)
        && !global_level(&family, 1, budget).contains(&r);
    NoncollapseReport {
        r_in_c1_level0: level_set(&c1, 0, budget).contains(&r),
        r_in_cumulative_c1: cumulative_set(&c1, 1, budget).contains(&r),
        r_not_in_level_c2: !level_set(&c2, 1, budget).contains(&r),
        r_not_in_level_c1: !level_set(&c1, 1, budget).contains(&r),
        same_level1_system: c1.code_at(1).is_some() && c1.code_at(1) == c2.code_at(1),
        r_in_global_gap: gap,
        c1_verdict: is_admissible_prefix(&c1, 1, budget),
        c2_verdict: is_admissible_prefix(&c2, 1, budget),
        c1,
        c2,
        r,
        budget,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::system::{EXP, HERON, LEIBNIZ};

    #[test]
    fn constant_chain_fails_first_step() {
        let c = Chain::from_generator("const", |_| ToySystem::base());
        let v = is_admissible_prefix(&c, 3, 4);
        assert_eq!(
            v,
            Verdict::Fails { step: 0, failure: Failure::SelectorNotIncreasing, witnesses: vec![] }
        );
    }

    #[test]
    fn condition_c_ladder() {
        let c = build_chain_condition_c("C", grant_stream(vec![LEIBNIZ, EXP, HERON]));
        let v = is_admissible_prefix(&c, 3, DEFAULT_BUDGET);
        let w: Vec<&str> = v.witnesses().iter().map(RealId::text).collect();
        assert!(v.is_admissible());
        assert_eq!(w, ["pi", "e", "sqrt2"]);
        let constant = build_chain_condition_c("K", |_| BTreeSet::from([LEIBNIZ]));
        assert!(matches!(is_admissible_prefix(&constant, 3, 4), Verdict::Fails { step: 0, .. }));
    }

    #[test]
    fn dropped_grant_is_reported() {
        let c = Chain::from_systems(
            "drop",
            &[ToySystem::base().with_grant(HERON), ToySystem::base().with_grant(EXP).with_grant(LEIBNIZ)],
        );
        match is_admissible_prefix(&c, 1, 3) {
            Verdict::Fails { step: 0, failure: Failure::Dropped(id), .. } => {
                assert_eq!(id.text(), "sqrt2")
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn condition_a_ladder() {
        let c = build_chain_condition_a(2).unwrap();
        let v = is_admissible_prefix(&c, 2, DEFAULT_BUDGET);
        let w: Vec<&str> = v.witnesses().iter().map(RealId::text).collect();
        assert_eq!(w, ["witness_real_1", "witness_real_2"]);
        assert!(build_chain_condition_a(4).is_err());
        let l1 = c.system_at(1).unwrap();
        let l2 = c.system_at(2).unwrap();
        assert_eq!(verify_strict_growth(&l1, &l2, DEFAULT_BUDGET), Some(RealId::witness(2)));
    }

    #[test]
    fn strict_growth_examples() {
        let a = ToySystem::base().with_grant(HERON);
        assert_eq!(verify_strict_growth(&a, &a, 5), None);
        let b = a.clone().with_grant(LEIBNIZ);
        assert_eq!(verify_strict_growth(&a, &b, 5), Some(RealId::atom("pi")));
    }

    #[test]
    fn noncollapse() {
        let report = counterexample_noncollapse();
        assert!(report.certified(), "{report:?}");
        assert!(report.c2_verdict.is_admissible());
        let gap = cumulative_set(&report.c1, 1, 6);
        assert!(gap.len() > level_set(&report.c1, 1, 6).len());
        // without phi at level 0 of C1 the difference disappears
        let c1 = Chain::from_systems("C1-phi", &[ToySystem::base(), ToySystem::base().with_grant(PSI)]);
        let family = [c1, report.c2.clone()];
        assert_eq!(global_cumulative(&family, 1, 6), global_level(&family, 1, 6));
    }

    #[test]
    fn level_zero_sets_coincide() {
        let (c1, _) = noncollapse_chains();
        assert_eq!(cumulative_set(&c1, 0, 4), level_set(&c1, 0, 4));
    }

    #[test]
    fn exhaustive_strict_growth_agreement() {
        let systems: Vec<ToySystem> = (0u64..40).map(|c| ToySystem::from_code(&BigUint::from(c))).collect();
        for a in &systems {
            for b in &systems {
                for budget in 1..=3 {
                    let sa = a.definable_set(budget);
                    let sb = b.definable_set(budget);
                    let w = verify_strict_growth(a, b, budget);
                    assert_eq!(w.is_none(), sb.is_subset(&sa));
                }
            }
        }
    }
}
