//! Toy formal systems: grant tokens plus closure rules.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use super::RealId;
use crate::oracle_tower::MAX_LEVEL;
use crate::pairing::{pair, unpair};
use crate::rational::{self, Rational};

pub const PHI: u64 = 0;
pub const PSI: u64 = 1;
pub const HERON: u64 = 2;
pub const LEIBNIZ: u64 = 3;
pub const EXP: u64 = 4;

const NAMED_TOKENS: [(&str, &str); 5] = [
    ("phi", "r_4_3"),
    ("psi", "witness_real_1"),
    ("heron", "sqrt2"),
    ("leibniz", "pi"),
    ("exp", "e"),
];

/// Name of grant token `k`. Tokens past the named ones are opaque
/// consistency-style tokens `con{k}`.
pub fn token_name(k: u64) -> String {
    match NAMED_TOKENS.get(k as usize) {
        Some((name, _)) => String::from(*name),
        None => format!("con{k}"),
    }
}

/// The real identifier granted by token `k`.
pub fn token_real(k: u64) -> RealId {
    match NAMED_TOKENS.get(k as usize) {
        Some((_, real)) => RealId::atom(*real),
        None => RealId::atom(format!("x{k}")),
    }
}

pub fn token_by_name(name: &str) -> Option<u64> {
    if let Some(k) = NAMED_TOKENS.iter().position(|(n, _)| *n == name) {
        return Some(k as u64);
    }
    let k: u64 = name.strip_prefix("con")?.parse().ok()?;
    (k as usize >= NAMED_TOKENS.len()).then_some(k)
}

/// Closure rules from the fixed catalog.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rules {
    /// Every rational of height at most the budget.
    pub rational: bool,
    /// Seeds 0 and 1 and closes under `+`, `*` and negation.
    pub field: bool,
    /// Adds `witness_real_1` through `witness_real_k` (`k` is capped at the
    /// highest supported jump level).
    pub oracle_level: u32,
}

impl Rules {
    pub fn code(&self) -> BigUint {
        BigUint::from(self.rational as u32)
            + BigUint::from(2 * self.field as u32)
            + (BigUint::from(self.oracle_level) << 2u32)
    }

    pub fn from_code(c: &BigUint) -> Rules {
        Rules {
            rational: c.bit(0),
            field: c.bit(1),
            oracle_level: (c >> 2u32).to_u32().unwrap_or(u32::MAX),
        }
    }

    /// Rational and field closure, the base every example extends.
    pub fn base() -> Rules {
        Rules {
            rational: true,
            field: true,
            oracle_level: 0,
        }
    }
}

/// A finite set of grants together with closure rules.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ToySystem {
    pub grants: BTreeSet<u64>,
    pub rules: Rules,
}

impl ToySystem {
    pub fn new(grants: impl IntoIterator<Item = u64>, rules: Rules) -> Self {
        ToySystem {
            grants: grants.into_iter().collect(),
            rules,
        }
    }

    /// The base system with no grants.
    pub fn base() -> Self {
        ToySystem::new([], Rules::base())
    }

    pub fn with_grant(mut self, token: u64) -> Self {
        self.grants.insert(token);
        self
    }

    pub fn without_grant(mut self, token: u64) -> Self {
        self.grants.remove(&token);
        self
    }

    pub fn grant_mask(&self) -> BigUint {
        let mut mask = BigUint::zero();
        for &k in &self.grants {
            mask.set_bit(k, true);
        }
        mask
    }

    /// Position in the enumeration of all toy systems:
    /// `pair(grant mask, rules code)`.
    pub fn code(&self) -> BigUint {
        pair(&self.grant_mask(), &self.rules.code())
    }

    pub fn from_code(code: &BigUint) -> ToySystem {
        let (mask, rules) = unpair(code);
        let grants = (0..mask.bits()).filter(|&k| mask.bit(k)).collect();
        ToySystem {
            grants,
            rules: Rules::from_code(&rules),
        }
    }

    pub fn definable_set(&self, budget: u32) -> BTreeSet<RealId> {
        definable_set(self, budget)
    }
}

impl fmt::Display for ToySystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.rules.rational && self.rules.field {
            parts.push(String::from("RCA0"));
        } else if self.rules.rational {
            parts.push(String::from("rational"));
        } else if self.rules.field {
            parts.push(String::from("field"));
        } else {
            parts.push(String::from("empty"));
        }
        if self.rules.oracle_level > 0 {
            parts.push(format!("oracle{}", self.rules.oracle_level));
        }
        for &k in &self.grants {
            parts.push(token_name(k));
        }
        f.write_str(&parts.join("+"))
    }
}

struct Item {
    id: RealId,
    value: Option<Rational>,
    negated: bool,
}

struct Closure {
    budget: u32,
    items: Vec<Item>,
    seen: BTreeMap<String, usize>,
    // item indices by size, and the rational literals
    by_size: Vec<Vec<usize>>,
    rationals: Vec<usize>,
}

impl Closure {
    fn push(&mut self, id: RealId, value: Option<Rational>, negated: bool) {
        if id.size() > self.budget || self.seen.contains_key(id.text()) {
            return;
        }
        let index = self.items.len();
        self.seen.insert(String::from(id.text()), index);
        self.by_size[id.size() as usize].push(index);
        if value.is_some() {
            self.rationals.push(index);
        }
        self.items.push(Item { id, value, negated });
    }

    fn push_rational(&mut self, q: Rational) {
        let id = RealId::rational(&q);
        self.push(id, Some(q), false);
    }

    fn close_field(&mut self) {
        let mut i = 0;
        while i < self.items.len() {
            if !self.items[i].negated {
                match &self.items[i].value {
                    Some(q) => self.push_rational(-q),
                    None => {
                        let id = RealId::neg(&self.items[i].id);
                        self.push(id, None, true);
                    }
                }
            }
            let size = self.items[i].id.size();
            // partners of larger size cannot fit unless both are literals
            for partner_size in 1..self.budget.saturating_sub(size) {
                let mut k = 0;
                while let Some(&j) = self.by_size[partner_size as usize].get(k) {
                    if j > i {
                        break;
                    }
                    if self.items[j].value.is_none() || self.items[i].value.is_none() {
                        self.combine(i, j);
                    }
                    k += 1;
                }
            }
            if self.items[i].value.is_some() {
                let mut k = 0;
                while let Some(&j) = self.rationals.get(k) {
                    if j > i {
                        break;
                    }
                    self.combine(i, j);
                    k += 1;
                }
            }
            i += 1;
        }
    }

    fn combine(&mut self, i: usize, j: usize) {
        let (a, b) = (&self.items[i], &self.items[j]);
        if let (Some(p), Some(q)) = (&a.value, &b.value) {
            let (s, t) = (p + q, p * q);
            self.push_rational(s);
            self.push_rational(t);
            return;
        }
        if a.id.size() + b.id.size() + 1 > self.budget {
            return;
        }
        let is = |x: &Item, v: i32| x.value.as_ref() == Some(&Rational::from_integer(BigInt::from(v)));
        let plus = (!is(a, 0) && !is(b, 0)).then(|| RealId::plus(&a.id, &b.id));
        let times = (!is(a, 0) && !is(b, 0) && !is(a, 1) && !is(b, 1))
            .then(|| RealId::times(&a.id, &b.id));
        for id in [plus, times].into_iter().flatten() {
            self.push(id, None, false);
        }
    }
}

/// Least fixed point of the grants under the rules, truncated to
/// identifiers of size at most `budget`.
///
/// Negation of a negation, addition of 0 and multiplication by 0 or 1 are
/// not formed; operations on two rational literals are folded into the
/// resulting literal.
pub fn definable_set(sys: &ToySystem, budget: u32) -> BTreeSet<RealId> {
    let mut c = Closure {
        budget,
        items: Vec::new(),
        seen: BTreeMap::new(),
        by_size: alloc::vec![Vec::new(); budget as usize + 1],
        rationals: Vec::new(),
    };
    for &k in &sys.grants {
        c.push(token_real(k), None, false);
    }
    for level in 1..=sys.rules.oracle_level.min(MAX_LEVEL) {
        c.push(RealId::witness(level), None, false);
    }
    if sys.rules.rational {
        for q in rationals_up_to(budget) {
            c.push_rational(q);
        }
    }
    if sys.rules.field {
        c.push_rational(Rational::zero());
        c.push_rational(Rational::one());
        c.close_field();
    }
    c.items.into_iter().map(|item| item.id).collect()
}

/// All rationals of height at most `h`.
pub fn rationals_up_to(h: u32) -> Vec<Rational> {
    let mut out = Vec::new();
    out.push(Rational::zero());
    for q in 1..=h as i64 {
        for p in 1..=h as i64 {
            if num_integer::gcd(p, q) == 1 {
                out.push(rational::ratio(p, q));
                out.push(rational::ratio(-p, q));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn texts(set: &BTreeSet<RealId>) -> Vec<&str> {
        set.iter().map(|r| r.text()).collect()
    }

    #[test]
    fn grant_only() {
        let sys = ToySystem::new([PHI], Rules::default());
        assert_eq!(texts(&sys.definable_set(6)), ["r_4_3"]);
    }

    #[test]
    fn rational_closure_by_height() {
        let sys = ToySystem::new([], Rules { rational: true, ..Rules::default() });
        let set = sys.definable_set(3);
        let mut expected: Vec<RealId> = rationals_up_to(3).iter().map(RealId::rational).collect();
        expected.sort();
        assert_eq!(set.into_iter().collect::<Vec<_>>(), expected);
        assert_eq!(rationals_up_to(3).len(), 1 + 2 * 7);
    }

    #[test]
    fn field_closure_example() {
        let sys = ToySystem::new([HERON], Rules { field: true, ..Rules::default() });
        let set = sys.definable_set(4);
        assert!(set.contains(&RealId::atom("sqrt2_plus_1")));
        assert!(set.contains(&RealId::atom("neg_sqrt2")));
        assert!(set.contains(&RealId::atom("2")));
        assert!(!set.contains(&RealId::atom("neg_neg_sqrt2")));
    }

    #[test]
    fn oracle_rule_adds_witnesses() {
        let sys = ToySystem::new([], Rules { oracle_level: 2, ..Rules::default() });
        assert_eq!(texts(&sys.definable_set(1)), ["witness_real_1", "witness_real_2"]);
    }

    #[test]
    fn codes() {
        assert_eq!(Rules::base().code(), BigUint::from(3u32));
        let sys = ToySystem::base().with_grant(PHI);
        assert_eq!(ToySystem::from_code(&sys.code()), sys);
        assert_eq!(sys.to_string(), "RCA0+phi");
        assert_eq!(token_by_name("con9"), Some(9));
        assert_eq!(token_by_name("con2"), None);
        assert_eq!(token_by_name("leibniz"), Some(LEIBNIZ));
    }

    fn system() -> impl Strategy<Value = ToySystem> {
        (proptest::collection::btree_set(0u64..7, 0..4), any::<bool>(), any::<bool>(), 0u32..3)
            .prop_map(|(grants, rational, field, oracle_level)| ToySystem {
                grants,
                rules: Rules { rational, field, oracle_level },
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn code_roundtrip(sys in system()) {
            prop_assert_eq!(ToySystem::from_code(&sys.code()), sys);
        }

        #[test]
        fn every_code_decodes(c in any::<u64>()) {
            let c = BigUint::from(c);
            prop_assert_eq!(ToySystem::from_code(&c).code(), c);
        }

        #[test]
        fn monotone(sys in system(), extra in 0u64..7, budget in 1u32..6) {
            let small = sys.definable_set(budget);
            prop_assert!(small.is_subset(&sys.definable_set(budget + 1)));
            prop_assert!(small.is_subset(&sys.clone().with_grant(extra).definable_set(budget)));
            let mut more = sys.clone();
            more.rules.field = true;
            more.rules.rational = true;
            more.rules.oracle_level += 1;
            prop_assert!(small.is_subset(&more.definable_set(budget)));
        }

        #[test]
        fn sizes_respect_budget(sys in system(), budget in 1u32..7) {
            prop_assert!(sys.definable_set(budget).iter().all(|r| r.size() <= budget));
        }
    }
}
