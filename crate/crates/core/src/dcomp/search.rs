use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;

use once_cell::race::OnceBox;

use super::grammar::{self, candidates_of_size, rational_f64, Candidate};
use super::{DCompError, DCompResult, Status};
use crate::creal::{self, CReal, Comparison};
use crate::oracle_tower::{binary_sum, OracleReal, Program, StagedOracle};
use crate::rational::{self, Rational};

/// Largest level-1 expression size enumerated.
pub const MAX_TREE_SIZE: u32 = 7;

const STRICT_BITS: u32 = 64;
const CAPPED_BITS: u32 = 20;
/// Bits compared when the target is constructive but the candidate is not.
const LIMIT_BITS: u64 = 48;
const PREVIEW_TOLERANCE: f64 = 1e-9;

/// The fixed level ladder with lazily built candidate lists.
pub struct Ladder {
    max_level: u32,
    rational_height: i64,
    oracle_programs: u64,
    stage: u64,
    rationals: OnceBox<Vec<(String, Rational)>>,
    level1: [OnceBox<Vec<Candidate>>; MAX_TREE_SIZE as usize + 1],
}

impl Ladder {
    pub fn new(max_level: u32, rational_height: i64, oracle_programs: u64) -> Self {
        Ladder {
            max_level,
            rational_height,
            oracle_programs,
            stage: 256,
            rationals: OnceBox::new(),
            level1: [const { OnceBox::new() }; MAX_TREE_SIZE as usize + 1],
        }
    }

    /// Levels 0..=4, rationals of height at most 100, 100 oracle programs.
    pub fn standard() -> &'static Ladder {
        static STANDARD: OnceBox<Ladder> = OnceBox::new();
        STANDARD.get_or_init(|| Box::new(Ladder::new(4, 100, 100)))
    }

    pub fn max_level(&self) -> u32 {
        self.max_level
    }

    pub fn stage(&self) -> u64 {
        self.stage
    }

    /// Level-0 descriptors `rational p/q` in witness order.
    pub fn rationals(&self) -> &[(String, Rational)] {
        self.rationals.get_or_init(|| {
            let h = self.rational_height;
            let mut out = Vec::new();
            for q in 1..=h {
                for p in -h..=h {
                    if num_integer::gcd(p, q) == 1 || (p == 0 && q == 1) {
                        let r = Rational::new(BigInt::from(p), BigInt::from(q));
                        out.push((format!("rational {}", rational::to_text(&r)), r));
                    }
                }
            }
            out.sort_by(|a, b| witness_order(&a.0, &b.0));
            Box::new(out)
        })
    }

    /// Level-1 candidates of exactly `size` nodes, sorted by text.
    pub fn level1(&self, size: u32) -> &[Candidate] {
        let Some(slot) = self.level1.get(size as usize) else {
            return &[];
        };
        if size == 0 {
            return &[];
        }
        slot.get_or_init(|| {
            let smaller: Vec<&[Candidate]> = (0..size).map(|k| self.level1(k)).collect();
            Box::new(candidates_of_size(size, &smaller))
        })
    }

    /// Level-`k` descriptors for `k >= 2`, in witness order.
    fn oracle_descriptors(&self, level: u32) -> impl Iterator<Item = (String, Option<u64>)> {
        let m = level - 1;
        core::iter::once((format!("jump-sum({m})"), None))
            .chain((0..self.oracle_programs).map(move |i| (format!("oracle-sum({m},{i})"), Some(i))))
    }
}

/// Witness order: description length, then bytes.
pub fn witness_order(a: &str, b: &str) -> core::cmp::Ordering {
    (a.len(), a.as_bytes()).cmp(&(b.len(), b.as_bytes()))
}

/// What is being compressed.
#[derive(Debug, Clone)]
pub enum Target {
    Constructive {
        real: CReal,
        /// Exact value known by construction.
        certificate: Option<Rational>,
    },
    Limit(OracleReal),
}

impl Target {
    pub fn real(real: CReal) -> Self {
        Target::Constructive {
            real,
            certificate: None,
        }
    }
}

enum Probe<'a> {
    Exact(Rational),
    Approx { real: &'a CReal, value: Rational, bits: u32 },
    /// Stage value, compared on all `bits` stage bits.
    Limit(Rational, u64),
}

impl Probe<'_> {
    fn preview(&self) -> f64 {
        match self {
            Probe::Exact(q) | Probe::Limit(q, _) | Probe::Approx { value: q, .. } => rational_f64(q),
        }
    }
}

enum Outcome {
    Hit,
    Miss,
    Unsure,
}

fn level0_check(probe: &Probe<'_>, q: &Rational) -> Outcome {
    match probe {
        Probe::Exact(v) if v == q => Outcome::Hit,
        Probe::Exact(_) => Outcome::Miss,
        Probe::Approx { value, bits, .. } => {
            if rational::within(value, q, *bits as u64) {
                Outcome::Unsure
            } else {
                Outcome::Miss
            }
        }
        // stage values never certify a limit
        Probe::Limit(v, bits) => {
            if rational::within(v, q, *bits) {
                Outcome::Hit
            } else {
                Outcome::Unsure
            }
        }
    }
}

fn level1_check(probe: &Probe<'_>, target_f: f64, cand: &Candidate) -> bool {
    let slack = match probe {
        Probe::Approx { bits, .. } => preview_slack(*bits),
        _ => 0.0,
    };
    // NaN previews fail the comparison and are rejected
    let close = (cand.preview - target_f).abs() <= PREVIEW_TOLERANCE * target_f.abs().max(1.0) + slack;
    if !close {
        return false;
    }
    let Ok(real) = cand.expr.build() else {
        return false;
    };
    match probe {
        Probe::Exact(v) => compare(&creal::from_rational(v.clone()), &real),
        Probe::Approx { real: t, .. } => compare(t, &real),
        Probe::Limit(v, bits) => {
            let bits = real.precision_cap().map_or(*bits, |c| (c as u64).min(*bits));
            rational::within(v, &real.approximant(bits as u32 + 2), bits)
        }
    }
}

/// `4 * 2^-bits`, the preview error of a target known to `2^-bits`.
fn preview_slack(bits: u32) -> f64 {
    let mut x = 4.0;
    for _ in 0..bits {
        x *= 0.5;
    }
    x
}

fn compare(a: &CReal, b: &CReal) -> bool {
    let bits = match (a.precision_cap(), b.precision_cap()) {
        (None, None) => STRICT_BITS,
        (x, y) => x.into_iter().chain(y).min().unwrap_or(CAPPED_BITS).min(CAPPED_BITS),
    };
    matches!(creal::cmp_at(a, b, bits), Comparison::Indistinguishable(_))
}

fn limit_value(probe: &Probe<'_>) -> (Rational, u64) {
    match probe {
        Probe::Exact(v) => (v.clone(), LIMIT_BITS),
        Probe::Limit(v, bits) => (v.clone(), *bits),
        Probe::Approx { real, .. } => (real.approximant(LIMIT_BITS as u32 + 2), LIMIT_BITS),
    }
}

/// Least level, and least witness at that level, reproducing `target`.
pub fn fractal_degree(target: &Target, ladder: &Ladder, budget: u64) -> Result<DCompResult, DCompError> {
    let probe = match target {
        Target::Constructive { real, certificate } => match certificate.clone().or_else(|| real.exact()) {
            Some(v) => Probe::Exact(v),
            None => {
                let bits = real.precision_cap().map_or(STRICT_BITS, |c| c.min(CAPPED_BITS));
                Probe::Approx {
                    real,
                    value: real.approximant(bits + 2),
                    bits,
                }
            }
        },
        Target::Limit(o) => Probe::Limit(o.stage_approximant(ladder.stage), ladder.stage),
    };
    let mut used = 0u64;
    let hit = |level: u32, witness: &str, status: Status, used: u64| DCompResult {
        level,
        witness: String::from(witness),
        status,
        search_budget_used: used,
    };

    // level 0
    let rationals = ladder.rationals();
    let mut settled = matches!(probe, Probe::Exact(_) | Probe::Approx { .. }) && rationals.len() as u64 <= budget;
    for (text, q) in rationals.iter().take(budget as usize) {
        used += 1;
        match level0_check(&probe, q) {
            Outcome::Hit => {
                let status = if matches!(probe, Probe::Exact(_)) {
                    Status::Exact
                } else {
                    Status::UpperBound
                };
                return Ok(hit(0, text, status, used));
            }
            Outcome::Miss => {}
            Outcome::Unsure => settled = false,
        }
    }
    if ladder.max_level == 0 {
        return Err(DCompError::Unresolved { budget_used: used });
    }

    // level 1
    let target_f = probe.preview();
    let mut left = budget;
    'sizes: for size in 1..=MAX_TREE_SIZE {
        for cand in ladder.level1(size) {
            if left == 0 {
                break 'sizes;
            }
            left -= 1;
            used += 1;
            if level1_check(&probe, target_f, cand) {
                let status = if settled { Status::Exact } else { Status::UpperBound };
                return Ok(hit(1, &cand.text, status, used));
            }
        }
    }

    // oracle levels
    let (value, bits) = limit_value(&probe);
    for level in 2..=ladder.max_level {
        let oracle = StagedOracle::new(level - 1, ladder.stage)?;
        for (text, index) in ladder.oracle_descriptors(level).take(budget as usize) {
            used += 1;
            let v = match index {
                None => binary_sum((0..ladder.stage).filter(|&k| oracle.member(k))),
                Some(i) => grammar::oracle_sum_stage(&Program::from_u64(i), ladder.stage, &oracle),
            };
            if rational::within(&value, &v, bits) {
                return Ok(hit(level, &text, Status::UpperBound, used));
            }
        }
    }
    Err(DCompError::Unresolved { budget_used: used })
}

/// [`fractal_degree`] of a catalog entry on the standard ladder.
pub fn dcomp(id: &str, budget: u64) -> Result<DCompResult, DCompError> {
    if let Some((_, why)) = super::EXCLUDED.iter().find(|(x, _)| *x == id) {
        return Err(DCompError::Excluded(String::from(id), why));
    }
    let entry = super::lookup(id).ok_or_else(|| DCompError::UnknownId(String::from(id)))?;
    fractal_degree(&entry.target()?, Ladder::standard(), budget)
}

