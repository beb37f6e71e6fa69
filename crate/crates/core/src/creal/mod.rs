//! Constructive reals: a rational Cauchy sequence together with an explicit
//! convergence modulus.
//!
//! The public contract is phrased in precision indices: `approximant(n)` is
//! within `2^-n` of the represented real. The raw sequence and its modulus
//! stay visible through [`CReal::term`] and [`CReal::modulus`] so the Cauchy
//! bound `|q_j - q_k| <= 2^-n` for `j, k >= modulus(n)` can be probed.

mod constants;
mod decimal;

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};

use crate::rational::{self, Rational};

pub use constants::{
    ackermann, ackermann_real, e_series, geometric_quarter, pi_leibniz, pi_machin, sin_taylor,
    sqrt2, ACKERMANN_MAX_CUTOFF, LEIBNIZ_PRECISION_CAP,
};
pub use decimal::{decimal_precision, to_decimal};

/// A rational Cauchy sequence with a convergence modulus.
///
/// Implementations must be deterministic. `approximant` defaults to
/// `term(modulus(n))`; combinators may override it with a cheaper formula
/// that honours the same `2^-n` contract.
pub trait CauchySequence: Send + Sync {
    fn term(&self, j: u64) -> Rational;

    fn modulus(&self, n: u32) -> u64;

    fn approximant(&self, n: u32) -> Rational {
        self.term(self.modulus(n))
    }

    /// Largest precision index that is cheap to evaluate, if the sequence
    /// converges too slowly for arbitrary precision.
    fn precision_cap(&self) -> Option<u32> {
        None
    }

    /// The exact value, when the sequence is constant.
    fn exact(&self) -> Option<Rational> {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CRealError {
    #[error("sin_taylor needs |x| <= 1 + 2^-1, but approximant(1) = {0} exceeds 1 in magnitude")]
    SinDomain(String),
    #[error("perturbation size must be positive, got {0}")]
    NonPositiveEps(String),
    #[error("ackermann_real cutoff {0} is above the supported maximum 3")]
    AckermannCutoff(u64),
}

/// Outcome of a tolerance-bounded comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    Less,
    Greater,
    /// The approximants were within `2^-n` of each other.
    Indistinguishable(u32),
}

/// A constructive real.
#[derive(Clone)]
pub struct CReal {
    seq: Arc<dyn CauchySequence>,
    level_tag: u32,
    provenance: String,
}

impl fmt::Debug for CReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CReal")
            .field("level_tag", &self.level_tag)
            .field("provenance", &self.provenance)
            .finish()
    }
}

impl CReal {
    pub fn new<S: CauchySequence + 'static>(
        seq: S,
        level_tag: u32,
        provenance: impl Into<String>,
    ) -> Self {
        CReal {
            seq: Arc::new(seq),
            level_tag,
            provenance: provenance.into(),
        }
    }

    /// Rational within `2^-n` of the real.
    pub fn approximant(&self, n: u32) -> Rational {
        self.seq.approximant(n)
    }

    pub fn term(&self, j: u64) -> Rational {
        self.seq.term(j)
    }

    pub fn modulus(&self, n: u32) -> u64 {
        self.seq.modulus(n)
    }

    pub fn precision_cap(&self) -> Option<u32> {
        self.seq.precision_cap()
    }

    pub fn exact(&self) -> Option<Rational> {
        self.seq.exact()
    }

    pub fn level_tag(&self) -> u32 {
        self.level_tag
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    pub fn with_level_tag(mut self, level_tag: u32) -> Self {
        self.level_tag = level_tag;
        self
    }
}

struct Constant(Rational);

impl CauchySequence for Constant {
    fn term(&self, _j: u64) -> Rational {
        self.0.clone()
    }
    fn modulus(&self, _n: u32) -> u64 {
        0
    }
    fn approximant(&self, _n: u32) -> Rational {
        self.0.clone()
    }
    fn exact(&self) -> Option<Rational> {
        Some(self.0.clone())
    }
}

pub fn from_rational(q: Rational) -> CReal {
    let provenance = format!("rational {}", rational::to_text(&q));
    CReal::new(Constant(q), 0, provenance)
}

fn min_cap(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn lower_cap(cap: Option<u32>, by: u32) -> Option<u32> {
    cap.map(|c| c.saturating_sub(by))
}

struct Sum(CReal, CReal);

impl CauchySequence for Sum {
    fn term(&self, j: u64) -> Rational {
        self.0.term(j) + self.1.term(j)
    }
    fn modulus(&self, n: u32) -> u64 {
        let n = n.saturating_add(1);
        self.0.modulus(n).max(self.1.modulus(n))
    }
    fn approximant(&self, n: u32) -> Rational {
        let n = n.saturating_add(1);
        self.0.approximant(n) + self.1.approximant(n)
    }
    fn precision_cap(&self) -> Option<u32> {
        lower_cap(min_cap(self.0.precision_cap(), self.1.precision_cap()), 1)
    }
    fn exact(&self) -> Option<Rational> {
        Some(self.0.exact()? + self.1.exact()?)
    }
}

pub fn add(r: &CReal, s: &CReal) -> CReal {
    let provenance = format!("add({},{})", r.provenance, s.provenance);
    let level = r.level_tag.max(s.level_tag);
    CReal::new(Sum(r.clone(), s.clone()), level, provenance)
}

struct Negation(CReal);

impl CauchySequence for Negation {
    fn term(&self, j: u64) -> Rational {
        -self.0.term(j)
    }
    fn modulus(&self, n: u32) -> u64 {
        self.0.modulus(n)
    }
    fn approximant(&self, n: u32) -> Rational {
        -self.0.approximant(n)
    }
    fn precision_cap(&self) -> Option<u32> {
        self.0.precision_cap()
    }
    fn exact(&self) -> Option<Rational> {
        self.0.exact().map(|q| -q)
    }
}

pub fn negate(r: &CReal) -> CReal {
    let provenance = format!("neg({})", r.provenance);
    CReal::new(Negation(r.clone()), r.level_tag, provenance)
}

pub fn sub(r: &CReal, s: &CReal) -> CReal {
    let provenance = format!("sub({},{})", r.provenance, s.provenance);
    add(r, &negate(s)).with_provenance(provenance)
}

struct Product {
    r: CReal,
    s: CReal,
    // extra precision bits: ceil(log2(B + 1)) for B = |approximant(0)| + 1
    shift_r: u32,
    shift_s: u32,
}

/// `ceil(log2(|a| + 2))`, the bit budget for the bound `B + 1` with
/// `B = |a| + 1`.
fn magnitude_bits(a: &Rational) -> u32 {
    let bound = a.abs() + rational::int(2);
    let ceil = -rational::floor(&-bound);
    rational::ceil_log2(&ceil.to_biguint().unwrap_or_else(BigUint::zero)) as u32
}

impl CauchySequence for Product {
    fn term(&self, j: u64) -> Rational {
        self.r.term(j) * self.s.term(j)
    }
    fn modulus(&self, n: u32) -> u64 {
        let (nr, ns) = self.precisions(n);
        self.r
            .modulus(nr)
            .max(self.s.modulus(ns))
            .max(self.r.modulus(0))
            .max(self.s.modulus(0))
    }
    fn approximant(&self, n: u32) -> Rational {
        let (nr, ns) = self.precisions(n);
        self.r.approximant(nr) * self.s.approximant(ns)
    }
    fn precision_cap(&self) -> Option<u32> {
        let r = lower_cap(self.r.precision_cap(), 1 + self.shift_s);
        let s = lower_cap(self.s.precision_cap(), 1 + self.shift_r);
        min_cap(r, s)
    }
    fn exact(&self) -> Option<Rational> {
        Some(self.r.exact()? * self.s.exact()?)
    }
}

impl Product {
    fn precisions(&self, n: u32) -> (u32, u32) {
        let base = n.saturating_add(1);
        (
            base.saturating_add(self.shift_s),
            base.saturating_add(self.shift_r),
        )
    }
}

pub fn mul(r: &CReal, s: &CReal) -> CReal {
    let provenance = format!("mul({},{})", r.provenance, s.provenance);
    let level = r.level_tag.max(s.level_tag);
    let shift_r = magnitude_bits(&r.approximant(0));
    let shift_s = magnitude_bits(&s.approximant(0));
    let seq = Product {
        r: r.clone(),
        s: s.clone(),
        shift_r,
        shift_s,
    };
    CReal::new(seq, level, provenance)
}

/// `q * x`, recorded as a scaling in the provenance.
pub fn scale(q: &Rational, x: &CReal) -> CReal {
    let provenance = format!("scale({},{})", rational::to_text(q), x.provenance);
    mul(&from_rational(q.clone()), x).with_provenance(provenance)
}

/// Compares `r` and `s` using approximants at precision `n + 2`.
///
/// A strict verdict is returned only when the approximants differ by more
/// than `2^-n`, so it is always correct.
pub fn cmp_at(r: &CReal, s: &CReal, n: u32) -> Comparison {
    let p = n.saturating_add(2);
    let a = r.approximant(p);
    let b = s.approximant(p);
    if rational::within(&a, &b, n as u64) {
        Comparison::Indistinguishable(n)
    } else if a < b {
        Comparison::Less
    } else {
        Comparison::Greater
    }
}

/// `r + eps/4`, a distinct real of the same level arbitrarily close to `r`.
pub fn perturb(r: &CReal, eps: &Rational) -> Result<CReal, CRealError> {
    if !eps.is_positive() {
        return Err(CRealError::NonPositiveEps(rational::to_text(eps)));
    }
    let delta = eps / BigInt::from(4);
    let provenance = format!("perturb({},{})", r.provenance, rational::to_text(&delta));
    Ok(add(r, &from_rational(delta))
        .with_level_tag(r.level_tag)
        .with_provenance(provenance))
}
