//! Witness descriptors: the level-1 expression grammar, the oracle-level
//! productions and their replay.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;

use super::DCompError;
use crate::creal::{self, CReal};
use crate::oracle_tower::{binary_sum, witness_real, OracleReal, Program, StageSequence, StagedOracle};
use crate::rational::{self, Rational};

pub const HERON: &str = "heron";
pub const LEIBNIZ: &str = "leibniz-series+alt-tail-modulus";
pub const E_SERIES: &str = "e-series";
pub const ACKERMANN: &str = "ackermann-series";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Atom {
    Heron,
    Leibniz,
    ESeries,
    Ackermann,
}

impl Atom {
    pub const ALL: [Atom; 4] = [Atom::Heron, Atom::Leibniz, Atom::ESeries, Atom::Ackermann];

    pub fn name(self) -> &'static str {
        match self {
            Atom::Heron => HERON,
            Atom::Leibniz => LEIBNIZ,
            Atom::ESeries => E_SERIES,
            Atom::Ackermann => ACKERMANN,
        }
    }

    fn build(self) -> CReal {
        match self {
            Atom::Heron => creal::sqrt2(),
            Atom::Leibniz => creal::pi_leibniz(),
            Atom::ESeries => creal::e_series(),
            Atom::Ackermann => {
                creal::ackermann_real(creal::ACKERMANN_MAX_CUTOFF).expect("supported cutoff")
            }
        }
    }

    fn approx(self) -> f64 {
        match self {
            Atom::Heron => core::f64::consts::SQRT_2,
            Atom::Leibniz => core::f64::consts::PI,
            Atom::ESeries => core::f64::consts::E,
            Atom::Ackermann => 0.5 + 0.125 + 1.0 / 128.0,
        }
    }
}

/// A level-1 construction: computable reals with explicit moduli.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Atom(Atom),
    Neg(Arc<Expr>),
    Sin(Arc<Expr>),
    Add(Arc<Expr>, Arc<Expr>),
    Mul(Arc<Expr>, Arc<Expr>),
    Scale(Rational, Arc<Expr>),
}

impl Expr {
    /// Node count, with a rational literal counted by its decimal digits
    /// (plus one for a sign).
    pub fn size(&self) -> u32 {
        match self {
            Expr::Atom(_) => 1,
            Expr::Neg(x) | Expr::Sin(x) => 1 + x.size(),
            Expr::Add(x, y) | Expr::Mul(x, y) => 1 + x.size() + y.size(),
            Expr::Scale(q, x) => 1 + rational::digit_size(q) + x.size(),
        }
    }

    pub fn build(&self) -> Result<CReal, DCompError> {
        Ok(match self {
            Expr::Atom(a) => a.build(),
            Expr::Neg(x) => creal::negate(&x.build()?),
            Expr::Sin(x) => creal::sin_taylor(&x.build()?)?,
            Expr::Add(x, y) => creal::add(&x.build()?, &y.build()?),
            Expr::Mul(x, y) => creal::mul(&x.build()?, &y.build()?),
            Expr::Scale(q, x) => creal::scale(q, &x.build()?),
        }
        .with_provenance(self.to_string()))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Atom(a) => f.write_str(a.name()),
            Expr::Neg(x) => write!(f, "neg({x})"),
            Expr::Sin(x) => write!(f, "sin-taylor({x})"),
            Expr::Add(x, y) => write!(f, "add({x},{y})"),
            Expr::Mul(x, y) => write!(f, "mul({x},{y})"),
            Expr::Scale(q, x) => write!(f, "scale({},{x})", rational::to_text(q)),
        }
    }
}

/// `sin` on `|x| < 2` by a fixed Taylor polynomial; only used to pre-screen
/// candidates.
pub(crate) fn sin_f64(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut acc = 0.0;
    for i in 0..14 {
        acc += term;
        term *= -x2 / (((2 * i + 2) * (2 * i + 3)) as f64);
    }
    acc
}

pub(crate) fn rational_f64(q: &Rational) -> f64 {
    // scale down both parts so huge heights still convert
    let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(60);
    let p = (q.numer() >> shift).to_f64().unwrap_or(0.0);
    let d = (q.denom() >> shift).to_f64().unwrap_or(1.0);
    if d == 0.0 {
        0.0
    } else {
        p / d
    }
}

/// Enumerated level-1 candidate with a floating-point preview of its value
/// (`NaN` if outside the sine domain).
#[derive(Debug, Clone)]
pub struct Candidate {
    pub expr: Arc<Expr>,
    pub text: String,
    pub preview: f64,
}

/// Largest literal digit size used by `scale`.
pub const MAX_LITERAL_DIGITS: u32 = 3;

/// Nonzero rationals other than 1 of the given digit size.
pub fn literals(digits: u32) -> Vec<Rational> {
    let mut out = Vec::new();
    let pow10 = |k: u32| 10u64.pow(k);
    for sign in [false, true] {
        let body = digits - sign as u32;
        if body == 0 {
            continue;
        }
        // integers
        for p in pow10(body - 1).max(1)..pow10(body) {
            if !(p == 1 && !sign) {
                out.push(signed(p, 1, sign));
            }
        }
        for pd in 1..body {
            let qd = body - pd;
            for p in pow10(pd - 1).max(1)..pow10(pd) {
                for q in pow10(qd - 1).max(2)..pow10(qd) {
                    if num_integer::gcd(p, q) == 1 {
                        out.push(signed(p, q, sign));
                    }
                }
            }
        }
    }
    out
}

fn signed(p: u64, q: u64, negative: bool) -> Rational {
    let p = BigInt::from(p);
    Rational::new(if negative { -p } else { p }, BigInt::from(q))
}

/// All level-1 candidates of exactly `size`, given those of every smaller
/// size, sorted by text.
pub fn candidates_of_size(size: u32, smaller: &[&[Candidate]]) -> Vec<Candidate> {
    let of = |s: u32| -> &[Candidate] { smaller.get(s as usize).copied().unwrap_or(&[]) };
    let mut out = Vec::new();
    let mut push = |expr: Expr, preview: f64| {
        out.push(Candidate {
            text: expr.to_string(),
            expr: Arc::new(expr),
            preview,
        })
    };
    if size == 1 {
        for a in Atom::ALL {
            push(Expr::Atom(a), a.approx());
        }
    }
    if size >= 2 {
        for x in of(size - 1) {
            push(Expr::Neg(x.expr.clone()), -x.preview);
            let s = if x.preview.abs() <= 1.0 { sin_f64(x.preview) } else { f64::NAN };
            push(Expr::Sin(x.expr.clone()), s);
        }
    }
    for left in 1..size.saturating_sub(1) {
        let right = size - 1 - left;
        for x in of(left) {
            for y in of(right) {
                push(Expr::Add(x.expr.clone(), y.expr.clone()), x.preview + y.preview);
                push(Expr::Mul(x.expr.clone(), y.expr.clone()), x.preview * y.preview);
            }
        }
    }
    for digits in 1..=MAX_LITERAL_DIGITS.min(size.saturating_sub(2)) {
        let inner = size - 1 - digits;
        let xs = of(inner);
        if xs.is_empty() {
            continue;
        }
        for q in literals(digits) {
            let qf = rational_f64(&q);
            for x in xs {
                push(Expr::Scale(q.clone(), x.expr.clone()), qf * x.preview);
            }
        }
    }
    out.sort_by(|a, b| a.text.as_bytes().cmp(b.text.as_bytes()));
    out
}

/// `sum 2^{-(k+1)}` over the inputs `k < s` that program `index` accepts
/// (halts within `s` steps with nonzero output) relative to the stage-`s`
/// jump oracle at `level`.
struct OracleSum {
    level: u32,
    program: Program,
}

impl StageSequence for OracleSum {
    fn stage_approximant(&self, s: u64) -> Rational {
        let oracle = StagedOracle::new(self.level, s).expect("level checked at parse");
        oracle_sum_stage(&self.program, s, &oracle)
    }
}

pub(crate) fn oracle_sum_stage(program: &Program, s: u64, oracle: &StagedOracle) -> Rational {
    let p = program.compile();
    binary_sum((0..s).filter(|&k| matches!(p.halting_time(k, s, oracle), Some((_, out)) if out != 0)))
}

pub fn oracle_sum(level: u32, index: u64) -> OracleReal {
    OracleReal::new(
        OracleSum {
            level,
            program: Program::from_u64(index),
        },
        level,
        format!("oracle-sum({level},{index})"),
    )
}

/// A replayed witness.
#[derive(Debug, Clone)]
pub enum Replayed {
    Rational(Rational),
    Constructive(CReal),
    Limit(OracleReal),
}

/// Parsed descriptor text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Rational(Rational),
    Expr(Expr),
    JumpSum(u32),
    OracleSum(u32, u64),
}

impl Witness {
    pub fn parse(text: &str) -> Result<Witness, DCompError> {
        let bad = || DCompError::BadWitness(text.to_string());
        if let Some(q) = text.strip_prefix("rational ") {
            return rational::parse(q).map(Witness::Rational).ok_or_else(bad);
        }
        if let Some(rest) = text.strip_prefix("jump-sum(") {
            let n = rest.strip_suffix(')').ok_or_else(bad)?;
            let n: u32 = n.parse().map_err(|_| bad())?;
            return (1..=crate::oracle_tower::MAX_LEVEL)
                .contains(&n)
                .then_some(Witness::JumpSum(n))
                .ok_or_else(bad);
        }
        if let Some(rest) = text.strip_prefix("oracle-sum(") {
            let body = rest.strip_suffix(')').ok_or_else(bad)?;
            let (n, i) = body.split_once(',').ok_or_else(bad)?;
            let n: u32 = n.parse().map_err(|_| bad())?;
            let i: u64 = i.parse().map_err(|_| bad())?;
            return (1..=crate::oracle_tower::MAX_LEVEL)
                .contains(&n)
                .then_some(Witness::OracleSum(n, i))
                .ok_or_else(bad);
        }
        let mut p = Parser { s: text.as_bytes(), pos: 0 };
        let e = p.expr().ok_or_else(bad)?;
        if p.pos != p.s.len() {
            return Err(bad());
        }
        Ok(Witness::Expr(e))
    }

    pub fn replay(&self) -> Result<Replayed, DCompError> {
        Ok(match self {
            Witness::Rational(q) => Replayed::Rational(q.clone()),
            Witness::Expr(e) => Replayed::Constructive(e.build()?),
            Witness::JumpSum(n) => Replayed::Limit(witness_real(*n)?),
            Witness::OracleSum(n, i) => Replayed::Limit(oracle_sum(*n, *i)),
        })
    }
}

/// Parses and replays a descriptor.
pub fn replay(text: &str) -> Result<Replayed, DCompError> {
    Witness::parse(text)?.replay()
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn eat(&mut self, c: u8) -> Option<()> {
        (self.s.get(self.pos) == Some(&c)).then(|| self.pos += 1)
    }

    fn word(&mut self) -> &str {
        let start = self.pos;
        while let Some(&c) = self.s.get(self.pos) {
            if c == b'(' || c == b')' || c == b',' {
                break;
            }
            self.pos += 1;
        }
        core::str::from_utf8(&self.s[start..self.pos]).unwrap_or("")
    }

    fn expr(&mut self) -> Option<Expr> {
        let name = self.word();
        if let Some(a) = Atom::ALL.iter().find(|a| a.name() == name) {
            return Some(Expr::Atom(*a));
        }
        let name = String::from(name);
        self.eat(b'(')?;
        let e = match name.as_str() {
            "neg" => Expr::Neg(Arc::new(self.expr()?)),
            "sin-taylor" => Expr::Sin(Arc::new(self.expr()?)),
            "add" | "mul" => {
                let x = Arc::new(self.expr()?);
                self.eat(b',')?;
                let y = Arc::new(self.expr()?);
                if name == "add" {
                    Expr::Add(x, y)
                } else {
                    Expr::Mul(x, y)
                }
            }
            "scale" => {
                let q = rational::parse(self.word())?;
                self.eat(b',')?;
                Expr::Scale(q, Arc::new(self.expr()?))
            }
            _ => return None,
        };
        self.eat(b')')?;
        Some(e)
    }
}

/// Size of an oracle-level descriptor: 1 for `jump-sum`, `1 + digits(i)`
/// for `oracle-sum`.
pub fn oracle_witness_size(index: Option<u64>) -> u32 {
    match index {
        None => 1,
        Some(i) => 1 + BigUint::from(i).to_string().len() as u32,
    }
}
