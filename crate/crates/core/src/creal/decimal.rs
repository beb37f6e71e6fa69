use alloc::string::{String, ToString};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Pow, Signed};

use super::CReal;
use crate::rational::{self, Rational};

/// Least `n` with `2^-n <= 10^-(k+1)`.
pub fn decimal_precision(k: u32) -> u32 {
    let target = BigUint::from(10u32).pow(k + 1);
    rational::ceil_log2(&target) as u32
}

/// `x * 10^k` truncated toward zero.
fn scaled_trunc(x: &Rational, k: u32) -> BigInt {
    let scaled = x * BigInt::from(10u32).pow(k);
    let (q, _) = scaled.numer().div_rem(scaled.denom());
    q
}

fn scaled_round(x: &Rational, k: u32) -> BigInt {
    let scaled = x * BigInt::from(10u32).pow(k);
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let shifted = if scaled.is_negative() {
        scaled - half
    } else {
        scaled + half
    };
    let (q, _) = shifted.numer().div_rem(shifted.denom());
    q
}

fn render(d: &BigInt, k: u32) -> String {
    let digits = d.magnitude().to_string();
    let k = k as usize;
    let padded = if digits.len() <= k {
        let mut s = "0".repeat(k + 1 - digits.len());
        s.push_str(&digits);
        s
    } else {
        digits
    };
    let (int, frac) = padded.split_at(padded.len() - k);
    let mut out = String::new();
    if d.is_negative() {
        out.push('-');
    }
    out.push_str(int);
    if k > 0 {
        out.push('.');
        out.push_str(frac);
    }
    out
}

/// Decimal string `d` with `k` fractional digits and `|r - d| < 10^-k`.
///
/// The digits are the truncation of `r` whenever the approximation interval
/// decides it. A real sitting on (or within the reachable precision of) a
/// digit boundary cannot always be truncated, and then the nearest `k`-digit
/// decimal of the approximant is returned, which still meets the bound.
pub fn to_decimal(r: &CReal, k: u32) -> String {
    if let Some(q) = r.exact() {
        return render(&scaled_trunc(&q, k), k);
    }
    let base = decimal_precision(k);
    let mut last = None;
    for extra in [0u32, 8, 32] {
        let n = base + extra;
        if let Some(cap) = r.precision_cap() {
            if extra > 0 && n > cap.max(base) {
                break;
            }
        }
        let a = r.approximant(n);
        let eps = rational::pow2_neg(n as u64);
        let lo = scaled_trunc(&(&a - &eps), k);
        let hi = scaled_trunc(&(&a + &eps), k);
        if lo == hi {
            return render(&lo, k);
        }
        last = Some(a);
    }
    let a = last.expect("at least one approximant");
    render(&scaled_round(&a, k), k)
}
