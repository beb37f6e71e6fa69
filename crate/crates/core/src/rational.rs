//! Exact rationals and the handful of dyadic helpers shared by the crate.

use alloc::string::{String, ToString};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// `2^{-n}`.
pub fn pow2_neg(n: u64) -> Rational {
    Rational::new_raw(BigInt::one(), BigInt::one() << n)
}

/// `2^{n}`.
pub fn pow2(n: u64) -> Rational {
    Rational::from_integer(BigInt::one() << n)
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `|a - b| <= 2^{-n}`.
pub fn within(a: &Rational, b: &Rational, n: u64) -> bool {
    // |a-b| * 2^n <= 1, evaluated on cross products to skip normalization
    let lhs = (a.numer() * b.denom() - b.numer() * a.denom()).abs() << n;
    let rhs = a.denom() * b.denom();
    lhs <= rhs
}

/// `|a - b| > 2^{-n}`.
pub fn separated(a: &Rational, b: &Rational, n: u64) -> bool {
    !within(a, b, n)
}

/// Smallest `k` with `2^k >= x` for a positive integer `x`.
pub fn ceil_log2(x: &BigUint) -> u64 {
    if x <= &BigUint::one() {
        return 0;
    }
    let bits = x.bits();
    let pow = BigUint::one() << (bits - 1);
    if &pow == x {
        bits - 1
    } else {
        bits
    }
}

/// Floor of a rational as a big integer.
pub fn floor(q: &Rational) -> BigInt {
    q.numer().div_floor(q.denom())
}

/// Canonical text of a rational: `p` for integers, `p/q` otherwise.
pub fn to_text(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        alloc::format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p` or `p/q` (optional leading `-`). Rejects a zero denominator.
pub fn parse(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Height `max(|p|, q)` of a rational in lowest terms (at least 1).
pub fn height(q: &Rational) -> BigUint {
    let p = q.numer().abs().to_biguint().unwrap_or_default();
    let d = q.denom().to_biguint().unwrap_or_default();
    core::cmp::max(core::cmp::max(p, d), BigUint::one())
}

/// Number of decimal digits of `|p|`, plus those of `q` when `q != 1`,
/// plus one for a minus sign.
pub fn digit_size(q: &Rational) -> u32 {
    let mut size = q.numer().magnitude().to_string().len() as u32;
    if !q.denom().is_one() {
        size += q.denom().to_string().len() as u32;
    }
    if q.is_negative() {
        size += 1;
    }
    size
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn within_is_inclusive() {
        assert!(within(&ratio(1, 2), &ratio(1, 4), 2));
        assert!(!within(&ratio(1, 2), &ratio(1, 4), 3));
        assert!(within(&int(3), &int(3), 200));
    }

    #[test]
    fn text_roundtrip() {
        for s in ["0", "4/3", "-7/2", "12"] {
            assert_eq!(to_text(&parse(s).unwrap()), s);
        }
        assert_eq!(to_text(&parse("6/4").unwrap()), "3/2");
        assert!(parse("1/0").is_none());
        assert!(parse("x").is_none());
    }

    #[test]
    fn sizes() {
        assert_eq!(digit_size(&ratio(4, 3)), 2);
        assert_eq!(digit_size(&ratio(-1, 6)), 3);
        assert_eq!(digit_size(&int(1)), 1);
        assert_eq!(height(&ratio(-3, 2)), BigUint::from(3u32));
        assert_eq!(height(&int(0)), BigUint::from(1u32));
    }

    #[test]
    fn ceil_log2_values() {
        let c = |v: u32| ceil_log2(&BigUint::from(v));
        assert_eq!((c(1), c(2), c(3), c(4), c(5), c(1024), c(1025)), (0, 1, 2, 2, 3, 10, 11));
    }
}
