//! Named constructive constants and the Taylor sine.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use once_cell::race::OnceBox;

use super::{CReal, CRealError, CauchySequence};
use crate::rational::{self, Rational};

// ---------------------------------------------------------------- heron

const HERON_CACHE: usize = 40;
static HERON: [OnceBox<(BigInt, BigInt)>; HERON_CACHE] = [const { OnceBox::new() }; HERON_CACHE];

fn heron_step(p: &BigInt, q: &BigInt) -> (BigInt, BigInt) {
    // (x + 2/x)/2 with x = p/q; the pair stays coprime with q > 0
    (p * p + ((q * q) << 1u32), (p * q) << 1u32)
}

/// `k`-th Heron iterate for `sqrt(2)` starting at `3/2`.
fn heron_iterate(k: u32) -> Rational {
    let (p, q) = heron_pair(k);
    Rational::new_raw(p, q)
}

fn heron_pair(k: u32) -> (BigInt, BigInt) {
    if (k as usize) < HERON_CACHE {
        return HERON[k as usize]
            .get_or_init(|| {
                alloc::boxed::Box::new(if k == 0 {
                    (BigInt::from(3), BigInt::from(2))
                } else {
                    let (p, q) = heron_pair(k - 1);
                    heron_step(&p, &q)
                })
            })
            .clone();
    }
    let mut pair = heron_pair(HERON_CACHE as u32 - 1);
    for _ in HERON_CACHE as u32..=k {
        pair = heron_step(&pair.0, &pair.1);
    }
    pair
}

/// Heron's method. The error of iterate `k >= 1` is at most `2^{-2^k}`; the
/// sequence is indexed so that term `j` is iterate `floor(log2(j + 1))`.
struct Heron;

fn heron_steps_for(n: u32) -> u32 {
    // least k >= 1 with 2^k >= n
    let mut k = 1;
    while (1u64 << k) < n as u64 {
        k += 1;
    }
    k
}

impl CauchySequence for Heron {
    fn term(&self, j: u64) -> Rational {
        heron_iterate(63 - j.saturating_add(1).leading_zeros())
    }
    fn modulus(&self, n: u32) -> u64 {
        (1u64 << heron_steps_for(n)) - 1
    }
    fn approximant(&self, n: u32) -> Rational {
        heron_iterate(heron_steps_for(n))
    }
}

pub fn sqrt2() -> CReal {
    CReal::new(Heron, 1, "heron")
}

// ---------------------------------------------------------------- leibniz

/// Highest precision index at which `pi_leibniz` is cheap (about `2^18`
/// terms).
pub const LEIBNIZ_PRECISION_CAP: u32 = 16;

const LEIBNIZ_CACHE: usize = 25;
static LEIBNIZ: [OnceBox<Rational>; LEIBNIZ_CACHE] = [const { OnceBox::new() }; LEIBNIZ_CACHE];

/// `4 * sum_{k<terms} (-1)^k / (2k+1)` evaluated in fixed point with `w`
/// fractional bits, `w = 2 * bitlen(terms) + 12`. Each summand is floored,
/// so the result is below the exact partial sum by less than
/// `terms * 2^-w <= 2^-12 / terms`.
fn leibniz_partial(terms: u64) -> Rational {
    let bits = 64 - terms.leading_zeros() as u64;
    let w = 2 * bits + 12;
    let sum: BigInt = if w <= 60 {
        let num = 4i64 << w;
        let mut acc = 0i64;
        for k in 0..terms as i64 {
            let t = num / (2 * k + 1);
            if k % 2 == 0 {
                acc += t
            } else {
                acc -= t
            }
        }
        BigInt::from(acc)
    } else if w <= 124 {
        let num = 4i128 << w;
        let mut acc = 0i128;
        let mut k = 0u64;
        while k < terms {
            let t = num / (2 * k as i128 + 1);
            if k.is_multiple_of(2) {
                acc += t
            } else {
                acc -= t
            }
            k += 1;
        }
        BigInt::from(acc)
    } else {
        let num = BigInt::from(4) << w;
        let mut acc = BigInt::zero();
        let mut k = 0u64;
        while k < terms {
            let t = &num / BigInt::from(2 * k + 1);
            if k.is_multiple_of(2) {
                acc += t
            } else {
                acc -= t
            }
            k += 1;
        }
        acc
    };
    Rational::new(sum, BigInt::one() << w)
}

struct Leibniz;

impl CauchySequence for Leibniz {
    fn term(&self, j: u64) -> Rational {
        leibniz_partial(j)
    }
    fn modulus(&self, n: u32) -> u64 {
        if n >= 62 {
            u64::MAX
        } else {
            1u64 << (n + 2)
        }
    }
    fn approximant(&self, n: u32) -> Rational {
        if (n as usize) < LEIBNIZ_CACHE {
            return LEIBNIZ[n as usize]
                .get_or_init(|| alloc::boxed::Box::new(leibniz_partial(self.modulus(n))))
                .clone();
        }
        self.term(self.modulus(n))
    }
    fn precision_cap(&self) -> Option<u32> {
        Some(LEIBNIZ_PRECISION_CAP)
    }
}

pub fn pi_leibniz() -> CReal {
    CReal::new(Leibniz, 1, "leibniz-series+alt-tail-modulus")
}

// ---------------------------------------------------------------- machin

/// `sum_{i<terms} (-1)^i / ((2i+1) x^{2i+1})`
fn arctan_inv(x: u32, terms: u64) -> Rational {
    let x2 = BigInt::from(x) * BigInt::from(x);
    let mut pow = BigInt::from(x);
    let mut acc = Rational::zero();
    for i in 0..terms {
        let t = Rational::new(BigInt::one(), BigInt::from(2 * i + 1) * &pow);
        if i % 2 == 0 {
            acc += t
        } else {
            acc -= t
        }
        pow *= &x2;
    }
    acc
}

/// `16 arctan(1/5) - 4 arctan(1/239)` truncated after `j` terms of each
/// series. Both series alternate with decreasing terms, so truncation costs
/// at most `16/5^{2j+1} + 4/239^{2j+1} <= 4 * 25^-j`.
struct Machin;

impl CauchySequence for Machin {
    fn term(&self, j: u64) -> Rational {
        arctan_inv(5, j) * BigInt::from(16) - arctan_inv(239, j) * BigInt::from(4)
    }
    fn modulus(&self, n: u32) -> u64 {
        let target = BigUint::from(4u32) << n;
        let mut pow = BigUint::one();
        let mut j = 0;
        while pow < target {
            pow *= 25u32;
            j += 1;
        }
        j
    }
}

pub fn pi_machin() -> CReal {
    CReal::new(Machin, 1, "machin")
}

// ---------------------------------------------------------------- e

/// Partial sums `sum_{k<=j} 1/k!`; the tail after `j` is at most `2/(j+1)!`.
struct ESeries;

impl CauchySequence for ESeries {
    fn term(&self, j: u64) -> Rational {
        let mut t = BigInt::one();
        let mut num = BigInt::one();
        for k in (0..j).rev() {
            t *= k + 1;
            num += &t;
        }
        Rational::new(num, t)
    }
    fn modulus(&self, n: u32) -> u64 {
        // least N with (N+1)! >= 2^{n+1}
        let target = BigUint::one() << (n as u64 + 1);
        let mut fact = BigUint::one();
        let mut big_n = 0u64;
        while fact < target {
            big_n += 1;
            fact *= big_n + 1;
            if fact >= target {
                return big_n;
            }
        }
        big_n
    }
}

pub fn e_series() -> CReal {
    CReal::new(ESeries, 1, "e-series")
}

// ---------------------------------------------------------------- sine

struct SinTaylor(CReal);

/// Least `N` with `(2N+1)! >= 2^{2N+1+b}`. With `|y| < 2` the Lagrange
/// remainder after the degree `2N-1` polynomial is then at most `2^-b`.
fn sin_terms(b: u64) -> u64 {
    let mut big_n = 0u64;
    let mut fact = BigUint::one(); // (2N+1)!
    loop {
        if fact >= BigUint::one() << (2 * big_n + 1 + b) {
            return big_n;
        }
        big_n += 1;
        fact *= (2 * big_n) * (2 * big_n + 1);
    }
}

fn sin_poly(y: &Rational, terms: u64) -> Rational {
    let y2 = y * y;
    let mut pow = y.clone();
    let mut fact = BigInt::one();
    let mut acc = Rational::zero();
    for i in 0..terms {
        let t = &pow / &fact;
        if i % 2 == 0 {
            acc += t
        } else {
            acc -= t
        }
        pow *= &y2;
        fact *= BigInt::from((2 * i + 2) * (2 * i + 3));
    }
    acc
}

impl CauchySequence for SinTaylor {
    // term j is within 2^{-(j+1)} of sin(x): half from the Taylor remainder,
    // half from the error of the argument
    fn term(&self, j: u64) -> Rational {
        let p = j.saturating_add(2).min(u32::MAX as u64) as u32;
        let y = self.0.approximant(p);
        sin_poly(&y, sin_terms(p as u64))
    }
    fn modulus(&self, n: u32) -> u64 {
        n as u64
    }
    fn precision_cap(&self) -> Option<u32> {
        self.0.precision_cap().map(|c| c.saturating_sub(2))
    }
}

/// `sin(x)` for `|x| <= 3/2`, checked through `|x.approximant(1)| <= 1`.
pub fn sin_taylor(x: &CReal) -> Result<CReal, CRealError> {
    let a = x.approximant(1);
    if a.abs() > Rational::one() {
        return Err(CRealError::SinDomain(rational::to_text(&a)));
    }
    let provenance = format!("sin-taylor({})", x.provenance());
    let level = x.level_tag().max(1);
    Ok(CReal::new(SinTaylor(x.clone()), level, provenance))
}

// ---------------------------------------------------------------- dyadic series

/// `sum_k 2^{-f(k)}` for a strictly increasing exponent sequence `f`. Only
/// finitely many exponents may be materialized; `floor` then bounds every
/// later exponent from below (`None` means no later term is representable
/// at any precision we can reach).
struct DyadicSeries {
    exponents: Exponents,
}

enum Exponents {
    /// `f(k) = 2k`
    Quarter,
    Finite { exps: Vec<u64>, floor: Option<u64> },
}

impl DyadicSeries {
    fn exponent(&self, k: u64) -> Option<u64> {
        match &self.exponents {
            Exponents::Quarter => Some(2 * k),
            Exponents::Finite { exps, .. } => exps.get(k as usize).copied(),
        }
    }

    /// Lower bound on every exponent after index `j`, if any.
    fn next_floor(&self, j: u64) -> Option<u64> {
        match &self.exponents {
            Exponents::Quarter => Some(2 * (j + 1)),
            Exponents::Finite { exps, floor } => match exps.get(j as usize + 1) {
                Some(&e) => Some(e),
                None => *floor,
            },
        }
    }
}

impl CauchySequence for DyadicSeries {
    fn term(&self, j: u64) -> Rational {
        if let Exponents::Quarter = self.exponents {
            // (4^{j+1} - 1) / (3 * 4^j)
            let four_j = BigInt::one() << (2 * j);
            return Rational::new((&four_j << 2u32) - 1, four_j * 3);
        }
        let mut acc = Rational::zero();
        let mut k = 0;
        while k <= j {
            match self.exponent(k) {
                Some(e) => acc += rational::pow2_neg(e),
                None => break,
            }
            k += 1;
        }
        acc
    }
    fn modulus(&self, n: u32) -> u64 {
        // tail after j is at most 2^{1 - floor(j)}
        let mut j = 0u64;
        loop {
            match self.next_floor(j) {
                None => return j,
                Some(f) if f > n as u64 => return j,
                Some(_) => {}
            }
            if let Exponents::Finite { exps, .. } = &self.exponents {
                if j + 1 >= exps.len() as u64 {
                    return j;
                }
            }
            j += 1;
        }
    }
    fn precision_cap(&self) -> Option<u32> {
        match &self.exponents {
            Exponents::Quarter => None,
            Exponents::Finite { floor, .. } => floor.map(|f| (f - 1).min(u32::MAX as u64) as u32),
        }
    }
}

/// `sum_{k>=0} 2^{-2k} = 4/3`.
pub fn geometric_quarter() -> CReal {
    CReal::new(
        DyadicSeries {
            exponents: Exponents::Quarter,
        },
        1,
        "geometric-series(1/4)",
    )
}

pub const ACKERMANN_MAX_CUTOFF: u64 = 3;

/// Two-argument Ackermann function evaluated with an explicit stack.
/// Returns `None` when the value does not fit in `u64` or more than
/// `max_steps` reductions are needed.
pub fn ackermann(m: u64, n: u64, max_steps: u64) -> Option<u64> {
    let mut stack: Vec<u64> = alloc::vec![m];
    let mut n = n;
    let mut steps = 0u64;
    while let Some(m) = stack.pop() {
        steps += 1;
        if steps > max_steps {
            return None;
        }
        if m == 0 {
            n = n.checked_add(1)?;
        } else if n == 0 {
            stack.push(m - 1);
            n = 1;
        } else {
            stack.push(m - 1);
            stack.push(m);
            n -= 1;
        }
    }
    Some(n)
}

/// `sum_k 2^{-A(k,k)}` with the terms up to `cutoff` materialized. Beyond
/// the cutoff the next diagonal value bounds the tail; for cutoff 3 that is
/// `A(4,4)`, far below any reachable precision.
pub fn ackermann_real(cutoff: u64) -> Result<CReal, CRealError> {
    if cutoff > ACKERMANN_MAX_CUTOFF {
        return Err(CRealError::AckermannCutoff(cutoff));
    }
    let diag = |k: u64| ackermann(k, k, 1 << 20).expect("diagonal value below A(4,4)");
    let exps: Vec<u64> = (0..=cutoff).map(diag).collect();
    let floor = if cutoff < ACKERMANN_MAX_CUTOFF {
        Some(diag(cutoff + 1))
    } else {
        None
    };
    let seq = DyadicSeries {
        exponents: Exponents::Finite { exps, floor },
    };
    Ok(CReal::new(seq, 1, format!("ackermann-series({cutoff})")))
}
