//! A prefix-free machine and its step-bounded halting probabilities.
//!
//! A valid program is `1^L 0` followed by an `L`-bit payload; the payload,
//! read in bijective base 2, is a register-machine index. Programs run on
//! empty input (register 1 is zero) against the empty oracle.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::oracle_tower::{Program, StagedOracle};
use crate::rational::Rational;

/// Default program-length bound for the command line.
pub const DEFAULT_MAX_LEN: u32 = 16;

/// A bit string ordered by length, then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitString(pub Vec<bool>);

impl Ord for BitString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl BitString {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All strings of length `len`, in order.
    pub fn all_of_len(len: u32) -> impl Iterator<Item = BitString> {
        (0u64..1 << len).map(move |v| BitString((0..len).rev().map(|i| v >> i & 1 == 1).collect()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrefixMachine {
    pub max_len: u32,
}

/// `(n, H_n, Omega_n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaApprox {
    pub n: u64,
    pub halted: BTreeSet<BitString>,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRow {
    pub n: u64,
    pub value: Rational,
    pub halted_count: usize,
}

impl PrefixMachine {
    pub fn new(max_len: u32) -> Self {
        assert!(max_len < 64, "program lengths are bounded by 63 bits");
        PrefixMachine { max_len }
    }

    /// Self-delimiting code of a payload.
    pub fn encode_payload(payload: &[bool]) -> BitString {
        let mut bits = alloc::vec![true; payload.len()];
        bits.push(false);
        bits.extend_from_slice(payload);
        BitString(bits)
    }

    /// Payload of a bit string, if it is a valid program of this machine.
    pub fn payload<'a>(&self, bits: &'a BitString) -> Option<&'a [bool]> {
        if bits.len() > self.max_len as usize {
            return None;
        }
        let l = bits.0.iter().position(|&b| !b)?;
        (bits.len() == 2 * l + 1).then(|| &bits.0[l + 1..])
    }

    /// Program denoted by a valid bit string.
    pub fn decode(&self, bits: &BitString) -> Option<Program> {
        let payload = self.payload(bits)?;
        // bijective base 2: index = 2^L - 1 + binary value
        let mut index = (BigUint::one() << payload.len()) - 1u32;
        let mut v = BigUint::zero();
        for &b in payload {
            v = (v << 1u32) + (b as u32);
        }
        index += v;
        Some(Program::from_index(&index))
    }

    /// Every valid program string, in order.
    pub fn valid_programs(&self) -> Vec<BitString> {
        (0..=(self.max_len.saturating_sub(1)) / 2)
            .flat_map(|l| BitString::all_of_len(l).map(|p| Self::encode_payload(&p.0)))
            .collect()
    }

    /// Halting time of each valid program within `n` steps.
    fn halting_times(&self, n: u64) -> Vec<(BitString, Option<u64>)> {
        let oracle = StagedOracle::empty();
        self.valid_programs()
            .into_iter()
            .map(|bits| {
                let p = self.decode(&bits).expect("valid by construction");
                let t = p.compile().halting_time(0, n, &oracle).map(|(t, _)| t);
                (bits, t)
            })
            .collect()
    }

    pub fn enumerate_halting(&self, n: u64) -> BTreeSet<BitString> {
        self.halting_times(n)
            .into_iter()
            .filter_map(|(bits, t)| t.map(|_| bits))
            .collect()
    }

    pub fn omega_n(&self, n: u64) -> OmegaApprox {
        let halted = self.enumerate_halting(n);
        let value = weight(halted.iter());
        OmegaApprox { n, halted, value }
    }

    /// Rows for `n = 0..=n_max`, from a single pass of simulations.
    pub fn omega_trace(&self, n_max: u64) -> Vec<TraceRow> {
        let mut times: Vec<(u64, BitString)> = self
            .halting_times(n_max)
            .into_iter()
            .filter_map(|(bits, t)| t.map(|t| (t, bits)))
            .collect();
        times.sort();
        let mut rows = Vec::with_capacity(n_max as usize + 1);
        let mut value = Rational::zero();
        let mut count = 0;
        let mut next = times.iter().peekable();
        for n in 0..=n_max {
            while let Some((_, bits)) = next.next_if(|(t, _)| *t <= n) {
                value += bit_weight(bits);
                count += 1;
            }
            rows.push(TraceRow {
                n,
                value: value.clone(),
                halted_count: count,
            });
        }
        rows
    }

    /// `sum 2^-|p|` over every valid program.
    pub fn kraft_sum(&self) -> Rational {
        weight(self.valid_programs().iter())
    }

    /// Checks that no valid string is a proper prefix of another by
    /// examining every string of length at most `max_len`.
    pub fn is_prefix_free(&self) -> bool {
        let mut valid: Vec<BitString> = Vec::new();
        for len in 0..=self.max_len {
            for s in BitString::all_of_len(len) {
                if self.payload(&s).is_some() {
                    valid.push(s);
                }
            }
        }
        let set: BTreeSet<&Vec<bool>> = valid.iter().map(|s| &s.0).collect();
        valid
            .iter()
            .all(|s| (0..s.len()).all(|k| !set.contains(&s.0[..k].to_vec())))
    }
}

impl Default for PrefixMachine {
    fn default() -> Self {
        PrefixMachine::new(DEFAULT_MAX_LEN)
    }
}

fn bit_weight(bits: &BitString) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << bits.len())
}

fn weight<'a>(strings: impl Iterator<Item = &'a BitString>) -> Rational {
    strings.fold(Rational::zero(), |acc, s| acc + bit_weight(s))
}

/// `n,omega_num,omega_den,halted_count` rows with a header line.
pub fn trace_csv(rows: &[TraceRow]) -> String {
    let mut out = String::from("n,omega_num,omega_den,halted_count\n");
    for r in rows {
        out.push_str(&alloc::format!(
            "{},{},{},{}\n",
            r.n,
            r.value.numer(),
            r.value.denom(),
            r.halted_count
        ));
    }
    out
}
