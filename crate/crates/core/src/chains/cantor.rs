//! Characteristic-bit encoding of strictly increasing sequences.

use alloc::string::String;
use alloc::vec::Vec;

use super::ChainError;

/// A finite prefix of a characteristic sequence.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ChainCode {
    bits: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decoded {
    /// Positions of ones that are followed by a later one in the prefix.
    Set(Vec<u64>),
    /// The prefix holds fewer than two ones, so no element is certified.
    InsufficientEvidence,
}

impl ChainCode {
    pub fn from_bits(bits: Vec<bool>) -> Self {
        ChainCode { bits }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, n: u64) -> Option<bool> {
        self.bits.get(n as usize).copied()
    }

    pub fn ones_seen(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// `0`/`1` text.
    pub fn to_text(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    pub fn parse(text: &str) -> Result<Self, ChainError> {
        let bits = text
            .trim()
            .chars()
            .enumerate()
            .map(|(i, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(ChainError::BadBit(i)),
            })
            .collect::<Result<_, _>>()?;
        Ok(ChainCode { bits })
    }
}

/// First `len` bits of the characteristic sequence of `a`. Reading stops at
/// the first value `>= len`. A value that does not exceed its predecessor
/// is rejected with its position in the enumeration.
pub fn encode_set_to_bits(
    a: impl IntoIterator<Item = u64>,
    len: usize,
) -> Result<ChainCode, ChainError> {
    let mut bits = alloc::vec![false; len];
    let mut prev: Option<u64> = None;
    for (pos, v) in a.into_iter().enumerate() {
        if let Some(p) = prev {
            if v <= p {
                return Err(ChainError::NotIncreasing {
                    position: pos as u64,
                    value: v,
                    previous: p,
                });
            }
        }
        if v >= len as u64 {
            break;
        }
        bits[v as usize] = true;
        prev = Some(v);
    }
    Ok(ChainCode { bits })
}

/// Enumerates the ones of `b` that have a later one; the final one of the
/// prefix only certifies that the sequence continues.
pub fn decode_bits_to_set(b: &ChainCode) -> Decoded {
    let ones: Vec<u64> = b
        .bits
        .iter()
        .enumerate()
        .filter(|(_, &bit)| bit)
        .map(|(i, _)| i as u64)
        .collect();
    if ones.len() < 2 {
        return Decoded::InsufficientEvidence;
    }
    Decoded::Set(ones[..ones.len() - 1].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn primes() -> impl Iterator<Item = u64> {
        (2u64..).filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
    }

    #[test]
    fn encode_examples() {
        assert_eq!(encode_set_to_bits((0..).step_by(2), 6).unwrap().to_text(), "101010");
        assert_eq!(encode_set_to_bits(0.., 5).unwrap().to_text(), "11111");
        assert_eq!(encode_set_to_bits(primes(), 10).unwrap().to_text(), "0011010100");
        let err = encode_set_to_bits([1, 4, 4, 7], 10).unwrap_err();
        assert_eq!(err, ChainError::NotIncreasing { position: 2, value: 4, previous: 4 });
    }

    #[test]
    fn decode_examples() {
        let evens = ChainCode::parse("1010101010").unwrap();
        assert_eq!(decode_bits_to_set(&evens), Decoded::Set(vec![0, 2, 4, 6]));
        let first: Vec<u64> = primes().take(20).collect();
        let code = encode_set_to_bits(primes(), *first.last().unwrap() as usize + 2).unwrap();
        let Decoded::Set(set) = decode_bits_to_set(&code) else { panic!() };
        assert_eq!(set, first[..19]);
        assert_eq!(decode_bits_to_set(&ChainCode::parse("0000").unwrap()), Decoded::InsufficientEvidence);
        assert_eq!(decode_bits_to_set(&ChainCode::parse("0100").unwrap()), Decoded::InsufficientEvidence);
        assert!(ChainCode::parse("0120").is_err());
    }

    proptest! {
        #[test]
        fn roundtrip(set in proptest::collection::btree_set(0u64..200, 1..64), extra in 0u64..5) {
            let elems: Vec<u64> = set.into_iter().collect();
            // one extra element past the last certifies it
            let evidence = elems.last().unwrap() + 1 + extra;
            let mut all = elems.clone();
            all.push(evidence);
            let code = encode_set_to_bits(all.iter().copied(), evidence as usize + 1).unwrap();
            prop_assert_eq!(decode_bits_to_set(&code), Decoded::Set(elems));
        }

        #[test]
        fn zeros_never_decode(len in 0usize..100) {
            let code = ChainCode::from_bits(vec![false; len]);
            prop_assert_eq!(decode_bits_to_set(&code), Decoded::InsufficientEvidence);
        }
    }
}
