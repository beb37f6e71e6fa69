//! Cantor pairing on arbitrary-precision naturals.

use num_bigint::BigUint;
use num_traits::One;

/// `pair(a, b) = (a + b)(a + b + 1)/2 + b`, a bijection `N x N -> N`.
pub fn pair(a: &BigUint, b: &BigUint) -> BigUint {
    let s = a + b;
    let tri = (&s * (&s + 1u32)) >> 1u32;
    tri + b
}

/// Inverse of [`pair`].
pub fn unpair(z: &BigUint) -> (BigUint, BigUint) {
    // w = floor((sqrt(8z + 1) - 1) / 2)
    let w = (((z << 3u32) + BigUint::one()).sqrt() - BigUint::one()) >> 1u32;
    let tri = (&w * (&w + 1u32)) >> 1u32;
    let b = z - tri;
    let a = &w - &b;
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_values() {
        let p = |a: u32, b: u32| pair(&BigUint::from(a), &BigUint::from(b));
        assert_eq!(p(0, 0), BigUint::from(0u32));
        assert_eq!(p(1, 0), BigUint::from(1u32));
        assert_eq!(p(0, 1), BigUint::from(2u32));
        assert_eq!(p(1, 3), BigUint::from(13u32));
    }

    proptest! {
        #[test]
        fn unpair_inverts_pair(a in any::<u64>(), b in any::<u64>()) {
            let (a, b) = (BigUint::from(a), BigUint::from(b));
            prop_assert_eq!(unpair(&pair(&a, &b)), (a, b));
        }

        #[test]
        fn pair_inverts_unpair(z in any::<u128>()) {
            let z = BigUint::from(z);
            let (a, b) = unpair(&z);
            prop_assert_eq!(pair(&a, &b), z);
        }
    }
}
