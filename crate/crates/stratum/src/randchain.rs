//! Seeded generator of admissible toy chains.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stratum_core::chains::{is_admissible_prefix, Chain, Rules, ToySystem};

/// Grant tokens drawn from `0..TOKENS`.
pub const TOKENS: u64 = 8;

/// Systems of an admissible chain with `levels` levels (at least 2): each
/// level adds one or two fresh grants or raises the oracle level.
/// Candidates that fail the admissibility check under `budget` are redrawn.
pub fn random_systems(rng: &mut impl Rng, levels: usize, budget: u32) -> Vec<ToySystem> {
    loop {
        let systems = draw(rng, levels);
        let chain = Chain::from_systems("random", &systems);
        if is_admissible_prefix(&chain, levels as u64 - 1, budget).is_admissible() {
            return systems;
        }
    }
}

fn draw(rng: &mut impl Rng, levels: usize) -> Vec<ToySystem> {
    let mut tokens: Vec<u64> = (0..TOKENS).collect();
    tokens.shuffle(rng);
    let mut fresh = tokens.into_iter();
    let mut sys = ToySystem::new(
        fresh.by_ref().take(rng.random_range(0..=2)),
        Rules {
            rational: rng.random_bool(0.8),
            field: rng.random_bool(0.8),
            oracle_level: 0,
        },
    );
    let mut out = vec![sys.clone()];
    while out.len() < levels {
        if sys.rules.oracle_level < 2 && rng.random_bool(0.25) {
            sys.rules.oracle_level += 1;
        } else {
            for _ in 0..rng.random_range(1..=2) {
                match fresh.next() {
                    Some(k) => sys = sys.with_grant(k),
                    None => sys.rules.oracle_level += 1,
                }
            }
        }
        out.push(sys.clone());
    }
    out
}

/// `count` chains of 2 to `max_levels` levels from `seed`.
pub fn random_family(seed: u64, count: usize, max_levels: usize, budget: u32) -> Vec<Vec<ToySystem>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let levels = rng.random_range(2..=max_levels.max(2));
            random_systems(&mut rng, levels, budget)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use stratum_core::chains::DEFAULT_BUDGET;

    #[test]
    fn seeded_and_admissible() {
        let a = random_family(7, 4, 5, DEFAULT_BUDGET);
        assert_eq!(a, random_family(7, 4, 5, DEFAULT_BUDGET));
        for systems in &a {
            assert!((2..=5).contains(&systems.len()));
            let c = Chain::from_systems("c", systems);
            assert!(is_admissible_prefix(&c, systems.len() as u64 - 1, DEFAULT_BUDGET).is_admissible());
        }
    }
}
