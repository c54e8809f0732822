use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tranca::bounds::{exists_hand_avoiding, hand_avoiding_possible, lowest_residual, top_hand_sum};
use tranca::TileSet;

/// Next larger integer with the same number of set bits.
fn gosper(x: u32) -> u32 {
    let c = x & x.wrapping_neg();
    let r = x + c;
    (((r ^ x) >> 2) / c) | r
}

/// Checks every `k`-tile hand of the full set; stops early when `stop` holds.
fn any_hand(k: u32, mut stop: impl FnMut(u32) -> bool) -> (bool, u64) {
    let mut x = (1u32 << k) - 1;
    let mut seen = 0;
    while x < 1 << 28 {
        seen += 1;
        if stop(x) {
            return (true, seen);
        }
        x = gosper(x);
    }
    (false, seen)
}

fn value_sets(size: u32) -> Vec<u8> {
    (0u8..128).filter(|m| m.count_ones() == size).collect()
}

#[test]
fn gosper_walks_every_hand() {
    assert_eq!(any_hand(7, |_| false), (false, 1_184_040));
}

#[test]
fn no_hand_avoids_four_values() {
    let sets = value_sets(4);
    assert_eq!(sets.len(), 35);
    for values in sets {
        let touching = TileSet::with_any_value(values).bits();
        let (found, _) = any_hand(7, |h| h & touching == 0);
        assert!(!found, "{values:07b}");
        assert_eq!(exists_hand_avoiding(values), Ok(false));
    }
}

#[test]
fn three_values_can_be_avoided() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut sets = value_sets(3);
    sets.shuffle(&mut rng);
    for &values in &sets[..5] {
        let touching = TileSet::with_any_value(values).bits();
        let (found, _) = any_hand(7, |h| h & touching == 0);
        assert!(found);
        assert_eq!(found, hand_avoiding_possible(values, 7));
    }
}

#[test]
fn lowest_residual_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut tiles: Vec<u32> = (0..28).collect();
    for _ in 0..6 {
        tiles.shuffle(&mut rng);
        let excluded = tiles[..10].iter().fold(0u32, |m, &i| m | 1 << i);
        let excluded = TileSet::from_bits(excluded);
        let mut best = u32::MAX;
        any_hand(5, |h| {
            if h & excluded.bits() == 0 {
                best = best.min(TileSet::from_bits(h).pips());
            }
            false
        });
        assert_eq!(lowest_residual(excluded, 5).unwrap().0, best);
    }
}

#[test]
fn top_sums_match_brute_force() {
    for n in [1u32, 2, 3] {
        let mut best = 0;
        any_hand(n, |h| {
            best = best.max(TileSet::from_bits(h).pips());
            false
        });
        assert_eq!(top_hand_sum(n as usize), best);
    }
}
