//! Pip arithmetic over the tile set: totals, hands that cannot exist, and
//! the per-value ceiling on a ten-tile block.

use thiserror::Error;

use crate::chains::{min_board_sum, ChainError};
use crate::tile::{Tile, TileSet, MAX_PIP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("expected exactly 4 distinct pip values, got {0}")]
    WrongCardinality(usize),
    #[error("only {available} tiles outside the excluded set, {wanted} requested")]
    InsufficientTiles { available: usize, wanted: usize },
    #[error(transparent)]
    Chain(#[from] ChainError),
}

/// Pip total of the double-six set.
pub fn total_pips() -> u32 {
    total_pips_in(MAX_PIP)
}

pub fn total_pips_in(max_pip: u8) -> u32 {
    TileSet::universe(max_pip).pips()
}

/// Whether seven tiles can be chosen that avoid every value in `values`
/// (a bit mask), which must name exactly four values.
pub fn exists_hand_avoiding(values: u8) -> Result<bool, BoundsError> {
    let count = (values & 0x7f).count_ones() as usize;
    if count != 4 || values & 0x80 != 0 {
        return Err(BoundsError::WrongCardinality(count));
    }
    Ok(hand_avoiding_possible(values, 7))
}

/// Same question for any set of values and hand size.
pub fn hand_avoiding_possible(values: u8, hand_size: usize) -> bool {
    TileSet::universe(MAX_PIP)
        .difference(TileSet::with_any_value(values))
        .len()
        >= hand_size
}

/// Cheapest `count` tiles outside `excluded`, with the tiles themselves.
///
/// Ties on pips go to the lower tile index.
pub fn lowest_residual(excluded: TileSet, count: usize) -> Result<(u32, Vec<Tile>), BoundsError> {
    let mut pool = TileSet::universe(MAX_PIP).difference(excluded).to_vec();
    if pool.len() < count {
        return Err(BoundsError::InsufficientTiles {
            available: pool.len(),
            wanted: count,
        });
    }
    pool.sort_by_key(|t| (t.pips(), t.index()));
    pool.truncate(count);
    Ok((pool.iter().map(|t| t.pips()).sum(), pool))
}

/// Largest pip total of any `n` tiles.
pub fn top_hand_sum(n: usize) -> u32 {
    let mut pips: Vec<u32> = TileSet::universe(MAX_PIP).iter().map(Tile::pips).collect();
    pips.sort_unstable_by(|a, b| b.cmp(a));
    pips.iter().take(n).sum()
}

/// The 15 ways to pair up six values, each as three tiles.
pub fn perfect_matchings(values: [u8; 6]) -> Vec<[Tile; 3]> {
    fn go(rest: &[u8], acc: &mut Vec<Tile>, out: &mut Vec<[Tile; 3]>) {
        let Some((&first, tail)) = rest.split_first() else {
            out.push([acc[0], acc[1], acc[2]]);
            return;
        };
        for i in 0..tail.len() {
            let mut remaining = tail.to_vec();
            let partner = remaining.remove(i);
            acc.push(Tile::of(first, partner));
            go(&remaining, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::with_capacity(15);
    go(&values, &mut Vec::new(), &mut out);
    out
}

/// The six values other than `k`.
pub fn other_values(k: u8) -> [u8; 6] {
    let mut out = [0u8; 6];
    let mut i = 0;
    for v in 0..=MAX_PIP {
        if v != k {
            out[i] = v;
            i += 1;
        }
    }
    out
}

/// Ceiling on the winning score of a ten-tile block at `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundRow {
    pub k: u8,
    pub min_board_sum: u32,
    pub min_winner_residual: u32,
    pub max_possible: u32,
    pub witness_low_tiles: Vec<Tile>,
    /// Connector tiles of the board that admits the witness.
    pub connectors: [Tile; 3],
}

/// Tiles the winning team keeps at least, in a ten-tile block where the
/// losing team played once: 14 - (10 - 1).
pub const TEN_TILE_WINNER_KEEPS: usize = 5;

pub fn bound_row(k: u8) -> Result<BoundRow, BoundsError> {
    let board_min = min_board_sum(k, 10)?;
    let k_tiles = TileSet::with_value(k);
    let mut best: Option<(u32, Vec<Tile>, [Tile; 3])> = None;
    for connectors in perfect_matchings(other_values(k)) {
        let board = connectors.iter().fold(k_tiles, |s, &t| s.with(t));
        let (sum, tiles) = lowest_residual(board, TEN_TILE_WINNER_KEEPS)?;
        if best.as_ref().is_none_or(|(b, _, _)| sum < *b) {
            best = Some((sum, tiles, connectors));
        }
    }
    let (residual, witness, connectors) = best.expect("fifteen matchings");
    Ok(BoundRow {
        k,
        min_board_sum: board_min,
        min_winner_residual: residual,
        max_possible: total_pips() - board_min - residual,
        witness_low_tiles: witness,
        connectors,
    })
}

pub fn bound_table() -> Result<Vec<BoundRow>, BoundsError> {
    (0..=MAX_PIP).map(bound_row).collect()
}

/// The table's ceiling carried to larger boards: minimum board sum for `n`
/// tiles and the cheapest five tiles avoiding `k`.
pub fn extended_bound(k: u8, n: usize) -> Result<u32, BoundsError> {
    let board = min_board_sum(k, n)?;
    let (residual, _) = lowest_residual(TileSet::with_value(k), TEN_TILE_WINNER_KEEPS)?;
    Ok(total_pips().saturating_sub(board + residual))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(a: u8, b: u8) -> Tile {
        Tile::new(a, b).unwrap()
    }

    #[test]
    fn totals() {
        assert_eq!(total_pips(), 168);
        assert_eq!(total_pips(), 8 * 21);
        assert_eq!(total_pips_in(0), 0);
    }

    #[test]
    fn top_sums() {
        assert_eq!(top_hand_sum(13), 112);
        assert_eq!(top_hand_sum(12), 106);
        assert_eq!(top_hand_sum(28), 168);
        assert_eq!(top_hand_sum(1), 12);
    }

    #[test]
    fn residual_examples() {
        let (sum, tiles) = lowest_residual(TileSet::with_value(0), 5).unwrap();
        assert_eq!(sum, 18);
        let set: TileSet = tiles.iter().copied().collect();
        let core: TileSet = [t(1, 1), t(1, 2), t(1, 3), t(2, 2)].into_iter().collect();
        assert!(core.is_subset(set));
        assert!(set.contains(t(2, 3)) || set.contains(t(1, 4)));

        let board_at_1 = TileSet::with_value(1).with(t(0, 6)).with(t(2, 5)).with(t(3, 4));
        assert_eq!(lowest_residual(board_at_1, 5).unwrap().0, 13);

        assert_eq!(lowest_residual(TileSet::EMPTY, 1).unwrap(), (0, vec![t(0, 0)]));
        assert_eq!(
            lowest_residual(TileSet::universe(6), 1),
            Err(BoundsError::InsufficientTiles { available: 0, wanted: 1 })
        );
    }

    #[test]
    fn four_values_leave_six_tiles() {
        assert_eq!(exists_hand_avoiding(0b1111), Ok(false));
        assert_eq!(exists_hand_avoiding(0b111), Err(BoundsError::WrongCardinality(3)));
        assert!(hand_avoiding_possible(0b111, 7));
    }

    #[test]
    fn fifteen_matchings() {
        let m = perfect_matchings(other_values(0));
        assert_eq!(m.len(), 15);
        for triple in &m {
            let values = triple.iter().fold(0u8, |a, t| a | t.value_mask());
            assert_eq!(values, 0b111_1110);
        }
    }

    #[test]
    fn first_rows() {
        let rows = bound_table().unwrap();
        let first: Vec<(u32, u32, u32)> = rows[..3]
            .iter()
            .map(|r| (r.min_board_sum, r.min_winner_residual, r.max_possible))
            .collect();
        assert_eq!(first, vec![(42, 18, 108), (48, 13, 107), (54, 10, 104)]);
        let as_set = |v: &[Tile]| v.iter().copied().collect::<TileSet>();
        assert_eq!(
            as_set(&rows[0].witness_low_tiles),
            as_set(&[t(1, 1), t(1, 2), t(1, 3), t(2, 2), t(2, 3)])
        );
        assert_eq!(
            as_set(&rows[1].witness_low_tiles),
            as_set(&[t(0, 0), t(0, 2), t(0, 3), t(2, 2), t(0, 4)])
        );
    }
}
