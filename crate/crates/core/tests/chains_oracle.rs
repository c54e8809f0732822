use tranca::chains::{
    count_full_chains, count_full_chains_in, enumerate_blocked_boards, enumerate_blocked_boards_in,
    min_board_sum, min_board_sum_in,
};
use tranca::{Tile, TileSet};

mod common;
use common::brute_lines;

#[test]
fn line_counts_match_brute_force() {
    for n in 0..=4 {
        assert_eq!(count_full_chains_in(n), brute_lines(n), "double-{n}");
    }
    assert_eq!(brute_lines(3), 0);
}

#[test]
fn full_set_line_count() {
    assert_eq!(count_full_chains(), 7_959_229_931_520);
}

#[test]
fn min_board_sum_agrees_with_chain_enumeration() {
    for k in [0u8, 3, 6] {
        let boards: Vec<_> = enumerate_blocked_boards(k, 12).collect();
        for tiles in 10..=12 {
            let from_chains = boards
                .iter()
                .filter(|b| b.tile_count == tiles)
                .map(|b| b.pip_sum)
                .min();
            assert_eq!(min_board_sum(k, tiles).ok(), from_chains, "k={k} tiles={tiles}");
        }
    }
}

#[test]
fn min_board_sum_at_zero() {
    // frozen from the chain enumeration above
    let expected = [(10, 42), (11, 44), (12, 46)];
    for (tiles, sum) in expected {
        assert_eq!(min_board_sum(0, tiles), Ok(sum), "tiles={tiles}");
    }
}

#[test]
fn reduced_set_boards_agree_with_set_route() {
    for k in 0..=4u8 {
        let boards: Vec<_> = enumerate_blocked_boards_in(4, k, 15).collect();
        for tiles in 1..=15 {
            let from_chains = boards
                .iter()
                .filter(|b| b.tile_count == tiles)
                .map(|b| b.pip_sum)
                .min();
            assert_eq!(min_board_sum_in(4, k, tiles).ok(), from_chains, "k={k} tiles={tiles}");
        }
        assert!(boards.iter().all(|b| b.is_valid(4)));
    }
}

#[test]
fn every_ten_tile_board_holds_all_zeros() {
    let zeros = TileSet::with_value(0);
    for b in enumerate_blocked_boards(0, 10) {
        assert!(zeros.is_subset(b.chain.tiles()));
        assert!(b.chain.tiles().contains(Tile::new(0, 0).unwrap()));
    }
}
