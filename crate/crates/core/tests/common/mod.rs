//! Helpers shared by the integration tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tranca::records::MoveSpec;
use tranca::{Deal, GameRecord, GameState, Move, OutcomeKind, Rules, TileSet};

pub fn random_deal(rules: &Rules, rng: &mut ChaCha8Rng) -> Deal {
    let mut tiles = rules.universe().to_vec();
    tiles.shuffle(rng);
    let hands = tiles.chunks(rules.hand_size).map(|c| c.iter().copied().collect()).collect();
    Deal::new(rules, hands).unwrap()
}

pub fn has_match(state: &GameState) -> bool {
    let hand = state.hand(state.turn());
    match state.board().ends() {
        None => !hand.is_empty(),
        Some((l, r)) => hand.iter().any(|t| t.has(l) || t.has(r)),
    }
}

#[derive(Default)]
pub struct Tally {
    pub games: u32,
    pub blocked: u32,
    pub unequal_ends: u32,
}

/// Plays one random game, checking every invariant after every move.
pub fn checked_playout(rules: Rules, rng: &mut ChaCha8Rng, tally: &mut Tally) {
    let deal = random_deal(&rules, rng);
    let opener = rng.gen_range(0..rules.players);
    let mut state = GameState::new(rules, &deal, opener).unwrap();
    let universe = rules.universe();
    loop {
        let board = state.board().tiles();
        let mut seen = board;
        let mut count = board.len();
        for &h in state.hands() {
            assert!(seen.intersection(h).is_empty(), "a tile is in two places");
            seen = seen.union(h);
            count += h.len();
        }
        assert_eq!(seen, universe);
        assert_eq!(count, universe.len());
        assert!(state.board().is_matched());

        if let Some(outcome) = state.is_terminal() {
            tally.games += 1;
            if outcome.kind != OutcomeKind::DominoOut {
                tally.blocked += 1;
                let (l, r) = state.board().ends().unwrap();
                if rules.max_pip.is_multiple_of(2) {
                    assert_eq!(l, r, "blocked with different ends");
                    assert_eq!(state.blocking_number().unwrap(), l);
                } else if l != r {
                    tally.unequal_ends += 1;
                }
            }
            return;
        }

        let moves = state.legal_moves().unwrap();
        let can_play = has_match(&state);
        if can_play {
            assert!(!moves.contains(&Move::Pass), "pass offered with a playable tile");
            assert!(state.apply_move(Move::Pass).is_err());
        } else {
            assert_eq!(moves, vec![Move::Pass]);
        }
        let m = *moves.choose(rng).unwrap();
        let next = state.apply_move(m).unwrap();
        if m == Move::Pass {
            assert_eq!(next.board(), state.board());
        }
        state = next;
    }
}

pub fn random_record(seed: u64) -> GameRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rules = Rules::standard();
    let deal = random_deal(&rules, &mut rng);
    let opener = rng.gen_range(0..4);
    let mut state = GameState::new(rules, &deal, opener).unwrap();
    while state.is_terminal().is_none() {
        let m = *state.legal_moves().unwrap().choose(&mut rng).unwrap();
        state = state.apply_move(m).unwrap();
    }
    let mut r = GameRecord::from_history(format!("game {seed}"), rules, deal, opener, state.history());
    for m in &mut r.moves {
        if let MoveSpec::Play { side, .. } = &mut m.spec {
            if rng.gen_bool(0.3) {
                *side = None;
            }
        }
    }
    r
}

/// Counts directed lines over the whole double-n set by laying tiles one at
/// a time on the right.
pub fn brute_lines(max_pip: u8) -> u64 {
    fn extend(end: u8, unused: TileSet) -> u64 {
        if unused.is_empty() {
            return 1;
        }
        unused
            .iter()
            .filter_map(|t| t.other(end).map(|o| extend(o, unused.without(t))))
            .sum()
    }
    let all = TileSet::universe(max_pip);
    let mut total = 0;
    for t in all {
        total += extend(t.hi(), all.without(t));
        if !t.is_double() {
            total += extend(t.lo(), all.without(t));
        }
    }
    total
}

