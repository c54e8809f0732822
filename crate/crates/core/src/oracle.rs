//! Brute force over whole games on small tables, using nothing but the
//! engine's public moves. Slow and simple on purpose: it is the reference
//! the prover is checked against.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::engine::{Deal, EngineError, GameState, OutcomeKind, Rules};
use crate::tile::{Tile, TileSet};

/// How a blocked game finished: the board's tiles, its end values (smaller
/// first) and every player's hand.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockedConfig {
    pub board: TileSet,
    pub ends: (u8, u8),
    pub hands: Vec<TileSet>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleSummary {
    pub deals: usize,
    pub games: u64,
    pub blocked_games: u64,
    /// Best winning score over blocked games that have a winner.
    pub max_blocked_score: Option<u32>,
    #[serde(skip)]
    pub configs: BTreeSet<BlockedConfig>,
    pub distinct_configs: usize,
}

/// Plays every legal game from every deal and every opener.
pub fn brute_force(rules: &Rules) -> Result<OracleSummary, EngineError> {
    rules.validate()?;
    let mut summary = OracleSummary {
        deals: 0,
        games: 0,
        blocked_games: 0,
        max_blocked_score: None,
        configs: BTreeSet::new(),
        distinct_configs: 0,
    };
    let tiles = rules.universe().to_vec();
    let mut hands = vec![TileSet::EMPTY; rules.players];
    let mut deals = Vec::new();
    deal_all(rules, &tiles, &mut hands, &mut deals);
    for hands in deals {
        let deal = Deal::new(rules, hands)?;
        summary.deals += 1;
        for opener in 0..rules.players {
            let start = GameState::new(*rules, &deal, opener)?;
            play_out(&start, &mut summary)?;
        }
    }
    summary.distinct_configs = summary.configs.len();
    Ok(summary)
}

fn deal_all(rules: &Rules, tiles: &[Tile], hands: &mut [TileSet], out: &mut Vec<Vec<TileSet>>) {
    let Some((&t, rest)) = tiles.split_first() else {
        out.push(hands.to_vec());
        return;
    };
    for p in 0..rules.players {
        if hands[p].len() < rules.hand_size {
            hands[p].insert(t);
            deal_all(rules, rest, hands, out);
            hands[p].remove(t);
        }
    }
}

fn play_out(state: &GameState, summary: &mut OracleSummary) -> Result<(), EngineError> {
    if let Some(outcome) = state.is_terminal() {
        summary.games += 1;
        if outcome.kind != OutcomeKind::DominoOut {
            summary.blocked_games += 1;
            if outcome.kind == OutcomeKind::Blocked {
                summary.max_blocked_score = summary.max_blocked_score.max(Some(outcome.points));
            }
            let (l, r) = state.board().ends().expect("blocked boards are non-empty");
            summary.configs.insert(BlockedConfig {
                board: state.board().tiles(),
                ends: (l.min(r), l.max(r)),
                hands: state.hands().to_vec(),
            });
        }
        return Ok(());
    }
    for m in state.legal_moves()? {
        play_out(&state.apply_move(m)?, summary)?;
    }
    Ok(())
}
