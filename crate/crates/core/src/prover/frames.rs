//! Final-position hypotheses ("frames") and the arithmetic filter that
//! decides which board shapes are worth searching.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::bounds::{bound_table, lowest_residual, BoundsError};
use crate::chains::{chain_exists, min_board_sum};
use crate::engine::{Rules, Team};
use crate::tile::{Tile, TileSet, MAX_PIP};

/// A blocked final position with the hands split only by team: the end
/// values, the set of tiles on the board, and what each team still holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Frame {
    /// End values, smaller first.
    pub ends: (u8, u8),
    pub board: TileSet,
    /// Tiles left in hand, indexed by team (A, B).
    pub residual: [TileSet; 2],
}

impl Frame {
    pub fn team_pips(&self, team: Team) -> u32 {
        self.residual[team.index()].pips()
    }

    /// Winning team and its score; `None` when both teams hold equal pips.
    pub fn score(&self) -> Option<(Team, u32)> {
        let a = self.team_pips(Team::A);
        let b = self.team_pips(Team::B);
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some((Team::A, b)),
            std::cmp::Ordering::Greater => Some((Team::B, a)),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn loser(&self) -> Option<Team> {
        self.score().map(|(w, _)| w.other())
    }

    /// Tiles the team must have played for these residuals.
    pub fn team_played(&self, rules: &Rules, team: Team) -> usize {
        team_size(rules) * rules.hand_size - self.residual[team.index()].len()
    }

    /// Board made of every `k` tile plus one tile pairing up each other
    /// value: the smallest possible block at `k`.
    pub fn is_minimal_block(&self, rules: &Rules) -> bool {
        let (a, b) = self.ends;
        if a != b {
            return false;
        }
        let k_tiles = TileSet::with_value(a).intersection(rules.universe());
        if !k_tiles.is_subset(self.board) {
            return false;
        }
        let connectors = self.board.difference(k_tiles);
        let mut seen = 0u8;
        for t in connectors {
            if t.is_double() || seen & t.value_mask() != 0 {
                return false;
            }
            seen |= t.value_mask();
        }
        let others = ((1u16 << (rules.max_pip + 1)) - 1) as u8 & !(1 << a);
        seen == others
    }

    /// The losing team never played, on a smallest block.
    pub fn loser_silent_minimal(&self, rules: &Rules) -> bool {
        match self.loser() {
            Some(l) => self.team_played(rules, l) == 0 && self.is_minimal_block(rules),
            None => false,
        }
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ends {}-{} board {} A {} B {}",
            self.ends.0, self.ends.1, self.board, self.residual[0], self.residual[1]
        )
    }
}

impl Serialize for Frame {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let codes = |set: TileSet| set.iter().map(Tile::code).collect::<Vec<_>>();
        let mut st = s.serialize_struct("Frame", 4)?;
        st.serialize_field("ends", &[self.ends.0, self.ends.1])?;
        st.serialize_field("board", &codes(self.board))?;
        st.serialize_field("residual_a", &codes(self.residual[0]))?;
        st.serialize_field("residual_b", &codes(self.residual[1]))?;
        st.end()
    }
}

pub(crate) fn team_size(rules: &Rules) -> usize {
    rules.players / 2
}

/// Largest board a blocked game can leave: every player keeps a tile.
pub fn max_board_tiles(rules: &Rules) -> usize {
    rules.players * (rules.hand_size - 1)
}

/// Which boards Stage A admits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Scope {
    /// Ten-tile boards at rows of the bound table reaching the target.
    TenTile,
    /// Every board size, filtered by a ceiling that assumes nothing about play.
    AllBoards,
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scope::TenTile => write!(f, "ten-tile"),
            Scope::AllBoards => write!(f, "all-boards"),
        }
    }
}

/// Ceiling on the winning score of a block at `k` with `n` board tiles on the
/// standard table, using only hand sizes: each player keeps a tile and plays
/// at most six.
pub fn all_boards_ceiling(k: u8, n: usize) -> Result<Option<u32>, BoundsError> {
    let rules = Rules::standard();
    let t = team_size(&rules);
    let h = rules.hand_size;
    let per_team = t * (h - 1);
    if n > max_board_tiles(&rules) {
        return Ok(None);
    }
    let Ok(board) = min_board_sum(k, n) else {
        return Ok(None);
    };
    let k_tiles = TileSet::with_value(k);
    let winner_keeps = (t * h - n.min(per_team)).max(t);
    let loser_keeps = t * h - n.saturating_sub(per_team);
    let (low, _) = lowest_residual(k_tiles, winner_keeps)?;
    let mut high: Vec<u32> = TileSet::universe(MAX_PIP)
        .difference(k_tiles)
        .iter()
        .map(Tile::pips)
        .collect();
    high.sort_unstable_by(|a, b| b.cmp(a));
    let top: u32 = high.iter().take(loser_keeps).sum();
    let total = TileSet::universe(MAX_PIP).pips();
    Ok(Some(top.min(total.saturating_sub(board + low))))
}

/// Board shapes `(k, tiles)` whose ceiling reaches `target`.
pub fn stage_a_candidates(target: u32, scope: Scope) -> Result<BTreeSet<(u8, usize)>, BoundsError> {
    let mut out = BTreeSet::new();
    match scope {
        Scope::TenTile => {
            for row in bound_table()? {
                if row.max_possible >= target {
                    out.insert((row.k, 10));
                }
            }
        }
        Scope::AllBoards => {
            for k in 0..=MAX_PIP {
                for n in 1..=max_board_tiles(&Rules::standard()) {
                    if all_boards_ceiling(k, n)?.is_some_and(|c| c >= target) {
                        out.insert((k, n));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Which final positions to list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameQuery {
    /// Keep only positions whose winner scores at least this; `None` keeps
    /// every blocked position, ties included.
    pub target: Option<u32>,
    /// Restrict to blocks at `k` with the given board size.
    pub boards: Option<BTreeSet<(u8, usize)>>,
    /// Restrict to these exact boards.
    pub fixed_board: Option<TileSet>,
}

impl FrameQuery {
    pub fn all() -> FrameQuery {
        FrameQuery {
            target: None,
            boards: None,
            fixed_board: None,
        }
    }

    pub fn reaching(target: u32, boards: Option<BTreeSet<(u8, usize)>>) -> FrameQuery {
        FrameQuery {
            target: Some(target),
            boards,
            fixed_board: None,
        }
    }
}

/// Every frame matching the query, sorted.
pub fn enumerate_frames(rules: &Rules, query: &FrameQuery) -> Vec<Frame> {
    let universe = rules.universe();
    let total = universe.pips();
    let budget = query.target.map_or(total, |t| total.saturating_sub(t));
    let mut out = Vec::new();
    for a in 0..=rules.max_pip {
        for b in a..=rules.max_pip {
            let sizes: Option<BTreeSet<usize>> = match &query.boards {
                None => None,
                Some(set) => {
                    if a != b {
                        continue;
                    }
                    let s: BTreeSet<usize> = set.iter().filter(|(k, _)| *k == a).map(|&(_, n)| n).collect();
                    if s.is_empty() {
                        continue;
                    }
                    Some(s)
                }
            };
            let forced = TileSet::with_value(a)
                .union(TileSet::with_value(b))
                .intersection(universe);
            let mut boards = Vec::new();
            if let Some(fixed) = query.fixed_board {
                if forced.is_subset(fixed) {
                    boards.push(fixed);
                }
            } else {
                let mut others = universe.difference(forced).to_vec();
                others.sort_by_key(|t| (t.pips(), t.index()));
                let max_extra = max_board_tiles(rules).saturating_sub(forced.len());
                let mut pick = |set: TileSet| boards.push(set);
                subsets_within(&others, forced, forced.pips(), budget, max_extra, &mut pick);
            }
            for board in boards {
                let n = board.len();
                if n > max_board_tiles(rules) || sizes.as_ref().is_some_and(|s| !s.contains(&n)) {
                    continue;
                }
                if board.pips() > budget || !chain_exists(board, a, b) {
                    continue;
                }
                split_residuals(rules, (a, b), board, query.target, &mut out);
            }
        }
    }
    out.sort();
    out
}

/// Calls `f` on `base` plus every subset of `items` (sorted by pips) whose
/// total stays within `budget`, with at most `max_extra` items.
fn subsets_within(
    items: &[Tile],
    base: TileSet,
    pips: u32,
    budget: u32,
    max_extra: usize,
    f: &mut dyn FnMut(TileSet),
) {
    f(base);
    if max_extra == 0 {
        return;
    }
    for (i, &t) in items.iter().enumerate() {
        if pips + t.pips() > budget {
            break;
        }
        subsets_within(&items[i + 1..], base.with(t), pips + t.pips(), budget, max_extra - 1, f);
    }
}

fn split_residuals(rules: &Rules, ends: (u8, u8), board: TileSet, target: Option<u32>, out: &mut Vec<Frame>) {
    let rest = rules.universe().difference(board);
    let t = team_size(rules);
    let h = rules.hand_size;
    let size_ok = |s: TileSet| (t..=t * h).contains(&s.len());
    match target {
        None => {
            let tiles = rest.to_vec();
            for mask in 0u32..(1 << tiles.len()) {
                let a: TileSet = tiles
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, &t)| t)
                    .collect();
                let b = rest.difference(a);
                if size_ok(a) && size_ok(b) {
                    out.push(Frame {
                        ends,
                        board,
                        residual: [a, b],
                    });
                }
            }
        }
        Some(target) => {
            let rest_pips = rest.pips();
            let Some(budget) = rest_pips.checked_sub(target) else {
                return;
            };
            let mut tiles = rest.to_vec();
            tiles.sort_by_key(|t| (t.pips(), t.index()));
            let mut winners = Vec::new();
            let mut pick = |w: TileSet| winners.push(w);
            subsets_within(&tiles, TileSet::EMPTY, 0, budget, t * h, &mut pick);
            for w in winners {
                let l = rest.difference(w);
                let (wp, lp) = (w.pips(), l.pips());
                if lp < target || lp <= wp || !size_ok(w) || !size_ok(l) {
                    continue;
                }
                out.push(Frame {
                    ends,
                    board,
                    residual: [w, l],
                });
                out.push(Frame {
                    ends,
                    board,
                    residual: [l, w],
                });
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ten_tile_candidates() {
        let at = |t| stage_a_candidates(t, Scope::TenTile).unwrap();
        assert_eq!(at(108), BTreeSet::from([(0, 10)]));
        assert_eq!(at(109), BTreeSet::new());
        assert_eq!(at(105), BTreeSet::from([(0, 10), (1, 10)]));
    }

    #[test]
    fn all_boards_ceiling_includes_ten_tile_rows() {
        let all = stage_a_candidates(108, Scope::AllBoards).unwrap();
        assert!(all.contains(&(0, 10)));
        assert!(stage_a_candidates(112, Scope::AllBoards)
            .unwrap()
            .iter()
            .all(|&(_, n)| n >= 10));
    }

    #[test]
    fn minimal_block_detection() {
        let rules = Rules::standard();
        let zeros = TileSet::with_value(0);
        let board = zeros
            .with(Tile::of(1, 2))
            .with(Tile::of(3, 4))
            .with(Tile::of(5, 6));
        let rest = rules.universe().difference(board);
        let f = Frame {
            ends: (0, 0),
            board,
            residual: [rest, TileSet::EMPTY],
        };
        assert!(f.is_minimal_block(&rules));
        let g = Frame {
            board: board.with(Tile::of(1, 1)),
            ..f
        };
        assert!(!g.is_minimal_block(&rules));
    }

    #[test]
    fn frames_respect_target() {
        let rules = Rules::standard();
        let board = TileSet::with_value(0)
            .with(Tile::of(1, 2))
            .with(Tile::of(3, 4))
            .with(Tile::of(5, 6));
        let q = FrameQuery {
            target: Some(108),
            boards: None,
            fixed_board: Some(board),
        };
        let frames = enumerate_frames(&rules, &q);
        assert!(!frames.is_empty());
        for f in &frames {
            let (_, score) = f.score().unwrap();
            assert!(score >= 108);
            assert_eq!(f.board, board);
            assert_eq!(f.board.len() + f.residual[0].len() + f.residual[1].len(), 28);
        }
    }
}
