//! Does some legal game end in a given frame?
//!
//! Depth-first search over move sequences. Hands are never fixed up front:
//! each player's record of the end values they passed on, together with how
//! many tiles they have played, is enough to decide at every node whether
//! the tiles not yet on the table can still be dealt consistently. That test
//! is exact for the final position, so the search is complete.

use std::collections::{BTreeSet, HashSet};

use crate::engine::{Move, Rules, Side};
use crate::tile::{Tile, TileSet};

use super::frames::{team_size, Frame};

/// Move-level pruning active for one frame.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct NodeCuts {
    /// Cut any pass by the losing team on two distinct values other than the
    /// blocking value.
    pub p2: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Mode {
    /// Stop at the first game found.
    Decide,
    /// Visit every game and collect the distinct final hands.
    Enumerate,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FrameStats {
    pub nodes: u64,
    pub memo_hits: u64,
    pub deal_prunes: u64,
    pub p2_cuts: u64,
}

impl FrameStats {
    pub fn add(&mut self, o: &FrameStats) {
        self.nodes += o.nodes;
        self.memo_hits += o.memo_hits;
        self.deal_prunes += o.deal_prunes;
        self.p2_cuts += o.p2_cuts;
    }
}

/// A game reaching the frame: the deal and the moves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct FoundGame {
    pub opener: usize,
    pub hands: Vec<TileSet>,
    pub moves: Vec<(usize, Move)>,
}

#[derive(Debug, Clone, Default)]
pub(crate) struct FrameResult {
    pub game: Option<FoundGame>,
    /// Distinct final hands, in enumerate mode.
    pub finals: BTreeSet<Vec<TileSet>>,
    pub stats: FrameStats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct OutOfNodes;

#[derive(Clone, Copy)]
struct Node {
    played: TileSet,
    ends: Option<(u8, u8)>,
    turn: usize,
    streak: usize,
    /// Values each player has passed on.
    passed: [u8; 4],
    /// Tiles each player has played.
    count: [u8; 4],
    by: [TileSet; 4],
    team_played: [u8; 2],
}

impl Node {
    fn key(&self) -> u128 {
        let ends = match self.ends {
            None => 0u128,
            Some((l, r)) => 0x40 | (l.min(r) as u128) << 3 | l.max(r) as u128,
        };
        let mut k = self.played.bits() as u128;
        k = k << 7 | ends;
        k = k << 2 | self.turn as u128;
        k = k << 2 | self.streak as u128;
        for p in 0..4 {
            k = k << 7 | self.passed[p] as u128;
            k = k << 3 | self.count[p] as u128;
        }
        k
    }
}

struct Search<'a> {
    rules: &'a Rules,
    frame: &'a Frame,
    mode: Mode,
    cuts: NodeCuts,
    loser: Option<usize>,
    blocking: u8,
    players: usize,
    hand: u8,
    team_of: [usize; 4],
    quota: [u8; 2],
    node_cap: u64,
    failed: HashSet<u128>,
    path: Vec<(usize, Move)>,
    result: FrameResult,
}

/// Searches one frame. `node_cap` bounds the work; running out is reported
/// separately from finding nothing.
pub(crate) fn search_frame(
    rules: &Rules,
    frame: &Frame,
    mode: Mode,
    cuts: NodeCuts,
    node_cap: u64,
) -> Result<FrameResult, OutOfNodes> {
    let t = team_size(rules);
    let h = rules.hand_size;
    let quota = [
        (t * h - frame.residual[0].len()) as u8,
        (t * h - frame.residual[1].len()) as u8,
    ];
    let mut team_of = [0usize; 4];
    for (p, slot) in team_of.iter_mut().enumerate().take(rules.players) {
        *slot = rules.team_of(p).index();
    }
    let mut s = Search {
        rules,
        frame,
        mode,
        cuts,
        loser: frame.loser().map(|t| t.index()),
        blocking: frame.ends.0,
        players: rules.players,
        hand: h as u8,
        team_of,
        quota,
        node_cap,
        failed: HashSet::new(),
        path: Vec::new(),
        result: FrameResult::default(),
    };
    for opener in 0..rules.players {
        let root = Node {
            played: TileSet::EMPTY,
            ends: None,
            turn: opener,
            streak: 0,
            passed: [0; 4],
            count: [0; 4],
            by: [TileSet::EMPTY; 4],
            team_played: [0; 2],
        };
        if s.dfs(&root)? {
            break;
        }
    }
    Ok(s.result)
}

impl Search<'_> {
    fn next(&self, p: usize) -> usize {
        (p + 1) % self.players
    }

    /// Players (as a bit mask) who could be holding `t` now.
    fn holders(&self, n: &Node, t: Tile) -> u8 {
        let values = t.value_mask();
        let mut m = 0u8;
        for p in 0..self.players {
            if n.passed[p] & values != 0 {
                continue;
            }
            if self.frame.board.contains(t) {
                let team = self.team_of[p];
                if n.count[p] + 1 >= self.hand || n.team_played[team] >= self.quota[team] {
                    continue;
                }
            } else if !self.frame.residual[self.team_of[p]].contains(t) {
                continue;
            }
            m |= 1 << p;
        }
        m
    }

    /// Whether the tiles off the table can be dealt to fit every constraint
    /// collected so far. Exact once the board is complete.
    fn dealable(&self, n: &Node) -> bool {
        let mut all = [0u8; 16];
        let mut to_play = [0u8; 16];
        for t in self.frame.board.difference(n.played) {
            let m = self.holders(n, t);
            if m == 0 {
                return false;
            }
            all[m as usize] += 1;
            to_play[m as usize] += 1;
        }
        for t in self.frame.residual[0].union(self.frame.residual[1]) {
            let m = self.holders(n, t);
            if m == 0 {
                return false;
            }
            all[m as usize] += 1;
        }
        let full = 1usize << self.players;
        for s in 1..full {
            let (mut need_all, mut need_play) = (0u32, 0u32);
            let mut sub = s;
            loop {
                need_all += all[sub] as u32;
                need_play += to_play[sub] as u32;
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & s;
            }
            let (mut cap_all, mut cap_play) = (0u32, 0u32);
            for p in 0..self.players {
                if s & (1 << p) != 0 {
                    cap_all += (self.hand - n.count[p]) as u32;
                    cap_play += (self.hand - 1 - n.count[p]) as u32;
                }
            }
            if need_all > cap_all || need_play > cap_play {
                return false;
            }
        }
        for team in 0..2 {
            let members: usize = (0..self.players)
                .filter(|&p| self.team_of[p] == team)
                .fold(0, |m, p| m | 1 << p);
            let mut need = 0u32;
            let mut sub = members;
            loop {
                need += to_play[sub] as u32;
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & members;
            }
            if need > (self.quota[team] - n.team_played[team]) as u32 {
                return false;
            }
        }
        true
    }

    /// Every way to split each team's residual among its players.
    fn final_hands(&self, n: &Node, limit: usize) -> Vec<Vec<TileSet>> {
        let mut out = Vec::new();
        let tiles: Vec<Tile> = self.frame.residual[0].union(self.frame.residual[1]).to_vec();
        let mut hands = vec![TileSet::EMPTY; self.players];
        self.assign(n, &tiles, &mut hands, limit, &mut out);
        out
    }

    fn assign(&self, n: &Node, tiles: &[Tile], hands: &mut [TileSet], limit: usize, out: &mut Vec<Vec<TileSet>>) {
        if out.len() >= limit {
            return;
        }
        let Some((&t, rest)) = tiles.split_first() else {
            if (0..self.players).all(|p| hands[p].len() == (self.hand - n.count[p]) as usize) {
                out.push(hands.to_vec());
            }
            return;
        };
        for p in 0..self.players {
            let fits = self.frame.residual[self.team_of[p]].contains(t)
                && n.passed[p] & t.value_mask() == 0
                && hands[p].len() < (self.hand - n.count[p]) as usize;
            if fits {
                hands[p].insert(t);
                self.assign(n, rest, hands, limit, out);
                hands[p].remove(t);
            }
        }
    }

    /// Called on a position where the last play blocked the game.
    fn finish(&mut self, n: &Node) -> bool {
        let (l, r) = n.ends.expect("blocked positions have a board");
        if n.played != self.frame.board
            || (l.min(r), l.max(r)) != self.frame.ends
            || n.team_played != self.quota
            || !self.dealable(n)
        {
            return false;
        }
        match self.mode {
            Mode::Decide => {
                let finals = self.final_hands(n, 1);
                let Some(fin) = finals.into_iter().next() else {
                    return false;
                };
                let hands = (0..self.players).map(|p| fin[p].union(n.by[p])).collect();
                self.result.game = Some(FoundGame {
                    opener: self.path[0].0,
                    hands,
                    moves: self.path.clone(),
                });
                true
            }
            Mode::Enumerate => {
                for fin in self.final_hands(n, usize::MAX) {
                    self.result.finals.insert(fin);
                }
                false
            }
        }
    }

    fn is_blocked(&self, n: &Node) -> bool {
        let (l, r) = n.ends.expect("blocked positions have a board");
        TileSet::with_value(l)
            .union(TileSet::with_value(r))
            .intersection(self.rules.universe())
            .is_subset(n.played)
    }

    /// Explores a child; `Ok(true)` once a game is found in decide mode.
    fn visit(&mut self, child: Node, m: (usize, Move)) -> Result<bool, OutOfNodes> {
        self.path.push(m);
        let found = if matches!(m.1, Move::Play { .. }) && self.is_blocked(&child) {
            self.finish(&child)
        } else if child.played == self.frame.board {
            false
        } else if !self.dealable(&child) {
            self.result.stats.deal_prunes += 1;
            false
        } else {
            self.dfs(&child)?
        };
        self.path.pop();
        Ok(found)
    }

    fn dfs(&mut self, n: &Node) -> Result<bool, OutOfNodes> {
        self.result.stats.nodes += 1;
        if self.result.stats.nodes > self.node_cap {
            return Err(OutOfNodes);
        }
        let memo = self.mode == Mode::Decide;
        let key = n.key();
        if memo && self.failed.contains(&key) {
            self.result.stats.memo_hits += 1;
            return Ok(false);
        }
        let p = n.turn;
        let team = self.team_of[p];
        let can_play = n.count[p] + 1 < self.hand && n.team_played[team] < self.quota[team];
        let unplayed = self.frame.board.difference(n.played);

        let play = |s: &mut Self, t: Tile, side: Side, ends: (u8, u8)| -> Result<bool, OutOfNodes> {
            let mut c = *n;
            c.played.insert(t);
            c.ends = Some(ends);
            c.turn = s.next(p);
            c.streak = 0;
            c.count[p] += 1;
            c.by[p].insert(t);
            c.team_played[team] += 1;
            s.visit(c, (p, Move::Play { tile: t, side }))
        };

        match n.ends {
            None => {
                if can_play {
                    for t in unplayed {
                        if play(self, t, Side::Right, (t.lo(), t.hi()))? {
                            return Ok(true);
                        }
                    }
                }
            }
            Some((l, r)) => {
                if can_play {
                    let open = TileSet::with_value(l).union(TileSet::with_value(r));
                    for t in unplayed.intersection(open) {
                        if n.passed[p] & t.value_mask() != 0 {
                            continue;
                        }
                        let left = t.other(l).map(|o| (o, r));
                        let right = t.other(r).map(|o| (l, o));
                        if let Some(e) = left {
                            if play(self, t, Side::Left, e)? {
                                return Ok(true);
                            }
                        }
                        if let Some(e) = right {
                            let same = left.is_some_and(|le| (le.0.min(le.1), le.0.max(le.1)) == (e.0.min(e.1), e.0.max(e.1)));
                            if !same && play(self, t, Side::Right, e)? {
                                return Ok(true);
                            }
                        }
                    }
                }
                if n.streak + 1 < self.players {
                    let cut = self.cuts.p2
                        && self.loser == Some(team)
                        && l != r
                        && l != self.blocking
                        && r != self.blocking;
                    if cut {
                        self.result.stats.p2_cuts += 1;
                    } else {
                        let mut c = *n;
                        c.passed[p] |= (1 << l) | (1 << r);
                        c.turn = self.next(p);
                        c.streak += 1;
                        if self.visit(c, (p, Move::Pass))? {
                            return Ok(true);
                        }
                    }
                }
            }
        }
        if memo {
            self.failed.insert(key);
        }
        Ok(false)
    }
}
