//! Rules of partnership dominoes as a pure state machine.
//!
//! A [`GameState`] is never mutated in place: [`GameState::apply_move`]
//! returns the successor. Players are numbered from zero internally; even
//! seats form team A and odd seats team B, which gives the usual 1&3 vs 2&4
//! split for four players and one player per team for two.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tile::{universe_size, Tile, TileSet, MAX_PIP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("the game is already over")]
    GameOver,
    #[error("player {player} does not hold {tile}")]
    TileNotHeld { player: usize, tile: Tile },
    #[error("{tile} does not match the {side} end")]
    EndMismatch { tile: Tile, side: Side },
    #[error("pass refused: player {player} holds a playable tile")]
    ForcedPlayViolation { player: usize },
    #[error("the opening must be [6,6]")]
    OpeningRule,
    #[error("the game is not blocked")]
    NotBlocked,
    #[error("blocked board has different ends {0} and {1}")]
    EndsDiffer(u8, u8),
    #[error("invalid deal: {0}")]
    InvalidDeal(String),
    #[error("invalid rules: {0}")]
    InvalidRules(String),
}

/// Table configuration. [`Rules::standard`] is the four-player double-six game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rules {
    pub max_pip: u8,
    pub players: usize,
    pub hand_size: usize,
    /// First-hand convention: the holder of [6,6] opens with it.
    pub double_six_opens: bool,
}

impl Rules {
    pub const fn standard() -> Rules {
        Rules {
            max_pip: MAX_PIP,
            players: 4,
            hand_size: 7,
            double_six_opens: false,
        }
    }

    /// A reduced table; every tile of the double-`max_pip` set must be dealt.
    pub fn reduced(max_pip: u8, players: usize, hand_size: usize) -> Result<Rules, EngineError> {
        let rules = Rules {
            max_pip,
            players,
            hand_size,
            double_six_opens: false,
        };
        rules.validate()?;
        Ok(rules)
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        if self.max_pip > MAX_PIP {
            return Err(EngineError::InvalidRules(format!("max pip {}", self.max_pip)));
        }
        if !(self.players == 2 || self.players == 4) {
            return Err(EngineError::InvalidRules(format!(
                "{} players (expected 2 or 4)",
                self.players
            )));
        }
        if self.players * self.hand_size != universe_size(self.max_pip) {
            return Err(EngineError::InvalidRules(format!(
                "{} hands of {} do not cover {} tiles",
                self.players,
                self.hand_size,
                universe_size(self.max_pip)
            )));
        }
        if self.double_six_opens && self.max_pip != MAX_PIP {
            return Err(EngineError::InvalidRules("double-six opening needs the full set".into()));
        }
        Ok(())
    }

    pub const fn universe(&self) -> TileSet {
        TileSet::universe(self.max_pip)
    }

    pub const fn team_of(&self, player: usize) -> Team {
        if player.is_multiple_of(2) {
            Team::A
        } else {
            Team::B
        }
    }

    pub const fn next_player(&self, player: usize) -> usize {
        (player + 1) % self.players
    }

    pub fn team_players(&self, team: Team) -> impl Iterator<Item = usize> {
        let start = team.seat_parity();
        (start..self.players).step_by(2)
    }
}

impl Default for Rules {
    fn default() -> Rules {
        Rules::standard()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Team {
    A,
    B,
}

impl Team {
    pub const fn other(self) -> Team {
        match self {
            Team::A => Team::B,
            Team::B => Team::A,
        }
    }

    const fn seat_parity(self) -> usize {
        match self {
            Team::A => 0,
            Team::B => 1,
        }
    }

    pub const fn index(self) -> usize {
        self.seat_parity()
    }
}

impl fmt::Display for Team {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Team::A => write!(f, "A"),
            Team::B => write!(f, "B"),
        }
    }
}

/// Initial hands, one per seat.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Deal {
    hands: Vec<TileSet>,
}

impl Deal {
    /// Checks the hands are disjoint, full-sized and cover the universe.
    pub fn new(rules: &Rules, hands: Vec<TileSet>) -> Result<Deal, EngineError> {
        rules.validate()?;
        if hands.len() != rules.players {
            return Err(EngineError::InvalidDeal(format!(
                "{} hands for {} players",
                hands.len(),
                rules.players
            )));
        }
        let mut seen = TileSet::EMPTY;
        for (p, h) in hands.iter().enumerate() {
            if h.len() != rules.hand_size {
                return Err(EngineError::InvalidDeal(format!(
                    "player {} holds {} tiles",
                    p + 1,
                    h.len()
                )));
            }
            if !h.is_subset(rules.universe()) {
                return Err(EngineError::InvalidDeal(format!(
                    "player {} holds tiles outside the double-{} set",
                    p + 1,
                    rules.max_pip
                )));
            }
            if let Some(t) = seen.intersection(*h).iter().next() {
                return Err(EngineError::InvalidDeal(format!("{t} dealt twice")));
            }
            seen = seen.union(*h);
        }
        Ok(Deal { hands })
    }

    pub fn hands(&self) -> &[TileSet] {
        &self.hands
    }

    pub fn hand(&self, player: usize) -> TileSet {
        self.hands[player]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Left => write!(f, "left"),
            Side::Right => write!(f, "right"),
        }
    }
}

/// A tile as laid on the table: `left` faces the chain's left end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Oriented {
    pub left: u8,
    pub right: u8,
}

impl Oriented {
    pub fn tile(self) -> Tile {
        Tile::of(self.left, self.right)
    }

    pub fn flipped(self) -> Oriented {
        Oriented {
            left: self.right,
            right: self.left,
        }
    }
}

impl fmt::Display for Oriented {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.left, self.right)
    }
}

/// The line of tiles on the table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BoardChain {
    placed: VecDeque<Oriented>,
}

impl BoardChain {
    pub fn new() -> BoardChain {
        BoardChain::default()
    }

    /// Builds a chain from oriented tiles, checking adjacency and distinctness.
    pub fn from_oriented(tiles: &[Oriented]) -> Option<BoardChain> {
        let mut seen = TileSet::EMPTY;
        for w in tiles.windows(2) {
            if w[0].right != w[1].left {
                return None;
            }
        }
        for o in tiles {
            if !seen.insert(o.tile()) {
                return None;
            }
        }
        Some(BoardChain {
            placed: tiles.iter().copied().collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.placed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.placed.is_empty()
    }

    /// `(left_end, right_end)`, or `None` for an empty table.
    pub fn ends(&self) -> Option<(u8, u8)> {
        Some((self.placed.front()?.left, self.placed.back()?.right))
    }

    pub fn placed(&self) -> impl Iterator<Item = Oriented> + '_ {
        self.placed.iter().copied()
    }

    pub fn tiles(&self) -> TileSet {
        self.placed.iter().map(|o| o.tile()).collect()
    }

    pub fn pips(&self) -> u32 {
        self.placed.iter().map(|o| o.tile().pips()).sum()
    }

    /// The end value a tile would attach to on `side`.
    pub fn end(&self, side: Side) -> Option<u8> {
        let (l, r) = self.ends()?;
        Some(match side {
            Side::Left => l,
            Side::Right => r,
        })
    }

    /// Whether `tile` can be placed on `side` (any side when empty).
    pub fn accepts(&self, tile: Tile, side: Side) -> bool {
        match self.end(side) {
            None => true,
            Some(v) => tile.has(v),
        }
    }

    fn place(&mut self, tile: Tile, side: Side) {
        let Some(end) = self.end(side) else {
            self.placed.push_back(Oriented {
                left: tile.lo(),
                right: tile.hi(),
            });
            return;
        };
        let far = tile.other(end).expect("placement checked by caller");
        match side {
            Side::Left => self.placed.push_front(Oriented {
                left: far,
                right: end,
            }),
            Side::Right => self.placed.push_back(Oriented {
                left: end,
                right: far,
            }),
        }
    }

    pub fn reversed(&self) -> BoardChain {
        BoardChain {
            placed: self.placed.iter().rev().map(|o| o.flipped()).collect(),
        }
    }

    /// Adjacent tiles share their touching pip.
    pub fn is_matched(&self) -> bool {
        self.placed
            .iter()
            .zip(self.placed.iter().skip(1))
            .all(|(a, b)| a.right == b.left)
    }
}

impl fmt::Display for BoardChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.placed {
            write!(f, "{o}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    Play { tile: Tile, side: Side },
    Pass,
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Play { tile, side } => write!(f, "{tile} {side}"),
            Move::Pass => write!(f, "pass"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OutcomeKind {
    DominoOut,
    Blocked,
    BlockedTie,
}

impl fmt::Display for OutcomeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OutcomeKind::DominoOut => write!(f, "DominoOut"),
            OutcomeKind::Blocked => write!(f, "Blocked"),
            OutcomeKind::BlockedTie => write!(f, "BlockedTie"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Outcome {
    pub kind: OutcomeKind,
    pub winner: Option<Team>,
    pub points: u32,
    /// Common end value of a blocked board. `None` for domino-out games and
    /// for blocked boards whose ends differ (possible only on odd reduced sets).
    pub blocking_number: Option<u8>,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if let Some(k) = self.blocking_number {
            write!(f, " at {k}")?;
        }
        match self.winner {
            Some(t) => write!(f, " team {t} {}", self.points),
            None => write!(f, " no winner {}", self.points),
        }
    }
}

/// A position in a game: hands, table, seat to move and the move history.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GameState {
    rules: Rules,
    hands: Vec<TileSet>,
    board: BoardChain,
    turn: usize,
    pass_streak: usize,
    history: Vec<(usize, Move)>,
}

impl GameState {
    /// Start of a game: `opener` moves first on an empty table.
    pub fn new(rules: Rules, deal: &Deal, opener: usize) -> Result<GameState, EngineError> {
        rules.validate()?;
        if deal.hands().len() != rules.players {
            return Err(EngineError::InvalidDeal("deal does not match rules".into()));
        }
        if opener >= rules.players {
            return Err(EngineError::InvalidDeal(format!("opener {} out of range", opener + 1)));
        }
        if rules.double_six_opens && !deal.hand(opener).contains(Tile::of(6, 6)) {
            return Err(EngineError::OpeningRule);
        }
        Ok(GameState {
            rules,
            hands: deal.hands().to_vec(),
            board: BoardChain::new(),
            turn: opener,
            pass_streak: 0,
            history: Vec::new(),
        })
    }

    /// An arbitrary position, for analysis. Checks conservation and chain matching.
    pub fn from_position(
        rules: Rules,
        hands: Vec<TileSet>,
        board: BoardChain,
        turn: usize,
    ) -> Result<GameState, EngineError> {
        rules.validate()?;
        if hands.len() != rules.players || turn >= rules.players {
            return Err(EngineError::InvalidDeal("position does not match rules".into()));
        }
        let mut seen = board.tiles();
        if seen.len() != board.len() || !board.is_matched() {
            return Err(EngineError::InvalidDeal("board chain is not a valid line".into()));
        }
        for h in &hands {
            if !seen.is_disjoint(*h) {
                return Err(EngineError::InvalidDeal("tile held twice".into()));
            }
            seen = seen.union(*h);
        }
        if seen != rules.universe() {
            return Err(EngineError::InvalidDeal("position does not conserve tiles".into()));
        }
        Ok(GameState {
            rules,
            hands,
            board,
            turn,
            pass_streak: 0,
            history: Vec::new(),
        })
    }

    pub fn rules(&self) -> &Rules {
        &self.rules
    }

    pub fn hands(&self) -> &[TileSet] {
        &self.hands
    }

    pub fn hand(&self, player: usize) -> TileSet {
        self.hands[player]
    }

    pub fn board(&self) -> &BoardChain {
        &self.board
    }

    pub fn turn(&self) -> usize {
        self.turn
    }

    pub fn pass_streak(&self) -> usize {
        self.pass_streak
    }

    pub fn history(&self) -> &[(usize, Move)] {
        &self.history
    }

    pub fn team_pips(&self, team: Team) -> u32 {
        self.rules.team_players(team).map(|p| self.hands[p].pips()).sum()
    }

    /// Tiles that would match an end for anyone holding them.
    fn end_tiles(&self) -> TileSet {
        match self.board.ends() {
            None => self.rules.universe(),
            Some((l, r)) => TileSet::with_value(l).union(TileSet::with_value(r)),
        }
    }

    fn plays_for(&self, player: usize) -> Vec<Move> {
        let hand = self.hands[player];
        if self.board.is_empty() {
            if self.rules.double_six_opens && self.history.is_empty() {
                return vec![Move::Play {
                    tile: Tile::of(6, 6),
                    side: Side::Right,
                }];
            }
            return hand
                .iter()
                .map(|tile| Move::Play {
                    tile,
                    side: Side::Right,
                })
                .collect();
        }
        let mut out = Vec::new();
        for tile in hand.intersection(self.end_tiles()) {
            for side in [Side::Left, Side::Right] {
                if self.board.accepts(tile, side) {
                    out.push(Move::Play { tile, side });
                }
            }
        }
        out
    }

    /// Legal moves for the player to move; exactly `[Pass]` when stuck.
    pub fn legal_moves(&self) -> Result<Vec<Move>, EngineError> {
        if self.is_terminal().is_some() {
            return Err(EngineError::GameOver);
        }
        let plays = self.plays_for(self.turn);
        if plays.is_empty() {
            Ok(vec![Move::Pass])
        } else {
            Ok(plays)
        }
    }

    pub fn apply_move(&self, m: Move) -> Result<GameState, EngineError> {
        if self.is_terminal().is_some() {
            return Err(EngineError::GameOver);
        }
        let player = self.turn;
        let mut next = self.clone();
        match m {
            Move::Pass => {
                if !self.plays_for(player).is_empty() {
                    return Err(EngineError::ForcedPlayViolation { player });
                }
                next.pass_streak += 1;
            }
            Move::Play { tile, side } => {
                if !self.hands[player].contains(tile) {
                    return Err(EngineError::TileNotHeld { player, tile });
                }
                if self.board.is_empty()
                    && self.rules.double_six_opens
                    && self.history.is_empty()
                    && tile != Tile::of(6, 6)
                {
                    return Err(EngineError::OpeningRule);
                }
                if !self.board.accepts(tile, side) {
                    return Err(EngineError::EndMismatch { tile, side });
                }
                next.hands[player].remove(tile);
                next.board.place(tile, side);
                next.pass_streak = 0;
            }
        }
        next.history.push((player, m));
        next.turn = self.rules.next_player(player);
        Ok(next)
    }

    /// True when the table is non-empty and nobody holds a tile matching an end.
    pub fn is_blocked(&self) -> bool {
        if self.board.is_empty() {
            return false;
        }
        let open = self.end_tiles();
        self.hands.iter().all(|h| h.is_disjoint(open))
    }

    pub fn is_terminal(&self) -> Option<Outcome> {
        if let Some(p) = self.hands.iter().position(|h| h.is_empty()) {
            let team = self.rules.team_of(p);
            return Some(Outcome {
                kind: OutcomeKind::DominoOut,
                winner: Some(team),
                points: self.team_pips(team.other()),
                blocking_number: None,
            });
        }
        if !self.is_blocked() {
            return None;
        }
        let (l, r) = self.board.ends().expect("blocked board is non-empty");
        let blocking_number = (l == r).then_some(l);
        let a = self.team_pips(Team::A);
        let b = self.team_pips(Team::B);
        Some(if a == b {
            Outcome {
                kind: OutcomeKind::BlockedTie,
                winner: None,
                points: 0,
                blocking_number,
            }
        } else {
            let winner = if a < b { Team::A } else { Team::B };
            Outcome {
                kind: OutcomeKind::Blocked,
                winner: Some(winner),
                points: a.max(b),
                blocking_number,
            }
        })
    }

    /// The value showing at both ends of a blocked board.
    pub fn blocking_number(&self) -> Result<u8, EngineError> {
        if !self.is_blocked() {
            return Err(EngineError::NotBlocked);
        }
        let (l, r) = self.board.ends().expect("blocked board is non-empty");
        if l != r {
            return Err(EngineError::EndsDiffer(l, r));
        }
        Ok(l)
    }
}
