//! Game records: an initial deal plus the move table, as JSON.
//!
//! ```json
//! { "name": "...", "opener": 1,
//!   "hands": { "p1": ["1-1", ...], "p2": [...], "p3": [...], "p4": [...] },
//!   "moves": [ {"player": 1, "play": "1-1", "side": "L"},
//!              {"player": 2, "pass": true, "values": [0, 4]} ] }
//! ```
//!
//! Players are 1-based in documents and 0-based in memory. `side` may be
//! omitted; replay then searches for a side assignment that makes every move
//! legal. `values` on a pass lists the end values the player was stuck on and
//! is checked against the table during replay. `max_pip` (default 6) selects a
//! reduced double-n set.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{Deal, EngineError, GameState, Move, Outcome, OutcomeKind, Rules, Side};
use crate::tile::{universe_size, Tile, TileError, TileSet, MAX_PIP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecordError {
    #[error("malformed record: {0}")]
    Syntax(String),
    #[error("invalid pip value {0}")]
    InvalidPip(u8),
    #[error("tile {0} appears more than once")]
    DuplicateTile(Tile),
    #[error("player {player} holds {size} tiles, expected {expected}")]
    HandSize {
        player: usize,
        size: usize,
        expected: usize,
    },
    #[error("unknown player {0:?}")]
    UnknownPlayer(String),
    #[error("move {index} is by player {found}, expected player {expected}")]
    OutOfTurn {
        index: usize,
        found: usize,
        expected: usize,
    },
    #[error("invalid deal: {0}")]
    Deal(String),
}

impl From<TileError> for RecordError {
    fn from(e: TileError) -> RecordError {
        match e {
            TileError::InvalidPip(v) => RecordError::InvalidPip(v),
            TileError::Malformed(s) => RecordError::Syntax(format!("bad tile {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("move {index} is illegal: {reason}")]
    IllegalMove { index: usize, reason: String },
    #[error("no side assignment makes the record legal (deepest failure at move {index}: {reason})")]
    NoConsistentSides { index: usize, reason: String },
    #[error("record ends before the game is over")]
    NonTerminalRecord,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MoveSpec {
    Play { tile: Tile, side: Option<Side> },
    /// `stuck_on` is a value mask of the end values noted in the record.
    Pass { stuck_on: Option<u8> },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RecordedMove {
    pub player: usize,
    pub spec: MoveSpec,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameRecord {
    pub name: String,
    pub source: Option<String>,
    pub rules: Rules,
    pub opener: usize,
    pub deal: Deal,
    pub moves: Vec<RecordedMove>,
}

impl GameRecord {
    /// Record of a game played through the engine, with every side explicit.
    pub fn from_history(
        name: impl Into<String>,
        rules: Rules,
        deal: Deal,
        opener: usize,
        history: &[(usize, Move)],
    ) -> GameRecord {
        let moves = history
            .iter()
            .map(|&(player, m)| RecordedMove {
                player,
                spec: match m {
                    Move::Play { tile, side } => MoveSpec::Play {
                        tile,
                        side: Some(side),
                    },
                    Move::Pass => MoveSpec::Pass { stuck_on: None },
                },
            })
            .collect();
        GameRecord {
            name: name.into(),
            source: None,
            rules,
            opener,
            deal,
            moves,
        }
    }

    pub fn has_unspecified_sides(&self) -> bool {
        self.moves
            .iter()
            .any(|m| matches!(m.spec, MoveSpec::Play { side: None, .. }))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RecordDoc {
    name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    max_pip: Option<u8>,
    opener: usize,
    hands: BTreeMap<String, Vec<String>>,
    moves: Vec<MoveDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MoveDoc {
    player: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    play: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    side: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pass: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    values: Option<Vec<u8>>,
}

fn player_key(key: &str, players: usize) -> Result<usize, RecordError> {
    key.strip_prefix('p')
        .and_then(|n| n.parse::<usize>().ok())
        .filter(|&n| (1..=players).contains(&n))
        .map(|n| n - 1)
        .ok_or_else(|| RecordError::UnknownPlayer(key.to_string()))
}

fn player_number(n: usize, players: usize) -> Result<usize, RecordError> {
    if (1..=players).contains(&n) {
        Ok(n - 1)
    } else {
        Err(RecordError::UnknownPlayer(n.to_string()))
    }
}

pub fn parse_record(text: &str) -> Result<GameRecord, RecordError> {
    let doc: RecordDoc =
        serde_json::from_str(text).map_err(|e| RecordError::Syntax(e.to_string()))?;
    let max_pip = doc.max_pip.unwrap_or(MAX_PIP);
    if max_pip > MAX_PIP {
        return Err(RecordError::InvalidPip(max_pip));
    }
    let players = doc.hands.len();
    if players != 2 && players != 4 {
        return Err(RecordError::Syntax(format!("{players} hands (expected 2 or 4)")));
    }
    let expected = universe_size(max_pip) / players;
    let rules = Rules {
        max_pip,
        players,
        hand_size: expected,
        double_six_opens: false,
    };

    let mut hands = vec![TileSet::EMPTY; players];
    let mut seen = TileSet::EMPTY;
    for (key, tiles) in &doc.hands {
        let p = player_key(key, players)?;
        for code in tiles {
            let tile: Tile = code.parse()?;
            if tile.hi() > max_pip {
                return Err(RecordError::InvalidPip(tile.hi()));
            }
            if !seen.insert(tile) {
                return Err(RecordError::DuplicateTile(tile));
            }
            hands[p].insert(tile);
        }
    }
    for (p, h) in hands.iter().enumerate() {
        if h.len() != expected {
            return Err(RecordError::HandSize {
                player: p + 1,
                size: h.len(),
                expected,
            });
        }
    }
    let deal = Deal::new(&rules, hands).map_err(|e| RecordError::Deal(e.to_string()))?;
    let opener = player_number(doc.opener, players)?;

    let mut moves = Vec::with_capacity(doc.moves.len());
    for (index, m) in doc.moves.into_iter().enumerate() {
        let player = player_number(m.player, players)?;
        let expected_player = (opener + index) % players;
        if player != expected_player {
            return Err(RecordError::OutOfTurn {
                index,
                found: player + 1,
                expected: expected_player + 1,
            });
        }
        let spec = match (m.play, m.pass) {
            (Some(code), None | Some(false)) => {
                if m.values.is_some() {
                    return Err(RecordError::Syntax(format!("move {index}: values on a play")));
                }
                let side = match m.side.as_deref() {
                    None => None,
                    Some("L") => Some(Side::Left),
                    Some("R") => Some(Side::Right),
                    Some(other) => {
                        return Err(RecordError::Syntax(format!("move {index}: side {other:?}")))
                    }
                };
                let tile: Tile = code.parse()?;
                if tile.hi() > max_pip {
                    return Err(RecordError::InvalidPip(tile.hi()));
                }
                MoveSpec::Play { tile, side }
            }
            (None, Some(true)) => {
                if m.side.is_some() {
                    return Err(RecordError::Syntax(format!("move {index}: side on a pass")));
                }
                let stuck_on = match m.values {
                    None => None,
                    Some(vals) if (1..=2).contains(&vals.len()) => {
                        let mut mask = 0u8;
                        for v in vals {
                            if v > max_pip {
                                return Err(RecordError::InvalidPip(v));
                            }
                            mask |= 1 << v;
                        }
                        Some(mask)
                    }
                    Some(_) => {
                        return Err(RecordError::Syntax(format!(
                            "move {index}: a pass lists one or two values"
                        )))
                    }
                };
                MoveSpec::Pass { stuck_on }
            }
            _ => {
                return Err(RecordError::Syntax(format!(
                    "move {index}: exactly one of play or pass is required"
                )))
            }
        };
        moves.push(RecordedMove { player, spec });
    }

    Ok(GameRecord {
        name: doc.name,
        source: doc.source,
        rules,
        opener,
        deal,
        moves,
    })
}

pub fn serialize_record(r: &GameRecord) -> String {
    let hands = r
        .deal
        .hands()
        .iter()
        .enumerate()
        .map(|(p, h)| (format!("p{}", p + 1), h.iter().map(Tile::code).collect()))
        .collect();
    let moves = r
        .moves
        .iter()
        .map(|m| {
            let player = m.player + 1;
            match &m.spec {
                MoveSpec::Play { tile, side } => MoveDoc {
                    player,
                    play: Some(tile.code()),
                    side: side.map(|s| match s {
                        Side::Left => "L".to_string(),
                        Side::Right => "R".to_string(),
                    }),
                    pass: None,
                    values: None,
                },
                MoveSpec::Pass { stuck_on } => MoveDoc {
                    player,
                    play: None,
                    side: None,
                    pass: Some(true),
                    values: stuck_on.map(|mask| (0..=MAX_PIP).filter(|v| mask & (1 << v) != 0).collect()),
                },
            }
        })
        .collect();
    let doc = RecordDoc {
        name: r.name.clone(),
        source: r.source.clone(),
        max_pip: (r.rules.max_pip != MAX_PIP).then_some(r.rules.max_pip),
        opener: r.opener + 1,
        hands,
        moves,
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("record documents always serialize");
    out.push('\n');
    out
}

/// Result of replaying a record: final state, outcome, and the side used for
/// each play (`None` for passes and trailing moves after the game ended).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Replay {
    pub state: GameState,
    pub outcome: Outcome,
    pub sides: Vec<Option<Side>>,
}

struct Failure {
    index: usize,
    reason: String,
}

struct Replayer<'a> {
    record: &'a GameRecord,
    sides: Vec<Option<Side>>,
    deepest: Option<Failure>,
    non_terminal: bool,
}

impl Replayer<'_> {
    fn fail(&mut self, index: usize, reason: String) {
        if self.deepest.as_ref().is_none_or(|f| index >= f.index) {
            self.deepest = Some(Failure { index, reason });
        }
    }

    /// Depth-first over side choices; `visit` returns true to stop.
    fn walk(&mut self, state: &GameState, index: usize, visit: &mut dyn FnMut(Replay) -> bool) -> bool {
        if let Some(outcome) = state.is_terminal() {
            for (j, m) in self.record.moves.iter().enumerate().skip(index) {
                let trailing_pass = matches!(m.spec, MoveSpec::Pass { .. })
                    && outcome.kind != OutcomeKind::DominoOut;
                if !trailing_pass {
                    self.fail(j, EngineError::GameOver.to_string());
                    return false;
                }
            }
            return visit(Replay {
                state: state.clone(),
                outcome,
                sides: self.sides.clone(),
            });
        }
        let Some(m) = self.record.moves.get(index) else {
            self.non_terminal = true;
            return false;
        };
        match &m.spec {
            MoveSpec::Pass { stuck_on } => {
                if let (Some(mask), Some((l, r))) = (stuck_on, state.board().ends()) {
                    let ends = (1u8 << l) | (1u8 << r);
                    if *mask != ends {
                        self.fail(index, format!("pass noted on the wrong values (ends are {l} and {r})"));
                        return false;
                    }
                }
                match state.apply_move(Move::Pass) {
                    Ok(next) => self.walk(&next, index + 1, visit),
                    Err(e) => {
                        self.fail(index, e.to_string());
                        false
                    }
                }
            }
            MoveSpec::Play { tile, side } => {
                let choices: Vec<Side> = match side {
                    Some(s) => vec![*s],
                    None if state.board().is_empty() => vec![Side::Right],
                    None => vec![Side::Left, Side::Right],
                };
                let mut tried_ends = Vec::new();
                for s in choices {
                    let next = match state.apply_move(Move::Play { tile: *tile, side: s }) {
                        Ok(n) => n,
                        Err(e) => {
                            self.fail(index, e.to_string());
                            continue;
                        }
                    };
                    // both sides of a double-ended board lead to the same game
                    let ends = next.board().ends();
                    if side.is_none() && tried_ends.contains(&ends) {
                        continue;
                    }
                    tried_ends.push(ends);
                    self.sides[index] = Some(s);
                    if self.walk(&next, index + 1, visit) {
                        return true;
                    }
                    self.sides[index] = None;
                }
                false
            }
        }
    }

    fn error(&self) -> ReplayError {
        if self.non_terminal {
            return ReplayError::NonTerminalRecord;
        }
        match &self.deepest {
            None => ReplayError::NonTerminalRecord,
            Some(f) if self.record.has_unspecified_sides() => ReplayError::NoConsistentSides {
                index: f.index,
                reason: f.reason.clone(),
            },
            Some(f) => ReplayError::IllegalMove {
                index: f.index,
                reason: f.reason.clone(),
            },
        }
    }
}

fn start(r: &GameRecord) -> Result<GameState, ReplayError> {
    GameState::new(r.rules, &r.deal, r.opener).map_err(|e| ReplayError::IllegalMove {
        index: 0,
        reason: e.to_string(),
    })
}

/// Replays a record, taking the first consistent side assignment in
/// left-before-right order.
pub fn replay(r: &GameRecord) -> Result<Replay, ReplayError> {
    let initial = start(r)?;
    let mut replayer = Replayer {
        record: r,
        sides: vec![None; r.moves.len()],
        deepest: None,
        non_terminal: false,
    };
    let mut found = None;
    replayer.walk(&initial, 0, &mut |rep| {
        found = Some(rep);
        true
    });
    found.ok_or_else(|| replayer.error())
}

/// Every consistent side assignment, in search order.
pub fn replay_all(r: &GameRecord) -> Result<Vec<Replay>, ReplayError> {
    let initial = start(r)?;
    let mut replayer = Replayer {
        record: r,
        sides: vec![None; r.moves.len()],
        deepest: None,
        non_terminal: false,
    };
    let mut all = Vec::new();
    replayer.walk(&initial, 0, &mut |rep| {
        all.push(rep);
        false
    });
    if all.is_empty() {
        Err(replayer.error())
    } else {
        Ok(all)
    }
}

/// The bundled games, by file name.
pub mod corpus {
    use super::{parse_record, GameRecord};

    pub const INMORTAL: &str = "inmortal.json";
    pub const MINIMAL_TRANCA: &str = "minimal_tranca.json";
    pub const WITNESS_107: &str = "witness_107.json";

    const FILES: [(&str, &str); 3] = [
        (INMORTAL, include_str!("../corpus/inmortal.json")),
        (MINIMAL_TRANCA, include_str!("../corpus/minimal_tranca.json")),
        (WITNESS_107, include_str!("../corpus/witness_107.json")),
    ];

    pub fn names() -> impl Iterator<Item = &'static str> {
        FILES.iter().map(|(n, _)| *n)
    }

    /// Raw document text of a bundled file.
    pub fn text(name: &str) -> Option<&'static str> {
        FILES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
    }

    pub fn load(name: &str) -> Option<GameRecord> {
        text(name).map(|t| parse_record(t).expect("bundled records are valid"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Team;

    fn t(a: u8, b: u8) -> Tile {
        Tile::new(a, b).unwrap()
    }

    #[test]
    fn parses_the_immortal_deal() {
        let r = corpus::load(corpus::INMORTAL).unwrap();
        let p1 = r.deal.hand(0);
        assert!(p1.contains(t(1, 1)) && p1.contains(t(4, 0)));
        assert_eq!(r.moves.len(), 25);
        assert_eq!(r.opener, 0);
    }

    #[test]
    fn rejects_bad_pips_and_duplicates() {
        let text = corpus::text(corpus::INMORTAL).unwrap();
        let bad = text.replacen("\"1-1\", \"4-0\"", "\"7-1\", \"4-0\"", 1);
        assert_eq!(parse_record(&bad).unwrap_err(), RecordError::InvalidPip(7));
        let dup = text.replacen("\"6-3\", \"4-3\", \"3-3\"", "\"6-3\", \"4-3\", \"0-0\"", 1);
        assert_eq!(parse_record(&dup).unwrap_err(), RecordError::DuplicateTile(t(0, 0)));
        let short = text.replacen(", \"3-3\"]", "]", 1);
        assert!(matches!(parse_record(&short).unwrap_err(), RecordError::HandSize { player: 2, .. }));
        let stranger = text.replacen("\"p4\"", "\"p9\"", 1);
        assert_eq!(parse_record(&stranger).unwrap_err(), RecordError::UnknownPlayer("p9".into()));
        assert!(matches!(parse_record("{").unwrap_err(), RecordError::Syntax(_)));
    }

    #[test]
    fn rejects_out_of_turn_moves() {
        let text = corpus::text(corpus::MINIMAL_TRANCA).unwrap();
        let swapped = text.replacen("{\"player\": 2, \"play\": \"0-1\"}", "{\"player\": 3, \"play\": \"0-1\"}", 1);
        assert!(matches!(parse_record(&swapped).unwrap_err(), RecordError::OutOfTurn { index: 1, .. }));
    }

    #[test]
    fn immortal_replays_to_111() {
        let r = corpus::load(corpus::INMORTAL).unwrap();
        let rep = replay(&r).unwrap();
        assert_eq!(rep.outcome.kind, OutcomeKind::DominoOut);
        assert_eq!(rep.outcome.winner, Some(Team::A));
        assert_eq!(rep.outcome.points, 111);
        assert_eq!(rep.state.hand(1), r.deal.hand(1));
        let p3: TileSet = [t(2, 3), t(2, 2), t(1, 2)].into_iter().collect();
        assert_eq!(rep.state.hand(2), p3);
    }

    #[test]
    fn witness_replays_to_107() {
        let r = corpus::load(corpus::WITNESS_107).unwrap();
        let rep = replay(&r).unwrap();
        assert_eq!(rep.outcome.kind, OutcomeKind::Blocked);
        assert_eq!(rep.outcome.blocking_number, Some(0));
        assert_eq!(rep.outcome.winner, Some(Team::A));
        assert_eq!(rep.outcome.points, 107);
        assert_eq!(rep.state.blocking_number(), Ok(0));
    }

    #[test]
    fn minimal_tranca_board() {
        let r = corpus::load(corpus::MINIMAL_TRANCA).unwrap();
        let rep = replay(&r).unwrap();
        assert_eq!(rep.outcome.blocking_number, Some(0));
        assert_eq!(rep.state.board().len(), 10);
        assert_eq!(rep.state.board().pips(), 42);
    }

    #[test]
    fn side_assignments_agree_on_outcome() {
        for name in corpus::names() {
            let r = corpus::load(name).unwrap();
            let all = replay_all(&r).unwrap();
            let first = replay(&r).unwrap();
            assert_eq!(all[0], first);
            assert!(all.iter().all(|x| x.outcome == first.outcome), "{name}");
        }
    }

    #[test]
    fn wrong_pass_annotation_fails() {
        let text = corpus::text(corpus::WITNESS_107).unwrap();
        let wrong = text.replacen("\"values\": [0, 4]", "\"values\": [0, 5]", 1);
        let r = parse_record(&wrong).unwrap();
        assert!(matches!(replay(&r), Err(ReplayError::NoConsistentSides { index: 5, .. })));
    }

    #[test]
    fn explicit_illegal_move() {
        let mut r = corpus::load(corpus::MINIMAL_TRANCA).unwrap();
        for m in r.moves.iter_mut() {
            if let MoveSpec::Play { side, .. } = &mut m.spec {
                *side = Some(Side::Right);
            }
        }
        r.moves[1].spec = MoveSpec::Pass { stuck_on: None };
        assert_eq!(
            replay(&r).unwrap_err(),
            ReplayError::IllegalMove {
                index: 1,
                reason: EngineError::ForcedPlayViolation { player: 1 }.to_string()
            }
        );
    }

    #[test]
    fn truncated_record_is_non_terminal() {
        let mut r = corpus::load(corpus::INMORTAL).unwrap();
        r.moves.truncate(10);
        assert_eq!(replay(&r).unwrap_err(), ReplayError::NonTerminalRecord);
        r.moves.clear();
        let again = parse_record(&serialize_record(&r)).unwrap();
        assert_eq!(again, r);
    }

    #[test]
    fn round_trip_of_corpus() {
        for name in corpus::names() {
            let r = corpus::load(name).unwrap();
            let text = serialize_record(&r);
            assert_eq!(parse_record(&text).unwrap(), r);
        }
        let r = corpus::load(corpus::INMORTAL).unwrap();
        let again = parse_record(&serialize_record(&r)).unwrap();
        assert_eq!(replay(&again).unwrap().outcome.points, 111);
    }
}
