//! Exhaustive search for blocked games that reach a winning score.
//!
//! Stage A narrows the board shapes by arithmetic. Stage B lists every frame
//! (final ends, board tiles, each team's leftover tiles) whose score reaches
//! the target and searches each one for a legal game ending there. A frame
//! found reachable yields a witness game that is replayed through the
//! records module before it is reported.

mod frames;
mod search;
mod symmetry;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::BoundsError;
use crate::engine::{Deal, EngineError, GameState, Move, Outcome, OutcomeKind, Rules};
use crate::oracle::BlockedConfig;
use crate::records::{replay, GameRecord, MoveSpec};
use crate::tile::{Tile, TileSet};

pub use frames::{
    all_boards_ceiling, enumerate_frames, max_board_tiles, stage_a_candidates, Frame, FrameQuery, Scope,
};
pub use search::FrameStats;

use search::{search_frame, FoundGame, Mode, NodeCuts};
use symmetry::Relabeller;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProverError {
    #[error("target {0} is outside 1..={1}")]
    InvalidTarget(u32, u32),
    #[error("node budget exhausted after {nodes} nodes without a verdict")]
    BudgetExceeded { nodes: u64 },
    #[error("witness rejected on replay: {0}")]
    WitnessRejected(String),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Optional search cuts. Each is checked against the plain search by
/// [`validate_pruning`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Rule {
    /// Skip smallest-block frames where the losing team never played and its
    /// leftover tiles miss some value besides the blocking one.
    P1,
    /// In smallest-block frames where the losing team never played, cut any
    /// pass of that team on two distinct values other than the blocking one.
    P2,
    /// Skip smallest-block frames where the losing team never played.
    P3,
    /// Share verdicts between frames equal up to renaming values or swapping
    /// teams.
    S,
}

impl Rule {
    pub const ALL: [Rule; 4] = [Rule::P1, Rule::P2, Rule::P3, Rule::S];
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::P1 => "P1",
            Rule::P2 => "P2",
            Rule::P3 => "P3",
            Rule::S => "S",
        };
        f.write_str(s)
    }
}

impl FromStr for Rule {
    type Err = String;

    fn from_str(s: &str) -> Result<Rule, String> {
        match s.to_ascii_uppercase().as_str() {
            "P1" => Ok(Rule::P1),
            "P2" => Ok(Rule::P2),
            "P3" => Ok(Rule::P3),
            "S" | "SYMMETRY" => Ok(Rule::S),
            _ => Err(format!("unknown pruning rule {s:?} (expected P1, P2, P3 or S)")),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Pruning {
    pub p1: bool,
    pub p2: bool,
    pub p3: bool,
    pub symmetry: bool,
}

impl Pruning {
    pub const NONE: Pruning = Pruning {
        p1: false,
        p2: false,
        p3: false,
        symmetry: false,
    };

    pub const ALL: Pruning = Pruning {
        p1: true,
        p2: true,
        p3: true,
        symmetry: true,
    };

    pub fn only(rule: Rule) -> Pruning {
        Pruning::NONE.with(rule, true)
    }

    pub fn with(mut self, rule: Rule, on: bool) -> Pruning {
        match rule {
            Rule::P1 => self.p1 = on,
            Rule::P2 => self.p2 = on,
            Rule::P3 => self.p3 = on,
            Rule::S => self.symmetry = on,
        }
        self
    }

    pub fn enabled(&self, rule: Rule) -> bool {
        match rule {
            Rule::P1 => self.p1,
            Rule::P2 => self.p2,
            Rule::P3 => self.p3,
            Rule::S => self.symmetry,
        }
    }

    pub fn names(&self) -> Vec<String> {
        Rule::ALL.iter().filter(|r| self.enabled(**r)).map(|r| r.to_string()).collect()
    }
}

/// What to look for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchTarget {
    /// Winning score the blocked game must reach.
    pub target: u32,
    pub rules: Rules,
    /// Board shapes admitted on the standard table; smaller tables always
    /// search every board.
    pub scope: Scope,
    pub pruning: Pruning,
    /// Node limit; `None` searches to the end.
    pub budget: Option<u64>,
}

impl SearchTarget {
    pub fn new(target: u32) -> SearchTarget {
        SearchTarget {
            target,
            rules: Rules::standard(),
            scope: Scope::AllBoards,
            pruning: Pruning::NONE,
            budget: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "SAT")]
    Sat,
    #[serde(rename = "UNSAT")]
    Unsat,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Sat => "SAT",
            Verdict::Unsat => "UNSAT",
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub frames: usize,
    pub frames_searched: usize,
    pub frames_cut_p1: usize,
    pub frames_cut_p3: usize,
    /// Answered from an earlier verdict on the same frame or, with S on, the
    /// same class.
    pub frames_reused: usize,
    pub nodes: u64,
    pub memo_hits: u64,
    pub deal_prunes: u64,
    pub p2_cuts: u64,
    /// Not deterministic; excluded from comparisons.
    #[serde(skip)]
    pub wall_ms: u128,
}

impl Stats {
    fn add_frame(&mut self, s: &FrameStats) {
        self.nodes += s.nodes;
        self.memo_hits += s.memo_hits;
        self.deal_prunes += s.deal_prunes;
        self.p2_cuts += s.p2_cuts;
    }

    fn merge(&mut self, o: &Stats) {
        self.frames_searched += o.frames_searched;
        self.frames_cut_p1 += o.frames_cut_p1;
        self.frames_cut_p3 += o.frames_cut_p3;
        self.frames_reused += o.frames_reused;
        self.nodes += o.nodes;
        self.memo_hits += o.memo_hits;
        self.deal_prunes += o.deal_prunes;
        self.p2_cuts += o.p2_cuts;
        self.wall_ms += o.wall_ms;
    }
}

/// A game reaching the target, already replayed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub frame: Frame,
    pub record: GameRecord,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofResult {
    pub target: u32,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub stats: Stats,
    /// Board shapes `(k, tiles)` left by Stage A; `None` when every board
    /// was admitted.
    pub candidates: Option<BTreeSet<(u8, usize)>>,
    pub note: String,
}

/// Frames cut before any search, and why.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum FrameCut {
    P1,
    P3,
}

fn frame_cut(rules: &Rules, f: &Frame, pruning: &Pruning) -> Option<FrameCut> {
    if !(pruning.p1 || pruning.p3) || !f.loser_silent_minimal(rules) {
        return None;
    }
    if pruning.p3 {
        return Some(FrameCut::P3);
    }
    let loser = f.loser().expect("silent loser implies a winner");
    let held = f.residual[loser.index()].value_mask();
    let missing = (0..=rules.max_pip).any(|v| v != f.ends.0 && held & (1 << v) == 0);
    missing.then_some(FrameCut::P1)
}

fn node_cuts(rules: &Rules, f: &Frame, pruning: &Pruning) -> NodeCuts {
    NodeCuts {
        p2: pruning.p2 && f.loser_silent_minimal(rules),
    }
}

/// Frames processed together; results are combined in frame order so the
/// outcome does not depend on the thread count.
const CHUNK: usize = 64;

/// Decides frames in order and remembers verdicts across calls.
pub struct Prover {
    rules: Rules,
    pruning: Pruning,
    budget: Option<u64>,
    spent: u64,
    known: HashMap<Frame, bool>,
    relabeller: Option<Relabeller>,
}

enum Plan {
    Cut(FrameCut),
    Known(bool),
    Search,
    /// Same class as an earlier frame of this chunk.
    Follow(usize),
}

impl Prover {
    pub fn new(rules: Rules, pruning: Pruning, budget: Option<u64>) -> Prover {
        Prover {
            rules,
            pruning,
            budget,
            spent: 0,
            known: HashMap::new(),
            relabeller: pruning.symmetry.then(|| Relabeller::new(rules.max_pip)),
        }
    }

    fn class_key(&self, f: &Frame) -> Frame {
        match &self.relabeller {
            Some(r) => r.canonical(f),
            None => *f,
        }
    }

    fn cap(&self) -> u64 {
        self.budget.map_or(u64::MAX, |b| b.saturating_sub(self.spent))
    }

    /// Index of the first reachable frame and a game for it.
    fn first_reachable(&mut self, frames: &[Frame], stats: &mut Stats) -> Result<Option<(usize, FoundGame)>, ProverError> {
        let rules = self.rules;
        let pruning = self.pruning;
        for (chunk_no, chunk) in frames.chunks(CHUNK).enumerate() {
            let base = chunk_no * CHUNK;
            let keys: Vec<Frame> = chunk.iter().map(|f| self.class_key(f)).collect();
            let mut plans = Vec::with_capacity(chunk.len());
            let mut first_of: HashMap<Frame, usize> = HashMap::new();
            for (i, f) in chunk.iter().enumerate() {
                let plan = if let Some(c) = frame_cut(&rules, f, &pruning) {
                    Plan::Cut(c)
                } else if let Some(&v) = self.known.get(&keys[i]) {
                    Plan::Known(v)
                } else if let Some(&j) = first_of.get(&keys[i]) {
                    Plan::Follow(j)
                } else {
                    first_of.insert(keys[i], i);
                    Plan::Search
                };
                plans.push(plan);
            }
            let cap = self.cap();
            let searched: Vec<Option<Result<search::FrameResult, search::OutOfNodes>>> = chunk
                .par_iter()
                .zip(plans.par_iter())
                .map(|(f, plan)| match plan {
                    Plan::Search => Some(search_frame(&rules, f, Mode::Decide, node_cuts(&rules, f, &pruning), cap)),
                    _ => None,
                })
                .collect();

            let mut verdicts = vec![false; chunk.len()];
            for i in 0..chunk.len() {
                let v = match &plans[i] {
                    Plan::Cut(FrameCut::P1) => {
                        stats.frames_cut_p1 += 1;
                        false
                    }
                    Plan::Cut(FrameCut::P3) => {
                        stats.frames_cut_p3 += 1;
                        false
                    }
                    Plan::Known(v) => {
                        stats.frames_reused += 1;
                        *v
                    }
                    Plan::Follow(j) => {
                        stats.frames_reused += 1;
                        verdicts[*j]
                    }
                    Plan::Search => {
                        stats.frames_searched += 1;
                        match searched[i].as_ref().expect("searched") {
                            Ok(r) => {
                                stats.add_frame(&r.stats);
                                self.spent += r.stats.nodes;
                                r.game.is_some()
                            }
                            Err(_) => {
                                return Err(ProverError::BudgetExceeded { nodes: self.spent + cap });
                            }
                        }
                    }
                };
                verdicts[i] = v;
                if matches!(plans[i], Plan::Search) {
                    self.known.insert(keys[i], v);
                }
                if v {
                    let game = match searched[i].as_ref() {
                        Some(Ok(r)) => r.game.clone().expect("reachable frame has a game"),
                        _ => {
                            let f = &chunk[i];
                            let r = search_frame(&rules, f, Mode::Decide, node_cuts(&rules, f, &pruning), self.cap())
                                .map_err(|_| ProverError::BudgetExceeded { nodes: self.spent })?;
                            stats.add_frame(&r.stats);
                            self.spent += r.stats.nodes;
                            r.game.expect("class shares reachability")
                        }
                    };
                    return Ok(Some((base + i, game)));
                }
            }
            if self.budget.is_some_and(|b| self.spent > b) {
                return Err(ProverError::BudgetExceeded { nodes: self.spent });
            }
        }
        Ok(None)
    }

    /// Decides whether some blocked game scores at least `target`.
    pub fn search(&mut self, target: u32, scope: Scope) -> Result<ProofResult, ProverError> {
        let started = Instant::now();
        let rules = self.rules;
        rules.validate()?;
        let total = rules.universe().pips();
        if target == 0 || target > total {
            return Err(ProverError::InvalidTarget(target, total));
        }
        let candidates = if rules == Rules::standard() {
            Some(stage_a_candidates(target, scope)?)
        } else {
            None
        };
        let mut stats = Stats::default();
        let note = exhaustiveness_note(&rules, scope, &self.pruning);
        if candidates.as_ref().is_some_and(|c| c.is_empty()) {
            stats.wall_ms = started.elapsed().as_millis();
            return Ok(ProofResult {
                target,
                verdict: Verdict::Unsat,
                witness: None,
                stats,
                candidates,
                note: format!("{note} Stage A admits no board for this target."),
            });
        }
        let frames = enumerate_frames(&rules, &FrameQuery::reaching(target, candidates.clone()));
        stats.frames = frames.len();
        let found = self.first_reachable(&frames, &mut stats)?;
        let witness = match found {
            None => None,
            Some((i, game)) => Some(build_witness(&rules, &frames[i], &game, target)?),
        };
        stats.wall_ms = started.elapsed().as_millis();
        Ok(ProofResult {
            target,
            verdict: if witness.is_some() { Verdict::Sat } else { Verdict::Unsat },
            witness,
            stats,
            candidates,
            note,
        })
    }
}

fn exhaustiveness_note(rules: &Rules, scope: Scope, pruning: &Pruning) -> String {
    let boards = if *rules == Rules::standard() {
        match scope {
            Scope::AllBoards => format!(
                "Stage A scans every blocking value and every board size up to {} tiles (each player keeps a tile), \
                 bounding the score by the cheapest board of that size, the cheapest tiles the winners must keep, \
                 and the dearest tiles the losers can keep.",
                max_board_tiles(rules)
            ),
            Scope::TenTile => "Stage A keeps ten-tile boards at values whose table ceiling reaches the target; \
                 this relies on the losing team playing at least once in a ten-tile block."
                .to_string(),
        }
    } else {
        "Every board of the reduced set is admitted.".to_string()
    };
    let cuts = if pruning.names().is_empty() {
        "No pruning rules.".to_string()
    } else {
        format!("Pruning rules on: {}.", pruning.names().join(", "))
    };
    format!(
        "{boards} Stage B lists every frame (end values, board tiles, each team's leftover tiles) whose winning score \
         reaches the target, ties excluded, and for each frame tries every opener and every move sequence under forced \
         play, with hands dealt lazily and checked for consistency at every node. {cuts}"
    )
}

fn build_witness(rules: &Rules, frame: &Frame, game: &FoundGame, target: u32) -> Result<Witness, ProverError> {
    let deal = Deal::new(rules, game.hands.clone())?;
    let mut record = GameRecord::from_history(format!("witness-{target}"), *rules, deal.clone(), game.opener, &game.moves);
    record.source = Some("found by exhaustive search".into());
    // note the end values each pass was made on
    let mut state = GameState::new(*rules, &deal, game.opener)?;
    for (i, &(_, m)) in game.moves.iter().enumerate() {
        if m == Move::Pass {
            if let Some((l, r)) = state.board().ends() {
                record.moves[i].spec = MoveSpec::Pass {
                    stuck_on: Some((1 << l) | (1 << r)),
                };
            }
        }
        state = state.apply_move(m)?;
    }
    let replayed = replay(&record).map_err(|e| ProverError::WitnessRejected(e.to_string()))?;
    let outcome = replayed.outcome;
    let expected = frame.score().map(|(w, _)| w);
    let ok = outcome.kind == OutcomeKind::Blocked
        && outcome.points >= target
        && outcome.winner == expected
        && replayed.state.board().tiles() == frame.board;
    if !ok {
        return Err(ProverError::WitnessRejected(format!("replay ended as {outcome}")));
    }
    Ok(Witness {
        frame: *frame,
        record,
        outcome,
    })
}

/// Whether some legal game ends in `frame`, searched without pruning.
pub fn frame_reachable(rules: &Rules, frame: &Frame) -> bool {
    search_frame(rules, frame, Mode::Decide, NodeCuts::default(), u64::MAX)
        .expect("no node limit")
        .game
        .is_some()
}

/// Runs `f` on a pool of `threads` workers.
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
        .install(f)
}

/// One-shot search with a fresh [`Prover`].
pub fn search_blocked_score(t: &SearchTarget) -> Result<ProofResult, ProverError> {
    Prover::new(t.rules, t.pruning, t.budget).search(t.target, t.scope)
}

/// Both halves of a maximum: nothing reaches `max + 1`, and a game reaches `max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxProof {
    /// `None` when no blocked game has a winner.
    pub max: Option<u32>,
    pub unsat: ProofResult,
    pub sat: Option<ProofResult>,
}

/// Highest score any blocked game reaches, searched downward from the
/// arithmetic ceiling. Verdicts carry over from one target to the next, so
/// each frame is searched once.
pub fn prove_max_blocked_score_with(
    rules: Rules,
    scope: Scope,
    pruning: Pruning,
    budget: Option<u64>,
) -> Result<MaxProof, ProverError> {
    let total = rules.universe().pips();
    let mut top = total;
    if rules == Rules::standard() {
        top = 0;
        for (k, n) in stage_a_candidates(1, scope)? {
            let ceiling = match scope {
                Scope::AllBoards => all_boards_ceiling(k, n)?.unwrap_or(0),
                Scope::TenTile => crate::bounds::bound_row(k)?.max_possible,
            };
            top = top.max(ceiling);
        }
    }
    let mut prover = Prover::new(rules, pruning, budget);
    let mut above = prover.search(top + 1, scope).or_else(|e| match e {
        ProverError::InvalidTarget(..) => Ok(ProofResult {
            target: top + 1,
            verdict: Verdict::Unsat,
            witness: None,
            stats: Stats::default(),
            candidates: None,
            note: "Above the total pip count.".into(),
        }),
        other => Err(other),
    })?;
    let mut t = top;
    while t >= 1 {
        let r = prover.search(t, scope)?;
        if r.verdict == Verdict::Sat {
            return Ok(MaxProof {
                max: Some(t),
                unsat: above,
                sat: Some(r),
            });
        }
        let mut carried = r.stats;
        carried.merge(&Stats {
            frames: 0,
            ..above.stats
        });
        above = ProofResult { stats: carried, ..r };
        t -= 1;
    }
    Ok(MaxProof {
        max: None,
        unsat: above,
        sat: None,
    })
}

/// The standard table, every board size, no pruning.
pub fn prove_max_blocked_score() -> Result<MaxProof, ProverError> {
    prove_max_blocked_score_with(Rules::standard(), Scope::AllBoards, Pruning::NONE, None)
}

/// Every distinct blocked final position reachable on `rules`, found through
/// the frame search.
pub fn enumerate_blocked_configs(rules: &Rules, pruning: Pruning) -> Result<(BTreeSet<BlockedConfig>, Stats), ProverError> {
    rules.validate()?;
    let frames = enumerate_frames(rules, &FrameQuery::all());
    let mut stats = Stats {
        frames: frames.len(),
        ..Stats::default()
    };
    let results: Vec<Option<Result<search::FrameResult, search::OutOfNodes>>> = frames
        .par_iter()
        .map(|f| match frame_cut(rules, f, &pruning) {
            Some(_) => None,
            None => Some(search_frame(rules, f, Mode::Enumerate, node_cuts(rules, f, &pruning), u64::MAX)),
        })
        .collect();
    let mut configs = BTreeSet::new();
    for (f, r) in frames.iter().zip(results) {
        let Some(r) = r else {
            stats.frames_cut_p3 += 1;
            continue;
        };
        let r = r.map_err(|_| ProverError::BudgetExceeded { nodes: u64::MAX })?;
        stats.frames_searched += 1;
        stats.add_frame(&r.stats);
        for hands in r.finals {
            configs.insert(BlockedConfig {
                board: f.board,
                ends: f.ends,
                hands,
            });
        }
    }
    Ok((configs, stats))
}

/// Where to compare a rule on and off.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidationScope {
    /// Standard table, block at 0 on the seven 0 tiles and these connectors.
    Matching { connectors: [Tile; 3], target: u32 },
    /// Standard table, the frames Stage A admits for `target`.
    Target { target: u32, scope: Scope },
    /// Every frame of a reduced table.
    Reduced { rules: Rules },
}

impl fmt::Display for ValidationScope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationScope::Matching { connectors, target } => {
                write!(f, "connectors {} {} {}, target {target}", connectors[0], connectors[1], connectors[2])
            }
            ValidationScope::Target { target, scope } => write!(f, "{scope} frames, target {target}"),
            ValidationScope::Reduced { rules } => write!(
                f,
                "double-{} set, {} players x {} tiles",
                rules.max_pip, rules.players, rules.hand_size
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PruningReport {
    pub rule: Rule,
    pub scope: String,
    pub frames: usize,
    /// Frames cut, passes cut, or frames answered from another of their class.
    pub fired: u64,
    pub verdict_on: Verdict,
    pub verdict_off: Verdict,
    pub discrepancies: Vec<String>,
}

impl PruningReport {
    pub fn agrees(&self) -> bool {
        self.discrepancies.is_empty() && self.verdict_on == self.verdict_off
    }
}

fn validation_frames(scope: &ValidationScope) -> Result<(Rules, Vec<Frame>), ProverError> {
    Ok(match scope {
        ValidationScope::Matching { connectors, target } => {
            let rules = Rules::standard();
            let board = connectors.iter().fold(TileSet::with_value(0), |s, &t| s.with(t));
            let q = FrameQuery {
                target: Some(*target),
                boards: None,
                fixed_board: Some(board),
            };
            (rules, enumerate_frames(&rules, &q))
        }
        ValidationScope::Target { target, scope } => {
            let rules = Rules::standard();
            let c = stage_a_candidates(*target, *scope)?;
            (rules, enumerate_frames(&rules, &FrameQuery::reaching(*target, Some(c))))
        }
        ValidationScope::Reduced { rules } => {
            rules.validate()?;
            (*rules, enumerate_frames(rules, &FrameQuery::all()))
        }
    })
}

/// Decides every frame of the scope with `rule` on and off and lists the
/// frames where the answers differ.
pub fn validate_pruning(rule: Rule, scope: &ValidationScope) -> Result<PruningReport, ProverError> {
    let (rules, frames) = validation_frames(scope)?;
    let on = Pruning::only(rule);
    let decide = |f: &Frame, pruning: &Pruning| -> Result<(bool, FrameStats), ProverError> {
        let r = search_frame(&rules, f, Mode::Decide, node_cuts(&rules, f, pruning), u64::MAX)
            .map_err(|_| ProverError::BudgetExceeded { nodes: u64::MAX })?;
        Ok((r.game.is_some(), r.stats))
    };
    let off: Vec<(bool, FrameStats)> = frames
        .par_iter()
        .map(|f| decide(f, &Pruning::NONE))
        .collect::<Result<_, _>>()?;

    let mut fired = 0u64;
    let with_rule: Vec<bool> = match rule {
        Rule::P1 | Rule::P3 => frames
            .iter()
            .zip(&off)
            .map(|(f, (v, _))| match frame_cut(&rules, f, &on) {
                Some(_) => {
                    fired += 1;
                    false
                }
                None => *v,
            })
            .collect(),
        Rule::P2 => {
            let results: Vec<(bool, FrameStats)> = frames
                .par_iter()
                .zip(&off)
                .map(|(f, prev)| {
                    if node_cuts(&rules, f, &on).p2 {
                        decide(f, &on)
                    } else {
                        Ok(*prev)
                    }
                })
                .collect::<Result<_, _>>()?;
            fired = results.iter().map(|(_, s)| s.p2_cuts).sum();
            results.into_iter().map(|(v, _)| v).collect()
        }
        Rule::S => {
            let relabeller = Relabeller::new(rules.max_pip);
            let mut first: HashMap<Frame, bool> = HashMap::new();
            frames
                .iter()
                .zip(&off)
                .map(|(f, (v, _))| {
                    let key = relabeller.canonical(f);
                    match first.get(&key) {
                        Some(&shared) => {
                            fired += 1;
                            shared
                        }
                        None => {
                            first.insert(key, *v);
                            *v
                        }
                    }
                })
                .collect()
        }
    };

    let verdict = |any: bool| if any { Verdict::Sat } else { Verdict::Unsat };
    let discrepancies = frames
        .iter()
        .zip(off.iter().zip(&with_rule))
        .filter(|(_, ((a, _), b))| a != *b)
        .map(|(f, ((a, _), b))| format!("{f}: off {} on {}", verdict(*a), verdict(*b)))
        .collect();
    Ok(PruningReport {
        rule,
        scope: scope.to_string(),
        frames: frames.len(),
        fired,
        verdict_on: verdict(with_rule.iter().any(|&v| v)),
        verdict_off: verdict(off.iter().any(|(v, _)| *v)),
        discrepancies,
    })
}

/// Certification document for a maximum.
pub fn certification_report(proof: &MaxProof) -> serde_json::Value {
    let result = |r: &ProofResult| {
        let witness = r.witness.as_ref().map(|w| {
            serde_json::json!({
                "frame": w.frame,
                "outcome": w.outcome.to_string(),
                "record": serde_json::from_str::<serde_json::Value>(&crate::records::serialize_record(&w.record))
                    .expect("records serialize to JSON"),
            })
        });
        serde_json::json!({
            "target": r.target,
            "verdict": r.verdict,
            "candidates": r.candidates.as_ref().map(|c| c.iter().map(|&(k, n)| [k as usize, n]).collect::<Vec<_>>()),
            "stats": r.stats,
            "exhaustiveness": r.note,
            "witness": witness,
        })
    };
    serde_json::json!({
        "max_blocked_score": proof.max,
        "unsat": result(&proof.unsat),
        "sat": proof.sat.as_ref().map(result),
    })
}
