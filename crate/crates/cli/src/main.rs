use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tranca::bounds::{bound_table, hand_avoiding_possible};
use tranca::chains::{count_full_chains_in, enumerate_blocked_boards, min_board_sum};
use tranca::oracle::brute_force;
use tranca::prover::{
    certification_report, prove_max_blocked_score_with, search_blocked_score, ProofResult, ProverError, Pruning, Rule,
    Scope, SearchTarget, Verdict,
};
use tranca::records::corpus;
use tranca::{parse_record, replay, serialize_record, GameRecord, Rules};

/// Partnership dominoes: replay records, count boards, and prove the highest
/// blocked score.
#[derive(Parser)]
#[command(name = "tranca", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args)]
struct Opts {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for the search.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Node limit for the search; 0 means none.
    #[arg(long, global = true, conflicts_with = "no_budget")]
    budget: Option<u64>,
    /// Search without a node limit (the default).
    #[arg(long, global = true)]
    no_budget: bool,
    /// Pruning rules to turn on (P1, P2, P3, S, or all).
    #[arg(long = "prune", global = true, value_delimiter = ',')]
    prune: Vec<String>,
    /// Witness file (search) or certificate directory (prove-max).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Replay a game record and print how it ended.
    Replay { record: String },
    /// Check that a record is a legal game.
    Validate { record: String },
    /// List blocked boards at one value, up to a number of tiles.
    EnumerateBlocked {
        #[arg(long)]
        k: u8,
        #[arg(long, default_value_t = 10)]
        max_tiles: usize,
        /// Print only the count.
        #[arg(long)]
        count: bool,
    },
    /// Least pip sum of a blocked board.
    MinBoardSum {
        #[arg(long)]
        k: u8,
        #[arg(long, default_value_t = 10)]
        tiles: usize,
    },
    /// Number of directed lines using every tile of a set.
    CountChains {
        #[arg(long, default_value_t = 6)]
        max_pip: u8,
    },
    /// Ceiling on the winning score of a ten-tile block, per blocking value.
    BoundsTable,
    /// Whether some hand avoids every listed value.
    HandCheck {
        /// Values, comma separated.
        #[arg(value_delimiter = ',', required = true)]
        values: Vec<u8>,
        #[arg(long, default_value_t = 7)]
        hand_size: usize,
    },
    /// Decide whether a blocked game reaches a target score.
    Search {
        #[arg(long)]
        target: u32,
        #[arg(long, value_enum, default_value_t = ScopeArg::AllBoards)]
        scope: ScopeArg,
    },
    /// Prove the highest winning score of a blocked game.
    ProveMax {
        #[arg(long, value_enum, default_value_t = ScopeArg::AllBoards)]
        scope: ScopeArg,
    },
    /// Brute force every game of a small table.
    Oracle {
        #[arg(long, default_value_t = 3)]
        max_pip: u8,
        #[arg(long, default_value_t = 2)]
        players: usize,
        #[arg(long)]
        hand_size: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ScopeArg {
    TenTile,
    AllBoards,
}

impl From<ScopeArg> for Scope {
    fn from(s: ScopeArg) -> Scope {
        match s {
            ScopeArg::TenTile => Scope::TenTile,
            ScopeArg::AllBoards => Scope::AllBoards,
        }
    }
}

enum Failure {
    /// Bad arguments or missing input: exit 2.
    Usage(String),
    /// The input or the result did not check out: exit 1.
    Check(String),
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.opts.threads;
    let run = || run(&cli);
    let result = match threads {
        Some(n) if n > 0 => tranca::prover::with_threads(n, run),
        Some(_) => Err(Failure::Usage("--threads must be at least 1".into())),
        None => run(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Check(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let o = &cli.opts;
    match &cli.command {
        Command::Replay { record } => replay_cmd(o, record),
        Command::Validate { record } => validate_cmd(o, record),
        Command::EnumerateBlocked { k, max_tiles, count } => enumerate_cmd(o, *k, *max_tiles, *count),
        Command::MinBoardSum { k, tiles } => {
            check_value(*k)?;
            let sum = min_board_sum(*k, *tiles).map_err(|e| Failure::Check(e.to_string()))?;
            emit(o, json!({"k": k, "tiles": tiles, "min_board_sum": sum}), sum.to_string());
            Ok(())
        }
        Command::CountChains { max_pip } => {
            check_value(*max_pip)?;
            let n = count_full_chains_in(*max_pip);
            emit(o, json!({"max_pip": max_pip, "lines": n}), n.to_string());
            Ok(())
        }
        Command::BoundsTable => bounds_cmd(o),
        Command::HandCheck { values, hand_size } => hand_cmd(o, values, *hand_size),
        Command::Search { target, scope } => search_cmd(o, *target, (*scope).into()),
        Command::ProveMax { scope } => prove_cmd(o, (*scope).into()),
        Command::Oracle {
            max_pip,
            players,
            hand_size,
        } => oracle_cmd(o, *max_pip, *players, *hand_size),
    }
}

fn emit(o: &Opts, value: Value, text: String) {
    if o.json {
        println!("{}", serde_json::to_string_pretty(&value).expect("JSON values serialize"));
    } else {
        println!("{text}");
    }
}

fn check_value(v: u8) -> Outcome {
    if v > 6 {
        return Err(Failure::Usage(format!("pip value {v} is outside 0..=6")));
    }
    Ok(())
}

/// A path on disk, else the same file name in `DOMINO_CORPUS_DIR`, else the
/// built-in corpus.
fn load_record(arg: &str) -> Result<GameRecord, Failure> {
    let path = Path::new(arg);
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or(arg);
    let text = if path.is_file() {
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{arg}: {e}")))?
    } else if let Some(p) = std::env::var_os("DOMINO_CORPUS_DIR")
        .map(|d| PathBuf::from(d).join(name))
        .filter(|p| p.is_file())
    {
        fs::read_to_string(&p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?
    } else if let Some(t) = corpus::text(name) {
        t.to_string()
    } else {
        return Err(Failure::Usage(format!("no record at {arg}")));
    };
    parse_record(&text).map_err(|e| Failure::Check(format!("{arg}: {e}")))
}

fn replay_cmd(o: &Opts, arg: &str) -> Outcome {
    let record = load_record(arg)?;
    let r = replay(&record).map_err(|e| Failure::Check(format!("{arg}: {e}")))?;
    let hands: Vec<String> = r.state.hands().iter().map(|h| h.to_string()).collect();
    let value = json!({
        "name": record.name,
        "outcome": r.outcome,
        "board": r.state.board().to_string(),
        "board_pips": r.state.board().pips(),
        "hands": hands,
    });
    emit(o, value, r.outcome.to_string());
    Ok(())
}

fn validate_cmd(o: &Opts, arg: &str) -> Outcome {
    let record = load_record(arg)?;
    replay(&record).map_err(|e| Failure::Check(format!("{arg}: {e}")))?;
    emit(
        o,
        json!({"name": record.name, "valid": true, "moves": record.moves.len()}),
        format!("valid: {} ({} moves)", record.name, record.moves.len()),
    );
    Ok(())
}

fn enumerate_cmd(o: &Opts, k: u8, max_tiles: usize, count_only: bool) -> Outcome {
    check_value(k)?;
    let boards: Vec<_> = enumerate_blocked_boards(k, max_tiles).collect();
    if o.json {
        let list: Vec<Value> = boards
            .iter()
            .map(|b| json!({"chain": b.chain.to_string(), "tiles": b.tile_count, "pips": b.pip_sum}))
            .collect();
        let value = if count_only {
            json!({"k": k, "max_tiles": max_tiles, "count": boards.len()})
        } else {
            json!({"k": k, "max_tiles": max_tiles, "count": boards.len(), "boards": list})
        };
        emit(o, value, String::new());
        return Ok(());
    }
    // Long listings are often piped into a pager; a closed pipe ends quietly.
    let mut out = io::stdout().lock();
    if !count_only {
        for b in &boards {
            if writeln!(out, "{} tiles={} pips={}", b.chain, b.tile_count, b.pip_sum).is_err() {
                return Ok(());
            }
        }
    }
    let _ = writeln!(out, "{} boards", boards.len());
    Ok(())
}

fn bounds_cmd(o: &Opts) -> Outcome {
    let rows = bound_table().map_err(|e| Failure::Check(e.to_string()))?;
    let mut lines = vec!["k board low5 max low-tiles".to_string()];
    let mut list = Vec::new();
    for r in &rows {
        let low: Vec<String> = r.witness_low_tiles.iter().map(|t| t.to_string()).collect();
        lines.push(format!(
            "{} {} {} {} {}",
            r.k,
            r.min_board_sum,
            r.min_winner_residual,
            r.max_possible,
            low.join(" ")
        ));
        list.push(json!({
            "k": r.k,
            "min_board_sum": r.min_board_sum,
            "min_winner_residual": r.min_winner_residual,
            "max_possible": r.max_possible,
            "low_tiles": low,
            "connectors": r.connectors.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        }));
    }
    emit(o, Value::Array(list), lines.join("\n"));
    Ok(())
}

fn hand_cmd(o: &Opts, values: &[u8], hand_size: usize) -> Outcome {
    let mut mask = 0u8;
    for &v in values {
        check_value(v)?;
        mask |= 1 << v;
    }
    let exists = hand_avoiding_possible(mask, hand_size);
    let shown: Vec<String> = (0..=6).filter(|v| mask >> v & 1 == 1).map(|v| v.to_string()).collect();
    let text = if exists {
        format!("a {hand_size}-tile hand avoids {}", shown.join(","))
    } else {
        format!("no {hand_size}-tile hand avoids {}", shown.join(","))
    };
    emit(
        o,
        json!({"values": shown, "hand_size": hand_size, "exists": exists}),
        text,
    );
    Ok(())
}

fn pruning(o: &Opts) -> Result<Pruning, Failure> {
    let mut p = Pruning::NONE;
    for name in &o.prune {
        if name.eq_ignore_ascii_case("all") {
            p = Pruning::ALL;
            continue;
        }
        let rule: Rule = name.parse().map_err(|_| {
            Failure::Usage(format!("unknown pruning rule {name}; expected P1, P2, P3, S or all"))
        })?;
        p = p.with(rule, true);
    }
    Ok(p)
}

fn budget(o: &Opts) -> Option<u64> {
    match o.budget {
        Some(0) | None => None,
        Some(n) if !o.no_budget => Some(n),
        Some(_) => None,
    }
}

fn prover_failure(e: ProverError) -> Failure {
    match e {
        ProverError::InvalidTarget(..) => Failure::Usage(e.to_string()),
        other => Failure::Check(other.to_string()),
    }
}

fn summary(r: &ProofResult) -> String {
    let s = &r.stats;
    let mut line = format!(
        "target {}: {} (frames {}, searched {}, reused {}, cut {}, nodes {}, {} ms)",
        r.target,
        r.verdict,
        s.frames,
        s.frames_searched,
        s.frames_reused,
        s.frames_cut_p1 + s.frames_cut_p3,
        s.nodes,
        s.wall_ms
    );
    if let Some(w) = &r.witness {
        line.push_str(&format!("\nwitness: {}", w.outcome));
    }
    line
}

fn result_json(r: &ProofResult) -> Value {
    json!({
        "target": r.target,
        "verdict": r.verdict,
        "stats": r.stats,
        "candidates": r.candidates.as_ref().map(|c| c.iter().map(|&(k, n)| [k as usize, n]).collect::<Vec<_>>()),
        "exhaustiveness": r.note,
        "witness": r.witness.as_ref().map(|w| json!({
            "frame": w.frame,
            "outcome": w.outcome.to_string(),
        })),
    })
}

fn search_cmd(o: &Opts, target: u32, scope: Scope) -> Outcome {
    let t = SearchTarget {
        scope,
        pruning: pruning(o)?,
        budget: budget(o),
        ..SearchTarget::new(target)
    };
    let r = search_blocked_score(&t).map_err(prover_failure)?;
    if let (Some(path), Some(w)) = (&o.out, &r.witness) {
        write(path, &serialize_record(&w.record))?;
    }
    emit(o, result_json(&r), summary(&r));
    Ok(())
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn prove_cmd(o: &Opts, scope: Scope) -> Outcome {
    let proof = prove_max_blocked_score_with(Rules::standard(), scope, pruning(o)?, budget(o)).map_err(prover_failure)?;
    let dir = o.out.clone().unwrap_or_else(|| PathBuf::from("certificates"));
    fs::create_dir_all(&dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
    let report = certification_report(&proof);
    let cert = dir.join("certificate.json");
    write(&cert, &serde_json::to_string_pretty(&report).expect("JSON values serialize"))?;
    let mut paths = vec![cert];
    if let Some(w) = proof.sat.as_ref().and_then(|s| s.witness.as_ref()) {
        let p = dir.join(format!("witness_{}.json", w.outcome.points));
        write(&p, &serialize_record(&w.record))?;
        paths.push(p);
    }
    let Some(max) = proof.max else {
        return Err(Failure::Check("no blocked game has a winner".into()));
    };
    if proof.unsat.verdict != Verdict::Unsat {
        return Err(Failure::Check("the target above the maximum was not refuted".into()));
    }
    let shown: Vec<String> = paths.iter().map(|p| p.display().to_string()).collect();
    let mut text = vec![format!("MAX={max}")];
    text.push(summary(&proof.unsat));
    if let Some(s) = &proof.sat {
        text.push(summary(s));
    }
    text.extend(shown.iter().map(|p| format!("wrote {p}")));
    emit(
        o,
        json!({"max": max, "unsat": result_json(&proof.unsat), "sat": proof.sat.as_ref().map(result_json)}),
        text.join("\n"),
    );
    Ok(())
}

fn oracle_cmd(o: &Opts, max_pip: u8, players: usize, hand_size: Option<usize>) -> Outcome {
    check_value(max_pip)?;
    let tiles = (max_pip as usize + 1) * (max_pip as usize + 2) / 2;
    let hand_size = hand_size.unwrap_or(tiles / players.max(1));
    let rules = Rules::reduced(max_pip, players, hand_size).map_err(|e| Failure::Usage(e.to_string()))?;
    if tiles > 10 {
        return Err(Failure::Usage(format!(
            "the oracle plays every game; double-{max_pip} is too large"
        )));
    }
    let s = brute_force(&rules).map_err(|e| Failure::Check(e.to_string()))?;
    let max = s.max_blocked_score.map_or("none".to_string(), |m| m.to_string());
    emit(
        o,
        serde_json::to_value(&s).expect("summary serializes"),
        format!(
            "deals {} games {} blocked {} configs {} max {max}",
            s.deals, s.games, s.blocked_games, s.distinct_configs
        ),
    );
    Ok(())
}
