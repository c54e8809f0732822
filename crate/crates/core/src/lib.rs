//! Partnership dominoes: a replayable rules engine, game records, board-chain
//! analysis, pip bounds, and an exhaustive search over blocked games.

pub mod bounds;
pub mod chains;
pub mod engine;
pub mod oracle;
pub mod prover;
pub mod records;
pub mod tile;

pub use engine::{BoardChain, Deal, GameState, Move, Oriented, Outcome, OutcomeKind, Rules, Side, Team};
pub use records::{parse_record, replay, serialize_record, GameRecord};
pub use tile::{tile_pips, Tile, TileSet};
