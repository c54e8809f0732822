//! Board chains studied apart from play: blocked boards, the ten-tile
//! minimum structure, and the number of ways to lay out the whole set.

use std::collections::HashMap;

use thiserror::Error;

use crate::engine::{BoardChain, Oriented};
use crate::tile::{Tile, TileSet, MAX_PIP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("no blocked board at {k} with {tiles} tiles")]
    NoSuchBoard { k: u8, tiles: usize },
    #[error("not a minimal block: {0}")]
    NotMinimalTranca(String),
}

/// A chain whose both ends show `k` while every `k` tile is on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockedBoard {
    pub chain: BoardChain,
    pub k: u8,
    pub tile_count: usize,
    pub pip_sum: u32,
}

impl BlockedBoard {
    fn from_chain(chain: BoardChain, k: u8) -> BlockedBoard {
        BlockedBoard {
            tile_count: chain.len(),
            pip_sum: chain.pips(),
            chain,
            k,
        }
    }

    /// Re-checks every defining property from scratch.
    pub fn is_valid(&self, max_pip: u8) -> bool {
        let tiles = self.chain.tiles();
        let k_tiles = TileSet::with_value(self.k).intersection(TileSet::universe(max_pip));
        let mut counts = [0u32; 7];
        for o in self.chain.placed() {
            counts[o.left as usize] += 1;
            counts[o.right as usize] += 1;
        }
        self.chain.ends() == Some((self.k, self.k))
            && self.chain.is_matched()
            && tiles.len() == self.chain.len()
            && k_tiles.is_subset(tiles)
            && counts
                .iter()
                .enumerate()
                .all(|(v, &c)| v as u8 == self.k || c % 2 == 0)
            && self.tile_count == tiles.len()
            && self.pip_sum == tiles.pips()
    }
}

/// Depth-first stream of blocked boards, each chain reported once up to
/// reversal.
pub struct BlockedBoards {
    k: u8,
    max_tiles: usize,
    universe: TileSet,
    k_tiles: TileSet,
    chain: Vec<Oriented>,
    used: Vec<TileSet>,
    stack: Vec<Vec<Oriented>>,
}

/// All blocked boards at `k` with at most `max_tiles` tiles (double-six set).
pub fn enumerate_blocked_boards(k: u8, max_tiles: usize) -> BlockedBoards {
    enumerate_blocked_boards_in(MAX_PIP, k, max_tiles)
}

pub fn enumerate_blocked_boards_in(max_pip: u8, k: u8, max_tiles: usize) -> BlockedBoards {
    assert!(k <= max_pip, "blocking value {k} outside the double-{max_pip} set");
    let universe = TileSet::universe(max_pip);
    let k_tiles = TileSet::with_value(k).intersection(universe);
    let first: Vec<Oriented> = if max_tiles == 0 {
        Vec::new()
    } else {
        k_tiles
            .iter()
            .rev()
            .map(|t| Oriented {
                left: k,
                right: t.other(k).unwrap(),
            })
            .collect()
    };
    BlockedBoards {
        k,
        max_tiles,
        universe,
        k_tiles,
        chain: Vec::new(),
        used: Vec::new(),
        stack: vec![first],
    }
}

impl BlockedBoards {
    /// Fewest further tiles that could still close a valid board, or `None`.
    fn tiles_needed(&self, used: TileSet, last: Oriented) -> Option<usize> {
        let k = self.k;
        let unused = self.k_tiles.difference(used);
        let double = usize::from(unused.contains(Tile::of(k, k)));
        let singles = unused.len() - double;
        if last.right == k {
            if singles % 2 == 1 {
                return None;
            }
            Some(singles + singles / 2 + double)
        } else {
            if singles.is_multiple_of(2) {
                return None;
            }
            let just_left = usize::from(last.left == k);
            Some(just_left + 1 + 3 * (singles - 1) / 2 + double)
        }
    }

    fn is_canonical(&self) -> bool {
        let fwd = self.chain.iter().copied();
        let rev = self.chain.iter().rev().map(|o| o.flipped());
        fwd.le(rev)
    }
}

impl Iterator for BlockedBoards {
    type Item = BlockedBoard;

    fn next(&mut self) -> Option<BlockedBoard> {
        loop {
            let depth = self.stack.len().checked_sub(1)?;
            let Some(o) = self.stack[depth].pop() else {
                self.stack.pop();
                continue;
            };
            self.chain.truncate(depth);
            self.used.truncate(depth);
            let before = self.used.last().copied().unwrap_or(TileSet::EMPTY);
            let used = before.with(o.tile());
            self.chain.push(o);
            self.used.push(used);

            if o.right == self.k && self.k_tiles.is_subset(used) {
                if self.is_canonical() {
                    let chain = BoardChain::from_oriented(&self.chain).expect("chain built by matching");
                    return Some(BlockedBoard::from_chain(chain, self.k));
                }
                continue;
            }
            let Some(need) = self.tiles_needed(used, o) else {
                continue;
            };
            if self.chain.len() + need > self.max_tiles || need == 0 {
                continue;
            }
            let children: Vec<Oriented> = TileSet::with_value(o.right)
                .intersection(self.universe)
                .difference(used)
                .iter()
                .rev()
                .map(|t| Oriented {
                    left: o.right,
                    right: t.other(o.right).unwrap(),
                })
                .collect();
            self.stack.push(children);
        }
    }
}

/// Whether the tiles of `set`, all of them, can be laid as one chain running
/// from `left` to `right`.
///
/// Non-double tiles are the edges of a multigraph on pip values; a chain is an
/// Euler trail between the two ends, with each double slotted in wherever its
/// value is visited.
pub fn chain_exists(set: TileSet, left: u8, right: u8) -> bool {
    if set.is_empty() {
        return false;
    }
    let mut degree = [0u32; 7];
    let mut parent: [u8; 7] = [0, 1, 2, 3, 4, 5, 6];
    fn find(parent: &mut [u8; 7], mut v: u8) -> u8 {
        while parent[v as usize] != v {
            parent[v as usize] = parent[parent[v as usize] as usize];
            v = parent[v as usize];
        }
        v
    }
    let mut present = 0u8;
    let mut edges = 0;
    for t in set {
        present |= t.value_mask();
        if !t.is_double() {
            edges += 1;
            degree[t.lo() as usize] += 1;
            degree[t.hi() as usize] += 1;
            let (a, b) = (find(&mut parent, t.lo()), find(&mut parent, t.hi()));
            parent[a as usize] = b;
        }
    }
    if edges == 0 {
        // only doubles: a single one, and the ends are its value
        return set.len() == 1 && left == right && set.iter().next().unwrap().lo() == left;
    }
    if present & (1 << left) == 0 || present & (1 << right) == 0 {
        return false;
    }
    let root = find(&mut parent, left);
    for v in 0..7u8 {
        if present & (1 << v) != 0 && (degree[v as usize] == 0 || find(&mut parent, v) != root) {
            return false;
        }
    }
    (0..7u8).all(|v| {
        let odd = degree[v as usize] % 2 == 1;
        let should_be_odd = left != right && (v == left || v == right);
        odd == should_be_odd
    })
}

/// Smallest pip total of a blocked board at `k` with exactly `tiles` tiles.
///
/// Searches tile sets containing the seven `k` tiles, cheapest extras first,
/// and keeps those that can be laid out as a chain with both ends `k`.
pub fn min_board_sum(k: u8, tiles: usize) -> Result<u32, ChainError> {
    min_board_sum_in(MAX_PIP, k, tiles)
}

pub fn min_board_sum_in(max_pip: u8, k: u8, tiles: usize) -> Result<u32, ChainError> {
    let universe = TileSet::universe(max_pip);
    let k_tiles = TileSet::with_value(k).intersection(universe);
    let mut others: Vec<Tile> = universe.difference(k_tiles).to_vec();
    others.sort_by_key(|t| (t.pips(), t.index()));
    let none = ChainError::NoSuchBoard { k, tiles };
    let Some(extra) = tiles.checked_sub(k_tiles.len()) else {
        return Err(none);
    };
    if extra > others.len() {
        return Err(none);
    }

    struct Search<'a> {
        others: &'a [Tile],
        k: u8,
        best: Option<u32>,
    }
    impl Search<'_> {
        fn go(&mut self, from: usize, left: usize, set: TileSet, pips: u32) {
            if left == 0 {
                if chain_exists(set, self.k, self.k) {
                    self.best = Some(pips);
                }
                return;
            }
            for i in from..=self.others.len() - left {
                // cheapest completion from here on is the next `left` tiles
                let floor: u32 = self.others[i..i + left].iter().map(|t| t.pips()).sum();
                if self.best.is_some_and(|b| pips + floor >= b) {
                    return;
                }
                let t = self.others[i];
                self.go(i + 1, left - 1, set.with(t), pips + t.pips());
            }
        }
    }
    let mut search = Search {
        others: &others,
        k,
        best: None,
    };
    search.go(0, extra, k_tiles, k_tiles.pips());
    search.best.ok_or(none)
}

/// The four ten-tile layouts, told apart by where [0,0] sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shape {
    /// [0,0] at an end, not the last tile played.
    T1,
    /// [0,0] after the first connector block.
    T2,
    /// [0,0] after the second connector block.
    T3,
    /// [0,0] at an end and played last.
    T4,
}

/// A ten-tile block at 0 with a 42-pip board.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalTranca {
    pub board: BlockedBoard,
    /// The three zero-free tiles; together they pair up the values 1..=6.
    pub connectors: [Tile; 3],
    pub last_played: Tile,
}

impl MinimalTranca {
    pub fn new(chain: BoardChain, last_played: Tile) -> Result<MinimalTranca, ChainError> {
        let board = BlockedBoard::from_chain(chain, 0);
        if !board.is_valid(MAX_PIP) {
            return Err(ChainError::NotMinimalTranca(
                "not a blocked board at 0 holding every 0 tile".into(),
            ));
        }
        if board.tile_count != 10 || board.pip_sum != 42 {
            return Err(ChainError::NotMinimalTranca(format!(
                "{} tiles summing {}",
                board.tile_count, board.pip_sum
            )));
        }
        if !board.chain.tiles().contains(last_played) {
            return Err(ChainError::NotMinimalTranca(format!("{last_played} is not on the board")));
        }
        let zero_free: Vec<Tile> = board
            .chain
            .tiles()
            .difference(TileSet::with_value(0))
            .to_vec();
        let values = zero_free.iter().fold(0u8, |m, t| m | t.value_mask());
        if zero_free.len() != 3 || values != 0b111_1110 {
            return Err(ChainError::NotMinimalTranca("connectors do not pair up 1..=6".into()));
        }
        Ok(MinimalTranca {
            board,
            connectors: [zero_free[0], zero_free[1], zero_free[2]],
            last_played,
        })
    }

    pub fn shape(&self) -> Shape {
        let pos = self
            .board
            .chain
            .placed()
            .position(|o| o.left == 0 && o.right == 0)
            .expect("[0,0] is on every block at 0");
        match pos {
            3 => Shape::T2,
            6 => Shape::T3,
            _ if self.last_played == Tile::of(0, 0) => Shape::T4,
            _ => Shape::T1,
        }
    }
}

/// Shape of a ten-tile block at 0, given the board and the final tile played.
pub fn classify_shape(chain: &BoardChain, last_played: Tile) -> Result<Shape, ChainError> {
    Ok(MinimalTranca::new(chain.clone(), last_played)?.shape())
}

/// Number of ways to lay the whole double-six set in one line.
///
/// Lines are directed: a line and its reversal count separately.
pub fn count_full_chains() -> u64 {
    count_full_chains_in(MAX_PIP)
}

/// Line count for the double-`max_pip` set.
///
/// Dropping the doubles leaves an Euler trail on the complete graph over pip
/// values; trails are counted by memoized search over (unused edge mask,
/// current value). A trail from `s` to `e` visits value `v` exactly
/// `(deg v + [v = s] + [v = e]) / 2` times, and each double goes into one of
/// its value's visits, so every trail stands for the product of those counts.
pub fn count_full_chains_in(max_pip: u8) -> u64 {
    let n = max_pip as usize + 1;
    if n == 1 {
        return 1;
    }
    let edges: Vec<(u8, u8)> = (0..n as u8)
        .flat_map(|a| (a + 1..n as u8).map(move |b| (a, b)))
        .collect();
    let mut incident = vec![0u32; n];
    for (i, &(a, b)) in edges.iter().enumerate() {
        incident[a as usize] |= 1 << i;
        incident[b as usize] |= 1 << i;
    }
    let degree = n as u32 - 1;
    let full = if edges.len() == 32 { u32::MAX } else { (1u32 << edges.len()) - 1 };
    let odd: Vec<u8> = if degree % 2 == 1 { (0..n as u8).collect() } else { Vec::new() };
    if odd.len() > 2 {
        return 0;
    }

    let mut memo: HashMap<(u32, u8), u64> = HashMap::new();
    fn trails(
        remaining: u32,
        at: u8,
        edges: &[(u8, u8)],
        incident: &[u32],
        memo: &mut HashMap<(u32, u8), u64>,
    ) -> u64 {
        if remaining == 0 {
            return 1;
        }
        if let Some(&c) = memo.get(&(remaining, at)) {
            return c;
        }
        let mut total = 0;
        let mut out = remaining & incident[at as usize];
        while out != 0 {
            let i = out.trailing_zeros();
            out &= out - 1;
            let (a, b) = edges[i as usize];
            let next = if a == at { b } else { a };
            total += trails(remaining & !(1 << i), next, edges, incident, memo);
        }
        memo.insert((remaining, at), total);
        total
    }

    let mut lines = 0u64;
    for start in 0..n as u8 {
        if !odd.is_empty() && !odd.contains(&start) {
            continue;
        }
        let end = odd.iter().copied().find(|&v| v != start).unwrap_or(start);
        let visits: u64 = (0..n as u8)
            .map(|v| ((degree + u32::from(v == start) + u32::from(v == end)) / 2) as u64)
            .product();
        lines += trails(full, start, &edges, &incident, &mut memo) * visits;
    }
    lines
}
