//! Tiles and tile sets over the double-six universe.
//!
//! Tiles are indexed by `hi * (hi + 1) / 2 + lo`, so the double-n set is
//! exactly the index prefix `0..(n + 1) * (n + 2) / 2`. A [`TileSet`] is a
//! 32-bit membership mask over those indices, which lets reduced sets share
//! every operation with the full one.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Largest pip value in the standard set.
pub const MAX_PIP: u8 = 6;

/// Number of tiles in the double-six set.
pub const TILE_COUNT: usize = 28;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TileError {
    #[error("invalid pip value {0} (expected 0..=6)")]
    InvalidPip(u8),
    #[error("cannot parse tile from {0:?}")]
    Malformed(String),
}

/// An unordered domino `[lo,hi]` with `lo <= hi`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tile {
    lo: u8,
    hi: u8,
}

impl Tile {
    /// Builds a tile from two pip values in either order.
    pub fn new(a: u8, b: u8) -> Result<Tile, TileError> {
        if a > MAX_PIP {
            return Err(TileError::InvalidPip(a));
        }
        if b > MAX_PIP {
            return Err(TileError::InvalidPip(b));
        }
        Ok(Tile::of(a, b))
    }

    /// Unchecked constructor for values already known to be in range.
    pub(crate) const fn of(a: u8, b: u8) -> Tile {
        if a <= b {
            Tile { lo: a, hi: b }
        } else {
            Tile { lo: b, hi: a }
        }
    }

    pub const fn lo(self) -> u8 {
        self.lo
    }

    pub const fn hi(self) -> u8 {
        self.hi
    }

    pub const fn index(self) -> usize {
        (self.hi as usize) * (self.hi as usize + 1) / 2 + self.lo as usize
    }

    pub fn from_index(index: usize) -> Tile {
        ALL_TILES[index]
    }

    pub const fn pips(self) -> u32 {
        self.lo as u32 + self.hi as u32
    }

    pub const fn is_double(self) -> bool {
        self.lo == self.hi
    }

    pub const fn has(self, v: u8) -> bool {
        self.lo == v || self.hi == v
    }

    /// The value on the far side when `v` is matched, if the tile carries `v`.
    pub const fn other(self, v: u8) -> Option<u8> {
        if self.lo == v {
            Some(self.hi)
        } else if self.hi == v {
            Some(self.lo)
        } else {
            None
        }
    }

    /// Bit `v` set for each pip value on the tile.
    pub const fn value_mask(self) -> u8 {
        (1 << self.lo) | (1 << self.hi)
    }

    /// The record-file spelling, `"lo-hi"`.
    pub fn code(self) -> String {
        format!("{}-{}", self.lo, self.hi)
    }
}

/// Pip value of a single tile.
pub fn tile_pips(t: Tile) -> u32 {
    t.pips()
}

impl fmt::Debug for Tile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

impl fmt::Display for Tile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

impl FromStr for Tile {
    type Err = TileError;

    /// Accepts `"a-b"`, `"a,b"` and `"[a,b]"`.
    fn from_str(s: &str) -> Result<Tile, TileError> {
        let trimmed = s.trim().trim_start_matches('[').trim_end_matches(']');
        let mut parts = trimmed.split(['-', ',']);
        let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(TileError::Malformed(s.to_string()));
        };
        let parse = |p: &str| -> Result<u8, TileError> {
            let v: u32 = p
                .trim()
                .parse()
                .map_err(|_| TileError::Malformed(s.to_string()))?;
            u8::try_from(v).map_err(|_| TileError::InvalidPip(u8::MAX))
        };
        Tile::new(parse(a)?, parse(b)?)
    }
}

/// Every tile of the double-six set, in index order.
pub const ALL_TILES: [Tile; TILE_COUNT] = {
    let mut out = [Tile { lo: 0, hi: 0 }; TILE_COUNT];
    let mut hi = 0u8;
    let mut i = 0;
    while hi <= MAX_PIP {
        let mut lo = 0u8;
        while lo <= hi {
            out[i] = Tile { lo, hi };
            i += 1;
            lo += 1;
        }
        hi += 1;
    }
    out
};

const fn build_value_sets() -> [u32; 7] {
    let mut out = [0u32; 7];
    let mut i = 0;
    while i < TILE_COUNT {
        let t = ALL_TILES[i];
        out[t.lo as usize] |= 1 << i;
        out[t.hi as usize] |= 1 << i;
        i += 1;
    }
    out
}

const VALUE_SETS: [u32; 7] = build_value_sets();

/// Number of tiles in the double-`max_pip` set.
pub const fn universe_size(max_pip: u8) -> usize {
    (max_pip as usize + 1) * (max_pip as usize + 2) / 2
}

/// Set of tiles, stored as a mask over tile indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct TileSet(u32);

impl TileSet {
    pub const EMPTY: TileSet = TileSet(0);

    pub const fn from_bits(bits: u32) -> TileSet {
        TileSet(bits & ((1 << TILE_COUNT) - 1))
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    /// The full double-`max_pip` set.
    pub const fn universe(max_pip: u8) -> TileSet {
        TileSet((1u32 << universe_size(max_pip)) - 1)
    }

    /// All tiles (of the double-six set) that carry pip value `v`.
    pub const fn with_value(v: u8) -> TileSet {
        TileSet(VALUE_SETS[v as usize])
    }

    /// All tiles carrying any value whose bit is set in `values`.
    pub fn with_any_value(values: u8) -> TileSet {
        let mut bits = 0;
        for v in 0..=MAX_PIP {
            if values & (1 << v) != 0 {
                bits |= VALUE_SETS[v as usize];
            }
        }
        TileSet(bits)
    }

    pub const fn single(t: Tile) -> TileSet {
        TileSet(1 << t.index())
    }

    pub const fn contains(self, t: Tile) -> bool {
        self.0 & (1 << t.index()) != 0
    }

    pub fn insert(&mut self, t: Tile) -> bool {
        let had = self.contains(t);
        self.0 |= 1 << t.index();
        !had
    }

    pub fn remove(&mut self, t: Tile) -> bool {
        let had = self.contains(t);
        self.0 &= !(1 << t.index());
        had
    }

    pub const fn with(self, t: Tile) -> TileSet {
        TileSet(self.0 | (1 << t.index()))
    }

    pub const fn without(self, t: Tile) -> TileSet {
        TileSet(self.0 & !(1 << t.index()))
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn union(self, other: TileSet) -> TileSet {
        TileSet(self.0 | other.0)
    }

    pub const fn intersection(self, other: TileSet) -> TileSet {
        TileSet(self.0 & other.0)
    }

    pub const fn difference(self, other: TileSet) -> TileSet {
        TileSet(self.0 & !other.0)
    }

    /// Complement relative to the double-`max_pip` universe.
    pub const fn complement_in(self, max_pip: u8) -> TileSet {
        TileSet(TileSet::universe(max_pip).0 & !self.0)
    }

    pub const fn is_subset(self, other: TileSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub const fn is_disjoint(self, other: TileSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn pips(self) -> u32 {
        self.iter().map(Tile::pips).sum()
    }

    /// Bit `v` set for every pip value present on some tile of the set.
    pub fn value_mask(self) -> u8 {
        self.iter().fold(0, |m, t| m | t.value_mask())
    }

    /// Tiles in increasing index order.
    pub fn iter(self) -> TileIter {
        TileIter(self.0)
    }

    pub fn to_vec(self) -> Vec<Tile> {
        self.iter().collect()
    }
}

impl fmt::Debug for TileSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for TileSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|t| t.to_string()).collect();
        write!(f, "{{{}}}", parts.join(" "))
    }
}

impl FromIterator<Tile> for TileSet {
    fn from_iter<I: IntoIterator<Item = Tile>>(iter: I) -> TileSet {
        let mut s = TileSet::EMPTY;
        for t in iter {
            s.insert(t);
        }
        s
    }
}

impl IntoIterator for TileSet {
    type Item = Tile;
    type IntoIter = TileIter;
    fn into_iter(self) -> TileIter {
        self.iter()
    }
}

pub struct TileIter(u32);

impl Iterator for TileIter {
    type Item = Tile;

    fn next(&mut self) -> Option<Tile> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(ALL_TILES[i])
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl DoubleEndedIterator for TileIter {
    fn next_back(&mut self) -> Option<Tile> {
        if self.0 == 0 {
            return None;
        }
        let i = 31 - self.0.leading_zeros() as usize;
        self.0 &= !(1 << i);
        Some(ALL_TILES[i])
    }
}

impl ExactSizeIterator for TileIter {}
