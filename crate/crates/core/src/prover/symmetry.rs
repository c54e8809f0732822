//! Frames that differ by a renaming of pip values, or by swapping the two
//! teams, are reachable together or not at all: renaming values maps legal
//! games to legal games, and moving every seat one place maps team A's hands
//! onto team B's. Scores are not preserved, so only the yes/no answer is
//! shared across a class.

use crate::tile::{Tile, TileSet};

use super::frames::Frame;

pub(crate) struct Relabeller {
    /// For each renaming, the image of every tile index.
    maps: Vec<Vec<u8>>,
}

impl Relabeller {
    pub fn new(max_pip: u8) -> Relabeller {
        let values: Vec<u8> = (0..=max_pip).collect();
        let mut maps = Vec::new();
        for perm in permutations(&values) {
            let size = crate::tile::universe_size(max_pip);
            let mut map = vec![0u8; size];
            for (i, slot) in map.iter_mut().enumerate() {
                let t = Tile::from_index(i);
                *slot = Tile::of(perm[t.lo() as usize], perm[t.hi() as usize]).index() as u8;
            }
            maps.push(map);
        }
        Relabeller { maps }
    }

    fn map_set(map: &[u8], s: TileSet) -> TileSet {
        let mut bits = 0u32;
        let mut rest = s.bits();
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            bits |= 1 << map[i];
        }
        TileSet::from_bits(bits)
    }

    /// Least frame in the class of `f`.
    pub fn canonical(&self, f: &Frame) -> Frame {
        let mut best: Option<Frame> = None;
        for map in &self.maps {
            let board = Self::map_set(map, f.board);
            let a = Self::map_set(map, f.residual[0]);
            let b = Self::map_set(map, f.residual[1]);
            let ends = {
                let x = Tile::from_index(map[Tile::of(f.ends.0, f.ends.0).index()] as usize).lo();
                let y = Tile::from_index(map[Tile::of(f.ends.1, f.ends.1).index()] as usize).lo();
                (x.min(y), x.max(y))
            };
            for residual in [[a, b], [b, a]] {
                let g = Frame { ends, board, residual };
                if best.is_none_or(|cur| g < cur) {
                    best = Some(g);
                }
            }
        }
        best.expect("at least the identity")
    }
}

fn permutations(values: &[u8]) -> Vec<Vec<u8>> {
    if values.len() <= 1 {
        return vec![values.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..values.len() {
        let mut rest = values.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Rules;

    #[test]
    fn class_is_shared() {
        let r = Relabeller::new(6);
        assert_eq!(r.maps.len(), 5040);
        let rules = Rules::standard();
        let board = TileSet::with_value(0)
            .with(Tile::of(1, 2))
            .with(Tile::of(3, 4))
            .with(Tile::of(5, 6));
        let rest = rules.universe().difference(board).to_vec();
        let a: TileSet = rest[..5].iter().copied().collect();
        let f = Frame {
            ends: (0, 0),
            board,
            residual: [a, rules.universe().difference(board).difference(a)],
        };
        let swapped = Frame {
            residual: [f.residual[1], f.residual[0]],
            ..f
        };
        assert_eq!(r.canonical(&f), r.canonical(&swapped));
        let c = r.canonical(&f);
        assert_eq!(r.canonical(&c), c);
        assert!(c <= f);
    }
}
