//! Direct search of the MSO Ehrenfeucht–Fraïssé game.
//!
//! Every spoiler move (either side, point or set, including set moves in
//! the last round) is tried against every duplicator answer. Exponential in
//! both rounds and universe size; used as an independent check of the
//! type-based decision procedure on small structures.

use std::collections::HashMap;

use super::types::Atomic;
use crate::error::{Error, Result};
use crate::logic::eval::subsets_by_size;
use crate::structure::Structure;

/// Largest universe the direct search accepts.
pub const GAME_LIMIT: usize = 10;

/// A game position: placed point pairs and set pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GamePosition {
    pub point_pairs: Vec<(usize, usize)>,
    pub set_pairs: Vec<(u64, u64)>,
    pub rounds_left: usize,
}

impl GamePosition {
    /// Sorted, duplicate-free form: the order of placed pairs is irrelevant.
    fn normalized(mut self) -> Self {
        self.point_pairs.sort_unstable();
        self.point_pairs.dedup();
        self.set_pairs.sort_unstable();
        self.set_pairs.dedup();
        self
    }
}

struct Search<'a> {
    a: &'a Structure,
    b: &'a Structure,
    memo: HashMap<GamePosition, bool>,
}

impl Search<'_> {
    fn partial_iso(&self, pos: &GamePosition) -> bool {
        let (pa, pb): (Vec<usize>, Vec<usize>) = pos.point_pairs.iter().copied().unzip();
        let (sa, sb): (Vec<u64>, Vec<u64>) = pos.set_pairs.iter().copied().unzip();
        Atomic::of(self.a, &pa, &sa) == Atomic::of(self.b, &pb, &sb)
    }

    fn duplicator_wins(&mut self, pos: GamePosition) -> bool {
        let pos = pos.normalized();
        if let Some(&w) = self.memo.get(&pos) {
            return w;
        }
        let win = self.partial_iso(&pos) && (pos.rounds_left == 0 || self.survives_all_moves(&pos));
        self.memo.insert(pos, win);
        win
    }

    fn survives_all_moves(&mut self, pos: &GamePosition) -> bool {
        let (na, nb) = (self.a.len(), self.b.len());
        let next = |pos: &GamePosition| GamePosition {
            rounds_left: pos.rounds_left - 1,
            ..pos.clone()
        };
        // point moves on either side
        for a in 0..na {
            let ok = (0..nb).any(|b| {
                let mut p = next(pos);
                p.point_pairs.push((a, b));
                self.duplicator_wins(p)
            });
            if !ok {
                return false;
            }
        }
        for b in 0..nb {
            let ok = (0..na).any(|a| {
                let mut p = next(pos);
                p.point_pairs.push((a, b));
                self.duplicator_wins(p)
            });
            if !ok {
                return false;
            }
        }
        // set moves; answers tried by increasing size
        for sa in subsets_by_size(full(na)) {
            let ok = subsets_by_size(full(nb)).any(|sb| {
                let mut p = next(pos);
                p.set_pairs.push((sa, sb));
                self.duplicator_wins(p)
            });
            if !ok {
                return false;
            }
        }
        for sb in subsets_by_size(full(nb)) {
            let ok = subsets_by_size(full(na)).any(|sa| {
                let mut p = next(pos);
                p.set_pairs.push((sa, sb));
                self.duplicator_wins(p)
            });
            if !ok {
                return false;
            }
        }
        true
    }
}

fn full(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Decides the `m`-round game from `pos` by exhaustive search.
pub fn duplicator_wins(a: &Structure, b: &Structure, pos: GamePosition) -> Result<bool> {
    if a.len() > GAME_LIMIT || b.len() > GAME_LIMIT {
        return Err(Error::Resource(format!(
            "direct game search is limited to {GAME_LIMIT} elements per side"
        )));
    }
    let mut search = Search {
        a,
        b,
        memo: HashMap::new(),
    };
    Ok(search.duplicator_wins(pos))
}

/// `A ≡_m B` by exhaustive game search from the empty position.
pub fn game_equivalent(a: &Structure, b: &Structure, m: usize) -> Result<bool> {
    duplicator_wins(
        a,
        b,
        GamePosition {
            rounds_left: m,
            ..GamePosition::default()
        },
    )
}
