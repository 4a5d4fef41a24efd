//! Plain minimax over the whole graph. No reductions, no pruning.

use rustc_hash::FxHashMap;

use super::{Budget, Resource, SolveError, MAX_SEARCH_VERTICES};
use crate::position::{Player, Position};

const MOVER_BIT: u64 = 1 << 63;

struct Oracle<'a> {
    closed: Vec<u64>,
    all: u64,
    memo: FxHashMap<(u64, u64), u32>,
    budget: &'a Budget,
}

pub(super) fn solve(pos: &Position, mover: Player, budget: &Budget) -> Result<u32, SolveError> {
    let g = pos.graph();
    if g.n() > MAX_SEARCH_VERTICES {
        return Err(SolveError::ResourceExceeded(Resource::FreeVertices {
            free: pos.free_count(),
            limit: MAX_SEARCH_VERTICES,
        }));
    }
    let closed = g.closed_masks().expect("at most 63 vertices");
    let all = if g.n() == 0 { 0 } else { u64::MAX >> (64 - g.n()) };
    let mask = |s: &fixedbitset::FixedBitSet| s.ones().fold(0u64, |m, v| m | 1 << v);
    let mut oracle = Oracle { closed, all, memo: FxHashMap::default(), budget };
    oracle.value(mask(pos.maker()), mask(pos.breaker()), mover)
}

impl Oracle<'_> {
    fn value(&mut self, m: u64, b: u64, mover: Player) -> Result<u32, SolveError> {
        self.budget.tick()?;
        let free = self.all & !m & !b;
        if free == 0 {
            return Ok(self.closed.iter().filter(|&&c| c & !m == 0).count() as u32);
        }
        let key = (m, if mover == Player::Maker { b } else { b | MOVER_BIT });
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        let mut best: Option<u32> = None;
        let mut rest = free;
        while rest != 0 {
            let x = rest & rest.wrapping_neg();
            rest ^= x;
            let v = match mover {
                Player::Maker => self.value(m | x, b, Player::Breaker)?,
                Player::Breaker => self.value(m, b | x, Player::Maker)?,
            };
            best = Some(match (best, mover) {
                (None, _) => v,
                (Some(cur), Player::Maker) => cur.max(v),
                (Some(cur), Player::Breaker) => cur.min(v),
            });
        }
        let best = best.expect("at least one free vertex");
        self.memo.insert(key, best);
        self.budget.stored()?;
        Ok(best)
    }
}
