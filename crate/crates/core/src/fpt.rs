//! Exact solving parameterized by neighborhood diversity.
//!
//! Free vertices of one twin class are paired off (Maker, Breaker) without
//! changing the score, leaving at most one free vertex per class. The game on
//! those `w` vertices is then solved over at most `3^w` states.

use rustc_hash::FxHashMap;
use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;
use crate::partition::neighborhood_partition;
use crate::position::Player;

pub const DEFAULT_WIDTH_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FptError {
    #[error("neighborhood diversity {width} exceeds the cap of {cap}")]
    WidthTooLarge { width: usize, cap: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NdReport {
    pub score: u32,
    pub width: usize,
    /// `(maker vertex, breaker vertex)` pairs colored before the search.
    pub pairs: Vec<(usize, usize)>,
    /// The vertices left for the search, one per class at most.
    pub residual: Vec<usize>,
    /// Distinct states visited by the search.
    pub states: usize,
}

pub fn nd_value(g: &Graph) -> usize {
    neighborhood_partition(g).width()
}

pub fn nd_solve(g: &Graph, mover: Player) -> Result<u32, FptError> {
    nd_solve_report(g, mover, DEFAULT_WIDTH_CAP).map(|r| r.score)
}

pub fn nd_solve_report(g: &Graph, mover: Player, cap: usize) -> Result<NdReport, FptError> {
    let partition = neighborhood_partition(g);
    let width = partition.width();
    if width > cap || width > 32 {
        return Err(FptError::WidthTooLarge { width, cap: cap.min(32) });
    }
    let mut in_maker = vec![false; g.n()];
    let mut pairs = Vec::new();
    let mut residual = Vec::new();
    for class in &partition.classes {
        let start = class.len() % 2;
        if start == 1 {
            residual.push(class[0]);
        }
        for chunk in class[start..].chunks(2) {
            in_maker[chunk[0]] = true;
            pairs.push((chunk[0], chunk[1]));
        }
    }
    residual.sort_unstable();

    // A vertex can end happy only if N[w] avoids the paired Breaker vertices;
    // it then needs Maker to own N[w] ∩ residual.
    let mut slot = vec![usize::MAX; g.n()];
    for (i, &v) in residual.iter().enumerate() {
        slot[v] = i;
    }
    let mut needs: FxHashMap<u32, u32> = FxHashMap::default();
    for w in 0..g.n() {
        let mut need = 0u32;
        let mut possible = true;
        for x in g.closed_neighborhood(w) {
            if slot[x] != usize::MAX {
                need |= 1 << slot[x];
            } else if !in_maker[x] {
                possible = false;
                break;
            }
        }
        if possible {
            *needs.entry(need).or_insert(0) += 1;
        }
    }
    let mut needs: Vec<(u32, u32)> = needs.into_iter().collect();
    needs.sort_unstable();

    let all = if residual.is_empty() { 0 } else { u32::MAX >> (32 - residual.len()) };
    let mut dp = Dp { needs, all, mover, memo: FxHashMap::default() };
    let score = dp.value(0, 0);
    Ok(NdReport { score, width, pairs, residual, states: dp.memo.len() })
}

struct Dp {
    needs: Vec<(u32, u32)>,
    all: u32,
    mover: Player,
    memo: FxHashMap<(u32, u32), u32>,
}

impl Dp {
    fn value(&mut self, m: u32, b: u32) -> u32 {
        if let Some(&v) = self.memo.get(&(m, b)) {
            return v;
        }
        let free = self.all & !m & !b;
        let v = if free == 0 {
            self.needs.iter().filter(|&&(need, _)| need & !m == 0).map(|&(_, w)| w).sum()
        } else {
            // paired vertices come in twos, so only residual moves flip the turn
            let colored = (m | b).count_ones();
            let turn = if colored.is_multiple_of(2) { self.mover } else { self.mover.opponent() };
            let mut rest = free;
            let mut best: Option<u32> = None;
            while rest != 0 {
                let x = rest & rest.wrapping_neg();
                rest ^= x;
                let child = match turn {
                    Player::Maker => self.value(m | x, b),
                    Player::Breaker => self.value(m, b | x),
                };
                best = Some(match (best, turn) {
                    (None, _) => child,
                    (Some(c), Player::Maker) => c.max(child),
                    (Some(c), Player::Breaker) => c.min(child),
                });
            }
            best.expect("a free vertex exists")
        };
        self.memo.insert((m, b), v);
        v
    }
}
