//! Reference implementations used only by tests: plain minimax over the full
//! graph and assignment enumeration for formulas. Nothing here calls the
//! library's solvers.

#![allow(dead_code)]

use rustc_hash::FxHashMap;
use shvg::sat::{Qbf2Formula, Quantifier};
use shvg::{Graph, Player, Position};

pub struct Brute {
    closed: Vec<u64>,
    all: u64,
    memo: FxHashMap<(u64, u64, bool), u32>,
}

impl Brute {
    pub fn new(g: &Graph) -> Brute {
        assert!(g.n() <= 63, "brute force is limited to 63 vertices");
        let closed = (0..g.n())
            .map(|v| g.neighbors(v).iter().fold(1u64 << v, |m, &u| m | 1 << u))
            .collect();
        let all = if g.n() == 0 { 0 } else { u64::MAX >> (64 - g.n()) };
        Brute { closed, all, memo: FxHashMap::default() }
    }

    pub fn score(&mut self, m: u64, b: u64, maker_turn: bool) -> u32 {
        let free = self.all & !m & !b;
        if free == 0 {
            return self.closed.iter().filter(|&&c| c & !m == 0).count() as u32;
        }
        if let Some(&v) = self.memo.get(&(m, b, maker_turn)) {
            return v;
        }
        let mut best = if maker_turn { 0 } else { u32::MAX };
        for v in 0..64 {
            let x = 1u64 << v;
            if free & x == 0 {
                continue;
            }
            if maker_turn {
                best = best.max(self.score(m | x, b, false));
            } else {
                best = best.min(self.score(m, b | x, true));
            }
        }
        self.memo.insert((m, b, maker_turn), best);
        best
    }

    pub fn states(&self) -> usize {
        self.memo.len()
    }
}

pub fn mask(ids: impl IntoIterator<Item = usize>) -> u64 {
    ids.into_iter().fold(0, |m, v| m | 1 << v)
}

/// `(Ms, Bs)` of the empty position.
pub fn brute_pair(g: &Graph) -> (u32, u32) {
    let mut b = Brute::new(g);
    (b.score(0, 0, true), b.score(0, 0, false))
}

pub fn brute_position(pos: &Position, mover: Player) -> u32 {
    let mut b = Brute::new(pos.graph());
    b.score(mask(pos.maker().ones()), mask(pos.breaker().ones()), mover == Player::Maker)
}

/// Best number of satisfied clauses over all assignments.
pub fn enumerate_optimum(f: &Qbf2Formula) -> usize {
    let vars: Vec<u32> = f.prefix.iter().map(|p| p.1).collect();
    assert!(vars.len() <= 26, "enumeration is limited to 26 variables");
    let index: FxHashMap<u32, usize> = vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let clauses: Vec<[(usize, bool); 2]> = f
        .clauses
        .iter()
        .map(|c| [(index[&c.0.var], c.0.positive), (index[&c.1.var], c.1.positive)])
        .collect();
    (0u64..1 << vars.len())
        .map(|a| {
            clauses
                .iter()
                .filter(|c| c.iter().any(|&(i, s)| (a >> i & 1 == 1) == s))
                .count()
        })
        .max()
        .unwrap_or(0)
}

/// Quantified value by plain minimax in prefix order.
pub fn quantified_value(f: &Qbf2Formula) -> usize {
    fn go(f: &Qbf2Formula, i: usize, assign: &mut FxHashMap<u32, bool>) -> usize {
        if i == f.prefix.len() {
            return f.satisfied_count(|v| assign[&v]);
        }
        let (q, v) = f.prefix[i];
        let mut vals = [0; 2];
        for (slot, value) in [false, true].into_iter().enumerate() {
            assign.insert(v, value);
            vals[slot] = go(f, i + 1, assign);
        }
        match q {
            Quantifier::Exists => vals[0].max(vals[1]),
            Quantifier::Forall => vals[0].min(vals[1]),
        }
    }
    go(f, 0, &mut FxHashMap::default())
}
