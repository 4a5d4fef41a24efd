//! The game compiled onto the free vertices.
//!
//! Every vertex `w` with no Breaker vertex in `N[w]` becomes a weighted edge
//! `N[w] ∩ V_F`; identical edges are merged. Maker scores an edge's weight
//! when she ends up owning all of it. Vertices that are already happy form a
//! constant base.

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use super::table::Table;
use super::{milnor_exact, Budget, Reduction, Resource, SolveConfig, SolveError, MAX_SEARCH_VERTICES};
use crate::position::{Player, Position};
use crate::solver::ScorePair;

const MOVER_BIT: u64 = 1 << 63;

#[derive(Clone, Debug)]
pub(super) struct Kernel {
    width: usize,
    edges: Vec<(u64, u32)>,
    base: u32,
}

impl Kernel {
    pub(super) fn compile(pos: &Position) -> Result<Kernel, SolveError> {
        let free = pos.free_vertices();
        if free.len() > MAX_SEARCH_VERTICES {
            return Err(SolveError::ResourceExceeded(Resource::FreeVertices {
                free: free.len(),
                limit: MAX_SEARCH_VERTICES,
            }));
        }
        let g = pos.graph();
        let mut bit = vec![usize::MAX; g.n()];
        for (i, &v) in free.iter().enumerate() {
            bit[v] = i;
        }
        let mut base = 0;
        let mut merged: FxHashMap<u64, u32> = FxHashMap::default();
        for w in 0..g.n() {
            let closed = g.closed_neighborhood(w);
            if closed.iter().any(|&x| pos.is_breaker(x)) {
                continue;
            }
            let mask = closed
                .iter()
                .filter(|&&x| bit[x] != usize::MAX)
                .fold(0u64, |m, &x| m | 1 << bit[x]);
            if mask == 0 {
                base += 1;
            } else {
                *merged.entry(mask).or_insert(0) += 1;
            }
        }
        let mut edges: Vec<(u64, u32)> = merged.into_iter().collect();
        edges.sort_unstable();
        Ok(Kernel { width: free.len(), edges, base })
    }

    fn all(&self) -> u64 {
        if self.width == 0 {
            0
        } else {
            u64::MAX >> (64 - self.width)
        }
    }

    /// Connected groups of bits; bits in no edge are singletons.
    fn components(&self) -> Vec<u64> {
        let mut parent: Vec<usize> = (0..self.width).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for &(e, _) in &self.edges {
            let first = e.trailing_zeros() as usize;
            let mut rest = e & (e - 1);
            while rest != 0 {
                let x = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let (a, b) = (find(&mut parent, first), find(&mut parent, x));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut groups: Vec<u64> = Vec::new();
        let mut slot = vec![usize::MAX; self.width];
        for x in 0..self.width {
            let r = find(&mut parent, x);
            if slot[r] == usize::MAX {
                slot[r] = groups.len();
                groups.push(0);
            }
            groups[slot[r]] |= 1 << x;
        }
        groups
    }

    /// The sub-game on the bits of `keep`, renumbered densely, with no base.
    fn restrict(&self, keep: u64) -> Kernel {
        let compress = |mut e: u64| {
            let mut out = 0u64;
            let mut k = keep;
            let mut i = 0;
            while k != 0 {
                let x = k & k.wrapping_neg();
                if e & x != 0 {
                    out |= 1 << i;
                    e &= !x;
                }
                k ^= x;
                i += 1;
            }
            out
        };
        let edges = self
            .edges
            .iter()
            .filter(|&&(e, _)| e & !keep == 0)
            .map(|&(e, w)| (compress(e), w))
            .collect();
        Kernel { width: keep.count_ones() as usize, edges, base: 0 }
    }

    pub(super) fn solve(
        &self,
        mover: Player,
        cfg: &SolveConfig,
        budget: &Budget,
        log: &mut Vec<Reduction>,
        split: bool,
    ) -> Result<u32, SolveError> {
        if split {
            let groups = self.components();
            if groups.len() >= 2 {
                let mut extracted = 0;
                let mut residual: Vec<(u64, ScorePair)> = Vec::new();
                for &group in &groups {
                    let sub = self.restrict(group);
                    let pair = ScorePair {
                        ms: sub.search(Player::Maker, cfg, budget)?,
                        bs: sub.search(Player::Breaker, cfg, budget)?,
                    };
                    if pair.is_cold() {
                        extracted += pair.ms;
                    } else {
                        residual.push((group, pair));
                    }
                }
                log.push(Reduction::KernelSplit {
                    components: groups.len(),
                    extracted,
                    residual: residual.len(),
                });
                let rest = match residual.len() {
                    0 => 0,
                    1 => residual[0].1.get(mover),
                    _ => {
                        let pairs: Vec<ScorePair> = residual.iter().map(|r| r.1).collect();
                        match milnor_exact(&pairs, mover) {
                            Some(value) => {
                                log.push(Reduction::MilnorBounds { value });
                                value
                            }
                            None => {
                                let keep = residual.iter().fold(0, |m, r| m | r.0);
                                self.restrict(keep).search(mover, cfg, budget)?
                            }
                        }
                    }
                };
                return Ok(self.base + extracted + rest);
            }
        }
        Ok(self.base + self.search(mover, cfg, budget)?)
    }

    fn search(&self, mover: Player, cfg: &SolveConfig, budget: &Budget) -> Result<u32, SolveError> {
        let search = Search {
            kernel: self,
            all: self.all(),
            ordering: cfg.move_ordering,
            budget,
            table: Table::new(),
        };
        if cfg.threads > 1 {
            search.root_parallel(mover, cfg.threads)
        } else {
            search.value(0, 0, mover)
        }
    }
}

struct Search<'a> {
    kernel: &'a Kernel,
    all: u64,
    ordering: bool,
    budget: &'a Budget,
    table: Table,
}

/// Candidate moves of one node, at most 63.
struct Moves {
    bits: [u8; 64],
    len: usize,
}

impl Moves {
    fn as_slice(&self) -> &[u8] {
        &self.bits[..self.len]
    }
}

impl Search<'_> {
    /// `(already scored, still attainable)` weight.
    fn tally(&self, m: u64, b: u64) -> (u32, u32) {
        let mut done = 0;
        let mut open = 0;
        for &(e, w) in &self.kernel.edges {
            if e & b != 0 {
                continue;
            }
            if e & !m == 0 {
                done += w;
            } else {
                open += w;
            }
        }
        (done, open)
    }

    fn moves(&self, m: u64, b: u64) -> Moves {
        let free = self.all & !m & !b;
        let mut out = Moves { bits: [0; 64], len: 0 };
        if !self.ordering {
            let mut rest = free;
            while rest != 0 {
                out.bits[out.len] = rest.trailing_zeros() as u8;
                out.len += 1;
                rest &= rest - 1;
            }
            return out;
        }
        // h: weight completed by taking the bit; c: weight the bit touches
        let mut h = [0u32; 64];
        let mut c = [0u32; 64];
        for &(e, w) in &self.kernel.edges {
            if e & b != 0 {
                continue;
            }
            let rest = e & !m;
            if rest == 0 {
                continue;
            }
            if rest & (rest - 1) == 0 {
                h[rest.trailing_zeros() as usize] += w;
            }
            let mut r = rest;
            while r != 0 {
                c[r.trailing_zeros() as usize] += w;
                r &= r - 1;
            }
        }
        let mut rest = free;
        while rest != 0 {
            out.bits[out.len] = rest.trailing_zeros() as u8;
            out.len += 1;
            rest &= rest - 1;
        }
        let key = |x: u8| (std::cmp::Reverse(h[x as usize]), std::cmp::Reverse(c[x as usize]), x);
        out.bits[..out.len].sort_unstable_by_key(|&x| key(x));
        let top = h[out.bits[0] as usize];
        let mut kept = 1;
        for i in 1..out.len {
            let x = out.bits[i];
            if c[x as usize] > top {
                out.bits[kept] = x;
                kept += 1;
            }
        }
        out.len = kept;
        out
    }

    fn key(m: u64, b: u64, mover: Player) -> (u64, u64) {
        (m, if mover == Player::Maker { b } else { b | MOVER_BIT })
    }

    fn value(&self, m: u64, b: u64, mover: Player) -> Result<u32, SolveError> {
        self.budget.tick()?;
        let (done, open) = self.tally(m, b);
        if open == 0 {
            return Ok(done);
        }
        let key = Self::key(m, b, mover);
        if let Some(v) = self.table.get(key) {
            return Ok(v);
        }
        let (lo, hi) = (done, done + open);
        let moves = self.moves(m, b);
        let mut best = match mover {
            Player::Maker => lo,
            Player::Breaker => hi,
        };
        for &x in moves.as_slice() {
            let bit = 1u64 << x;
            match mover {
                Player::Maker => {
                    best = best.max(self.value(m | bit, b, Player::Breaker)?);
                    if best == hi {
                        break;
                    }
                }
                Player::Breaker => {
                    best = best.min(self.value(m, b | bit, Player::Maker)?);
                    if best == lo {
                        break;
                    }
                }
            }
        }
        if self.table.insert(key, best) {
            self.budget.stored()?;
        }
        Ok(best)
    }

    fn root_parallel(&self, mover: Player, threads: usize) -> Result<u32, SolveError> {
        let (done, open) = self.tally(0, 0);
        if open == 0 {
            return Ok(done);
        }
        let moves = self.moves(0, 0);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool");
        let values: Vec<Result<u32, SolveError>> = pool.install(|| {
            moves
                .as_slice()
                .par_iter()
                .map(|&x| {
                    let bit = 1u64 << x;
                    match mover {
                        Player::Maker => self.value(bit, 0, Player::Breaker),
                        Player::Breaker => self.value(0, bit, Player::Maker),
                    }
                })
                .collect()
        });
        let mut best: Option<u32> = None;
        for v in values {
            let v = v?;
            best = Some(match (best, mover) {
                (None, _) => v,
                (Some(cur), Player::Maker) => cur.max(v),
                (Some(cur), Player::Breaker) => cur.min(v),
            });
        }
        Ok(best.expect("a nonterminal root has a move"))
    }
}
