//! Exact computation of `Ms` / `Bs` by memoized minimax.
//!
//! With every reduction switched off, [`solve`] runs a plain brute-force
//! minimax over the full graph (the oracle route). Otherwise the position is
//! simplified (closed forms, pairing dominating sets, component extraction,
//! decomposition, Super Lemma pairing) and the remaining game is compiled into
//! a small hypergraph over the free vertices and searched there.

mod kernel;
mod oracle;
mod ordering;
mod super_lemma;
mod table;

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::closed_form;
use crate::graph::Graph;
use crate::milnor::{self, PdsSearch};
use crate::position::{decompose, happy_count, Player, Position, PositionError};

pub use ordering::{order_moves, MoveOrdering};
pub use super_lemma::{super_lemma_hypothesis, super_lemma_reduce, super_lemma_steps};

/// Largest number of free vertices a compiled search can address.
pub const MAX_SEARCH_VERTICES: usize = 63;

/// Vertex-count guard for the pairing-dominating-set fast path inside the solver.
pub const PDS_FAST_PATH_LIMIT: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ScorePair {
    pub ms: u32,
    pub bs: u32,
}

impl ScorePair {
    pub fn new(ms: u32, bs: u32) -> ScorePair {
        ScorePair { ms, bs }
    }

    pub fn get(&self, mover: Player) -> u32 {
        match mover {
            Player::Maker => self.ms,
            Player::Breaker => self.bs,
        }
    }

    /// Zero temperature: the component adds the same amount whoever moves.
    pub fn is_cold(&self) -> bool {
        self.ms == self.bs
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveConfig {
    pub super_lemma: bool,
    pub decompose: bool,
    pub move_ordering: bool,
    pub component_split: bool,
    pub pds_fast_path: bool,
    pub closed_form_dispatch: bool,
    /// Maximum number of memoized positions across the whole call.
    pub memo_capacity: Option<usize>,
    /// Maximum number of searched nodes across the whole call.
    pub node_budget: Option<u64>,
    pub time_budget: Option<Duration>,
    /// Root moves are searched in parallel when greater than one.
    pub threads: usize,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            super_lemma: true,
            decompose: true,
            move_ordering: true,
            component_split: true,
            pds_fast_path: true,
            closed_form_dispatch: true,
            memo_capacity: None,
            node_budget: None,
            time_budget: None,
            threads: 1,
        }
    }
}

impl SolveConfig {
    /// Every reduction enabled.
    pub fn full() -> SolveConfig {
        SolveConfig::default()
    }

    /// Every reduction disabled: plain brute-force minimax.
    pub fn oracle() -> SolveConfig {
        SolveConfig {
            super_lemma: false,
            decompose: false,
            move_ordering: false,
            component_split: false,
            pds_fast_path: false,
            closed_form_dispatch: false,
            ..SolveConfig::default()
        }
    }

    pub fn is_oracle(&self) -> bool {
        !(self.super_lemma
            || self.decompose
            || self.move_ordering
            || self.component_split
            || self.pds_fast_path
            || self.closed_form_dispatch)
    }

    pub fn with_node_budget(mut self, nodes: u64) -> SolveConfig {
        self.node_budget = Some(nodes);
        self
    }

    pub fn with_time_budget(mut self, budget: Duration) -> SolveConfig {
        self.time_budget = Some(budget);
        self
    }

    /// All sixty-four on/off combinations of the reduction flags.
    pub fn all_flag_combinations() -> Vec<SolveConfig> {
        (0u32..64)
            .map(|bits| SolveConfig {
                super_lemma: bits & 1 != 0,
                decompose: bits & 2 != 0,
                move_ordering: bits & 4 != 0,
                component_split: bits & 8 != 0,
                pds_fast_path: bits & 16 != 0,
                closed_form_dispatch: bits & 32 != 0,
                ..SolveConfig::default()
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Resource {
    Time,
    Nodes,
    Memo,
    /// Too many free vertices left after reduction for the bit-mask search.
    FreeVertices { free: usize, limit: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("resource exceeded: {}", describe(.0))]
    ResourceExceeded(Resource),
    #[error(transparent)]
    Position(#[from] PositionError),
    #[error("no free vertex to play")]
    NoMoves,
}

fn describe(r: &Resource) -> String {
    match r {
        Resource::Time => "time budget".into(),
        Resource::Nodes => "node budget".into(),
        Resource::Memo => "memo capacity".into(),
        Resource::FreeVertices { free, limit } => {
            format!("{free} free vertices after reduction (limit {limit})")
        }
    }
}

/// A simplification applied while solving, for reports and traces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Reduction {
    ClosedForm { class: String, score: u32 },
    PairingDominatingSet { pairs: usize },
    ComponentSplit { components: usize, extracted: u32, residual: usize },
    MilnorBounds { value: u32 },
    Decompose { pendants: usize },
    SuperLemma { pairs: usize },
    KernelSplit { components: usize, extracted: u32, residual: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveReport {
    pub score: u32,
    pub mover: Player,
    pub nodes: u64,
    pub memo_entries: usize,
    pub reductions: Vec<Reduction>,
}

/// Limits and counters shared by every search launched from one call.
pub(crate) struct Budget {
    deadline: Option<Instant>,
    node_limit: Option<u64>,
    memo_capacity: Option<usize>,
    nodes: AtomicU64,
    memo: AtomicUsize,
}

impl Budget {
    pub(crate) fn new(cfg: &SolveConfig) -> Budget {
        Budget {
            deadline: cfg.time_budget.map(|d| Instant::now() + d),
            node_limit: cfg.node_budget,
            memo_capacity: cfg.memo_capacity,
            nodes: AtomicU64::new(0),
            memo: AtomicUsize::new(0),
        }
    }

    pub(crate) fn tick(&self) -> Result<(), SolveError> {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if self.node_limit.is_some_and(|limit| n > limit) {
            return Err(SolveError::ResourceExceeded(Resource::Nodes));
        }
        if n.is_multiple_of(1024) && self.deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(SolveError::ResourceExceeded(Resource::Time));
        }
        Ok(())
    }

    pub(crate) fn stored(&self) -> Result<(), SolveError> {
        let m = self.memo.fetch_add(1, Ordering::Relaxed) + 1;
        if self.memo_capacity.is_some_and(|cap| m > cap) {
            return Err(SolveError::ResourceExceeded(Resource::Memo));
        }
        Ok(())
    }

    pub(crate) fn nodes(&self) -> u64 {
        self.nodes.load(Ordering::Relaxed)
    }

    pub(crate) fn memo_entries(&self) -> usize {
        self.memo.load(Ordering::Relaxed)
    }
}

/// Optimal final score of `pos` when `mover` plays next.
pub fn solve(pos: &Position, mover: Player, cfg: &SolveConfig) -> Result<u32, SolveError> {
    solve_report(pos, mover, cfg).map(|r| r.score)
}

/// [`solve`] plus node counts and the reductions that fired.
pub fn solve_report(pos: &Position, mover: Player, cfg: &SolveConfig) -> Result<SolveReport, SolveError> {
    let budget = Budget::new(cfg);
    let mut log = Vec::new();
    let score = solve_inner(pos, mover, cfg, &budget, &mut log)?;
    Ok(SolveReport {
        score,
        mover,
        nodes: budget.nodes(),
        memo_entries: budget.memo_entries(),
        reductions: log,
    })
}

/// `(Ms(G), Bs(G))` on the empty position.
pub fn solve_pair(g: &Graph, cfg: &SolveConfig) -> Result<ScorePair, SolveError> {
    solve_position_pair(&Position::empty(Arc::new(g.clone())), cfg)
}

pub fn solve_position_pair(pos: &Position, cfg: &SolveConfig) -> Result<ScorePair, SolveError> {
    let budget = Budget::new(cfg);
    let mut log = Vec::new();
    Ok(ScorePair {
        ms: solve_inner(pos, Player::Maker, cfg, &budget, &mut log)?,
        bs: solve_inner(pos, Player::Breaker, cfg, &budget, &mut log)?,
    })
}

/// An optimal move for `mover` and the score it secures; ties go to the lowest id.
pub fn best_move(pos: &Position, mover: Player, cfg: &SolveConfig) -> Result<(usize, u32), SolveError> {
    let budget = Budget::new(cfg);
    best_move_inner(pos, mover, cfg, &budget, &mut Vec::new())
}

fn best_move_inner(
    pos: &Position,
    mover: Player,
    cfg: &SolveConfig,
    budget: &Budget,
    log: &mut Vec<Reduction>,
) -> Result<(usize, u32), SolveError> {
    let mut best: Option<(usize, u32)> = None;
    for v in pos.free_vertices() {
        let child = pos.play(v, mover)?;
        let value = solve_inner(&child, mover.opponent(), cfg, budget, log)?;
        let better = match (best, mover) {
            (None, _) => true,
            (Some((_, b)), Player::Maker) => value > b,
            (Some((_, b)), Player::Breaker) => value < b,
        };
        if better {
            best = Some((v, value));
        }
    }
    best.ok_or(SolveError::NoMoves)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TracePly {
    pub ply: usize,
    pub mover: Player,
    pub vertex: usize,
    pub score: u32,
    pub nodes: u64,
    pub reductions: Vec<Reduction>,
}

/// Play optimal moves for both sides until the board is full.
pub fn principal_line(pos: &Position, mover: Player, cfg: &SolveConfig) -> Result<Vec<TracePly>, SolveError> {
    let budget = Budget::new(cfg);
    let mut pos = pos.clone();
    let mut mover = mover;
    let mut plies = Vec::new();
    while !pos.is_terminal() {
        let before = budget.nodes();
        let mut log = Vec::new();
        let (vertex, score) = best_move_inner(&pos, mover, cfg, &budget, &mut log)?;
        log.dedup();
        plies.push(TracePly {
            ply: plies.len() + 1,
            mover,
            vertex,
            score,
            nodes: budget.nodes() - before,
            reductions: log,
        });
        pos = pos.play(vertex, mover)?;
        mover = mover.opponent();
    }
    Ok(plies)
}

pub(crate) fn solve_inner(
    pos: &Position,
    mover: Player,
    cfg: &SolveConfig,
    budget: &Budget,
    log: &mut Vec<Reduction>,
) -> Result<u32, SolveError> {
    if pos.is_terminal() {
        return Ok(happy_count(pos)? as u32);
    }
    if cfg.is_oracle() {
        return oracle::solve(pos, mover, budget);
    }
    if pos.is_fresh() {
        let g = pos.graph();
        if cfg.closed_form_dispatch {
            if let Some(score) = closed_form::formula_score(g, mover) {
                log.push(Reduction::ClosedForm {
                    class: closed_form::classify(g).to_string(),
                    score,
                });
                return Ok(score);
            }
        }
        if cfg.component_split && !g.is_connected() {
            return split_and_solve(g, mover, cfg, budget, log);
        }
        if cfg.pds_fast_path {
            if let PdsSearch::Found(pds) = milnor::find_pairing_dominating_set_within(g, PDS_FAST_PATH_LIMIT) {
                log.push(Reduction::PairingDominatingSet { pairs: pds.pairs.len() });
                return Ok(0);
            }
        }
    }
    kernel_route(pos, mover, cfg, budget, log, true)
}

/// Score pair of a connected fresh component, cheapest method first.
pub(crate) fn component_pair(
    g: &Graph,
    cfg: &SolveConfig,
    budget: &Budget,
    log: &mut Vec<Reduction>,
) -> Result<ScorePair, SolveError> {
    if cfg.closed_form_dispatch {
        let class = closed_form::classify(g);
        if let (Some(ms), Some(bs)) = (
            closed_form::formula_score(g, Player::Maker),
            closed_form::formula_score(g, Player::Breaker),
        ) {
            log.push(Reduction::ClosedForm { class: class.to_string(), score: ms });
            return Ok(ScorePair { ms, bs });
        }
    }
    if cfg.pds_fast_path {
        if let PdsSearch::Found(pds) = milnor::find_pairing_dominating_set_within(g, PDS_FAST_PATH_LIMIT) {
            log.push(Reduction::PairingDominatingSet { pairs: pds.pairs.len() });
            return Ok(ScorePair { ms: 0, bs: 0 });
        }
    }
    let pos = Position::empty(Arc::new(g.clone()));
    if cfg.is_oracle() {
        return Ok(ScorePair {
            ms: oracle::solve(&pos, Player::Maker, budget)?,
            bs: oracle::solve(&pos, Player::Breaker, budget)?,
        });
    }
    Ok(ScorePair {
        ms: kernel_route(&pos, Player::Maker, cfg, budget, log, false)?,
        bs: kernel_route(&pos, Player::Breaker, cfg, budget, log, false)?,
    })
}

fn split_and_solve(
    g: &Graph,
    mover: Player,
    cfg: &SolveConfig,
    budget: &Budget,
    log: &mut Vec<Reduction>,
) -> Result<u32, SolveError> {
    let split = milnor::split_components_inner(g, cfg, budget, log)?;
    log.push(Reduction::ComponentSplit {
        components: split.component_count,
        extracted: split.extracted,
        residual: split.residual.len(),
    });
    match split.residual.len() {
        0 => Ok(split.extracted),
        1 => Ok(split.extracted + split.residual[0].1.get(mover)),
        _ => {
            let bounds = split.bounds.expect("bounds exist for a nonempty residual");
            if let Some(value) = bounds.exact(mover) {
                log.push(Reduction::MilnorBounds { value });
                return Ok(split.extracted + value);
            }
            let parts: Vec<&Graph> = split.residual.iter().map(|(g, _)| g).collect();
            let joint = Position::empty(Arc::new(Graph::disjoint_union(&parts)));
            Ok(split.extracted + kernel_route(&joint, mover, cfg, budget, log, false)?)
        }
    }
}

pub(crate) fn milnor_exact(pairs: &[ScorePair], mover: Player) -> Option<u32> {
    milnor::sum_bounds(pairs).and_then(|b| b.exact(mover))
}

fn kernel_route(
    pos: &Position,
    mover: Player,
    cfg: &SolveConfig,
    budget: &Budget,
    log: &mut Vec<Reduction>,
    allow_split: bool,
) -> Result<u32, SolveError> {
    let mut pos = pos.clone();
    if cfg.decompose && !pos.breaker().is_clear() {
        pos = decompose(&pos);
        log.push(Reduction::Decompose { pendants: pos.breaker().count_ones(..) });
    }
    if cfg.super_lemma {
        let (reduced, pairs) = super_lemma_steps(&pos);
        if !pairs.is_empty() {
            log.push(Reduction::SuperLemma { pairs: pairs.len() });
            pos = reduced;
        }
    }
    if pos.is_terminal() {
        return Ok(happy_count(&pos)? as u32);
    }
    let kernel = kernel::Kernel::compile(&pos)?;
    kernel.solve(mover, cfg, budget, log, allow_split && cfg.component_split)
}
