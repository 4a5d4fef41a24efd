//! Disconnected games: sum bounds, zero-temperature extraction and pairing
//! dominating sets.

use rustc_hash::FxHashSet;
use serde::Serialize;

use crate::graph::Graph;
use crate::position::Player;
use crate::solver::{component_pair, Budget, Reduction, ScorePair, SolveConfig, SolveError};

/// Default vertex-count guard for [`find_pairing_dominating_set`].
pub const PDS_DEFAULT_LIMIT: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SumBounds {
    pub bs_lower: u32,
    pub bs_upper: u32,
    pub ms_lower: u32,
    pub ms_upper: u32,
}

impl SumBounds {
    pub fn lower(&self, mover: Player) -> u32 {
        match mover {
            Player::Maker => self.ms_lower,
            Player::Breaker => self.bs_lower,
        }
    }

    pub fn upper(&self, mover: Player) -> u32 {
        match mover {
            Player::Maker => self.ms_upper,
            Player::Breaker => self.bs_upper,
        }
    }

    /// The score when the interval for `mover` is a single point.
    pub fn exact(&self, mover: Player) -> Option<u32> {
        (self.lower(mover) == self.upper(mover)).then(|| self.lower(mover))
    }

    pub fn contains(&self, pair: ScorePair) -> bool {
        (self.bs_lower..=self.bs_upper).contains(&pair.bs) && (self.ms_lower..=self.ms_upper).contains(&pair.ms)
    }
}

/// Bounds on the score pair of a disjoint union, folded left to right over the
/// binary bounds
/// `Bs1 + Bs2 <= Bs <= min(Ms1 + Bs2, Bs1 + Ms2)` and
/// `max(Ms1 + Bs2, Bs1 + Ms2) <= Ms <= Ms1 + Ms2`.
///
/// Intermediate sums are intervals, so each fold uses the weakest endpoint.
/// `None` for an empty list.
pub fn sum_bounds(parts: &[ScorePair]) -> Option<SumBounds> {
    let (first, rest) = parts.split_first()?;
    let mut acc = SumBounds {
        bs_lower: first.bs,
        bs_upper: first.bs,
        ms_lower: first.ms,
        ms_upper: first.ms,
    };
    for p in rest {
        acc = SumBounds {
            bs_lower: acc.bs_lower + p.bs,
            bs_upper: (acc.ms_upper + p.bs).min(acc.bs_upper + p.ms),
            ms_lower: (acc.ms_lower + p.bs).max(acc.bs_lower + p.ms),
            ms_upper: acc.ms_upper + p.ms,
        };
    }
    Some(acc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairingDominatingSet {
    pub pairs: Vec<(usize, usize)>,
}

impl PairingDominatingSet {
    /// Pairs are disjoint and every vertex lies in `N[x] ∩ N[y]` for some pair.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        let mut used = vec![false; g.n()];
        let mut covered = vec![false; g.n()];
        for &(x, y) in &self.pairs {
            if x == y || x >= g.n() || y >= g.n() || used[x] || used[y] {
                return false;
            }
            used[x] = true;
            used[y] = true;
            let ny = g.closed_neighborhood(y);
            for w in g.closed_neighborhood(x) {
                if ny.binary_search(&w).is_ok() {
                    covered[w] = true;
                }
            }
        }
        covered.into_iter().all(|c| c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum PdsSearch {
    Found(PairingDominatingSet),
    NoneExists,
    NotAttempted { vertices: usize, limit: usize },
}

pub fn find_pairing_dominating_set(g: &Graph) -> PdsSearch {
    find_pairing_dominating_set_within(g, PDS_DEFAULT_LIMIT)
}

/// Exact backtracking: cover the lowest uncovered vertex with a disjoint pair
/// from its closed neighborhood, best coverage first, remembering failed
/// `(covered, used)` states.
pub fn find_pairing_dominating_set_within(g: &Graph, limit: usize) -> PdsSearch {
    let n = g.n();
    if n > limit.min(64) {
        return PdsSearch::NotAttempted { vertices: n, limit: limit.min(64) };
    }
    if n == 0 {
        return PdsSearch::Found(PairingDominatingSet { pairs: Vec::new() });
    }
    let closed = g.closed_masks().expect("at most 64 vertices");
    let all = u64::MAX >> (64 - n);
    let mut search = Pds { closed, all, failed: FxHashSet::default(), pairs: Vec::new() };
    if search.run(0, 0) {
        let mut pairs = search.pairs;
        pairs.sort_unstable();
        PdsSearch::Found(PairingDominatingSet { pairs })
    } else {
        PdsSearch::NoneExists
    }
}

struct Pds {
    closed: Vec<u64>,
    all: u64,
    failed: FxHashSet<(u64, u64)>,
    pairs: Vec<(usize, usize)>,
}

impl Pds {
    fn run(&mut self, covered: u64, used: u64) -> bool {
        let open = self.all & !covered;
        if open == 0 {
            return true;
        }
        if self.failed.contains(&(covered, used)) {
            return false;
        }
        let w = open.trailing_zeros() as usize;
        let near = self.closed[w] & !used;
        let mut cands: Vec<(u32, usize, usize)> = Vec::new();
        let mut xs = near;
        while xs != 0 {
            let x = xs.trailing_zeros() as usize;
            xs &= xs - 1;
            let mut ys = xs;
            while ys != 0 {
                let y = ys.trailing_zeros() as usize;
                ys &= ys - 1;
                let gain = (self.closed[x] & self.closed[y] & open).count_ones();
                cands.push((gain, x, y));
            }
        }
        cands.sort_unstable_by(|a, b| b.0.cmp(&a.0).then((a.1, a.2).cmp(&(b.1, b.2))));
        for (_, x, y) in cands {
            self.pairs.push((x, y));
            let cov = covered | (self.closed[x] & self.closed[y]);
            if self.run(cov, used | 1 << x | 1 << y) {
                return true;
            }
            self.pairs.pop();
        }
        self.failed.insert((covered, used));
        false
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitOutcome {
    /// Sum of the scores of components with `ms == bs`.
    pub extracted: u32,
    /// Remaining components with their own score pairs, in vertex order.
    pub residual: Vec<(Graph, ScorePair)>,
    /// Sum bounds over the residual pairs; `None` when nothing remains.
    pub bounds: Option<SumBounds>,
    pub component_count: usize,
}

impl SplitOutcome {
    /// The exact pair when the residual is empty or a single component.
    pub fn exact_pair(&self) -> Option<ScorePair> {
        match self.residual.as_slice() {
            [] => Some(ScorePair::new(self.extracted, self.extracted)),
            [(_, p)] => Some(ScorePair::new(self.extracted + p.ms, self.extracted + p.bs)),
            _ => None,
        }
    }
}

/// Solve each component on its own (closed form, then pairing dominating set,
/// then search) and pull out those whose score does not depend on the mover.
pub fn split_components(g: &Graph, cfg: &SolveConfig) -> Result<SplitOutcome, SolveError> {
    let budget = Budget::new(cfg);
    split_components_inner(g, cfg, &budget, &mut Vec::new())
}

pub(crate) fn split_components_inner(
    g: &Graph,
    cfg: &SolveConfig,
    budget: &Budget,
    log: &mut Vec<Reduction>,
) -> Result<SplitOutcome, SolveError> {
    let comps = g.components();
    let mut extracted = 0;
    let mut residual = Vec::new();
    for (sub, _) in &comps {
        let pair = component_pair(sub, cfg, budget, log)?;
        if pair.is_cold() {
            extracted += pair.ms;
        } else {
            residual.push((sub.clone(), pair));
        }
    }
    let pairs: Vec<ScorePair> = residual.iter().map(|r| r.1).collect();
    Ok(SplitOutcome {
        extracted,
        bounds: sum_bounds(&pairs),
        residual,
        component_count: comps.len(),
    })
}
