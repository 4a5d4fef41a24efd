//! Game positions `(G, M, B)` and the scoring primitives defined on them.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{parse_document, Graph, GraphBuilder, GraphError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Maker,
    Breaker,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Maker => Player::Breaker,
            Player::Breaker => Player::Maker,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Maker => "maker",
            Player::Breaker => "breaker",
        })
    }
}

impl FromStr for Player {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "maker" | "m" => Ok(Player::Maker),
            "breaker" | "b" => Ok(Player::Breaker),
            other => Err(format!("unknown player `{other}` (expected maker or breaker)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PositionError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("vertex {0} is claimed by both players")]
    Overlap(usize),
    #[error("vertex {0} is not free")]
    NotFree(usize),
    #[error("position is not terminal ({0} free vertices)")]
    NotTerminal(usize),
}

/// A graph with disjoint Maker and Breaker vertex sets. The free set is always
/// derived from the two claimed sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Position {
    graph: Arc<Graph>,
    maker: FixedBitSet,
    breaker: FixedBitSet,
}

impl Position {
    pub fn empty(graph: Arc<Graph>) -> Position {
        let n = graph.n();
        Position {
            graph,
            maker: FixedBitSet::with_capacity(n),
            breaker: FixedBitSet::with_capacity(n),
        }
    }

    pub fn new(graph: Arc<Graph>, maker: &[usize], breaker: &[usize]) -> Result<Position, PositionError> {
        let mut pos = Position::empty(graph);
        let n = pos.graph.n();
        for (set, ids) in [(&mut pos.maker, maker), (&mut pos.breaker, breaker)] {
            for &v in ids {
                if v >= n {
                    return Err(PositionError::VertexOutOfRange { vertex: v, n });
                }
                set.insert(v);
            }
        }
        if let Some(v) = pos.maker.intersection(&pos.breaker).next() {
            return Err(PositionError::Overlap(v));
        }
        Ok(pos)
    }

    /// Parse a position file: a graph file followed by `M: ...` and `B: ...` lines.
    pub fn parse(text: &str) -> Result<Position, GraphError> {
        let doc = parse_document(text)?;
        let missing = |what: &str| GraphError::Parse {
            line: text.lines().count().max(1),
            msg: format!("missing `{what}` line"),
        };
        let (mline, maker) = doc.maker.ok_or_else(|| missing("M:"))?;
        let (bline, breaker) = doc.breaker.ok_or_else(|| missing("B:"))?;
        Position::new(Arc::new(doc.graph), &maker, &breaker).map_err(|e| GraphError::Parse {
            line: mline.max(bline),
            msg: e.to_string(),
        })
    }

    pub fn to_text(&self) -> String {
        let join = |s: &FixedBitSet| s.ones().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
        format!("{}M: {}\nB: {}\n", self.graph.to_text(), join(&self.maker), join(&self.breaker))
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn graph_arc(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn maker(&self) -> &FixedBitSet {
        &self.maker
    }

    pub fn breaker(&self) -> &FixedBitSet {
        &self.breaker
    }

    pub fn is_maker(&self, v: usize) -> bool {
        self.maker.contains(v)
    }

    pub fn is_breaker(&self, v: usize) -> bool {
        self.breaker.contains(v)
    }

    pub fn is_free(&self, v: usize) -> bool {
        v < self.graph.n() && !self.maker.contains(v) && !self.breaker.contains(v)
    }

    pub fn free_vertices(&self) -> Vec<usize> {
        (0..self.graph.n()).filter(|&v| self.is_free(v)).collect()
    }

    pub fn free_count(&self) -> usize {
        self.graph.n() - self.maker.count_ones(..) - self.breaker.count_ones(..)
    }

    pub fn is_terminal(&self) -> bool {
        self.free_count() == 0
    }

    /// True when no vertex has been claimed yet.
    pub fn is_fresh(&self) -> bool {
        self.maker.is_clear() && self.breaker.is_clear()
    }

    /// Number of moves already played (both players).
    pub fn claimed_count(&self) -> usize {
        self.maker.count_ones(..) + self.breaker.count_ones(..)
    }

    /// Copy of this position with `v` claimed by `player`.
    pub fn play(&self, v: usize, player: Player) -> Result<Position, PositionError> {
        if v >= self.graph.n() {
            return Err(PositionError::VertexOutOfRange { vertex: v, n: self.graph.n() });
        }
        if !self.is_free(v) {
            return Err(PositionError::NotFree(v));
        }
        let mut next = self.clone();
        match player {
            Player::Maker => next.maker.insert(v),
            Player::Breaker => next.breaker.insert(v),
        }
        Ok(next)
    }

    /// Claim `u` for Maker and `v` for Breaker at once.
    pub fn claim_pair(&self, u: usize, v: usize) -> Result<Position, PositionError> {
        self.play(u, Player::Maker)?.play(v, Player::Breaker)
    }

    /// Vertices whose closed neighborhood is already entirely Maker's.
    pub fn happy_now(&self) -> usize {
        (0..self.graph.n()).filter(|&w| self.closed_inside_maker(w, None)).count()
    }

    fn closed_inside_maker(&self, w: usize, extra: Option<usize>) -> bool {
        let ok = |x: usize| self.maker.contains(x) || Some(x) == extra;
        ok(w) && self.graph.neighbors(w).iter().all(|&x| ok(x))
    }
}

/// Final score of a terminal position: `|{v : N[v] ⊆ M}|`.
pub fn happy_count(pos: &Position) -> Result<usize, PositionError> {
    let free = pos.free_count();
    if free > 0 {
        return Err(PositionError::NotTerminal(free));
    }
    Ok(pos.happy_now())
}

/// Number of vertices made happy immediately if Maker claims the free vertex `v`.
/// Only vertices of `N[v]` are counted; vertices that are already happy are not.
pub fn instant_gain(pos: &Position, v: usize) -> Result<usize, PositionError> {
    if !pos.is_free(v) {
        return Err(PositionError::NotFree(v));
    }
    Ok(pos
        .graph
        .closed_neighborhood(v)
        .into_iter()
        .filter(|&w| pos.closed_inside_maker(w, Some(v)))
        .count())
}

/// `|N[u] \ B|`, the most points a claim of `u` can ever be worth.
pub fn unblocked_closed_degree(pos: &Position, u: usize) -> usize {
    pos.graph
        .closed_neighborhood(u)
        .into_iter()
        .filter(|&x| !pos.breaker.contains(x))
        .count()
}

/// The decomposed position `([G]_B, [M]_B, [B]_B)`.
///
/// Breaker's vertices are deleted; every surviving vertex that had a Breaker
/// neighbor receives one pendant Breaker vertex. Survivors keep their relative
/// order and are renumbered densely; pendants follow, ordered by host id.
pub fn decompose(pos: &Position) -> Position {
    let g = pos.graph();
    let survivors: Vec<usize> = (0..g.n()).filter(|&v| !pos.is_breaker(v)).collect();
    let sub = g.induced_subgraph(&survivors);
    let mut b = GraphBuilder::new(sub.n());
    for (u, v) in sub.edges() {
        b.add_edge(u, v).expect("edges of an induced subgraph are valid");
    }
    for v in 0..sub.n() {
        if let Some(label) = sub.label(v) {
            b.set_label(v, label).expect("in range");
        }
    }
    let mut maker = Vec::new();
    let mut pendants = Vec::new();
    for (local, &v) in survivors.iter().enumerate() {
        if pos.is_maker(v) {
            maker.push(local);
        }
        if g.neighbors(v).iter().any(|&x| pos.is_breaker(x)) {
            let p = b.add_vertex();
            b.add_edge(local, p).expect("pendant edge is valid");
            pendants.push(p);
        }
    }
    Position::new(Arc::new(b.build()), &maker, &pendants).expect("decomposed sets are disjoint")
}
