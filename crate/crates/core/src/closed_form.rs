//! Recognition of the solved graph classes and their closed-form scores.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::generators;
use crate::graph::Graph;
use crate::position::Player;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum GraphClass {
    Path { n: usize },
    Cycle { n: usize },
    /// Disconnected, every component a path or a cycle. Lengths are sorted.
    UnionOfPathsAndCycles { paths: Vec<usize>, cycles: Vec<usize> },
    /// A tree with exactly one vertex of degree at least 3. Legs are sorted.
    SubdividedStar { legs: Vec<usize> },
    /// Perfect binary tree of depth at least 2 (smaller ones are paths).
    CompleteBinaryTree { depth: u32 },
    Unknown,
}

impl fmt::Display for GraphClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self {
            GraphClass::Path { n } => write!(f, "path({n})"),
            GraphClass::Cycle { n } => write!(f, "cycle({n})"),
            GraphClass::UnionOfPathsAndCycles { paths, cycles } => {
                write!(f, "union(paths=[{}], cycles=[{}])", list(paths), list(cycles))
            }
            GraphClass::SubdividedStar { legs } => write!(f, "subdivided_star([{}])", list(legs)),
            GraphClass::CompleteBinaryTree { depth } => write!(f, "complete_binary_tree({depth})"),
            GraphClass::Unknown => f.write_str("unknown"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosedFormError {
    #[error("a path needs at least one vertex")]
    EmptyPath,
    #[error("a cycle needs at least three vertices, got {0}")]
    ShortCycle(usize),
    #[error("a subdivided star needs at least one leg")]
    NoLegs,
    #[error("subdivided star legs must have length at least 1")]
    EmptyLeg,
}

/// Path or cycle class of a connected graph of max degree 2.
fn path_or_cycle(g: &Graph) -> Option<GraphClass> {
    if g.max_degree() > 2 {
        return None;
    }
    let n = g.n();
    if g.edge_count() + 1 == n {
        Some(GraphClass::Path { n })
    } else if g.edge_count() == n && n >= 3 {
        Some(GraphClass::Cycle { n })
    } else {
        None
    }
}

fn star_legs(g: &Graph) -> Option<Vec<usize>> {
    if !g.is_tree() {
        return None;
    }
    let mut hubs = (0..g.n()).filter(|&v| g.degree(v) >= 3);
    let center = hubs.next()?;
    if hubs.next().is_some() {
        return None;
    }
    let mut legs: Vec<usize> = g
        .neighbors(center)
        .iter()
        .map(|&first| {
            let (mut prev, mut cur, mut len) = (center, first, 1);
            while let Some(&next) = g.neighbors(cur).iter().find(|&&x| x != prev) {
                prev = cur;
                cur = next;
                len += 1;
            }
            len
        })
        .collect();
    legs.sort_unstable();
    Some(legs)
}

fn binary_tree_depth(g: &Graph) -> Option<u32> {
    let n = g.n();
    if n < 7 || !(n + 1).is_power_of_two() || !g.is_tree() {
        return None;
    }
    let depth = (n + 1).trailing_zeros() - 1;
    let mut roots = (0..n).filter(|&v| g.degree(v) == 2);
    let root = roots.next()?;
    if roots.next().is_some() {
        return None;
    }
    // breadth-first: level k must hold 2^k vertices, leaves only on the last level
    let mut level = vec![root];
    let mut parent = vec![usize::MAX; n];
    parent[root] = root;
    for k in 0..=depth {
        if level.len() != 1 << k {
            return None;
        }
        let mut next = Vec::new();
        for &v in &level {
            let want = if k == depth { 1 } else if k == 0 { 2 } else { 3 };
            if g.degree(v) != want {
                return None;
            }
            for &u in g.neighbors(v) {
                if parent[u] == usize::MAX {
                    parent[u] = v;
                    next.push(u);
                }
            }
        }
        level = next;
    }
    level.is_empty().then_some(depth)
}

pub fn classify(g: &Graph) -> GraphClass {
    if g.n() == 0 {
        return GraphClass::Unknown;
    }
    if g.is_connected() {
        if let Some(class) = path_or_cycle(g) {
            return class;
        }
        if let Some(depth) = binary_tree_depth(g) {
            return GraphClass::CompleteBinaryTree { depth };
        }
        if let Some(legs) = star_legs(g) {
            return GraphClass::SubdividedStar { legs };
        }
        return GraphClass::Unknown;
    }
    let mut paths = Vec::new();
    let mut cycles = Vec::new();
    for (comp, _) in g.components() {
        match path_or_cycle(&comp) {
            Some(GraphClass::Path { n }) => paths.push(n),
            Some(GraphClass::Cycle { n }) => cycles.push(n),
            _ => return GraphClass::Unknown,
        }
    }
    paths.sort_unstable();
    cycles.sort_unstable();
    GraphClass::UnionOfPathsAndCycles { paths, cycles }
}

impl GraphClass {
    /// A graph of this class; `None` for `Unknown`.
    pub fn to_graph(&self) -> Option<Graph> {
        Some(match self {
            GraphClass::Path { n } => generators::path(*n),
            GraphClass::Cycle { n } => generators::cycle(*n),
            GraphClass::UnionOfPathsAndCycles { paths, cycles } => {
                let parts: Vec<Graph> = paths
                    .iter()
                    .map(|&n| generators::path(n))
                    .chain(cycles.iter().map(|&n| generators::cycle(n)))
                    .collect();
                Graph::disjoint_union(&parts.iter().collect::<Vec<_>>())
            }
            GraphClass::SubdividedStar { legs } => generators::subdivided_star(legs),
            GraphClass::CompleteBinaryTree { depth } => generators::complete_binary_tree(*depth),
            GraphClass::Unknown => return None,
        })
    }
}

/// Even paths score 0; odd paths score 1 when Maker moves first.
pub fn path_score(n: usize, mover: Player) -> Result<u32, ClosedFormError> {
    if n == 0 {
        return Err(ClosedFormError::EmptyPath);
    }
    Ok((n % 2 == 1 && mover == Player::Maker) as u32)
}

/// With `l` odd paths: `Ms = ceil(l/2)`, `Bs = floor(l/2)`. Cycles and even
/// paths contribute nothing.
pub fn union_paths_score(paths: &[usize], cycles: &[usize], mover: Player) -> Result<u32, ClosedFormError> {
    if paths.contains(&0) {
        return Err(ClosedFormError::EmptyPath);
    }
    if let Some(&c) = cycles.iter().find(|&&c| c < 3) {
        return Err(ClosedFormError::ShortCycle(c));
    }
    let odd = paths.iter().filter(|&&n| n % 2 == 1).count() as u32;
    Ok(match mover {
        Player::Maker => odd.div_ceil(2),
        Player::Breaker => odd / 2,
    })
}

/// Legs counted in edges. With at most two legs the star is a path on
/// `1 + sum(legs)` vertices. Otherwise `Bs = 0` and `Ms = floor(l/2)` for `l`
/// odd legs, except `Ms = 1` when `l = 0`.
pub fn subdivided_star_score(legs: &[usize], mover: Player) -> Result<u32, ClosedFormError> {
    if legs.is_empty() {
        return Err(ClosedFormError::NoLegs);
    }
    if legs.contains(&0) {
        return Err(ClosedFormError::EmptyLeg);
    }
    if legs.len() <= 2 {
        return path_score(1 + legs.iter().sum::<usize>(), mover);
    }
    let odd = legs.iter().filter(|&&l| l % 2 == 1).count() as u32;
    Ok(match mover {
        Player::Breaker => 0,
        Player::Maker if odd == 0 => 1,
        Player::Maker => odd / 2,
    })
}

/// `2^(d-2)` for both movers when `d >= 2`; otherwise 1 for Maker first, 0 for Breaker first.
pub fn complete_binary_tree_score(depth: u32, mover: Player) -> u32 {
    if depth >= 2 {
        1 << (depth - 2)
    } else {
        (mover == Player::Maker) as u32
    }
}

/// Classify then apply the matching formula; `None` for unknown graphs.
pub fn formula_score(g: &Graph, mover: Player) -> Option<u32> {
    match classify(g) {
        GraphClass::Path { n } => path_score(n, mover).ok(),
        GraphClass::Cycle { .. } => Some(0),
        GraphClass::UnionOfPathsAndCycles { paths, cycles } => union_paths_score(&paths, &cycles, mover).ok(),
        GraphClass::SubdividedStar { legs } => subdivided_star_score(&legs, mover).ok(),
        GraphClass::CompleteBinaryTree { depth } => Some(complete_binary_tree_score(depth, mover)),
        GraphClass::Unknown => None,
    }
}
