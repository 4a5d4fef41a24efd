//! Score-preserving pairing of free vertices.
//!
//! For free `u`, `v` write `F(w) = N[w] ∩ V_F` for every vertex `w` with no
//! Breaker vertex in `N[w]`. The pair can be colored `(Maker, Breaker)` without
//! changing the score when the multiset `{F(w) \ {u} : u ∈ F(w), v ∉ F(w)}`
//! equals the same multiset with `u` and `v` exchanged.

use crate::partition::neighborhood_partition;
use crate::position::Position;

/// Free-vertex counts above this only get the twin pass.
const CASCADE_LIMIT: usize = 128;

fn live_sets(pos: &Position) -> Vec<Vec<usize>> {
    let g = pos.graph();
    (0..g.n())
        .filter_map(|w| {
            let closed = g.closed_neighborhood(w);
            if closed.iter().any(|&x| pos.is_breaker(x)) {
                return None;
            }
            let f: Vec<usize> = closed.into_iter().filter(|&x| pos.is_free(x)).collect();
            (!f.is_empty()).then_some(f)
        })
        .collect()
}

fn holds(sets: &[Vec<usize>], touching_u: &[usize], touching_v: &[usize], u: usize, v: usize) -> bool {
    let side = |touching: &[usize], this: usize, other: usize| {
        let mut out: Vec<Vec<usize>> = touching
            .iter()
            .map(|&i| &sets[i])
            .filter(|f| f.binary_search(&other).is_err())
            .map(|f| f.iter().copied().filter(|&x| x != this).collect())
            .collect();
        out.sort_unstable();
        out
    };
    side(touching_u, u, v) == side(touching_v, v, u)
}

/// Exact test of the pairing hypothesis for free vertices `u != v`.
pub fn super_lemma_hypothesis(pos: &Position, u: usize, v: usize) -> bool {
    let n = pos.graph().n();
    if u == v || u >= n || v >= n || !pos.is_free(u) || !pos.is_free(v) {
        return false;
    }
    let sets = live_sets(pos);
    let touching = |x: usize| -> Vec<usize> {
        (0..sets.len()).filter(|&i| sets[i].binary_search(&x).is_ok()).collect()
    };
    holds(&sets, &touching(u), &touching(v), u, v)
}

/// Applies pairings until none is found and returns the pairs as
/// `(maker vertex, breaker vertex)` in application order.
///
/// Same-type twins are paired first (lowest leftover per class, lower id to
/// Maker). Then, on positions with at most 128 free vertices, the exact
/// hypothesis is searched one pair at a time, since every pairing can create
/// new ones. Pairs that are twins among the free vertices are preferred.
pub fn super_lemma_steps(pos: &Position) -> (Position, Vec<(usize, usize)>) {
    let mut pos = pos.clone();
    let mut pairs = Vec::new();

    let partition = neighborhood_partition(pos.graph());
    for class in &partition.classes {
        let free: Vec<usize> = class.iter().copied().filter(|&v| pos.is_free(v)).collect();
        let start = free.len() % 2;
        for chunk in free[start..].chunks(2) {
            pos = pos.claim_pair(chunk[0], chunk[1]).expect("twins are free");
            pairs.push((chunk[0], chunk[1]));
        }
    }

    while pos.free_count() <= CASCADE_LIMIT {
        let Some((u, v)) = find_pair(&pos) else { break };
        pos = pos.claim_pair(u, v).expect("pair is free");
        pairs.push((u, v));
    }
    (pos, pairs)
}

pub fn super_lemma_reduce(pos: &Position) -> Position {
    super_lemma_steps(pos).0
}

fn find_pair(pos: &Position) -> Option<(usize, usize)> {
    let sets = live_sets(pos);
    let n = pos.graph().n();
    let mut touching = vec![Vec::new(); n];
    for (i, f) in sets.iter().enumerate() {
        for &x in f {
            touching[x].push(i);
        }
    }
    let free = pos.free_vertices();
    // an equal split requires equal incidence counts
    let mut by_count: Vec<(usize, usize)> = free.iter().map(|&x| (touching[x].len(), x)).collect();
    by_count.sort_unstable();
    let free_twins = |u: usize, v: usize| {
        let g = pos.graph();
        let side = |x: usize, other: usize| g.neighbors(x).iter().copied().filter(move |&y| y != other && pos.is_free(y));
        side(u, v).eq(side(v, u))
    };
    // twins of the free subgraph first, then any valid pair; lowest ids within each
    let mut best: Option<(bool, usize, usize)> = None;
    for bucket in by_count.chunk_by(|a, b| a.0 == b.0) {
        for (i, &(_, u)) in bucket.iter().enumerate() {
            for &(_, v) in &bucket[i + 1..] {
                let (a, b) = (u.min(v), u.max(v));
                let twin = free_twins(a, b);
                let cand = (!twin, a, b);
                if best.is_some_and(|cur| cand >= cur) {
                    continue;
                }
                if holds(&sets, &touching[a], &touching[b], a, b) {
                    best = Some(cand);
                }
            }
        }
    }
    best.map(|(_, u, v)| (u, v))
}
