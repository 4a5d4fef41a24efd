//! Coarsest partition of a graph into same-type classes (neighborhood diversity).

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassKind {
    Clique,
    Independent,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighborhoodPartition {
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    /// Singleton classes are reported as `Independent`.
    pub kinds: Vec<ClassKind>,
}

impl NeighborhoodPartition {
    pub fn width(&self) -> usize {
        self.classes.len()
    }
}

/// `u` and `v` have the same type when `N(u) \ {v} = N(v) \ {u}`.
pub fn same_type(g: &Graph, u: usize, v: usize) -> bool {
    let strip = |x: usize, other: usize| -> Vec<usize> {
        g.neighbors(x).iter().copied().filter(|&y| y != other).collect()
    };
    strip(u, v) == strip(v, u)
}

/// Non-adjacent twins share their open neighborhood and adjacent twins share
/// their closed neighborhood, so hashing both keys finds every class in linear
/// expected time.
pub fn neighborhood_partition(g: &Graph) -> NeighborhoodPartition {
    let n = g.n();
    let mut class_of = vec![usize::MAX; n];
    let mut groups: Vec<(Vec<usize>, ClassKind)> = Vec::new();

    let mut open: FxHashMap<&[usize], Vec<usize>> = FxHashMap::default();
    for v in 0..n {
        open.entry(g.neighbors(v)).or_default().push(v);
    }
    for members in open.into_values() {
        if members.len() >= 2 {
            groups.push((members, ClassKind::Independent));
        }
    }
    for (members, _) in &groups {
        for &v in members {
            class_of[v] = 0;
        }
    }

    let mut closed: FxHashMap<Vec<usize>, Vec<usize>> = FxHashMap::default();
    for v in (0..n).filter(|&v| class_of[v] == usize::MAX) {
        closed.entry(g.closed_neighborhood(v)).or_default().push(v);
    }
    for members in closed.into_values() {
        let kind = if members.len() >= 2 { ClassKind::Clique } else { ClassKind::Independent };
        groups.push((members, kind));
    }

    for (members, _) in &mut groups {
        members.sort_unstable();
    }
    groups.sort_by_key(|(members, _)| members[0]);
    let mut classes = Vec::with_capacity(groups.len());
    let mut kinds = Vec::with_capacity(groups.len());
    for (idx, (members, kind)) in groups.into_iter().enumerate() {
        for &v in &members {
            class_of[v] = idx;
        }
        classes.push(members);
        kinds.push(kind);
    }
    NeighborhoodPartition { classes, class_of, kinds }
}
