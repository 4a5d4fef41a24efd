//! Move ordering by instant gain, with the dominance prune.

use serde::Serialize;

use crate::position::{instant_gain, unblocked_closed_degree, Player, Position};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MoveOrdering {
    /// Every free vertex, best candidates first.
    pub order: Vec<usize>,
    /// Vertices that need not be tried at this ply.
    pub prunable: Vec<usize>,
}

/// Orders free vertices by descending `h`, then descending `|N[u] \ B|`, then
/// ascending id. A vertex `u` is prunable when an earlier unpruned vertex `v`
/// has `h(v) >= |N[u] \ B|`; the first vertex is never pruned.
///
/// The same rule is used for both movers.
pub fn order_moves(pos: &Position, _mover: Player) -> MoveOrdering {
    let mut scored: Vec<(usize, usize, usize)> = pos
        .free_vertices()
        .into_iter()
        .map(|u| {
            let h = instant_gain(pos, u).expect("free vertex");
            (h, unblocked_closed_degree(pos, u), u)
        })
        .collect();
    scored.sort_by(|a, b| b.0.cmp(&a.0).then(b.1.cmp(&a.1)).then(a.2.cmp(&b.2)));

    let mut prunable = Vec::new();
    if let Some(&(top, _, _)) = scored.first() {
        // the kept vertex with the largest gain is always the first one
        for &(_, c, u) in scored.iter().skip(1) {
            if top >= c {
                prunable.push(u);
            }
        }
    }
    prunable.sort_unstable();
    MoveOrdering {
        order: scored.into_iter().map(|(_, _, u)| u).collect(),
        prunable,
    }
}
