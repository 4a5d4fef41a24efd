//! Exact values of quantified and plain MAX-2-SAT.

use serde::Serialize;

use super::formula::{Qbf2Formula, Quantifier};
use super::lci::positions;
use super::ReduceError;

pub const DEFAULT_QBF_CAP: usize = 14;

/// Largest factor scope the elimination oracle will build.
const MAX_SCOPE: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QbfOutcome {
    /// Clauses satisfied under optimal play of both sides.
    pub value: usize,
    pub satisfier_wins: bool,
}

/// Satisfier sets existential variables and maximizes the number of satisfied
/// clauses; Falsifier sets universal ones and minimizes it. Variables are set
/// in prefix order.
pub fn qbf_max_solve(f: &Qbf2Formula, k: i64, cap: usize) -> Result<QbfOutcome, ReduceError> {
    let n = f.num_vars();
    if n > cap.min(30) {
        return Err(ReduceError::TooManyVariables { vars: n, cap: cap.min(30) });
    }
    let pos = positions(f);
    let clauses: Vec<[(usize, bool); 2]> = f
        .clauses
        .iter()
        .map(|c| [(pos[&c.0.var], c.0.positive), (pos[&c.1.var], c.1.positive)])
        .collect();
    let quants: Vec<Quantifier> = f.prefix.iter().map(|p| p.0).collect();
    fn go(i: usize, assign: u32, quants: &[Quantifier], clauses: &[[(usize, bool); 2]]) -> usize {
        if i == quants.len() {
            return clauses
                .iter()
                .filter(|c| c.iter().any(|&(p, s)| (assign >> p & 1 == 1) == s))
                .count();
        }
        let f = go(i + 1, assign, quants, clauses);
        let t = go(i + 1, assign | 1 << i, quants, clauses);
        match quants[i] {
            Quantifier::Exists => f.max(t),
            Quantifier::Forall => f.min(t),
        }
    }
    let value = go(0, 0, &quants, &clauses);
    Ok(QbfOutcome { value, satisfier_wins: value as i64 >= k })
}

struct Factor {
    scope: Vec<usize>,
    table: Vec<u32>,
}

impl Factor {
    fn value(&self, lookup: impl Fn(usize) -> bool) -> u32 {
        let idx = self.scope.iter().enumerate().fold(0, |acc, (i, &v)| acc | (lookup(v) as usize) << i);
        self.table[idx]
    }
}

/// Maximum number of simultaneously satisfiable clauses, quantifiers ignored.
///
/// Variable elimination over clause factors with a min-degree order; exact,
/// and fast whenever the interaction graph has small treewidth.
pub fn max2sat_optimum(f: &Qbf2Formula) -> Result<usize, ReduceError> {
    let pos = positions(f);
    let mut factors: Vec<Factor> = f
        .clauses
        .iter()
        .map(|c| {
            let (a, b) = (pos[&c.0.var], pos[&c.1.var]);
            let mut scope = vec![a, b];
            scope.sort_unstable();
            scope.dedup();
            let table = (0..1usize << scope.len())
                .map(|idx| {
                    let val = |p: usize| idx >> scope.iter().position(|&s| s == p).expect("in scope") & 1 == 1;
                    c.0.eval(val(a)) as u32 | c.1.eval(val(b)) as u32
                })
                .collect();
            Factor { scope, table }
        })
        .collect();

    let mut live: Vec<usize> = (0..f.num_vars()).collect();
    while !live.is_empty() {
        let neighbours = |v: usize, factors: &[Factor]| {
            let mut s: Vec<usize> = factors
                .iter()
                .filter(|fa| fa.scope.contains(&v))
                .flat_map(|fa| fa.scope.iter().copied())
                .filter(|&u| u != v)
                .collect();
            s.sort_unstable();
            s.dedup();
            s
        };
        let (at, v) = live
            .iter()
            .copied()
            .enumerate()
            .min_by_key(|&(_, v)| (neighbours(v, &factors).len(), v))
            .expect("nonempty");
        live.swap_remove(at);
        let scope = neighbours(v, &factors);
        if scope.len() > MAX_SCOPE {
            return Err(ReduceError::TooWide { width: scope.len(), cap: MAX_SCOPE });
        }
        let (touching, rest): (Vec<Factor>, Vec<Factor>) = factors.into_iter().partition(|fa| fa.scope.contains(&v));
        factors = rest;
        if touching.is_empty() {
            continue;
        }
        let table = (0..1usize << scope.len())
            .map(|idx| {
                let at = |u: usize, x: bool| {
                    if u == v {
                        x
                    } else {
                        idx >> scope.binary_search(&u).expect("in scope") & 1 == 1
                    }
                };
                [false, true]
                    .into_iter()
                    .map(|x| touching.iter().map(|fa| fa.value(|u| at(u, x))).sum::<u32>())
                    .max()
                    .expect("two values")
            })
            .collect();
        factors.push(Factor { scope, table });
    }
    Ok(factors.iter().map(|fa| fa.table[0] as usize).sum())
}
