//! Literal-clause incidence graphs and the transformations that make them acyclic.

use rustc_hash::FxHashMap;
use serde::Serialize;

use super::formula::{Clause, Literal, Qbf2Formula, Quantifier};
use super::ReduceError;
use crate::graph::{Graph, GraphBuilder};

/// Two vertices per variable, ordered by prefix position: `2p` is the
/// positive literal of the `p`-th variable and `2p + 1` the negative one.
/// Each clause is an edge between its literals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LciGraph {
    #[serde(skip)]
    pub graph: Graph,
    /// Edges produced by more than one clause, with their clause count.
    pub multiplicity: Vec<((usize, usize), usize)>,
    /// Clauses whose two literals share a variable.
    pub same_variable: Vec<usize>,
    /// Clauses `(l ∨ l)`, which would be loops and add no edge.
    pub loops: Vec<usize>,
}

impl LciGraph {
    pub fn is_acyclic(&self) -> bool {
        self.multiplicity.is_empty() && self.loops.is_empty() && self.graph.is_forest()
    }
}

pub(crate) fn literal_vertex(position: &FxHashMap<u32, usize>, l: Literal) -> usize {
    2 * position[&l.var] + usize::from(!l.positive)
}

pub(crate) fn positions(f: &Qbf2Formula) -> FxHashMap<u32, usize> {
    f.prefix.iter().enumerate().map(|(i, &(_, v))| (v, i)).collect()
}

pub fn lci_graph(f: &Qbf2Formula) -> LciGraph {
    let pos = positions(f);
    let mut b = GraphBuilder::new(2 * f.num_vars());
    for (&(_, v), i) in f.prefix.iter().zip(0..) {
        b.set_label(2 * i, format!("x{v}+")).expect("in range");
        b.set_label(2 * i + 1, format!("x{v}-")).expect("in range");
    }
    let mut count: FxHashMap<(usize, usize), usize> = FxHashMap::default();
    let mut same_variable = Vec::new();
    let mut loops = Vec::new();
    for (j, c) in f.clauses.iter().enumerate() {
        if c.0.var == c.1.var {
            same_variable.push(j);
        }
        if c.0 == c.1 {
            loops.push(j);
            continue;
        }
        let (a, z) = (literal_vertex(&pos, c.0), literal_vertex(&pos, c.1));
        let key = (a.min(z), a.max(z));
        *count.entry(key).or_insert(0) += 1;
        b.add_edge(key.0, key.1).expect("distinct literal vertices");
    }
    let mut multiplicity: Vec<((usize, usize), usize)> = count.into_iter().filter(|&(_, c)| c > 1).collect();
    multiplicity.sort_unstable();
    LciGraph { graph: b.build(), multiplicity, same_variable, loops }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
}

/// A cycle of the incidence multigraph as `(vertex sequence, clause sequence)`:
/// clause `cs[i]` joins `vs[i]` and `vs[i + 1]`, and the last clause closes the
/// cycle back to `vs[0]`. Loop clauses `(l ∨ l)` are ignored.
fn find_cycle(f: &Qbf2Formula) -> Option<(Vec<usize>, Vec<usize>)> {
    let pos = positions(f);
    let n = 2 * f.num_vars();
    let mut uf = UnionFind((0..n).collect());
    let mut tree: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (j, c) in f.clauses.iter().enumerate() {
        if c.0 == c.1 {
            continue;
        }
        let (a, z) = (literal_vertex(&pos, c.0), literal_vertex(&pos, c.1));
        let (ra, rz) = (uf.find(a), uf.find(z));
        if ra != rz {
            uf.0[ra] = rz;
            tree[a].push((z, j));
            tree[z].push((a, j));
            continue;
        }
        // the forest path from z back to a closes the cycle with clause j
        let mut prev = vec![usize::MAX; n];
        let mut via = vec![usize::MAX; n];
        prev[z] = z;
        let mut stack = vec![z];
        while let Some(x) = stack.pop() {
            if x == a {
                break;
            }
            for &(y, cl) in &tree[x] {
                if prev[y] == usize::MAX {
                    prev[y] = x;
                    via[y] = cl;
                    stack.push(y);
                }
            }
        }
        let mut vs = vec![a];
        let mut cs = Vec::new();
        let mut x = a;
        while x != z {
            cs.push(via[x]);
            x = prev[x];
            vs.push(x);
        }
        cs.push(j);
        return Some((vs, cs));
    }
    None
}

/// Remove every cycle of the incidence graph with the four-clause gadget.
///
/// For the chosen cycle literal `y` of variable `x` (lowest variable with its
/// positive literal on the cycle, else lowest with the negative one), the
/// lower-indexed of its two cycle clauses has `y` replaced by the same-sign
/// literal `y'` of a fresh variable `x'`, and the clauses
/// `(y ∨ a), (¬y ∨ b), (¬a ∨ ¬y'), (¬b ∨ y')` are appended with fresh
/// existential `a`, `b`, `x'`. Each application raises the optimum by exactly
/// 4, so `k' = k + 4 · applications`.
pub fn break_cycles(f: &Qbf2Formula, k: i64) -> (Qbf2Formula, i64, usize) {
    let mut f = f.clone();
    let mut k = k;
    let mut applications = 0;
    while let Some((vs, cs)) = find_cycle(&f) {
        let var_of = |v: usize| f.prefix[v / 2].1;
        let pick = vs
            .iter()
            .copied()
            .filter(|&v| v % 2 == 0)
            .min_by_key(|&v| var_of(v))
            .or_else(|| vs.iter().copied().min_by_key(|&v| var_of(v)))
            .expect("a cycle has vertices");
        let at = vs.iter().position(|&v| v == pick).expect("picked from the cycle");
        let before = if at == 0 { cs[cs.len() - 1] } else { cs[at - 1] };
        let clause_idx = before.min(cs[at]);
        let y = Literal { var: var_of(pick), positive: pick % 2 == 0 };

        let base = f.max_var();
        let (a, b, x2) = (base + 1, base + 2, base + 3);
        let y2 = y.with_var(x2);
        let c = &mut f.clauses[clause_idx];
        if c.0 == y {
            c.0 = y2;
        } else {
            debug_assert_eq!(c.1, y);
            c.1 = y2;
        }
        f.clauses.extend([
            Clause(y, Literal::pos(a)),
            Clause(y.negated(), Literal::pos(b)),
            Clause(Literal::neg(a), y2.negated()),
            Clause(Literal::neg(b), y2),
        ]);
        f.prefix.extend([(Quantifier::Exists, a), (Quantifier::Exists, b), (Quantifier::Exists, x2)]);
        k += 4;
        applications += 1;
    }
    (f, k, applications)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundedFormula {
    pub formula: Qbf2Formula,
    pub k: i64,
    /// Clauses deleted because a literal occurred three times.
    pub removed_clauses: usize,
    /// Literals whose clauses were deleted.
    pub removals: usize,
    pub gadget_applications: usize,
}

/// Turn an existential formula with at most three occurrences per variable
/// into one with at most two occurrences per literal and an acyclic incidence
/// graph.
///
/// A literal occurring three times can satisfy all its clauses at no cost to
/// any other clause, so those clauses are deleted and `k` drops by the number
/// deleted. The cycle gadget then raises `k` by 4 per application, so
/// `opt(out) = opt(in) - removed_clauses + 4 · gadget_applications`.
pub fn bound_occurrences(f: &Qbf2Formula, k: i64) -> Result<BoundedFormula, ReduceError> {
    if !f.is_existential() {
        return Err(ReduceError::NotExistential);
    }
    for &(_, v) in &f.prefix {
        let count = f.occurrences(Literal::pos(v)) + f.occurrences(Literal::neg(v));
        if count > 3 {
            return Err(ReduceError::TooManyOccurrences { var: v, count });
        }
    }
    let mut f = f.clone();
    let mut k = k;
    let mut removals = 0;
    let mut removed_clauses = 0;
    loop {
        let heavy = f
            .prefix
            .iter()
            .flat_map(|&(_, v)| [Literal::pos(v), Literal::neg(v)])
            .find(|&l| f.occurrences(l) >= 3);
        let Some(lit) = heavy else { break };
        let before = f.clauses.len();
        f.clauses.retain(|c| c.0 != lit && c.1 != lit);
        let gone = before - f.clauses.len();
        k -= gone as i64;
        removed_clauses += gone;
        removals += 1;
    }
    let (formula, k, gadget_applications) = break_cycles(&f, k);
    Ok(BoundedFormula { formula, k, removed_clauses, removals, gadget_applications })
}
