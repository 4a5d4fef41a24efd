//! Formula-to-tree and formula-to-caterpillar game instances.
//!
//! Layout for `N` variables (after padding, duplication and renumbering) and
//! `m` clauses:
//! - `2(i-1)` and `2i-1` are the positive and negative literal vertices of variable `i`;
//! - `2N + j` subdivides clause `j`;
//! - `2N + m + (i-1)` is chain vertex `i`;
//! - leaves follow, bundle by bundle in host order.

use std::sync::Arc;

use serde::Serialize;

use super::formula::{Qbf2Formula, Quantifier};
use super::lci::{lci_graph, literal_vertex, positions};
use super::transform::{duplicate, pad_alternation, renumber};
use super::ReduceError;
use crate::graph::{Graph, GraphBuilder};
use crate::position::Position;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Tree,
    Caterpillar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiteralVertex {
    /// Variable id after renumbering (1-based prefix position).
    pub variable: u32,
    pub positive: bool,
    pub vertex: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeafBundle {
    pub host: usize,
    pub first_leaf: usize,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VariableOrigin {
    pub variable: u32,
    pub quantifier: Quantifier,
    /// Id in the input formula; `None` for padding variables.
    pub source: Option<u32>,
    /// 0 for the first copy, 1 for the duplicate.
    pub copy: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub clause_vertices: Vec<usize>,
    pub literal_vertices: Vec<LiteralVertex>,
    pub chain_vertices: Vec<usize>,
    pub leaf_bundles: Vec<LeafBundle>,
    pub variables: Vec<VariableOrigin>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionArtifact {
    #[serde(skip)]
    pub instance: Graph,
    pub target: Target,
    /// Maker wins the instance at this threshold exactly when Falsifier wins at `k`.
    pub threshold: i64,
    /// Happy vertices after the forced opening line, found by simulating it.
    pub baseline: usize,
    /// Closed-form estimate of the baseline, kept only as a diagnostic.
    pub printed_baseline: i64,
    pub k: i64,
    /// Clause count of the duplicated formula.
    pub m: usize,
    /// Clause count of the input formula.
    pub m_original: usize,
    pub vertices: usize,
    /// The padded, duplicated and renumbered formula the instance encodes.
    pub formula: Qbf2Formula,
    pub provenance: Provenance,
}

impl ReductionArtifact {
    /// Does a Maker score of `score` (Maker moving first) reach the threshold?
    pub fn maker_wins_with(&self, score: u32) -> bool {
        score as i64 >= self.threshold
    }

    pub fn sidecar_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("artifact serializes")
    }
}

fn check_common(f: &Qbf2Formula) -> Result<(), ReduceError> {
    if f.clauses.is_empty() {
        return Err(ReduceError::NoClauses);
    }
    let lci = lci_graph(f);
    if let Some(&j) = lci.same_variable.first() {
        return Err(ReduceError::SameVariableClause { clause: j });
    }
    if let Some(&(edge, count)) = lci.multiplicity.first() {
        let pos = positions(f);
        let clause = f
            .clauses
            .iter()
            .position(|c| {
                let (a, b) = (literal_vertex(&pos, c.0), literal_vertex(&pos, c.1));
                (a.min(b), a.max(b)) == edge
            })
            .expect("edge comes from a clause");
        return Err(ReduceError::RepeatedClause { clause, count });
    }
    if !lci.is_acyclic() {
        return Err(ReduceError::CyclicIncidenceGraph);
    }
    Ok(())
}

/// Build the tree instance for `(f, k)`; the incidence graph of `f` must be acyclic.
pub fn build_tree_instance(f: &Qbf2Formula, k: i64) -> Result<ReductionArtifact, ReduceError> {
    check_common(f)?;
    Ok(build(f, k, Target::Tree))
}

/// Build the caterpillar instance; `f` must be existential with every literal
/// occurring at most twice and an acyclic incidence graph.
pub fn build_caterpillar_instance(f: &Qbf2Formula, k: i64) -> Result<ReductionArtifact, ReduceError> {
    if !f.is_existential() {
        return Err(ReduceError::NotExistential);
    }
    for &(_, v) in &f.prefix {
        for lit in [super::Literal::pos(v), super::Literal::neg(v)] {
            let count = f.occurrences(lit);
            if count > 2 {
                return Err(ReduceError::LiteralOccurrences { literal: lit.to_dimacs(), count });
            }
        }
    }
    check_common(f)?;
    let art = build(f, k, Target::Caterpillar);
    assert!(is_caterpillar(&art.instance), "construction yields a caterpillar");
    Ok(art)
}

fn build(f: &Qbf2Formula, k: i64, target: Target) -> ReductionArtifact {
    let padded = pad_alternation(f);
    let doubled = duplicate(&padded);
    let renum = renumber(&doubled);
    let g = &renum.formula;
    let n = g.num_vars();
    let m = g.clauses.len();
    let m_original = f.clauses.len();

    let pos = positions(g);
    let lci = lci_graph(g);
    let mut b = GraphBuilder::new(2 * n + m + n);
    for v in 0..2 * n {
        b.set_label(v, lci.graph.label(v).expect("literal label")).expect("in range");
    }
    let mut clause_vertices = Vec::with_capacity(m);
    for (j, c) in g.clauses.iter().enumerate() {
        let s = 2 * n + j;
        b.add_edge(literal_vertex(&pos, c.0), s).expect("valid");
        b.add_edge(s, literal_vertex(&pos, c.1)).expect("valid");
        b.set_label(s, format!("c{}", j + 1)).expect("in range");
        clause_vertices.push(s);
    }
    // link the incidence trees through their lowest and highest leaves
    let ends: Vec<(usize, usize)> = lci
        .graph
        .component_vertex_sets()
        .into_iter()
        .map(|comp| {
            let leaves: Vec<usize> = comp.into_iter().filter(|&v| lci.graph.degree(v) <= 1).collect();
            (leaves[0], leaves[leaves.len() - 1])
        })
        .collect();
    for w in ends.windows(2) {
        b.add_edge(w[0].1, w[1].0).expect("valid");
    }
    let chain: Vec<usize> = (0..n).map(|i| 2 * n + m + i).collect();
    for (i, &c) in chain.iter().enumerate() {
        b.set_label(c, format!("v{}", i + 1)).expect("in range");
        if i + 1 < n {
            b.add_edge(c, chain[i + 1]).expect("valid");
        }
    }
    b.add_edge(chain[n - 1], ends[0].0).expect("valid");

    let bundle = |i: usize| 16 * (n + 1 - i) * m;
    let mut hosts: Vec<(usize, usize)> = Vec::new();
    for i in 1..=n {
        hosts.push((2 * (i - 1), bundle(i)));
        hosts.push((2 * i - 1, bundle(i)));
    }
    for i in 1..=n {
        hosts.push((chain[i - 1], bundle(i) - 4 * m));
    }
    let mut leaf_bundles = Vec::with_capacity(hosts.len());
    for &(host, count) in &hosts {
        let first_leaf = b.vertex_count();
        for _ in 0..count {
            let leaf = b.add_vertex();
            b.add_edge(host, leaf).expect("valid");
        }
        leaf_bundles.push(LeafBundle { host, first_leaf, count });
    }
    let instance = b.build();

    let baseline = simulate_forced_line(&instance, n, &chain, &leaf_bundles);
    let half = (n / 2) as i64;
    let mm = m as i64;
    let printed_baseline = (1..=2 * half).map(|i| 8 * (half + 1 - i) * mm).sum::<i64>()
        + (1..=half).map(|i| 8 * (half + 1 - (2 * i - 1)) * mm - 4 * mm).sum::<i64>();

    let first_copy = padded.num_vars();
    let variables = (0..n)
        .map(|i| {
            let src = renum.original[i];
            let copy = u8::from(i >= first_copy);
            let base = if copy == 1 { src - padded.max_var() } else { src };
            VariableOrigin {
                variable: i as u32 + 1,
                quantifier: g.prefix[i].0,
                source: (base <= f.max_var() && f.quantifier(base).is_some()).then_some(base),
                copy,
            }
        })
        .collect();
    let literal_vertices = (1..=n as u32)
        .flat_map(|v| {
            [true, false].map(|positive| LiteralVertex {
                variable: v,
                positive,
                vertex: 2 * (v as usize - 1) + usize::from(!positive),
            })
        })
        .collect();

    ReductionArtifact {
        vertices: instance.n(),
        instance,
        target,
        threshold: baseline as i64 + m_original as i64 - k + 1,
        baseline,
        printed_baseline,
        k,
        m,
        m_original,
        formula: renum.formula.clone(),
        provenance: Provenance { clause_vertices, literal_vertices, chain_vertices: chain, leaf_bundles, variables },
    }
}

/// Pair every leaf bundle, then play the forced opening: for odd `i` Maker
/// takes the positive literal, Breaker the negative one and Maker the chain
/// vertex; for even `i` the roles swap. Returns the number of happy vertices.
fn simulate_forced_line(g: &Graph, n: usize, chain: &[usize], bundles: &[LeafBundle]) -> usize {
    let mut maker = Vec::new();
    let mut breaker = Vec::new();
    for bnd in bundles {
        for leaf in bnd.first_leaf..bnd.first_leaf + bnd.count {
            if (leaf - bnd.first_leaf) % 2 == 0 {
                maker.push(leaf);
            } else {
                breaker.push(leaf);
            }
        }
    }
    for i in 1..=n {
        let (plus, minus, c) = (2 * (i - 1), 2 * i - 1, chain[i - 1]);
        if i % 2 == 1 {
            maker.extend([plus, c]);
            breaker.push(minus);
        } else {
            breaker.extend([plus, c]);
            maker.push(minus);
        }
    }
    let pos = Position::new(Arc::new(g.clone()), &maker, &breaker).expect("disjoint sets");
    debug_assert!(pos.free_vertices().iter().all(|&v| g.label(v).is_some_and(|l| l.starts_with('c'))));
    pos.happy_now()
}

/// A tree whose non-leaf vertices induce a path.
pub fn is_caterpillar(g: &Graph) -> bool {
    if !g.is_tree() {
        return false;
    }
    if g.n() <= 2 {
        return true;
    }
    let spine: Vec<usize> = (0..g.n()).filter(|&v| g.degree(v) > 1).collect();
    let inner = g.induced_subgraph(&spine);
    inner.is_connected() && inner.max_degree() <= 2
}
