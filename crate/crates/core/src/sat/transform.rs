//! Prefix padding, duplication and renumbering used by the instance builders.

use serde::Serialize;

use super::formula::{Clause, Qbf2Formula, Quantifier};

/// Quantifier required at 0-based prefix position `p`: universal first, then
/// strictly alternating.
pub fn alternation_slot(p: usize) -> Quantifier {
    if p.is_multiple_of(2) {
        Quantifier::Forall
    } else {
        Quantifier::Exists
    }
}

/// Insert fresh unused variables so the prefix reads `∀ ∃ ∀ ∃ ...` with even
/// length. Fresh ids continue after the largest variable id.
pub fn pad_alternation(f: &Qbf2Formula) -> Qbf2Formula {
    let mut next = f.max_var() + 1;
    let mut prefix = Vec::with_capacity(2 * f.num_vars() + 1);
    for &(q, v) in &f.prefix {
        while alternation_slot(prefix.len()) != q {
            prefix.push((alternation_slot(prefix.len()), next));
            next += 1;
        }
        prefix.push((q, v));
    }
    if prefix.len() % 2 == 1 {
        prefix.push((Quantifier::Exists, next));
    }
    Qbf2Formula { prefix, clauses: f.clauses.clone() }
}

/// `ψ ∧ ψ'` where `ψ'` renames every variable `v` to `v + max_var`; the copy's
/// prefix follows the original one.
pub fn duplicate(f: &Qbf2Formula) -> Qbf2Formula {
    let shift = f.max_var();
    let mut prefix = f.prefix.clone();
    prefix.extend(f.prefix.iter().map(|&(q, v)| (q, v + shift)));
    let mut clauses = f.clauses.clone();
    clauses.extend(
        f.clauses
            .iter()
            .map(|c| Clause(c.0.with_var(c.0.var + shift), c.1.with_var(c.1.var + shift))),
    );
    Qbf2Formula { prefix, clauses }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Renumbered {
    pub formula: Qbf2Formula,
    /// `original[i]` is the id that variable `i + 1` had before renumbering.
    pub original: Vec<u32>,
}

/// Rename variables to `1..=n` in prefix order.
pub fn renumber(f: &Qbf2Formula) -> Renumbered {
    let pos = super::lci::positions(f);
    let prefix = f.prefix.iter().zip(1..).map(|(&(q, _), i)| (q, i)).collect();
    let clauses = f
        .clauses
        .iter()
        .map(|c| {
            Clause(
                c.0.with_var(pos[&c.0.var] as u32 + 1),
                c.1.with_var(pos[&c.1.var] as u32 + 1),
            )
        })
        .collect();
    Renumbered {
        formula: Qbf2Formula { prefix, clauses },
        original: f.prefix.iter().map(|p| p.1).collect(),
    }
}
