//! Quantified 2-CNF formulas and their text format.
//!
//! ```text
//! p qcnf 3 3
//! e 1
//! a 2
//! e 3
//! 1 -2 0
//! -1 3 0
//! 3 2 0
//! ```
//! Prefix lines may list several variables and may end with `0`. Lines
//! starting with `c` are comments.

use std::fmt;

use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantifier {
    Exists,
    Forall,
}

impl Quantifier {
    fn letter(self) -> char {
        match self {
            Quantifier::Exists => 'e',
            Quantifier::Forall => 'a',
        }
    }
}

/// A literal in signed DIMACS form: `var` is 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    pub var: u32,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: u32) -> Literal {
        Literal { var, positive: true }
    }

    pub fn neg(var: u32) -> Literal {
        Literal { var, positive: false }
    }

    pub fn from_dimacs(x: i64) -> Option<Literal> {
        let var = u32::try_from(x.unsigned_abs()).ok().filter(|&v| v > 0)?;
        Some(Literal { var, positive: x > 0 })
    }

    pub fn to_dimacs(self) -> i64 {
        if self.positive {
            self.var as i64
        } else {
            -(self.var as i64)
        }
    }

    pub fn negated(self) -> Literal {
        Literal { positive: !self.positive, ..self }
    }

    pub fn with_var(self, var: u32) -> Literal {
        Literal { var, ..self }
    }

    pub fn eval(self, value: bool) -> bool {
        value == self.positive
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Clause(pub Literal, pub Literal);

impl Clause {
    pub fn literals(self) -> [Literal; 2] {
        [self.0, self.1]
    }

    pub fn satisfied_by(self, value: impl Fn(u32) -> bool) -> bool {
        self.0.eval(value(self.0.var)) || self.1.eval(value(self.1.var))
    }

    /// Same clause with literals in a fixed order, for duplicate detection.
    pub fn normalized(self) -> Clause {
        if self.0 <= self.1 {
            self
        } else {
            Clause(self.1, self.0)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Qbf2Formula {
    pub prefix: Vec<(Quantifier, u32)>,
    pub clauses: Vec<Clause>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("variable {0} occurs in a clause but is not quantified")]
    Unquantified(u32),
    #[error("variable {0} is quantified twice")]
    Requantified(u32),
}

impl Qbf2Formula {
    pub fn new(prefix: Vec<(Quantifier, u32)>, clauses: Vec<Clause>) -> Result<Qbf2Formula, FormulaError> {
        let mut seen = FxHashSet::default();
        for &(_, v) in &prefix {
            if v == 0 || !seen.insert(v) {
                return Err(FormulaError::Requantified(v));
            }
        }
        for c in &clauses {
            for l in c.literals() {
                if !seen.contains(&l.var) {
                    return Err(FormulaError::Unquantified(l.var));
                }
            }
        }
        Ok(Qbf2Formula { prefix, clauses })
    }

    /// Every variable existential: a plain MAX-2-SAT instance.
    pub fn existential(vars: u32, clauses: Vec<Clause>) -> Result<Qbf2Formula, FormulaError> {
        Qbf2Formula::new((1..=vars).map(|v| (Quantifier::Exists, v)).collect(), clauses)
    }

    pub fn num_vars(&self) -> usize {
        self.prefix.len()
    }

    pub fn max_var(&self) -> u32 {
        self.prefix.iter().map(|p| p.1).max().unwrap_or(0)
    }

    pub fn is_existential(&self) -> bool {
        self.prefix.iter().all(|p| p.0 == Quantifier::Exists)
    }

    pub fn quantifier(&self, var: u32) -> Option<Quantifier> {
        self.prefix.iter().find(|p| p.1 == var).map(|p| p.0)
    }

    pub fn satisfied_count(&self, value: impl Fn(u32) -> bool) -> usize {
        self.clauses.iter().filter(|c| c.satisfied_by(&value)).count()
    }

    /// Occurrences of `(var, positive)` across all clauses.
    pub fn occurrences(&self, lit: Literal) -> usize {
        self.clauses.iter().flat_map(|c| c.literals()).filter(|&l| l == lit).count()
    }

    pub fn parse(text: &str) -> Result<Qbf2Formula, FormulaError> {
        let err = |line: usize, msg: String| FormulaError::Parse { line, msg };
        let mut header: Option<(usize, usize)> = None;
        let mut prefix = Vec::new();
        let mut clauses = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let t = raw.trim();
            if t.is_empty() || t.starts_with('c') {
                continue;
            }
            let mut words = t.split_whitespace();
            let first = words.next().expect("nonempty line");
            match first {
                "p" => {
                    if header.is_some() {
                        return Err(err(line, "second header".into()));
                    }
                    let rest: Vec<&str> = words.collect();
                    if rest.len() != 3 || !matches!(rest[0], "qcnf" | "cnf") {
                        return Err(err(line, "expected `p qcnf <vars> <clauses>`".into()));
                    }
                    let num = |s: &str| s.parse::<usize>().map_err(|_| err(line, format!("bad number `{s}`")));
                    header = Some((num(rest[1])?, num(rest[2])?));
                }
                "e" | "a" => {
                    let q = if first == "e" { Quantifier::Exists } else { Quantifier::Forall };
                    for w in words {
                        let v: u32 = w.parse().map_err(|_| err(line, format!("bad variable `{w}`")))?;
                        if v == 0 {
                            break;
                        }
                        prefix.push((q, v));
                    }
                }
                _ => {
                    if header.is_none() {
                        return Err(err(line, "clause before the `p` header".into()));
                    }
                    let mut lits = Vec::new();
                    let mut closed = false;
                    for w in std::iter::once(first).chain(words) {
                        let x: i64 = w.parse().map_err(|_| err(line, format!("bad literal `{w}`")))?;
                        if x == 0 {
                            closed = true;
                            break;
                        }
                        lits.push(Literal::from_dimacs(x).ok_or_else(|| err(line, format!("bad literal `{w}`")))?);
                    }
                    if !closed {
                        return Err(err(line, "clause must end with 0".into()));
                    }
                    if lits.len() != 2 {
                        return Err(err(line, format!("clause has {} literals, expected 2", lits.len())));
                    }
                    clauses.push(Clause(lits[0], lits[1]));
                }
            }
        }
        let (n, m) = header.ok_or_else(|| err(1, "missing `p qcnf` header".into()))?;
        let last = text.lines().count().max(1);
        if clauses.len() != m {
            return Err(err(last, format!("header announces {m} clauses, found {}", clauses.len())));
        }
        if let Some(&(_, v)) = prefix.iter().find(|p| p.1 as usize > n) {
            return Err(err(last, format!("variable {v} exceeds the announced {n}")));
        }
        Qbf2Formula::new(prefix, clauses)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("p qcnf {} {}\n", self.max_var(), self.clauses.len());
        for &(q, v) in &self.prefix {
            out.push_str(&format!("{} {v} 0\n", q.letter()));
        }
        for c in &self.clauses {
            out.push_str(&format!("{} {} 0\n", c.0, c.1));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const FIGURE3: &str = "p qcnf 3 3\ne 1\na 2\ne 3\n1 -2 0\n-1 3 0\n3 2 0\n";

    #[test]
    fn parses_example_formula() {
        let f = Qbf2Formula::parse(FIGURE3).unwrap();
        assert_eq!(f.prefix, vec![(Quantifier::Exists, 1), (Quantifier::Forall, 2), (Quantifier::Exists, 3)]);
        assert_eq!(f.clauses[0], Clause(Literal::pos(1), Literal::neg(2)));
        assert_eq!(Qbf2Formula::parse(&f.to_text()).unwrap(), f);
    }

    #[test]
    fn empty_clause_list_is_accepted() {
        let f = Qbf2Formula::parse("p qcnf 1 0\ne 1\n").unwrap();
        assert!(f.clauses.is_empty());
    }

    #[test]
    fn rejects_bad_input() {
        let three = Qbf2Formula::parse("p qcnf 3 1\ne 1 2 3 0\n1 2 3 0\n");
        assert!(matches!(three, Err(FormulaError::Parse { line: 3, .. })));
        let unq = Qbf2Formula::parse("p qcnf 2 1\ne 1\n1 2 0\n");
        assert_eq!(unq, Err(FormulaError::Unquantified(2)));
        assert!(Qbf2Formula::parse("e 1\n1 1 0\n").is_err());
        assert!(Qbf2Formula::parse("p qcnf 2 2\ne 1 2\n1 2 0\n").is_err());
    }
}
