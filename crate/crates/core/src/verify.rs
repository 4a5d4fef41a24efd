//! Oracle-equivalence suites, run from the command line by `shvg verify`.
//!
//! Every suite compares a fast path (closed form, reduction, FPT routine or
//! SAT transformation) against exhaustive search on seeded inputs.

use std::sync::Arc;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;
use thiserror::Error;

use crate::closed_form::{complete_binary_tree_score, path_score, subdivided_star_score, union_paths_score};
use crate::fpt::nd_solve;
use crate::generators::{complete_binary_tree, cycle, gnp, nonisomorphic_trees, path, random_tree, subdivided_star, twin_planted};
use crate::graph::Graph;
use crate::milnor::{find_pairing_dominating_set, sum_bounds, PdsSearch};
use crate::partition::ClassKind;
use crate::position::{decompose, Player, Position};
use crate::sat::{
    break_cycles, bound_occurrences, build_caterpillar_instance, build_tree_instance, is_caterpillar, lci_graph, max2sat_optimum,
    qbf_max_solve, Clause, Literal, Qbf2Formula, Quantifier, DEFAULT_QBF_CAP,
};
use crate::solver::{solve, solve_pair, solve_position_pair, super_lemma_steps, ScorePair, SolveConfig};

pub const SUITES: &[&str] = &[
    "paths",
    "unions",
    "cycles",
    "stars",
    "binary-trees",
    "super-lemma",
    "decompose",
    "milnor",
    "fpt",
    "gadget",
    "occurrences",
    "reduction",
    "caterpillar",
    "pds",
];

pub const DEFAULT_SEED: u64 = 0x5417;

/// Size caps; `None` means the suite's own default.
#[derive(Clone, Debug, Default)]
pub struct SuiteCaps {
    pub max_n: Option<usize>,
    pub samples: Option<usize>,
    pub vars: Option<u32>,
    pub clauses: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: usize,
    pub failures: Vec<String>,
    pub elapsed_ms: u128,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("unknown suite `{0}` (known: {known})", known = SUITES.join(", "))]
    UnknownSuite(String),
    #[error("suite `{suite}` cannot run: {reason}")]
    Setup { suite: String, reason: String },
}

const MAX_REPORTED_FAILURES: usize = 10;

struct Run {
    checks: usize,
    failures: Vec<String>,
    failed: usize,
}

impl Run {
    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < MAX_REPORTED_FAILURES {
                self.failures.push(msg());
            }
        }
    }
}

fn oracle_pair(pos: &Position) -> ScorePair {
    solve_position_pair(pos, &SolveConfig::oracle()).expect("oracle input within the 63-vertex limit")
}

fn graph_oracle(g: &Graph) -> ScorePair {
    oracle_pair(&Position::empty(Arc::new(g.clone())))
}

fn both(f: impl Fn(Player) -> u32) -> ScorePair {
    ScorePair::new(f(Player::Maker), f(Player::Breaker))
}

pub fn run_suite(name: &str, caps: &SuiteCaps) -> Result<SuiteReport, VerifyError> {
    let start = Instant::now();
    let mut run = Run { checks: 0, failures: Vec::new(), failed: 0 };
    let mut rng = StdRng::seed_from_u64(caps.seed.unwrap_or(DEFAULT_SEED));
    let setup = |reason: &str| VerifyError::Setup { suite: name.to_string(), reason: reason.to_string() };
    if caps.max_n.is_some_and(|n| n > 14) {
        return Err(setup("--max-n above 14 is out of reach for the brute-force oracle"));
    }
    match name {
        "paths" => paths(&mut run, caps.max_n.unwrap_or(12)),
        "unions" => unions(&mut run, caps.max_n.unwrap_or(10)),
        "cycles" => cycles(&mut run, caps.max_n.unwrap_or(9)),
        "stars" => stars(&mut run, caps.max_n.unwrap_or(11)),
        "binary-trees" => binary_trees(&mut run, caps.max_n.unwrap_or(7)),
        "super-lemma" => super_lemma(&mut run, &mut rng, caps.max_n.unwrap_or(9), caps.samples.unwrap_or(200)),
        "decompose" => decomposition(&mut run, &mut rng, caps.max_n.unwrap_or(9), caps.samples.unwrap_or(200)),
        "milnor" => milnor_bounds(&mut run, &mut rng, caps.max_n.unwrap_or(6), caps.samples.unwrap_or(100)),
        "fpt" => fpt(&mut run, &mut rng, caps.max_n.unwrap_or(12), caps.samples.unwrap_or(40)),
        "gadget" => gadget(&mut run, &mut rng, caps.vars.unwrap_or(6), caps.clauses.unwrap_or(8), caps.samples.unwrap_or(200)),
        "occurrences" => occurrences(&mut run, &mut rng, caps.vars.unwrap_or(6), caps.samples.unwrap_or(200)),
        "reduction" => {
            let vars = caps.vars.unwrap_or(2);
            if vars > 3 {
                return Err(setup("--vars above 3 builds trees too large to solve"));
            }
            reduction(&mut run, &mut rng, vars, caps.clauses.unwrap_or(2), caps.samples.unwrap_or(80))
        }
        "caterpillar" => caterpillar(&mut run, &mut rng, caps.vars.unwrap_or(4), caps.clauses.unwrap_or(5), caps.samples.unwrap_or(100)),
        "pds" => pds(&mut run, caps.max_n.unwrap_or(9)),
        other => return Err(VerifyError::UnknownSuite(other.to_string())),
    }
    if run.failed > run.failures.len() {
        run.failures.push(format!("... and {} more", run.failed - run.failures.len()));
    }
    Ok(SuiteReport {
        suite: name.to_string(),
        passed: run.failed == 0,
        checks: run.checks,
        failures: run.failures,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

fn paths(run: &mut Run, max_n: usize) {
    for n in 1..=max_n {
        let want = both(|p| path_score(n, p).unwrap());
        let got = graph_oracle(&path(n));
        run.check(got == want, || format!("P_{n}: oracle {got:?}, formula {want:?}"));
    }
}

fn multisets(total: usize, max_part: usize, out: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>) {
    if !cur.is_empty() {
        out.push(cur.clone());
    }
    for p in (1..=max_part.min(total)).rev() {
        cur.push(p);
        multisets(total - p, p, out, cur);
        cur.pop();
    }
}

fn unions(run: &mut Run, total: usize) {
    let mut all = Vec::new();
    multisets(total, total, &mut all, &mut Vec::new());
    let search = SolveConfig { closed_form_dispatch: false, ..SolveConfig::full() };
    for lengths in all {
        let parts: Vec<Graph> = lengths.iter().map(|&n| path(n)).collect();
        let g = Graph::disjoint_union(&parts.iter().collect::<Vec<_>>());
        let want = both(|p| union_paths_score(&lengths, &[], p).unwrap());
        let got = solve_pair(&g, &search).unwrap();
        run.check(got == want, || format!("paths {lengths:?}: solver {got:?}, formula {want:?}"));
        if g.n() <= 12 {
            let brute = graph_oracle(&g);
            run.check(brute == want, || format!("paths {lengths:?}: oracle {brute:?}, formula {want:?}"));
        }
    }
}

fn cycles(run: &mut Run, max_n: usize) {
    for n in 3..=max_n.max(3) {
        let got = graph_oracle(&cycle(n));
        run.check(got == ScorePair::new(0, 0), || format!("C_{n}: oracle {got:?}"));
    }
}

fn stars(run: &mut Run, max_n: usize) {
    let mut all = Vec::new();
    multisets(max_n.saturating_sub(1), max_n, &mut all, &mut Vec::new());
    for legs in all.into_iter().filter(|l| l.len() >= 3) {
        let want = both(|p| subdivided_star_score(&legs, p).unwrap());
        let got = graph_oracle(&subdivided_star(&legs));
        run.check(got == want, || format!("legs {legs:?}: oracle {got:?}, formula {want:?}"));
    }
}

fn binary_trees(run: &mut Run, max_n: usize) {
    let mut d = 0;
    while (1usize << (d + 1)) - 1 <= max_n {
        let want = both(|p| complete_binary_tree_score(d, p));
        let got = graph_oracle(&complete_binary_tree(d));
        run.check(got == want, || format!("T_{d}: oracle {got:?}, formula {want:?}"));
        d += 1;
    }
    let search = SolveConfig { closed_form_dispatch: false, ..SolveConfig::full() };
    let got = solve_pair(&complete_binary_tree(3), &search).unwrap();
    run.check(got == ScorePair::new(2, 2), || format!("T_3: solver {got:?}"));
}

fn random_classes(rng: &mut StdRng, n: usize) -> Vec<(usize, ClassKind)> {
    let mut classes = Vec::new();
    let mut used = 0;
    while used < n {
        let size = rng.gen_range(1..=3usize).min(n - used);
        let kind = if rng.gen_bool(0.5) { ClassKind::Clique } else { ClassKind::Independent };
        classes.push((size, kind));
        used += size;
    }
    classes
}

fn random_position(g: Arc<Graph>, rng: &mut StdRng, density: f64) -> Position {
    let (mut maker, mut breaker) = (Vec::new(), Vec::new());
    for v in 0..g.n() {
        if rng.gen_bool(density) {
            if rng.gen_bool(0.5) {
                maker.push(v);
            } else {
                breaker.push(v);
            }
        }
    }
    Position::new(g, &maker, &breaker).unwrap()
}

fn super_lemma(run: &mut Run, rng: &mut StdRng, max_n: usize, samples: usize) {
    for trial in 0..samples {
        let n = rng.gen_range(2..=max_n.max(2));
        let g = Arc::new(twin_planted(&random_classes(rng, n), 0.5, rng));
        let density = if trial % 2 == 0 { 0.0 } else { 0.3 };
        let mut pos = random_position(g, rng, density);
        let (_, pairs) = super_lemma_steps(&pos);
        for (u, v) in pairs {
            let next = pos.claim_pair(u, v).unwrap();
            let (a, b) = (oracle_pair(&pos), oracle_pair(&next));
            run.check(a == b, || format!("trial {trial}: pairing ({u},{v}) changed {a:?} to {b:?}\n{}", pos.to_text()));
            pos = next;
        }
    }
}

fn decomposition(run: &mut Run, rng: &mut StdRng, max_n: usize, samples: usize) {
    for trial in 0..samples {
        let n = rng.gen_range(2..=max_n.max(2));
        let g = Arc::new(gnp(n, rng.gen_range(0.2..0.6), rng));
        let pos = random_position(g, rng, 0.5);
        let (a, b) = (oracle_pair(&pos), oracle_pair(&decompose(&pos)));
        run.check(a == b, || format!("trial {trial}: {a:?} vs decomposed {b:?}\n{}", pos.to_text()));
    }
}

fn connected(n: usize, rng: &mut StdRng) -> Graph {
    let mut edges: Vec<(usize, usize)> = random_tree(n, rng).edges().collect();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(0.2) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

fn milnor_bounds(run: &mut Run, rng: &mut StdRng, max_n: usize, samples: usize) {
    for trial in 0..samples {
        let a = connected(rng.gen_range(1..=max_n.max(1)), rng);
        let b = connected(rng.gen_range(1..=max_n.max(1)), rng);
        let bounds = sum_bounds(&[graph_oracle(&a), graph_oracle(&b)]).unwrap();
        let union = graph_oracle(&Graph::disjoint_union(&[&a, &b]));
        run.check(bounds.contains(union), || format!("trial {trial}: {union:?} outside {bounds:?}"));
    }
}

fn fpt(run: &mut Run, rng: &mut StdRng, max_n: usize, samples: usize) {
    let mut graphs: Vec<Graph> = (1..=max_n.min(9)).flat_map(nonisomorphic_trees).collect();
    for _ in 0..samples {
        let n = rng.gen_range(2..=max_n.max(2));
        graphs.push(twin_planted(&random_classes(rng, n), 0.5, rng));
        graphs.push(gnp(n, 0.4, rng));
    }
    for g in &graphs {
        let want = graph_oracle(g);
        match (nd_solve(g, Player::Maker), nd_solve(g, Player::Breaker)) {
            (Ok(ms), Ok(bs)) => {
                let got = ScorePair::new(ms, bs);
                run.check(got == want, || format!("nd {got:?} vs oracle {want:?}\n{}", g.to_text()));
            }
            (Err(e), _) | (_, Err(e)) => run.check(false, || e.to_string()),
        }
    }
}

fn random_clause(rng: &mut StdRng, vars: u32) -> Clause {
    let a = rng.gen_range(1..=vars);
    let mut b = rng.gen_range(1..=vars);
    while b == a {
        b = rng.gen_range(1..=vars);
    }
    Clause(Literal { var: a, positive: rng.gen_bool(0.5) }, Literal { var: b, positive: rng.gen_bool(0.5) })
}

fn gadget(run: &mut Run, rng: &mut StdRng, vars: u32, clauses: usize, samples: usize) {
    let vars = vars.max(2);
    for trial in 0..samples {
        let m = rng.gen_range(1..=clauses.max(1));
        let f = Qbf2Formula::existential(vars, (0..m).map(|_| random_clause(rng, vars)).collect()).unwrap();
        let (out, _, apps) = break_cycles(&f, 0);
        run.check(lci_graph(&out).is_acyclic(), || format!("trial {trial}: output cyclic"));
        let (before, after) = (max2sat_optimum(&f).unwrap(), max2sat_optimum(&out).unwrap());
        run.check(after == before + 4 * apps, || format!("trial {trial}: optimum {before} -> {after} with {apps} gadgets\n{}", f.to_text()));
    }
}

/// Random existential formula without repeated clauses in which every
/// variable occurs at most three times.
fn three_occurrence_formula(rng: &mut StdRng, vars: u32, attempts: usize) -> Qbf2Formula {
    let mut occ = vec![0usize; vars as usize + 1];
    let mut clauses: Vec<Clause> = Vec::new();
    for _ in 0..attempts {
        let c = random_clause(rng, vars);
        let fresh = !clauses.iter().any(|d| d.normalized() == c.normalized());
        if fresh && occ[c.0.var as usize] < 3 && occ[c.1.var as usize] < 3 {
            occ[c.0.var as usize] += 1;
            occ[c.1.var as usize] += 1;
            clauses.push(c);
        }
    }
    Qbf2Formula::existential(vars, clauses).unwrap()
}

fn occurrences(run: &mut Run, rng: &mut StdRng, vars: u32, samples: usize) {
    let vars = vars.max(2);
    for trial in 0..samples {
        let f = three_occurrence_formula(rng, vars, 3 * vars as usize);
        let out = bound_occurrences(&f, 0).unwrap();
        let g = &out.formula;
        let bounded = g.prefix.iter().all(|&(_, v)| g.occurrences(Literal::pos(v)) <= 2 && g.occurrences(Literal::neg(v)) <= 2);
        run.check(bounded, || format!("trial {trial}: a literal occurs more than twice"));
        let (before, after) = (max2sat_optimum(&f).unwrap() as i64, max2sat_optimum(g).unwrap() as i64);
        let want = before - out.removed_clauses as i64 + 4 * out.gadget_applications as i64;
        run.check(after == want, || format!("trial {trial}: optimum {before} -> {after}, expected {want}\n{}", f.to_text()));
    }
}

/// Every clause over distinct variables of `1..=vars`, up to sign.
fn all_clauses(vars: u32) -> Vec<Clause> {
    let mut out = Vec::new();
    for a in 1..=vars {
        for b in a + 1..=vars {
            for (pa, pb) in [(true, true), (true, false), (false, true), (false, false)] {
                out.push(Clause(Literal { var: a, positive: pa }, Literal { var: b, positive: pb }));
            }
        }
    }
    out
}

fn clause_sets(pool: &[Clause], max: usize, from: usize, cur: &mut Vec<Clause>, out: &mut Vec<Vec<Clause>>) {
    if !cur.is_empty() {
        out.push(cur.clone());
    }
    if cur.len() == max {
        return;
    }
    for i in from..pool.len() {
        cur.push(pool[i]);
        clause_sets(pool, max, i + 1, cur, out);
        cur.pop();
    }
}

fn permutations(items: &[u32]) -> Vec<Vec<u32>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

fn reduction(run: &mut Run, rng: &mut StdRng, vars: u32, clauses: usize, samples: usize) {
    let vars = vars.max(2);
    let mut sets = Vec::new();
    clause_sets(&all_clauses(vars), clauses.max(1), 0, &mut Vec::new(), &mut sets);
    let mut formulas = Vec::new();
    let orders = permutations(&(1..=vars).collect::<Vec<_>>());
    for bits in 0..1u32 << vars {
        for order in &orders {
            let prefix: Vec<(Quantifier, u32)> = order
                .iter()
                .map(|&v| (if bits >> (v - 1) & 1 == 1 { Quantifier::Forall } else { Quantifier::Exists }, v))
                .collect();
            for s in &sets {
                formulas.push(Qbf2Formula::new(prefix.clone(), s.clone()).unwrap());
            }
        }
    }
    while formulas.len() > samples {
        let i = rng.gen_range(0..formulas.len());
        formulas.swap_remove(i);
    }
    for f in &formulas {
        let tree = match build_tree_instance(f, 0) {
            Ok(a) => a,
            Err(e) => {
                run.check(false, || format!("build failed: {e}\n{}", f.to_text()));
                continue;
            }
        };
        let ms = match solve(&Position::empty(Arc::new(tree.instance.clone())), Player::Maker, &SolveConfig::full()) {
            Ok(ms) => ms,
            Err(e) => {
                run.check(false, || format!("solver failed: {e}\n{}", f.to_text()));
                continue;
            }
        };
        for k in 0..=f.clauses.len() as i64 + 1 {
            let art = build_tree_instance(f, k).unwrap();
            let falsifier = !qbf_max_solve(f, k, DEFAULT_QBF_CAP).unwrap().satisfier_wins;
            let maker = art.maker_wins_with(ms);
            run.check(maker == falsifier, || {
                format!("k={k}: Ms {ms} vs threshold {}, Falsifier wins: {falsifier}\n{}", art.threshold, f.to_text())
            });
        }
    }
}

fn caterpillar(run: &mut Run, rng: &mut StdRng, vars: u32, clauses: usize, samples: usize) {
    let vars = vars.max(2);
    let mut built = 0;
    while built < samples {
        let f = three_occurrence_formula(rng, vars, clauses.max(1));
        let bounded = bound_occurrences(&f, 1).unwrap();
        if bounded.formula.clauses.is_empty() {
            continue;
        }
        match build_caterpillar_instance(&bounded.formula, bounded.k) {
            Ok(art) => run.check(is_caterpillar(&art.instance), || format!("not a caterpillar\n{}", f.to_text())),
            Err(e) => run.check(false, || format!("build failed: {e}\n{}", f.to_text())),
        }
        built += 1;
    }
}

fn pds(run: &mut Run, max_n: usize) {
    let mut graphs: Vec<Graph> = (1..=max_n.min(10)).flat_map(nonisomorphic_trees).collect();
    graphs.extend((3..=max_n.max(3)).map(cycle));
    for g in &graphs {
        if let PdsSearch::Found(p) = find_pairing_dominating_set(g) {
            run.check(p.is_valid_for(g), || format!("invalid pairing\n{}", g.to_text()));
            let got = graph_oracle(g);
            run.check(got == ScorePair::new(0, 0), || format!("pairing found but oracle gives {got:?}\n{}", g.to_text()));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes_on_small_caps() {
        let caps = SuiteCaps { max_n: Some(7), samples: Some(10), vars: Some(2), clauses: Some(2), seed: Some(1) };
        for name in SUITES {
            let report = run_suite(name, &caps).unwrap();
            assert!(report.passed, "{name}: {:?}", report.failures);
            assert!(report.checks > 0, "{name} ran no checks");
        }
    }

    #[test]
    fn unknown_suite_is_an_error() {
        assert!(matches!(run_suite("nope", &SuiteCaps::default()), Err(VerifyError::UnknownSuite(_))));
    }
}
