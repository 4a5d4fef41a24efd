//! Acceptance criteria. Run with `cargo test -p shvg-core --test acceptance`;
//! prints one PASS/FAIL line per criterion and exits non-zero on any failure.

mod common;

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::{brute_pair, brute_position, enumerate_optimum, quantified_value, Brute};
use shvg::closed_form::{complete_binary_tree_score, path_score, subdivided_star_score, union_paths_score};
use shvg::fpt::nd_solve_report;
use shvg::generators::*;
use shvg::milnor::{find_pairing_dominating_set, sum_bounds, PdsSearch};
use shvg::partition::ClassKind;
use shvg::position::decompose;
use shvg::sat::*;
use shvg::solver::{solve, solve_pair, super_lemma_reduce, super_lemma_steps, ScorePair, SolveConfig, SolveError};
use shvg::{Graph, Player, Position};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    check(start.elapsed() < limit, || format!("took {:.1?}, limit {limit:?}", start.elapsed()))
}

/// Full solver without closed-form dispatch, so formulas are not checked against themselves.
fn searching() -> SolveConfig {
    SolveConfig { closed_form_dispatch: false, ..SolveConfig::full() }
}

fn empty(g: &Graph) -> Position {
    Position::empty(Arc::new(g.clone()))
}

fn c01_paths() -> Outcome {
    let start = Instant::now();
    for n in 1..=12 {
        let got = brute_pair(&path(n));
        let want = (path_score(n, Player::Maker).unwrap(), path_score(n, Player::Breaker).unwrap());
        check(got == want, || format!("P_{n}: brute {got:?}, formula {want:?}"))?;
    }
    within(start, Duration::from_secs(10))?;
    Ok(format!("P_1..P_12 both movers in {:.2?}", start.elapsed()))
}

fn partitions(total: usize, max_part: usize, out: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>) {
    if !cur.is_empty() {
        out.push(cur.clone());
    }
    for p in (1..=max_part.min(total)).rev() {
        cur.push(p);
        partitions(total - p, p, out, cur);
        cur.pop();
    }
}

fn c02_unions() -> Outcome {
    let start = Instant::now();
    let mut multisets = Vec::new();
    partitions(14, 14, &mut multisets, &mut Vec::new());
    let cfg = searching();
    for lengths in &multisets {
        let parts: Vec<Graph> = lengths.iter().map(|&n| path(n)).collect();
        let g = Graph::disjoint_union(&parts.iter().collect::<Vec<_>>());
        let l = lengths.iter().filter(|&&n| n % 2 == 1).count() as u32;
        let want = ScorePair::new(l.div_ceil(2), l / 2);
        let got = solve_pair(&g, &cfg).map_err(|e| e.to_string())?;
        check(got == want, || format!("{lengths:?}: solver {got:?}, expected {want:?}"))?;
        let formula = ScorePair::new(
            union_paths_score(lengths, &[], Player::Maker).unwrap(),
            union_paths_score(lengths, &[], Player::Breaker).unwrap(),
        );
        check(formula == want, || format!("{lengths:?}: formula {formula:?}"))?;
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{} multisets with total <= 14 in {:.2?}", multisets.len(), start.elapsed()))
}

fn c03_cycles() -> Outcome {
    for n in 3..=9 {
        let g = cycle(n);
        let brute = brute_pair(&g);
        let solver = solve_pair(&g, &searching()).map_err(|e| e.to_string())?;
        check(brute == (0, 0) && solver == ScorePair::new(0, 0), || {
            format!("C_{n}: brute {brute:?}, solver {solver:?}")
        })?;
    }
    Ok("C_3..C_9 score (0,0) by brute force and solver".into())
}

fn c04_stars() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    let mut all = Vec::new();
    partitions(12, 12, &mut all, &mut Vec::new());
    for legs in all.into_iter().filter(|l| (3..=5).contains(&l.len())) {
        let g = subdivided_star(&legs);
        let l = legs.iter().filter(|&&x| x % 2 == 1).count() as u32;
        let want = (if l == 0 { 1 } else { l / 2 }, 0);
        let got = brute_pair(&g);
        check(got == want, || format!("legs {legs:?}: brute {got:?}, expected {want:?}"))?;
        let solver = solve_pair(&g, &searching()).map_err(|e| e.to_string())?;
        check(solver == ScorePair::new(want.0, want.1), || format!("legs {legs:?}: solver {solver:?}"))?;
        let formula = (
            subdivided_star_score(&legs, Player::Maker).unwrap(),
            subdivided_star_score(&legs, Player::Breaker).unwrap(),
        );
        check(formula == want, || format!("legs {legs:?}: formula {formula:?}"))?;
        count += 1;
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!("{count} stars (brute force and solver) with 3..5 legs, <= 13 vertices, in {:.2?}", start.elapsed()))
}

fn c05_binary_trees() -> Outcome {
    for d in 0..=2 {
        let got = brute_pair(&complete_binary_tree(d));
        let want = (
            complete_binary_tree_score(d, Player::Maker),
            complete_binary_tree_score(d, Player::Breaker),
        );
        check(got == want, || format!("T_{d}: brute {got:?}, formula {want:?}"))?;
    }
    let start = Instant::now();
    let reduced = super_lemma_reduce(&empty(&complete_binary_tree(3)));
    check(reduced.free_vertices() == vec![0], || format!("T_3 reduction left {:?} free", reduced.free_vertices()))?;
    let cfg = SolveConfig { super_lemma: true, ..SolveConfig::oracle() };
    for mover in [Player::Maker, Player::Breaker] {
        let got = solve(&reduced, mover, &cfg).map_err(|e| e.to_string())?;
        check(got == 2, || format!("T_3 reduced, {mover} first: {got}"))?;
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("T_0..T_2 by brute force; T_3 reduced to the root scores 2 in {:.2?}", start.elapsed()))
}

fn random_coloring(n: usize, rng: &mut StdRng, density: f64) -> (Vec<usize>, Vec<usize>) {
    let mut maker = Vec::new();
    let mut breaker = Vec::new();
    for v in 0..n {
        if rng.gen_bool(density) {
            if rng.gen_bool(0.5) {
                maker.push(v);
            } else {
                breaker.push(v);
            }
        }
    }
    (maker, breaker)
}

fn c06_super_lemma() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5e1);
    let mut pairs_checked = 0;
    for trial in 0..500 {
        let mut classes = Vec::new();
        let mut n = 0;
        let target = rng.gen_range(4..=9);
        while n < target {
            let size = rng.gen_range(1..=3usize).min(target - n);
            let kind = if rng.gen_bool(0.5) { ClassKind::Clique } else { ClassKind::Independent };
            classes.push((size, kind));
            n += size;
        }
        let g = Arc::new(twin_planted(&classes, 0.5, &mut rng));
        let (maker, breaker) = if trial % 2 == 0 { (vec![], vec![]) } else { random_coloring(n, &mut rng, 0.3) };
        let start = Position::new(g, &maker, &breaker).unwrap();
        let (_, pairs) = super_lemma_steps(&start);
        let mut pos = start;
        for (u, v) in pairs {
            let next = pos.claim_pair(u, v).map_err(|e| e.to_string())?;
            for mover in [Player::Maker, Player::Breaker] {
                let (a, b) = (brute_position(&pos, mover), brute_position(&next, mover));
                check(a == b, || format!("trial {trial}: pair ({u},{v}) changed {mover} score {a} -> {b}\n{}", pos.to_text()))?;
            }
            pos = next;
            pairs_checked += 1;
        }
    }
    Ok(format!("500 twin-planted graphs, {pairs_checked} pairings each preserve both scores"))
}

fn c07_decompose() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0xdec);
    for trial in 0..500 {
        let n = rng.gen_range(2..=9);
        let g = Arc::new(gnp(n, rng.gen_range(0.2..0.6), &mut rng));
        let (maker, breaker) = random_coloring(n, &mut rng, 0.5);
        let pos = Position::new(g, &maker, &breaker).unwrap();
        let dec = decompose(&pos);
        for mover in [Player::Maker, Player::Breaker] {
            let (a, b) = (brute_position(&pos, mover), brute_position(&dec, mover));
            check(a == b, || format!("trial {trial}: {mover} score {a} vs decomposed {b}\n{}", pos.to_text()))?;
        }
    }
    Ok("500 random positions, decomposition preserves both scores".into())
}

fn connected(n: usize, rng: &mut StdRng) -> Graph {
    let t = random_tree(n, rng);
    let mut edges: Vec<(usize, usize)> = t.edges().collect();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(0.2) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

fn c08_milnor() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x4d11);
    let mut tight = 0;
    for trial in 0..200 {
        let a = connected(rng.gen_range(1..=6), &mut rng);
        let b = connected(rng.gen_range(1..=6), &mut rng);
        let pa = brute_pair(&a);
        let pb = brute_pair(&b);
        let union = brute_pair(&Graph::disjoint_union(&[&a, &b]));
        let bounds = sum_bounds(&[ScorePair::new(pa.0, pa.1), ScorePair::new(pb.0, pb.1)]).unwrap();
        check(bounds.contains(ScorePair::new(union.0, union.1)), || {
            format!("trial {trial}: union {union:?} outside {bounds:?} from {pa:?} + {pb:?}")
        })?;
        if bounds.exact(Player::Maker).is_some() && bounds.exact(Player::Breaker).is_some() {
            tight += 1;
        }
    }
    Ok(format!("200 unions inside the sum bounds ({tight} with collapsed bounds), 0 violations"))
}

fn corpus_12() -> Vec<Graph> {
    let mut out: Vec<Graph> = (1..=9).flat_map(nonisomorphic_trees).collect();
    out.extend((10..=12).map(path));
    out.extend((3..=12).map(cycle));
    out.extend((2..=8).map(complete));
    out.extend((1..=5).flat_map(|a| (a..=5).map(move |b| complete_bipartite(a, b))));
    out.extend((3..=11).map(star));
    out.push(petersen());
    let mut rng = StdRng::seed_from_u64(0xc0);
    for n in 5..=12 {
        for p in [0.2, 0.35, 0.5] {
            out.push(gnp(n, p, &mut rng));
        }
    }
    out
}

fn c09_fpt() -> Outcome {
    let corpus = corpus_12();
    for (i, g) in corpus.iter().enumerate() {
        let want = brute_pair(g);
        for (mover, w) in [(Player::Maker, want.0), (Player::Breaker, want.1)] {
            let got = nd_solve_report(g, mover, 20).map_err(|e| e.to_string())?;
            check(got.score == w, || format!("corpus graph {i}: nd {} vs brute {w}\n{}", got.score, g.to_text()))?;
            check(got.states <= 3usize.pow(got.width as u32), || format!("corpus graph {i}: too many states"))?;
        }
    }

    let mut rng = StdRng::seed_from_u64(0xf97);
    let budget = SolveConfig::oracle().with_node_budget(3_000_000);
    let (mut nd_total, mut brute_total) = (Duration::ZERO, Duration::ZERO);
    let (mut brute_count, mut infeasible) = (0, 0);
    for trial in 0..100 {
        let w = rng.gen_range(2..=6);
        let n = rng.gen_range(12..=20);
        let mut sizes = vec![1; w];
        for _ in w..n {
            sizes[rng.gen_range(0..w)] += 1;
        }
        let classes: Vec<(usize, ClassKind)> = sizes
            .into_iter()
            .map(|s| (s, if rng.gen_bool(0.5) { ClassKind::Clique } else { ClassKind::Independent }))
            .collect();
        let g = twin_planted(&classes, 0.5, &mut rng);
        for mover in [Player::Maker, Player::Breaker] {
            let t = Instant::now();
            let nd = nd_solve_report(&g, mover, 20).map_err(|e| e.to_string())?;
            let nd_time = t.elapsed();
            nd_total += nd_time;
            check(nd.width <= 6, || format!("trial {trial}: width {}", nd.width))?;
            check(nd_time < Duration::from_secs(1), || format!("trial {trial}: nd took {nd_time:?}"))?;
            if n <= 14 {
                let t = Instant::now();
                let mut b = Brute::new(&g);
                let want = b.score(0, 0, mover == Player::Maker);
                let bt = t.elapsed();
                brute_total += bt;
                brute_count += 1;
                check(nd.score == want, || format!("trial {trial}: nd {} vs brute {want}", nd.score))?;
                check(bt > nd_time, || format!("trial {trial}: brute {bt:?} not slower than nd {nd_time:?}"))?;
            } else {
                let want = solve(&empty(&g), mover, &SolveConfig::full()).map_err(|e| e.to_string())?;
                check(nd.score == want, || format!("trial {trial}: nd {} vs solver {want}", nd.score))?;
                match solve(&empty(&g), mover, &budget) {
                    Err(SolveError::ResourceExceeded(_)) => infeasible += 1,
                    Ok(v) => check(v == want, || format!("trial {trial}: oracle {v} vs {want}"))?,
                    Err(e) => return Err(e.to_string()),
                }
            }
        }
    }
    check(infeasible > 0, || "no instance exceeded the brute-force budget".into())?;
    Ok(format!(
        "{} corpus graphs; 100 twin-planted graphs (w <= 6): nd total {:.2?}, brute force {:.2?} on {brute_count} solves, {infeasible} solves beyond a 3M-node brute-force budget",
        corpus.len(),
        nd_total,
        brute_total
    ))
}

fn random_clause(vars: u32, rng: &mut StdRng) -> Clause {
    let a = rng.gen_range(1..=vars);
    let mut b = rng.gen_range(1..=vars);
    while b == a {
        b = rng.gen_range(1..=vars);
    }
    Clause(Literal { var: a, positive: rng.gen_bool(0.5) }, Literal { var: b, positive: rng.gen_bool(0.5) })
}

fn c10_gadget() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x6ad);
    let mut total_apps = 0;
    let mut with_cycles = 0;
    for trial in 0..200 {
        let n = rng.gen_range(3..=6);
        let m = rng.gen_range(3..=8);
        let f = Qbf2Formula::existential(n, (0..m).map(|_| random_clause(n, &mut rng)).collect()).unwrap();
        let (out, k, apps) = break_cycles(&f, 0);
        check(lci_graph(&out).is_acyclic(), || format!("trial {trial}: output still cyclic"))?;
        check(k == 4 * apps as i64, || format!("trial {trial}: k' = {k} for {apps} applications"))?;
        let (before, after) = (enumerate_optimum(&f), enumerate_optimum(&out));
        check(after == before + 4 * apps, || {
            format!("trial {trial}: optimum {before} -> {after} with {apps} applications\n{}", f.to_text())
        })?;
        total_apps += apps;
        with_cycles += usize::from(apps > 0);
    }
    Ok(format!("200 formulas ({with_cycles} cyclic, {total_apps} gadget applications): optimum shifts by +4 each"))
}

/// A random existential formula with every variable occurring at most three
/// times, often with some literal occurring exactly three times.
fn max2sat3(rng: &mut StdRng, max_vars: u32) -> Qbf2Formula {
    let n = rng.gen_range(4..=max_vars);
    let mut occ = vec![0usize; n as usize + 1];
    let mut clauses: Vec<Clause> = Vec::new();
    let add = |c: Clause, occ: &mut Vec<usize>, clauses: &mut Vec<Clause>| {
        if occ[c.0.var as usize] < 3 && occ[c.1.var as usize] < 3 && !clauses.iter().any(|d| d.normalized() == c.normalized()) {
            occ[c.0.var as usize] += 1;
            occ[c.1.var as usize] += 1;
            clauses.push(c);
        }
    };
    if rng.gen_bool(0.6) {
        let x = Literal { var: rng.gen_range(1..=n), positive: rng.gen_bool(0.5) };
        for _ in 0..12 {
            if occ[x.var as usize] == 3 {
                break;
            }
            let mut c = random_clause(n, rng);
            if c.0.var == x.var || c.1.var == x.var {
                continue;
            }
            c.0 = x;
            add(c, &mut occ, &mut clauses);
        }
    }
    for _ in 0..rng.gen_range(2..=10) {
        add(random_clause(n, rng), &mut occ, &mut clauses);
    }
    Qbf2Formula::existential(n, clauses).unwrap()
}

fn c11_occurrences() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x223);
    let (mut removals, mut apps) = (0, 0);
    for trial in 0..200 {
        let f = max2sat3(&mut rng, 6);
        let out = bound_occurrences(&f, 0).map_err(|e| e.to_string())?;
        check(out.removed_clauses == 3 * out.removals, || format!("trial {trial}: removal bookkeeping"))?;
        let g = &out.formula;
        for &(_, v) in &g.prefix {
            for lit in [Literal::pos(v), Literal::neg(v)] {
                check(g.occurrences(lit) <= 2, || format!("trial {trial}: literal {lit} occurs {} times", g.occurrences(lit)))?;
            }
        }
        check(lci_graph(g).is_acyclic(), || format!("trial {trial}: output cyclic"))?;
        let (before, after) = (enumerate_optimum(&f), enumerate_optimum(g));
        let expected = before as i64 - 3 * out.removals as i64 + 4 * out.gadget_applications as i64;
        check(after as i64 == expected, || {
            format!("trial {trial}: optimum {before} -> {after}, expected {expected}\n{}", f.to_text())
        })?;
        check(out.k == -3 * out.removals as i64 + 4 * out.gadget_applications as i64, || format!("trial {trial}: k' = {}", out.k))?;
        removals += out.removals;
        apps += out.gadget_applications;
    }
    Ok(format!("200 MAX-2-SAT-3 formulas: {removals} removals shift -3 each, {apps} gadget applications +4 each, all literals <= 2"))
}

fn two_variable_formulas() -> Vec<Qbf2Formula> {
    use Quantifier::{Exists, Forall};
    let pairs = [(1, 2), (1, -2), (-1, 2), (-1, -2)];
    let lit = |x: i64| Literal::from_dimacs(x).unwrap();
    let mut sets: Vec<Vec<Clause>> = pairs.iter().map(|&(a, b)| vec![Clause(lit(a), lit(b))]).collect();
    for i in 0..4 {
        for j in i + 1..4 {
            sets.push(vec![Clause(lit(pairs[i].0), lit(pairs[i].1)), Clause(lit(pairs[j].0), lit(pairs[j].1))]);
        }
    }
    let mut out = Vec::new();
    for q1 in [Exists, Forall] {
        for q2 in [Exists, Forall] {
            for order in [[1, 2], [2, 1]] {
                let quant = |v: u32| if v == 1 { q1 } else { q2 };
                let prefix = order.iter().map(|&v| (quant(v), v)).collect::<Vec<_>>();
                for s in &sets {
                    out.push(Qbf2Formula::new(prefix.clone(), s.clone()).unwrap());
                }
            }
        }
    }
    out
}

fn c12_reduction() -> Outcome {
    let start = Instant::now();
    let formulas = two_variable_formulas();
    let mut checks = 0;
    let mut largest = 0;
    for f in &formulas {
        let value = qbf_max_solve(f, 0, DEFAULT_QBF_CAP).map_err(|e| e.to_string())?.value;
        check(value == quantified_value(f), || format!("qbf_max_solve disagrees with minimax on\n{}", f.to_text()))?;
        let base = build_tree_instance(f, 0).map_err(|e| e.to_string())?;
        check(base.instance.is_tree(), || "instance is not a tree".into())?;
        largest = largest.max(base.vertices);
        let ms = solve(&empty(&base.instance), Player::Maker, &SolveConfig::full()).map_err(|e| e.to_string())?;
        for k in 0..=f.clauses.len() as i64 + 1 {
            let art = build_tree_instance(f, k).map_err(|e| e.to_string())?;
            let falsifier = !qbf_max_solve(f, k, DEFAULT_QBF_CAP).unwrap().satisfier_wins;
            let maker = art.maker_wins_with(ms);
            check(maker == falsifier, || {
                format!(
                    "k={k}: Maker {} (Ms {ms}, threshold {}), Falsifier {} (value {value})\n{}",
                    if maker { "wins" } else { "loses" },
                    art.threshold,
                    if falsifier { "wins" } else { "loses" },
                    f.to_text()
                )
            })?;
            checks += 1;
        }
    }
    within(start, Duration::from_secs(600))?;
    Ok(format!(
        "{} formulas, {checks} (formula, k) pairs, 0 disagreements; trees up to {largest} vertices; {:.2?}",
        formulas.len(),
        start.elapsed()
    ))
}

fn c13_caterpillar() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0xca7);
    let mut built = 0;
    let mut largest = 0;
    while built < 100 {
        let f = max2sat3(&mut rng, 5);
        let bounded = bound_occurrences(&f, 1).map_err(|e| e.to_string())?;
        if bounded.formula.clauses.is_empty() {
            continue;
        }
        let art = build_caterpillar_instance(&bounded.formula, bounded.k).map_err(|e| e.to_string())?;
        check(is_caterpillar(&art.instance), || format!("input {built} is not a caterpillar"))?;
        largest = largest.max(art.vertices);
        built += 1;
    }
    Ok(format!("100 caterpillar instances pass the shape check (up to {largest} vertices)"))
}

fn c14_pds() -> Outcome {
    let mut graphs: Vec<Graph> = (1..=9).flat_map(nonisomorphic_trees).collect();
    graphs.extend((3..=8).map(cycle));
    let mut found = 0;
    for g in &graphs {
        match find_pairing_dominating_set(g) {
            PdsSearch::Found(p) => {
                check(p.is_valid_for(g), || format!("invalid pairing {:?}\n{}", p.pairs, g.to_text()))?;
                let b = brute_pair(g);
                check(b == (0, 0), || format!("pairing found but brute force gives {b:?}\n{}", g.to_text()))?;
                let s = solve_pair(g, &SolveConfig::full()).map_err(|e| e.to_string())?;
                check(s == ScorePair::new(0, 0), || format!("solver gives {s:?}"))?;
                found += 1;
            }
            PdsSearch::NoneExists => {}
            PdsSearch::NotAttempted { .. } => return Err("size guard hit on a small graph".into()),
        }
    }
    Ok(format!("{} graphs, {found} pairings found, each scoring (0,0)", graphs.len()))
}

fn main() {
    let criteria: [Criterion; 14] = [
        ("paths", c01_paths),
        ("unions of paths", c02_unions),
        ("cycles", c03_cycles),
        ("subdivided stars", c04_stars),
        ("complete binary trees", c05_binary_trees),
        ("super lemma", c06_super_lemma),
        ("decomposed graph", c07_decompose),
        ("milnor bounds", c08_milnor),
        ("fpt", c09_fpt),
        ("acyclicity gadget", c10_gadget),
        ("occurrence bounding", c11_occurrences),
        ("end-to-end reduction", c12_reduction),
        ("caterpillar shape", c13_caterpillar),
        ("pairing dominating set", c14_pds),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{:.2?}]", i + 1, start.elapsed()),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg} [{:.2?}]", i + 1, start.elapsed());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
