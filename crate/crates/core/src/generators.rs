//! Graph families and random instances used by tests, the CLI and benches.

use rand::seq::SliceRandom;
use rand::Rng;
use rustc_hash::FxHashSet;

use crate::graph::{Graph, GraphBuilder};
use crate::partition::ClassKind;

fn build(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Graph {
    Graph::from_edges(n, edges).expect("generated edges are valid")
}

pub fn path(n: usize) -> Graph {
    build(n, (1..n).map(|i| (i - 1, i)))
}

/// The cycle `0-1-...-(n-1)-0`; requires `n >= 3`.
pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "a cycle needs at least 3 vertices");
    build(n, (0..n).map(|i| (i, (i + 1) % n)))
}

pub fn complete(n: usize) -> Graph {
    build(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
}

pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    build(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))))
}

/// `K_{1,k}` with center 0.
pub fn star(k: usize) -> Graph {
    build(k + 1, (1..=k).map(|i| (0, i)))
}

/// Center 0 with one path per entry of `legs`, numbered leg by leg outward.
pub fn subdivided_star(legs: &[usize]) -> Graph {
    let mut b = GraphBuilder::new(1);
    for &len in legs {
        let mut prev = 0;
        for _ in 0..len {
            let v = b.add_vertex();
            b.add_edge(prev, v).expect("valid");
            prev = v;
        }
    }
    b.build()
}

/// Perfect binary tree of depth `d` in heap order: children of `i` are `2i+1`, `2i+2`.
pub fn complete_binary_tree(d: u32) -> Graph {
    let n = (1usize << (d + 1)) - 1;
    build(n, (1..n).map(|i| ((i - 1) / 2, i)))
}

pub fn petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    build(10, outer.chain(spokes).chain(inner))
}

pub fn gnp<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    build(n, edges)
}

/// Uniform random labelled tree via a random Prüfer sequence.
pub fn random_tree<R: Rng>(n: usize, rng: &mut R) -> Graph {
    if n <= 2 {
        return path(n);
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &x in &seq {
        degree[x] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &x in &seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf exists");
        edges.push((leaf, x));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    build(n, edges)
}

/// A random graph whose vertex set splits into the given twin classes.
///
/// Each class is a clique or an independent set; between two classes either
/// all or none of the edges are present. Vertices are shuffled so that
/// classes are not contiguous.
pub fn twin_planted<R: Rng>(classes: &[(usize, ClassKind)], p: f64, rng: &mut R) -> Graph {
    let n: usize = classes.iter().map(|c| c.0).sum();
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(rng);
    let mut groups = Vec::new();
    let mut next = 0;
    for &(size, kind) in classes {
        groups.push((ids[next..next + size].to_vec(), kind));
        next += size;
    }
    let mut edges = Vec::new();
    for (i, (gi, kind)) in groups.iter().enumerate() {
        if *kind == ClassKind::Clique {
            for (a, &u) in gi.iter().enumerate() {
                for &v in &gi[a + 1..] {
                    edges.push((u, v));
                }
            }
        }
        for (gj, _) in &groups[i + 1..] {
            if rng.gen_bool(p) {
                for &u in gi {
                    for &v in gj {
                        edges.push((u, v));
                    }
                }
            }
        }
    }
    build(n, edges)
}

/// Canonical string of a tree, the same for isomorphic trees.
pub fn tree_canonical_form(g: &Graph) -> String {
    let n = g.n();
    if n == 0 {
        return String::new();
    }
    // peel leaves to find the center (one or two vertices)
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &u in g.neighbors(v) {
                if degree[u] > 1 {
                    degree[u] -= 1;
                    if degree[u] == 1 {
                        next.push(u);
                    }
                }
            }
            degree[v] = 0;
        }
        layer = next;
    }
    fn encode(g: &Graph, v: usize, parent: usize) -> String {
        let mut kids: Vec<String> = g
            .neighbors(v)
            .iter()
            .filter(|&&u| u != parent)
            .map(|&u| encode(g, u, v))
            .collect();
        kids.sort_unstable();
        format!("({})", kids.concat())
    }
    layer.iter().map(|&c| encode(g, c, usize::MAX)).min().expect("a center exists")
}

/// All trees on `n` vertices up to isomorphism.
pub fn nonisomorphic_trees(n: usize) -> Vec<Graph> {
    if n == 0 {
        return Vec::new();
    }
    let mut level = vec![path(1)];
    for size in 2..=n {
        let mut seen = FxHashSet::default();
        let mut next = Vec::new();
        for t in &level {
            for v in 0..t.n() {
                let edges = t.edges().chain(std::iter::once((v, size - 1)));
                let grown = build(size, edges);
                if seen.insert(tree_canonical_form(&grown)) {
                    next.push(grown);
                }
            }
        }
        level = next;
    }
    level
}
