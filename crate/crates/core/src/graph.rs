//! Undirected simple graphs over dense vertex ids, and the plain-text graph
//! file format:
//!
//! ```text
//! # comment
//! n m
//! u v        (m edge lines, 0-based ids)
//! label v name
//! ```

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
}

/// An immutable undirected simple graph. Neighbor lists are kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    labels: Vec<Option<String>>,
    edge_count: usize,
}

/// Incremental construction of a [`Graph`]; duplicate edges collapse.
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    labels: Vec<Option<String>>,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        GraphBuilder {
            n,
            edges: BTreeSet::new(),
            labels: vec![None; n],
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn add_vertex(&mut self) -> usize {
        self.n += 1;
        self.labels.push(None);
        self.n - 1
    }

    pub fn add_labeled_vertex(&mut self, label: impl Into<String>) -> usize {
        let v = self.add_vertex();
        self.labels[v] = Some(label.into());
        v
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<&mut Self, GraphError> {
        for x in [u, v] {
            if x >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex: x, n: self.n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.edges.insert((u.min(v), u.max(v)));
        Ok(self)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn set_label(&mut self, v: usize, label: impl Into<String>) -> Result<&mut Self, GraphError> {
        if v >= self.n {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n });
        }
        self.labels[v] = Some(label.into());
        Ok(self)
    }

    pub fn build(self) -> Graph {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph {
            adj,
            labels: self.labels,
            edge_count: self.edges.len(),
        }
    }
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Graph {
        GraphBuilder::new(n).build()
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut b = GraphBuilder::new(n);
        for (u, v) in edges {
            b.add_edge(u, v)?;
        }
        Ok(b.build())
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Closed neighborhood N[v] in ascending order.
    pub fn closed_neighborhood(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.adj[v].len() + 1);
        let pos = self.adj[v].partition_point(|&u| u < v);
        out.extend_from_slice(&self.adj[v][..pos]);
        out.push(v);
        out.extend_from_slice(&self.adj[v][pos..]);
        out
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels[v].as_deref()
    }

    pub fn labels(&self) -> &[Option<String>] {
        &self.labels
    }

    /// Closed-neighborhood bit masks, available when the graph has at most 64 vertices.
    pub fn closed_masks(&self) -> Option<Vec<u64>> {
        if self.n() > 64 {
            return None;
        }
        Some(
            (0..self.n())
                .map(|v| self.adj[v].iter().fold(1u64 << v, |m, &u| m | (1u64 << u)))
                .collect(),
        )
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Subgraph induced by `vertices` (in the given order); local id `i` is `vertices[i]`.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        let mut local = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut b = GraphBuilder::new(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            if let Some(label) = self.label(v) {
                b.labels[i] = Some(label.to_string());
            }
            for &u in &self.adj[v] {
                let j = local[u];
                if j != usize::MAX && i < j {
                    b.edges.insert((i, j));
                }
            }
        }
        b.build()
    }

    /// Vertex sets of the connected components, each ascending, ordered by smallest vertex.
    pub fn component_vertex_sets(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &u in &self.adj[v] {
                    if !seen[u] {
                        seen[u] = true;
                        comp.push(u);
                        queue.push_back(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Connected components with dense local ids; the vector maps local ids back to `self`.
    pub fn components(&self) -> Vec<(Graph, Vec<usize>)> {
        self.component_vertex_sets()
            .into_iter()
            .map(|vs| (self.induced_subgraph(&vs), vs))
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.n() == 0 || self.component_vertex_sets().len() == 1
    }

    pub fn is_tree(&self) -> bool {
        self.n() > 0 && self.edge_count + 1 == self.n() && self.is_connected()
    }

    pub fn is_forest(&self) -> bool {
        self.edge_count + self.component_vertex_sets().len() == self.n()
    }

    /// Disjoint union; vertices of `parts[i]` are shifted by the sizes of the earlier parts.
    pub fn disjoint_union(parts: &[&Graph]) -> Graph {
        let total = parts.iter().map(|g| g.n()).sum();
        let mut b = GraphBuilder::new(total);
        let mut offset = 0;
        for g in parts {
            for (u, v) in g.edges() {
                b.edges.insert((u + offset, v + offset));
            }
            for v in 0..g.n() {
                b.labels[v + offset] = g.labels[v].clone();
            }
            offset += g.n();
        }
        b.build()
    }

    /// Serialize in the graph file format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.n(), self.edge_count);
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        for (v, label) in self.labels.iter().enumerate() {
            if let Some(label) = label {
                let _ = writeln!(out, "label {v} {label}");
            }
        }
        out
    }

    /// Parse a graph file. Position lines (`M:` / `B:`) are rejected here.
    pub fn parse(text: &str) -> Result<Graph, GraphError> {
        let doc = parse_document(text)?;
        if let Some(line) = doc.position_line {
            return Err(GraphError::Parse {
                line,
                msg: "position line in a graph file".into(),
            });
        }
        Ok(doc.graph)
    }
}

pub(crate) struct ParsedDocument {
    pub graph: Graph,
    pub maker: Option<(usize, Vec<usize>)>,
    pub breaker: Option<(usize, Vec<usize>)>,
    pub position_line: Option<usize>,
}

fn parse_err(line: usize, msg: impl Into<String>) -> GraphError {
    GraphError::Parse { line, msg: msg.into() }
}

fn parse_id(tok: &str, line: usize) -> Result<usize, GraphError> {
    tok.parse::<usize>()
        .map_err(|_| parse_err(line, format!("invalid vertex id `{tok}`")))
}

/// Shared reader for graph and position files.
pub(crate) fn parse_document(text: &str) -> Result<ParsedDocument, GraphError> {
    let mut builder: Option<GraphBuilder> = None;
    let mut declared_edges = 0usize;
    let mut seen_edges = 0usize;
    let mut maker = None;
    let mut breaker = None;
    let mut position_line = None;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some(b) = builder.as_mut() else {
            let toks: Vec<&str> = trimmed.split_whitespace().collect();
            if toks.len() != 2 {
                return Err(parse_err(line, "expected header `n m`"));
            }
            let n = toks[0]
                .parse::<usize>()
                .map_err(|_| parse_err(line, format!("invalid vertex count `{}`", toks[0])))?;
            declared_edges = toks[1]
                .parse::<usize>()
                .map_err(|_| parse_err(line, format!("invalid edge count `{}`", toks[1])))?;
            builder = Some(GraphBuilder::new(n));
            continue;
        };

        if let Some(rest) = trimmed.strip_prefix("M:").or_else(|| trimmed.strip_prefix("B:")) {
            let ids = rest
                .split_whitespace()
                .map(|t| parse_id(t, line))
                .collect::<Result<Vec<_>, _>>()?;
            for &v in &ids {
                if v >= b.vertex_count() {
                    return Err(parse_err(line, format!("vertex {v} out of range")));
                }
            }
            let slot = if trimmed.starts_with('M') { &mut maker } else { &mut breaker };
            if slot.is_some() {
                return Err(parse_err(line, "duplicate position line"));
            }
            *slot = Some((line, ids));
            position_line.get_or_insert(line);
            continue;
        }

        let toks: Vec<&str> = trimmed.split_whitespace().collect();
        if toks[0] == "label" {
            if toks.len() < 3 {
                return Err(parse_err(line, "expected `label v name`"));
            }
            let v = parse_id(toks[1], line)?;
            let name = toks[2..].join(" ");
            b.set_label(v, name).map_err(|e| parse_err(line, e.to_string()))?;
            continue;
        }
        if position_line.is_some() {
            return Err(parse_err(line, "edge line after position lines"));
        }
        if toks.len() != 2 {
            return Err(parse_err(line, "expected edge `u v`"));
        }
        let u = parse_id(toks[0], line)?;
        let v = parse_id(toks[1], line)?;
        b.add_edge(u, v).map_err(|e| parse_err(line, e.to_string()))?;
        seen_edges += 1;
    }

    let Some(b) = builder else {
        return Err(parse_err(last_line.max(1), "missing header `n m`"));
    };
    if seen_edges != declared_edges {
        return Err(parse_err(
            last_line.max(1),
            format!("header declares {declared_edges} edges, found {seen_edges}"),
        ));
    }
    Ok(ParsedDocument {
        graph: b.build(),
        maker,
        breaker,
        position_line,
    })
}
