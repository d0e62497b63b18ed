//! Undirected weighted graphs, the edge-list format, and anchor splitting.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, ParseErrorKind, Result};
use crate::{Vertex, Weight};

/// Simple undirected graph with nonnegative integer edge costs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<Vertex>>,
    weights: BTreeMap<(Vertex, Vertex), Weight>,
    total_weight: Weight,
}

fn key(u: Vertex, v: Vertex) -> (Vertex, Vertex) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { n, adj: vec![Vec::new(); n], weights: BTreeMap::new(), total_weight: 0 }
    }

    /// Build from unit-weight edges. Panics on invalid input; use
    /// [`Graph::add_edge`] for fallible construction.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Self {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v, 1).expect("valid edge list");
        }
        g
    }

    pub fn from_weighted_edges(n: usize, edges: &[(Vertex, Vertex, Weight)]) -> Self {
        let mut g = Graph::new(n);
        for &(u, v, w) in edges {
            g.add_edge(u, v, w).expect("valid edge list");
        }
        g
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex, weight: Weight) -> Result<(), ParseErrorKind> {
        for x in [u, v] {
            if x as usize >= self.n {
                return Err(ParseErrorKind::VertexOutOfRange { vertex: x as u64, n: self.n });
            }
        }
        if u == v {
            return Err(ParseErrorKind::SelfLoop(u));
        }
        let k = key(u, v);
        if self.weights.contains_key(&k) {
            return Err(ParseErrorKind::DuplicateEdge(k.0, k.1));
        }
        self.weights.insert(k, weight);
        for (a, b) in [(u, v), (v, u)] {
            let list = &mut self.adj[a as usize];
            let pos = list.binary_search(&b).unwrap_err();
            list.insert(pos, b);
        }
        self.total_weight += weight;
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.weights.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        0..self.n as Vertex
    }

    /// Edges as `(u, v, cost)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex, Weight)> + '_ {
        self.weights.iter().map(|(&(u, v), &w)| (u, v, w))
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v as usize].len()
    }

    pub fn weight(&self, u: Vertex, v: Vertex) -> Option<Weight> {
        self.weights.get(&key(u, v)).copied()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.weights.contains_key(&key(u, v))
    }

    /// Sum of all edge costs.
    pub fn total_weight(&self) -> Weight {
        self.total_weight
    }

    pub fn is_unit_weight(&self) -> bool {
        self.weights.values().all(|&w| w == 1)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0 as Vertex];
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for &w in self.neighbors(v) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        reached == self.n
    }

    /// Relabel vertices: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[Vertex]) -> Graph {
        let mut g = Graph::new(self.n);
        for (u, v, w) in self.edges() {
            g.add_edge(perm[u as usize], perm[v as usize], w).expect("permutation keeps the graph simple");
        }
        g
    }

    /// Serialize in the edge-list text format.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("p {}\n", self.n);
        let unit = self.is_unit_weight();
        for (u, v, w) in self.edges() {
            if unit {
                out.push_str(&format!("{u} {v}\n"));
            } else {
                out.push_str(&format!("{u} {v} {w}\n"));
            }
        }
        out
    }
}

fn parse_vertex(tok: &str, n: usize, line: usize) -> Result<Vertex> {
    let x: u64 = tok
        .parse()
        .map_err(|_| Error::parse(line, ParseErrorKind::Malformed(format!("bad vertex id {tok:?}"))))?;
    if x >= n as u64 {
        return Err(Error::parse(line, ParseErrorKind::VertexOutOfRange { vertex: x, n }));
    }
    Ok(x as Vertex)
}

fn parse_weight(tok: &str, line: usize) -> Result<Weight> {
    if tok.starts_with('-') {
        return Err(Error::parse(line, ParseErrorKind::NegativeWeight(tok.to_string())));
    }
    tok.parse().map_err(|_| Error::parse(line, ParseErrorKind::BadWeight(tok.to_string())))
}

/// Parse the edge-list format: `p <n>` header, then `u v` or `u v w` lines.
/// Blank lines and lines starting with `#` are ignored.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut graph: Option<Graph> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = trimmed.split_whitespace().collect();
        if toks[0] == "p" {
            if graph.is_some() {
                return Err(Error::parse(line, ParseErrorKind::DuplicateHeader));
            }
            if toks.len() != 2 {
                return Err(Error::parse(line, ParseErrorKind::Malformed(trimmed.to_string())));
            }
            let n: usize = toks[1]
                .parse()
                .map_err(|_| Error::parse(line, ParseErrorKind::Malformed(trimmed.to_string())))?;
            graph = Some(Graph::new(n));
            continue;
        }
        let g = graph.as_mut().ok_or(Error::parse(line, ParseErrorKind::MissingHeader))?;
        if toks.len() != 2 && toks.len() != 3 {
            return Err(Error::parse(line, ParseErrorKind::Malformed(trimmed.to_string())));
        }
        let u = parse_vertex(toks[0], g.n, line)?;
        let v = parse_vertex(toks[1], g.n, line)?;
        let w = match toks.get(2) {
            Some(tok) => parse_weight(tok, line)?,
            None => 1,
        };
        g.add_edge(u, v, w).map_err(|kind| Error::parse(line, kind))?;
    }
    graph.ok_or(Error::parse(0, ParseErrorKind::MissingHeader))
}

/// Where an anchor vertex went when it was split in two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AnchorInfo {
    pub original_vertex: Vertex,
    /// `(s1, s2)`: `s1` keeps the original id, `s2` is the new vertex `n`.
    pub split_pair: (Vertex, Vertex),
    /// Each undirected cycle shows up as this many `s1`-`s2` path edge sets.
    pub calibration_factor: u32,
}

impl AnchorInfo {
    pub fn s1(&self) -> Vertex {
        self.split_pair.0
    }

    pub fn s2(&self) -> Vertex {
        self.split_pair.1
    }
}

/// Minimum-degree vertex, smallest id on ties.
pub fn choose_anchor(g: &Graph) -> Option<Vertex> {
    g.vertices().min_by_key(|&v| (g.degree(v), v))
}

/// Replace `s` by two copies `s1 = s` and `s2 = n` sharing its neighborhood,
/// with no edge between them. Hamiltonian cycles of `g` then correspond
/// two-to-one to Hamiltonian `s1`-`s2` paths of the result.
pub fn split_anchor(g: &Graph, s: Vertex) -> Result<(Graph, AnchorInfo)> {
    let n = g.vertex_count();
    if s as usize >= n {
        return Err(Error::VertexOutOfRange { vertex: s, n });
    }
    if n < 3 {
        return Err(Error::TooFewVertices(n));
    }
    let s2 = n as Vertex;
    let mut split = Graph::new(n + 1);
    for (u, v, w) in g.edges() {
        split.add_edge(u, v, w).expect("copied edge");
        if u == s {
            split.add_edge(s2, v, w).expect("mirrored edge");
        } else if v == s {
            split.add_edge(u, s2, w).expect("mirrored edge");
        }
    }
    let info = AnchorInfo { original_vertex: s, split_pair: (s, s2), calibration_factor: 2 };
    Ok((split, info))
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, m={}, W={})", self.n, self.edge_count(), self.total_weight)
    }
}
