//! Tree decompositions: validation, statistics, heuristics, nice form.

mod heuristic;
mod io;
mod nice;

pub use heuristic::{balanced_path_decomposition, min_fill_decomposition};
pub use io::{parse_decomposition, write_decomposition};
pub use nice::{anchor_bags, make_nice, NiceNode, NiceTreeDecomposition, NodeKind};

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::graph::{AnchorInfo, Graph};
use crate::Vertex;

/// Unrooted tree decomposition: one bag per node plus the tree edges.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TreeDecomposition {
    bags: Vec<Vec<Vertex>>,
    edges: Vec<(usize, usize)>,
}

/// One failed axiom, with enough context to locate it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    NodeOutOfRange { edge: (usize, usize) },
    NotATree { nodes: usize, edges: usize, components: usize },
    BagVertexOutOfRange { node: usize, vertex: Vertex },
    MissingVertex(Vertex),
    UncoveredEdge(Vertex, Vertex),
    /// `vertex` is in the bags of `first` and `last` but not of `between`,
    /// which lies on the tree path joining them.
    Disconnected { vertex: Vertex, first: usize, between: usize, last: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NodeOutOfRange { edge } => write!(f, "tree edge {edge:?} names a missing node"),
            Violation::NotATree { nodes, edges, components } => {
                write!(f, "{nodes} nodes, {edges} edges, {components} components is not a tree")
            }
            Violation::BagVertexOutOfRange { node, vertex } => {
                write!(f, "bag {node} holds vertex {vertex}, not in the graph")
            }
            Violation::MissingVertex(v) => write!(f, "vertex {v} is in no bag"),
            Violation::UncoveredEdge(u, v) => write!(f, "edge {{{u},{v}}} is in no bag"),
            Violation::Disconnected { vertex, first, between, last } => write!(
                f,
                "vertex {vertex} is in bags {first} and {last} but not in bag {between} between them"
            ),
        }
    }
}

/// Result of [`validate_decomposition`]: empty iff all axioms hold.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl TreeDecomposition {
    /// Bags are sorted and deduplicated.
    pub fn new(bags: Vec<Vec<Vertex>>, edges: Vec<(usize, usize)>) -> Self {
        let bags = bags
            .into_iter()
            .map(|b| b.into_iter().collect::<BTreeSet<_>>().into_iter().collect())
            .collect();
        TreeDecomposition { bags, edges }
    }

    /// A single bag holding every vertex of `g`.
    pub fn trivial(g: &Graph) -> Self {
        TreeDecomposition { bags: vec![g.vertices().collect()], edges: vec![] }
    }

    pub fn bags(&self) -> &[Vec<Vertex>] {
        &self.bags
    }

    pub fn bag(&self, node: usize) -> &[Vertex] {
        &self.bags[node]
    }

    pub fn tree_edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.bags.len()
    }

    /// Largest bag size minus one.
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    pub(crate) fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.edges {
            if a < adj.len() && b < adj.len() {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Depth when rooted at `root`: the most distinct vertices in the union
    /// of bags along any root-to-leaf path. Requires a tree.
    pub fn depth(&self, root: usize) -> usize {
        let adj = self.adjacency();
        let max_vertex = self.bags.iter().flatten().copied().max().map_or(0, |v| v as usize + 1);
        let mut counts = vec![0u32; max_vertex];
        let mut distinct = 0usize;
        let mut best = 0usize;
        // (node, parent, entering)
        let mut stack = vec![(root, usize::MAX, true)];
        while let Some((x, parent, entering)) = stack.pop() {
            if entering {
                for &v in &self.bags[x] {
                    if counts[v as usize] == 0 {
                        distinct += 1;
                    }
                    counts[v as usize] += 1;
                }
                best = best.max(distinct);
                stack.push((x, parent, false));
                for &c in adj[x].iter().rev() {
                    if c != parent {
                        stack.push((c, x, true));
                    }
                }
            } else {
                for &v in &self.bags[x] {
                    counts[v as usize] -= 1;
                    if counts[v as usize] == 0 {
                        distinct -= 1;
                    }
                }
            }
        }
        best
    }

    /// Structural checks that do not need the graph: tree shape and the
    /// connected-occurrence property.
    pub fn structural_violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let k = self.bags.len();
        for &(a, b) in &self.edges {
            if a >= k || b >= k {
                out.push(Violation::NodeOutOfRange { edge: (a, b) });
            }
        }
        if !out.is_empty() {
            return out;
        }
        let adj = self.adjacency();
        let components = count_components(&adj);
        if k > 0 && (components != 1 || self.edges.len() != k - 1) {
            out.push(Violation::NotATree { nodes: k, edges: self.edges.len(), components });
            return out;
        }
        out.extend(self.connectivity_violations(&adj));
        out
    }

    fn connectivity_violations(&self, adj: &[Vec<usize>]) -> Vec<Violation> {
        let k = self.bags.len();
        if k == 0 {
            return vec![];
        }
        let mut parent = vec![usize::MAX; k];
        let mut depth = vec![0usize; k];
        let mut order = vec![0usize];
        let mut seen = vec![false; k];
        seen[0] = true;
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            head += 1;
            for &c in &adj[x] {
                if !seen[c] {
                    seen[c] = true;
                    parent[c] = x;
                    depth[c] = depth[x] + 1;
                    order.push(c);
                }
            }
        }
        let mut vertices: BTreeSet<Vertex> = BTreeSet::new();
        for b in &self.bags {
            vertices.extend(b.iter().copied());
        }
        let mut out = Vec::new();
        for v in vertices {
            let holders: Vec<usize> = (0..k).filter(|&x| self.bags[x].binary_search(&v).is_ok()).collect();
            // the holders induce a subtree iff exactly one of them has its
            // parent outside the holder set
            let tops: Vec<usize> = holders
                .iter()
                .copied()
                .filter(|&x| parent[x] == usize::MAX || self.bags[parent[x]].binary_search(&v).is_err())
                .collect();
            if tops.len() > 1 {
                let (a, c) = (tops[0], tops[1]);
                let path = tree_path(a, c, &parent, &depth);
                let between = path
                    .iter()
                    .copied()
                    .find(|&x| self.bags[x].binary_search(&v).is_err())
                    .expect("two tops are separated by a non-holder");
                out.push(Violation::Disconnected { vertex: v, first: a, between, last: c });
            }
        }
        out
    }
}

fn count_components(adj: &[Vec<usize>]) -> usize {
    let mut seen = vec![false; adj.len()];
    let mut comps = 0;
    for s in 0..adj.len() {
        if seen[s] {
            continue;
        }
        comps += 1;
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    comps
}

fn tree_path(mut a: usize, mut b: usize, parent: &[usize], depth: &[usize]) -> Vec<usize> {
    let mut left = vec![];
    let mut right = vec![];
    while depth[a] > depth[b] {
        left.push(a);
        a = parent[a];
    }
    while depth[b] > depth[a] {
        right.push(b);
        b = parent[b];
    }
    while a != b {
        left.push(a);
        right.push(b);
        a = parent[a];
        b = parent[b];
    }
    left.push(a);
    left.extend(right.into_iter().rev());
    left
}

/// Check the three tree-decomposition axioms of `td` against `g`.
pub fn validate_decomposition(g: &Graph, td: &TreeDecomposition) -> ValidationReport {
    let mut violations = td.structural_violations();
    let n = g.vertex_count();
    let mut present = vec![false; n];
    for (x, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            if v as usize >= n {
                violations.push(Violation::BagVertexOutOfRange { node: x, vertex: v });
            } else {
                present[v as usize] = true;
            }
        }
    }
    for v in g.vertices() {
        if !present[v as usize] {
            violations.push(Violation::MissingVertex(v));
        }
    }
    for (u, v, _) in g.edges() {
        let covered = td.bags.iter().any(|b| b.binary_search(&u).is_ok() && b.binary_search(&v).is_ok());
        if !covered {
            violations.push(Violation::UncoveredEdge(u, v));
        }
    }
    ValidationReport { violations }
}

/// Transport a decomposition of `g` to the anchor-split graph: `s2` joins
/// every bag that holds `s1`.
pub fn lift_to_split(td: &TreeDecomposition, info: &AnchorInfo) -> TreeDecomposition {
    let bags = td
        .bags
        .iter()
        .map(|b| {
            let mut b = b.clone();
            if b.binary_search(&info.s1()).is_ok() {
                b.push(info.s2());
            }
            b
        })
        .collect();
    TreeDecomposition::new(bags, td.edges.clone())
}

/// Default root: the node whose bag shares most with the anchor pair,
/// smallest id on ties.
pub fn default_root(td: &TreeDecomposition, info: &AnchorInfo) -> usize {
    (0..td.node_count())
        .max_by_key(|&x| {
            let overlap = [info.s1(), info.s2()]
                .iter()
                .filter(|v| td.bags[x].binary_search(v).is_ok())
                .count();
            (overlap, std::cmp::Reverse(x))
        })
        .unwrap_or(0)
}
