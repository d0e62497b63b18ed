use std::collections::VecDeque;

use serde::Serialize;

use super::TreeDecomposition;
use crate::error::{Error, Result};
use crate::graph::AnchorInfo;
use crate::Vertex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NodeKind {
    Leaf,
    Introduce(Vertex),
    Forget(Vertex),
    Join,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceNode {
    pub kind: NodeKind,
    /// Sorted.
    pub bag: Vec<Vertex>,
    pub children: Vec<usize>,
}

/// Rooted decomposition with leaf, introduce, forget and join nodes only.
/// Nodes are stored children-first, so the root is the last node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceTreeDecomposition {
    nodes: Vec<NiceNode>,
    root: usize,
    anchor: Option<(Vertex, Vertex)>,
}

fn with(bag: &[Vertex], v: Vertex) -> Vec<Vertex> {
    let mut b = bag.to_vec();
    if let Err(pos) = b.binary_search(&v) {
        b.insert(pos, v);
    }
    b
}

fn without(bag: &[Vertex], v: Vertex) -> Vec<Vertex> {
    bag.iter().copied().filter(|&x| x != v).collect()
}

struct Builder {
    nodes: Vec<NiceNode>,
}

impl Builder {
    fn push(&mut self, kind: NodeKind, bag: Vec<Vertex>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode { kind, bag, children });
        self.nodes.len() - 1
    }

    fn leaf(&mut self, bag: Vec<Vertex>) -> usize {
        self.push(NodeKind::Leaf, bag, vec![])
    }

    /// Forget what `target` lacks, then introduce what it adds, in
    /// ascending vertex order.
    fn transition(&mut self, mut cur: usize, target: &[Vertex]) -> usize {
        let from = self.nodes[cur].bag.clone();
        for &v in from.iter().filter(|v| target.binary_search(v).is_err()) {
            let bag = without(&self.nodes[cur].bag, v);
            cur = self.push(NodeKind::Forget(v), bag, vec![cur]);
        }
        for &v in target.iter().filter(|v| from.binary_search(v).is_err()) {
            let bag = with(&self.nodes[cur].bag, v);
            cur = self.push(NodeKind::Introduce(v), bag, vec![cur]);
        }
        cur
    }

    fn join_all(&mut self, tops: Vec<usize>, bag: &[Vertex]) -> usize {
        let mut queue: VecDeque<usize> = tops.into();
        while queue.len() > 1 {
            let a = queue.pop_front().unwrap();
            let b = queue.pop_front().unwrap();
            let j = self.push(NodeKind::Join, bag.to_vec(), vec![a, b]);
            queue.push_back(j);
        }
        queue.pop_front().expect("at least one subtree")
    }
}

/// Convert a valid decomposition into nice form rooted at `root`. The root
/// and all leaves of the result have empty bags; width is unchanged.
pub fn make_nice(td: &TreeDecomposition, root: usize) -> Result<NiceTreeDecomposition> {
    let violations = td.structural_violations();
    if !violations.is_empty() {
        return Err(Error::InvalidDecomposition(violations));
    }
    if root >= td.node_count() {
        return Err(Error::MalformedNice { node: root, reason: "root is not a node".into() });
    }
    let adj = td.adjacency();

    // iterative post-order over the rooted tree
    let mut builder = Builder { nodes: Vec::new() };
    let mut top_of = vec![usize::MAX; td.node_count()];
    let mut stack = vec![(root, usize::MAX, false)];
    while let Some((x, parent, done)) = stack.pop() {
        let children: Vec<usize> = adj[x].iter().copied().filter(|&c| c != parent).collect();
        if !done {
            stack.push((x, parent, true));
            for &c in children.iter().rev() {
                stack.push((c, x, false));
            }
            continue;
        }
        let bag = td.bag(x);
        let tops: Vec<usize> = if children.is_empty() {
            let leaf = builder.leaf(vec![]);
            vec![builder.transition(leaf, bag)]
        } else {
            children.iter().map(|&c| builder.transition(top_of[c], bag)).collect()
        };
        top_of[x] = builder.join_all(tops, bag);
    }
    let root_node = builder.transition(top_of[root], &[]);
    Ok(NiceTreeDecomposition { nodes: builder.nodes, root: root_node, anchor: None })
}

/// Put `s1` and `s2` into every bag, dropping their introduce and forget
/// nodes. Leaves and the root end up with bag exactly `{s1, s2}`.
pub fn anchor_bags(ntd: &NiceTreeDecomposition, info: &AnchorInfo) -> NiceTreeDecomposition {
    let (s1, s2) = info.split_pair;
    let is_anchor = |v: Vertex| v == s1 || v == s2;
    let anchored = |bag: &[Vertex]| with(&with(bag, s1), s2);
    let pair = anchored(&[]);

    let mut builder = Builder { nodes: Vec::new() };
    let mut map = vec![usize::MAX; ntd.nodes.len()];
    // nodes are stored children-first
    for x in 0..ntd.nodes.len() {
        let node = &ntd.nodes[x];
        map[x] = match node.kind {
            NodeKind::Introduce(v) | NodeKind::Forget(v) if is_anchor(v) => map[node.children[0]],
            NodeKind::Leaf => {
                let leaf = builder.leaf(pair.clone());
                builder.transition(leaf, &anchored(&node.bag))
            }
            kind => {
                let children = node.children.iter().map(|&c| map[c]).collect();
                builder.push(kind, anchored(&node.bag), children)
            }
        };
    }
    let root = builder.transition(map[ntd.root], &pair);
    let mut out = NiceTreeDecomposition { nodes: builder.nodes, root, anchor: Some((s1, s2)) };
    out.compact();
    out
}

impl NiceTreeDecomposition {
    pub fn root(&self) -> usize {
        self.root
    }

    pub fn node(&self, x: usize) -> &NiceNode {
        &self.nodes[x]
    }

    pub fn nodes(&self) -> &[NiceNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn anchor(&self) -> Option<(Vertex, Vertex)> {
        self.anchor
    }

    pub fn width(&self) -> usize {
        self.nodes.iter().map(|n| n.bag.len()).max().unwrap_or(0).saturating_sub(1)
    }

    /// Drop nodes unreachable from the root and renumber children-first.
    fn compact(&mut self) {
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(self.root, false)];
        while let Some((x, done)) = stack.pop() {
            if done {
                order.push(x);
            } else {
                stack.push((x, true));
                for &c in self.nodes[x].children.iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        let mut new_id = vec![usize::MAX; self.nodes.len()];
        for (i, &x) in order.iter().enumerate() {
            new_id[x] = i;
        }
        let nodes = order
            .iter()
            .map(|&x| {
                let n = &self.nodes[x];
                NiceNode { kind: n.kind, bag: n.bag.clone(), children: n.children.iter().map(|&c| new_id[c]).collect() }
            })
            .collect();
        self.root = new_id[self.root];
        self.nodes = nodes;
    }

    /// Most distinct vertices in the bags along a root-to-leaf path.
    pub fn depth(&self) -> usize {
        self.to_tree_decomposition().depth(self.root)
    }

    /// Most nodes on a root-to-leaf path.
    pub fn node_path_length(&self) -> usize {
        let mut len = vec![0usize; self.nodes.len()];
        for x in 0..self.nodes.len() {
            len[x] = 1 + self.nodes[x].children.iter().map(|&c| len[c]).max().unwrap_or(0);
        }
        len[self.root]
    }

    /// Vertices in bags of the subtree at `x`.
    pub fn subtree_vertices(&self, x: usize) -> Vec<Vertex> {
        let mut out = Vec::new();
        let mut stack = vec![x];
        while let Some(y) = stack.pop() {
            out.extend(self.nodes[y].bag.iter().copied());
            stack.extend(self.nodes[y].children.iter().copied());
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Vertices forgotten at `x` or below it; they do not occur above `x`.
    pub fn forgotten_vertices(&self, x: usize) -> Vec<Vertex> {
        let bag = &self.nodes[x].bag;
        self.subtree_vertices(x).into_iter().filter(|v| bag.binary_search(v).is_err()).collect()
    }

    pub fn to_tree_decomposition(&self) -> TreeDecomposition {
        let bags = self.nodes.iter().map(|n| n.bag.clone()).collect();
        let mut edges = Vec::new();
        for (x, n) in self.nodes.iter().enumerate() {
            for &c in &n.children {
                edges.push((x, c));
            }
        }
        TreeDecomposition::new(bags, edges)
    }

    /// Check node-kind invariants (and the anchored form, if anchored).
    pub fn check(&self) -> Result<()> {
        let bad = |node: usize, reason: String| Err(Error::MalformedNice { node, reason });
        let mut parents = vec![0usize; self.nodes.len()];
        for (x, n) in self.nodes.iter().enumerate() {
            if n.bag.windows(2).any(|w| w[0] >= w[1]) {
                return bad(x, "bag not sorted".into());
            }
            for &c in &n.children {
                if c >= x {
                    return bad(x, "child stored after parent".into());
                }
                parents[c] += 1;
            }
            let child_bag = |i: usize| &self.nodes[n.children[i]].bag;
            match n.kind {
                NodeKind::Leaf => {
                    if !n.children.is_empty() {
                        return bad(x, "leaf has children".into());
                    }
                    let expected = match self.anchor {
                        Some((a, b)) => with(&[a], b),
                        None => vec![],
                    };
                    if n.bag != expected {
                        return bad(x, format!("leaf bag {:?}, expected {:?}", n.bag, expected));
                    }
                }
                NodeKind::Introduce(v) => {
                    if n.children.len() != 1 || child_bag(0).binary_search(&v).is_ok() || n.bag != with(child_bag(0), v) {
                        return bad(x, format!("bad introduce of {v}"));
                    }
                }
                NodeKind::Forget(v) => {
                    if n.children.len() != 1 || child_bag(0).binary_search(&v).is_err() || n.bag != without(child_bag(0), v) {
                        return bad(x, format!("bad forget of {v}"));
                    }
                }
                NodeKind::Join => {
                    if n.children.len() != 2 || child_bag(0) != &n.bag || child_bag(1) != &n.bag {
                        return bad(x, "join children bags differ".into());
                    }
                }
            }
            if let Some((a, b)) = self.anchor {
                if n.bag.binary_search(&a).is_err() || n.bag.binary_search(&b).is_err() {
                    return bad(x, "anchor pair missing from bag".into());
                }
                if matches!(n.kind, NodeKind::Introduce(v) | NodeKind::Forget(v) if v == a || v == b) {
                    return bad(x, "anchor vertex introduced or forgotten".into());
                }
            }
        }
        for (x, &p) in parents.iter().enumerate() {
            let expected = usize::from(x != self.root);
            if p != expected {
                return bad(x, format!("{p} parents"));
            }
        }
        if let Some((a, b)) = self.anchor {
            if self.nodes[self.root].bag != with(&[a], b) {
                return bad(self.root, "anchored root bag is not the anchor pair".into());
            }
        }
        Ok(())
    }
}
