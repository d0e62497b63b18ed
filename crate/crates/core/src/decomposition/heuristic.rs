use std::collections::BTreeSet;

use super::TreeDecomposition;
use crate::graph::Graph;
use crate::Vertex;

/// Decomposition from the min-fill elimination ordering (ties broken by
/// degree, then vertex id). Bags contained in a neighboring bag are merged
/// away.
pub fn min_fill_decomposition(g: &Graph) -> TreeDecomposition {
    let n = g.vertex_count();
    if n == 0 {
        return TreeDecomposition::new(vec![vec![]], vec![]);
    }
    let mut adj: Vec<BTreeSet<Vertex>> = g.vertices().map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    let mut bags = Vec::with_capacity(n);

    for _ in 0..n {
        let mut best: Option<(usize, usize, Vertex)> = None;
        for v in (0..n as Vertex).filter(|&v| alive[v as usize]) {
            let nb = &adj[v as usize];
            let deg = nb.len();
            let mut fill = 0;
            for (i, &a) in nb.iter().enumerate() {
                for &b in nb.iter().skip(i + 1) {
                    if !adj[a as usize].contains(&b) {
                        fill += 1;
                    }
                }
            }
            let cand = (fill, deg, v);
            if best.is_none_or(|b| cand < b) {
                best = Some(cand);
            }
        }
        let (_, _, v) = best.expect("some vertex is alive");
        let nb: Vec<Vertex> = adj[v as usize].iter().copied().collect();
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                adj[a as usize].insert(b);
                adj[b as usize].insert(a);
            }
        }
        for &a in &nb {
            adj[a as usize].remove(&v);
        }
        adj[v as usize].clear();
        alive[v as usize] = false;
        let mut bag = nb;
        bag.push(v);
        bag.sort_unstable();
        order.push(v);
        bags.push(bag);
    }

    let mut position = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        position[v as usize] = i;
    }
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for i in 0..n {
        let v = order[i];
        let next = bags[i].iter().filter(|&&u| u != v).map(|&u| position[u as usize]).min();
        match next {
            Some(p) => edges.push((i, p)),
            None if i + 1 < n => edges.push((i, i + 1)),
            None => {}
        }
    }
    absorb_subset_bags(bags, edges)
}

/// Contract tree edges whose one endpoint's bag is a subset of the other's.
fn absorb_subset_bags(bags: Vec<Vec<Vertex>>, edges: Vec<(usize, usize)>) -> TreeDecomposition {
    let k = bags.len();
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); k];
    for &(a, b) in &edges {
        adj[a].insert(b);
        adj[b].insert(a);
    }
    let mut removed = vec![false; k];
    let subset = |a: &[Vertex], b: &[Vertex]| a.iter().all(|v| b.binary_search(v).is_ok());
    loop {
        let mut merged = false;
        'scan: for a in 0..k {
            if removed[a] {
                continue;
            }
            for &b in &adj[a] {
                if subset(&bags[a], &bags[b]) {
                    let others: Vec<usize> = adj[a].iter().copied().filter(|&c| c != b).collect();
                    for c in others {
                        adj[c].remove(&a);
                        adj[c].insert(b);
                        adj[b].insert(c);
                    }
                    adj[b].remove(&a);
                    adj[a].clear();
                    removed[a] = true;
                    merged = true;
                    break 'scan;
                }
            }
        }
        if !merged {
            break;
        }
    }
    let mut new_id = vec![usize::MAX; k];
    let mut new_bags = Vec::new();
    for x in 0..k {
        if !removed[x] {
            new_id[x] = new_bags.len();
            new_bags.push(bags[x].clone());
        }
    }
    let mut new_edges = Vec::new();
    for a in 0..k {
        for &b in &adj[a] {
            if a < b {
                new_edges.push((new_id[a], new_id[b]));
            }
        }
    }
    new_edges.sort_unstable();
    TreeDecomposition::new(new_bags, new_edges)
}

/// Balanced decomposition of the path `0 - 1 - ... - (n-1)`, rooted at node
/// 0. The segment `[l, r]` gets the bag `{mid} ∪ {l-1, r+1}` (boundary
/// vertices that exist), and its halves become children. Width is at most
/// 2 and depth is `ceil(log2(n+1))`.
pub fn balanced_path_decomposition(n: usize) -> TreeDecomposition {
    let mut bags = Vec::new();
    let mut edges = Vec::new();
    if n == 0 {
        return TreeDecomposition::new(vec![vec![]], vec![]);
    }
    // (l, r, parent node)
    let mut stack = vec![(0usize, n - 1, usize::MAX)];
    while let Some((l, r, parent)) = stack.pop() {
        let mid = (l + r) / 2;
        let mut bag = vec![mid as Vertex];
        if l > 0 {
            bag.push(l as Vertex - 1);
        }
        if r + 1 < n {
            bag.push(r as Vertex + 1);
        }
        let id = bags.len();
        bags.push(bag);
        if parent != usize::MAX {
            edges.push((parent, id));
        }
        if mid < r {
            stack.push((mid + 1, r, id));
        }
        if mid > l {
            stack.push((l, mid - 1, id));
        }
    }
    TreeDecomposition::new(bags, edges)
}
