//! Seeded instance families.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decomposition::TreeDecomposition;
use crate::graph::Graph;
use crate::{Vertex, Weight};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complete(n: usize) -> Graph {
    let mut e = Vec::new();
    for u in 0..n as Vertex {
        for v in u + 1..n as Vertex {
            e.push((u, v));
        }
    }
    Graph::from_edges(n, &e)
}

pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let mut e = Vec::new();
    for u in 0..a as Vertex {
        for v in a as Vertex..(a + b) as Vertex {
            e.push((u, v));
        }
    }
    Graph::from_edges(a + b, &e)
}

pub fn cycle(n: usize) -> Graph {
    let e: Vec<_> = (0..n as Vertex).map(|i| (i, (i + 1) % n as Vertex)).collect();
    Graph::from_edges(n, &e)
}

pub fn path(n: usize) -> Graph {
    let e: Vec<_> = (1..n as Vertex).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &e)
}

/// Outer 5-cycle 0..5, inner pentagram 5..10, spokes `{i, i+5}`.
pub fn petersen() -> Graph {
    let mut e = Vec::new();
    for i in 0..5 {
        e.push((i, (i + 1) % 5));
        e.push((5 + i, 5 + (i + 2) % 5));
        e.push((i, i + 5));
    }
    Graph::from_edges(10, &e)
}

/// Random spanning tree plus each other pair with probability `p`.
pub fn random_connected<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut g = Graph::new(n);
    for v in 1..n as Vertex {
        let u = rng.gen_range(0..v);
        g.add_edge(u, v, 1).expect("fresh tree edge");
    }
    for u in 0..n as Vertex {
        for v in u + 1..n as Vertex {
            if !g.has_edge(u, v) && rng.gen_bool(p) {
                g.add_edge(u, v, 1).expect("fresh edge");
            }
        }
    }
    g
}

/// Random k-tree on `n ≥ k + 1` vertices with each edge kept with
/// probability `keep`, plus a width-`k` decomposition of it. Edges from
/// each new vertex to one clique member are always kept, so the graph is
/// connected.
pub fn random_partial_ktree<R: Rng>(n: usize, k: usize, keep: f64, rng: &mut R) -> (Graph, TreeDecomposition) {
    assert!(n > k, "a k-tree needs at least k + 1 vertices");
    let mut g = Graph::new(n);
    let first: Vec<Vertex> = (0..=k as Vertex).collect();
    for (i, &u) in first.iter().enumerate() {
        for &v in &first[i + 1..] {
            if v == u + 1 || rng.gen_bool(keep) {
                g.add_edge(u, v, 1).expect("fresh edge");
            }
        }
    }
    let mut bags = vec![first];
    let mut edges = Vec::new();
    for v in (k + 1) as Vertex..n as Vertex {
        let host = rng.gen_range(0..bags.len());
        let mut clique = bags[host].clone();
        clique.shuffle(rng);
        clique.truncate(k);
        for (i, &u) in clique.iter().enumerate() {
            if i == 0 || rng.gen_bool(keep) {
                g.add_edge(u, v, 1).expect("fresh edge");
            }
        }
        clique.push(v);
        edges.push((host, bags.len()));
        bags.push(clique);
    }
    (g, TreeDecomposition::new(bags, edges))
}

/// Random partial k-tree (`k ≥ 2`, `n ≥ k + 1`) containing a planted
/// Hamiltonian cycle, plus a width-`k` decomposition. Each new vertex is
/// spliced into an edge `{a,b}` of the current cycle and attached to a
/// k-clique containing `a` and `b`; cycle edges are always kept, other
/// edges with probability `keep`.
pub fn random_hamiltonian_partial_ktree<R: Rng>(
    n: usize,
    k: usize,
    keep: f64,
    rng: &mut R,
) -> (Graph, TreeDecomposition) {
    assert!(k >= 2 && n > k, "need k >= 2 and at least k + 1 vertices");
    let mut g = Graph::new(n);
    let mut next: Vec<Vertex> = (0..=k as Vertex).map(|v| (v + 1) % (k as Vertex + 1)).collect();
    next.resize(n, 0);
    let first: Vec<Vertex> = (0..=k as Vertex).collect();
    for (i, &u) in first.iter().enumerate() {
        for &v in &first[i + 1..] {
            let on_cycle = next[u as usize] == v || next[v as usize] == u;
            if on_cycle || rng.gen_bool(keep) {
                g.add_edge(u, v, 1).expect("fresh edge");
            }
        }
    }
    let mut bags = vec![first];
    let mut edges = Vec::new();
    for v in (k + 1) as Vertex..n as Vertex {
        let a = rng.gen_range(0..v);
        let b = next[a as usize];
        let hosts: Vec<usize> = (0..bags.len())
            .filter(|&x| bags[x].binary_search(&a).is_ok() && bags[x].binary_search(&b).is_ok())
            .collect();
        let host = *hosts.choose(rng).expect("cycle edges lie in a bag");
        let mut others: Vec<Vertex> = bags[host].iter().copied().filter(|&u| u != a && u != b).collect();
        others.shuffle(rng);
        others.truncate(k - 2);
        for &u in &others {
            if rng.gen_bool(keep) {
                g.add_edge(u, v, 1).expect("fresh edge");
            }
        }
        g.add_edge(a, v, 1).expect("fresh edge");
        g.add_edge(v, b, 1).expect("fresh edge");
        next[a as usize] = v;
        next[v as usize] = b;
        let mut bag = others;
        bag.extend([a, b, v]);
        bag.sort_unstable();
        edges.push((host, bags.len()));
        bags.push(bag);
    }
    (g, TreeDecomposition::new(bags, edges))
}

/// Same graph with every weight drawn from `0..=max_weight`.
pub fn with_random_weights<R: Rng>(g: &Graph, max_weight: Weight, rng: &mut R) -> Graph {
    let mut out = Graph::new(g.vertex_count());
    for (u, v, _) in g.edges() {
        out.add_edge(u, v, rng.gen_range(0..=max_weight)).expect("edges of a simple graph");
    }
    out
}

/// Every labeled simple graph on `n` vertices, as edge bitmasks in pair order.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(Vertex, Vertex)> =
        (0..n as Vertex).flat_map(|u| (u + 1..n as Vertex).map(move |v| (u, v))).collect();
    (0u64..1 << pairs.len()).map(move |mask| {
        let e: Vec<_> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect();
        Graph::from_edges(n, &e)
    })
}
