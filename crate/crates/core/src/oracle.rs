//! Brute-force oracles: fixed-start backtracking over Hamiltonian cycles and
//! the Held–Karp subset DP. Neither shares code with the engines.

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::{Count, Vertex, Weight};

pub const BACKTRACK_LIMIT: usize = 12;
pub const HELD_KARP_LIMIT: usize = 18;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    #[serde(serialize_with = "crate::decimal::one")]
    pub cycle_count: Count,
    /// Cycles by total cost, `W + 1` entries.
    #[serde(serialize_with = "crate::decimal::many")]
    pub cost_histogram: Vec<Count>,
    pub min_cost: Option<Weight>,
}

struct Search<'a> {
    g: &'a Graph,
    n: usize,
    visited: Vec<bool>,
    path: Vec<Vertex>,
    histogram: Vec<u64>,
}

impl Search<'_> {
    fn extend(&mut self, cost: Weight) {
        let last = *self.path.last().unwrap();
        if self.path.len() == self.n {
            // each cycle is seen once per direction; keep the one whose
            // second vertex is smaller than its last
            if let Some(c) = self.g.weight(last, 0) {
                if self.path[1] < last {
                    self.histogram[(cost + c) as usize] += 1;
                }
            }
            return;
        }
        for &next in self.g.neighbors(last) {
            if !self.visited[next as usize] {
                self.visited[next as usize] = true;
                self.path.push(next);
                self.extend(cost + self.g.weight(last, next).unwrap());
                self.path.pop();
                self.visited[next as usize] = false;
            }
        }
    }
}

/// All Hamiltonian cycles, each undirected cycle once, with their costs.
pub fn backtrack_count(g: &Graph) -> Result<OracleResult> {
    let n = g.vertex_count();
    if n > BACKTRACK_LIMIT {
        return Err(Error::OracleGuard { what: "backtracking", n, limit: BACKTRACK_LIMIT });
    }
    let mut search = Search {
        g,
        n,
        visited: vec![false; n],
        path: Vec::with_capacity(n),
        histogram: vec![0; g.total_weight() as usize + 1],
    };
    if n >= 3 {
        search.visited[0] = true;
        search.path.push(0);
        search.extend(0);
    }
    let cost_histogram: Vec<Count> = search.histogram.iter().map(|&c| BigUint::from(c)).collect();
    Ok(OracleResult {
        cycle_count: search.histogram.iter().map(|&c| BigUint::from(c)).sum(),
        min_cost: search.histogram.iter().position(|&c| c > 0).map(|c| c as Weight),
        cost_histogram,
    })
}

/// Minimum Hamiltonian-cycle cost, `None` if there is no cycle.
pub fn held_karp(g: &Graph) -> Result<Option<Weight>> {
    let n = g.vertex_count();
    if n > HELD_KARP_LIMIT {
        return Err(Error::OracleGuard { what: "Held-Karp", n, limit: HELD_KARP_LIMIT });
    }
    if n < 3 {
        return Ok(None);
    }
    // best[S][v]: cheapest path from 0 through exactly {0} ∪ S ending at v ∈ S,
    // with S over vertices 1..n encoded as bits 0..n-1
    let m = n - 1;
    let full = (1usize << m) - 1;
    let mut best = vec![vec![Weight::MAX; m]; 1 << m];
    for v in 0..m {
        if let Some(c) = g.weight(0, v as Vertex + 1) {
            best[1 << v][v] = c;
        }
    }
    for set in 1..=full {
        for v in 0..m {
            let here = best[set][v];
            if here == Weight::MAX {
                continue;
            }
            for w in 0..m {
                if set >> w & 1 == 1 {
                    continue;
                }
                if let Some(c) = g.weight(v as Vertex + 1, w as Vertex + 1) {
                    let slot = &mut best[set | 1 << w][w];
                    *slot = (*slot).min(here + c);
                }
            }
        }
    }
    Ok((0..m)
        .filter_map(|v| {
            let here = best[full][v];
            let back = g.weight(v as Vertex + 1, 0)?;
            (here != Weight::MAX).then(|| here + back)
        })
        .min())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let e: Vec<_> = (0..n as Vertex).map(|i| (i, (i + 1) % n as Vertex)).collect();
        Graph::from_edges(n, &e)
    }

    #[test]
    fn small_cases() {
        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(backtrack_count(&k4).unwrap().cycle_count, BigUint::from(3u32));
        assert_eq!(backtrack_count(&cycle(6)).unwrap().cycle_count, BigUint::from(1u32));
        assert_eq!(held_karp(&cycle(5)).unwrap(), Some(5));
        let p4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(held_karp(&p4).unwrap(), None);
        assert_eq!(backtrack_count(&p4).unwrap().min_cost, None);
    }

    #[test]
    fn histogram_of_weighted_k4() {
        let g = Graph::from_weighted_edges(4, &[(0, 1, 1), (0, 2, 2), (0, 3, 3), (1, 2, 4), (1, 3, 5), (2, 3, 6)]);
        let r = backtrack_count(&g).unwrap();
        // 0-1-2-3: 1+4+6+3 = 14; 0-1-3-2: 1+5+6+2 = 14; 0-2-1-3: 2+4+5+3 = 14
        assert_eq!(r.min_cost, Some(14));
        assert_eq!(r.cost_histogram[14], BigUint::from(3u32));
        assert_eq!(held_karp(&g).unwrap(), Some(14));
    }

    #[test]
    fn guards() {
        assert!(matches!(backtrack_count(&cycle(13)), Err(Error::OracleGuard { n: 13, limit: 12, .. })));
        assert!(matches!(held_karp(&cycle(19)), Err(Error::OracleGuard { n: 19, limit: 18, .. })));
    }
}
