//! Bottom-up table DP over an anchored nice decomposition: `f_x[X]` for every
//! node `x` and every feasible state `X` over its bag.
//!
//! Tables are exponential in the bag size. A child's table is dropped as
//! soon as its parent is filled.

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::decomposition::{NiceTreeDecomposition, NodeKind};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::{calibrate, PathAlgebra, RootValue};
use crate::states::{bits, local_states, BagPairs, Pair, PseudoEdgeSet};
use crate::{Count, CountAlgebra, Vertex};

/// `f_x` over every feasible state of one bag; absent keys are infeasible.
#[derive(Debug, Clone)]
pub struct NodeTable<V> {
    pairs: BagPairs,
    values: HashMap<u64, V>,
}

impl<V: Clone> NodeTable<V> {
    pub fn bag(&self) -> &[Vertex] {
        self.pairs.bag()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `None` if `x` is not a feasible state over this bag.
    pub fn get(&self, x: &PseudoEdgeSet) -> Option<&V> {
        self.pairs.to_mask(x).and_then(|m| self.values.get(&m))
    }

    pub fn entries(&self) -> impl Iterator<Item = (PseudoEdgeSet, &V)> + '_ {
        let mut keys: Vec<u64> = self.values.keys().copied().collect();
        keys.sort_unstable();
        keys.into_iter().map(move |m| (self.pairs.to_set(m), &self.values[&m]))
    }

    fn lookup(&self, mask: u64) -> Option<&V> {
        self.values.get(&mask)
    }
}

fn fill<V>(bag: &[Vertex], mut f: impl FnMut(&BagPairs, u64) -> V) -> Result<NodeTable<V>> {
    let pairs = BagPairs::new(bag)?;
    let values = local_states(bag.len()).iter().map(|&m| (m, f(&pairs, m))).collect();
    Ok(NodeTable { pairs, values })
}

/// Child mask of a parent state whose pairs all lie in the child bag.
fn embed(mask: u64, from: &BagPairs, to: &BagPairs) -> u64 {
    bits(mask).fold(0, |m, b| m | 1 << to.index(from.pairs()[b]).expect("pair present in child bag"))
}

pub fn eval_leaf<A: PathAlgebra>(_alg: &A, bag: &[Vertex]) -> Result<NodeTable<A::Value>> {
    fill(bag, |_, m| if m == 0 { A::Value::one() } else { A::Value::zero() })
}

/// `f_x[X] = f_c[X]` if `v ∉ S_X`, else 0.
pub fn eval_introduce<A: PathAlgebra>(_alg: &A, child: &NodeTable<A::Value>, v: Vertex) -> Result<NodeTable<A::Value>> {
    let mut bag = child.bag().to_vec();
    let pos = bag.binary_search(&v).expect_err("introduced vertex is new to the bag");
    bag.insert(pos, v);
    fill(&bag, |bp, m| {
        if m & bp.incident_mask(v) != 0 {
            A::Value::zero()
        } else {
            child.lookup(embed(m, bp, &child.pairs)).cloned().unwrap_or_else(A::Value::zero)
        }
    })
}

/// `f_x[X] = Σ_{⟨u,w⟩∈X} Σ_{Q ⊆ {⟨u,v⟩,⟨v,w⟩}} d_Q f_c[X∖{⟨u,w⟩} ∪ Q]`,
/// each directly used edge contributing `alg.edge(cost)`.
pub fn eval_forget<A: PathAlgebra>(
    alg: &A,
    child: &NodeTable<A::Value>,
    v: Vertex,
    g: &Graph,
) -> Result<NodeTable<A::Value>> {
    let bag: Vec<Vertex> = child.bag().iter().copied().filter(|&x| x != v).collect();
    let cp = &child.pairs;
    fill(&bag, |bp, m| {
        let mut acc = A::Value::zero();
        for b in bits(m) {
            let p = bp.pairs()[b];
            let (u, w) = (p.lo(), p.hi());
            let rest = embed(m & !(1 << b), bp, cp);
            let uv = 1u64 << cp.index(Pair::new(u, v)).unwrap();
            let vw = 1u64 << cp.index(Pair::new(v, w)).unwrap();
            let (e_uv, e_vw) = (g.weight(u, v).map(|c| alg.edge(c)), g.weight(v, w).map(|c| alg.edge(c)));
            let term = |mask: u64| child.lookup(mask);
            if let (Some(a), Some(b), Some(f)) = (&e_uv, &e_vw, term(rest)) {
                acc += &alg.mul(&alg.mul(a, b), f);
            }
            if let (Some(b), Some(f)) = (&e_vw, term(rest | uv)) {
                acc += &alg.mul(b, f);
            }
            if let (Some(a), Some(f)) = (&e_uv, term(rest | vw)) {
                acc += &alg.mul(a, f);
            }
            if let Some(f) = term(rest | uv | vw) {
                acc += f;
            }
        }
        acc
    })
}

/// Subset convolution `f_x[X] = Σ_{X1 ⊆ X} f_c1[X1] f_c2[X ∖ X1]`.
pub fn eval_join<A: PathAlgebra>(
    alg: &A,
    left: &NodeTable<A::Value>,
    right: &NodeTable<A::Value>,
) -> Result<NodeTable<A::Value>> {
    if left.bag() != right.bag() {
        return Err(Error::Defect("join children have different bags".into()));
    }
    fill(left.bag(), |_, m| {
        let mut acc = A::Value::zero();
        let mut x1 = m;
        loop {
            if let (Some(a), Some(b)) = (left.lookup(x1), right.lookup(m & !x1)) {
                acc += &alg.mul(a, b);
            }
            if x1 == 0 {
                break;
            }
            x1 = (x1 - 1) & m;
        }
        acc
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ReferenceStats {
    /// Entries over all node tables.
    pub total_entries: usize,
    /// Most entries held at once.
    pub peak_entries: usize,
    pub peak_live_values: usize,
}

/// Evaluates every node and reads `f_root[{⟨s1,s2⟩}]`.
pub fn evaluate<A: PathAlgebra>(
    alg: &A,
    g: &Graph,
    ntd: &NiceTreeDecomposition,
) -> Result<(RootValue<A::Value>, ReferenceStats)> {
    let (s1, s2) = ntd.anchor().ok_or_else(|| Error::Defect("decomposition is not anchored".into()))?;
    let mut tables: Vec<Option<NodeTable<A::Value>>> = vec![None; ntd.len()];
    let mut stats = ReferenceStats::default();
    let mut live = 0usize;
    for (x, node) in ntd.nodes().iter().enumerate() {
        let mut take = |c: usize| -> Result<NodeTable<A::Value>> {
            tables[c].take().ok_or_else(|| Error::MalformedNice { node: x, reason: "child evaluated twice".into() })
        };
        let (table, freed) = match node.kind {
            NodeKind::Leaf => (eval_leaf(alg, &node.bag)?, 0),
            NodeKind::Introduce(v) => {
                let c = take(node.children[0])?;
                (eval_introduce(alg, &c, v)?, c.len())
            }
            NodeKind::Forget(v) => {
                let c = take(node.children[0])?;
                (eval_forget(alg, &c, v, g)?, c.len())
            }
            NodeKind::Join => {
                let (l, r) = (take(node.children[0])?, take(node.children[1])?);
                (eval_join(alg, &l, &r)?, l.len() + r.len())
            }
        };
        // children are still alive while the parent table is filled
        stats.total_entries += table.len();
        stats.peak_entries = stats.peak_entries.max(live + table.len());
        live = live - freed + table.len();
        tables[x] = Some(table);
    }
    stats.peak_live_values = stats.peak_entries * alg.value_width();
    let root = tables[ntd.root()].take().expect("root evaluated");
    let raw = root
        .get(&PseudoEdgeSet::from_pairs([Pair::new(s1, s2)]))
        .cloned()
        .ok_or_else(|| Error::Defect("root bag is not the anchor pair".into()))?;
    Ok((calibrate(alg, raw)?, stats))
}

/// Hamiltonian cycles of the graph `g` was split from.
pub fn count_hamiltonian_reference(g: &Graph, ntd: &NiceTreeDecomposition) -> Result<(Count, ReferenceStats)> {
    let (root, stats) = evaluate(&CountAlgebra::new(), g, ntd)?;
    let count = root.cycles.to_biguint().ok_or_else(|| Error::Defect("negative count".into()))?;
    Ok((count, stats))
}
