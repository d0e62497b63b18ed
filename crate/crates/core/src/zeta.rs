//! Top-down evaluation of the zeta-transformed relaxations `ζf_x^i[X]`.
//!
//! No tables are kept: each call recurses into the children it needs and
//! only the accumulators of the frames on the current root-to-leaf path
//! are alive. At the anchored root
//! `f[{p}] = ζf^1[{p}] − ζf^1[∅]` for the anchor pair `p`.
//!
//! Forget nodes use
//!
//! ```text
//! ζf_x^i[X] = Σ_{⟨u,w⟩∈X}  e_uv e_vw ζ^{i−1}[X']
//!                        + e_vw (ζ^i[X'+uv] − ζ^i[X'])
//!                        + e_uv (ζ^i[X'+vw] − ζ^i[X'])
//!                        + ζ^{i+1}[X'+uv+vw] − ζ^{i+1}[X'+uv] − ζ^{i+1}[X'+vw] + ζ^{i+1}[X']
//! ```
//!
//! with `X' = X ∖ {⟨u,w⟩}`, `ζ = ζf_c`, and `e_ab` the edge factor of
//! `{a,b}` (0 if absent); negative indices give 0.
//!
//! Exact reductions: a query set is intersected with the pairs that can
//! carry a path at that node, and (with `clamp`) the index is capped at the
//! largest possible state size. Identical child calls of one forget node
//! are merged.

use std::collections::BTreeMap;
use std::num::NonZeroUsize;

use lru::LruCache;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::decomposition::NiceTreeDecomposition;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::layout::{self, map_mask, Link, NodeLayout};
use crate::scalar::{calibrate, PathAlgebra, RootValue};
use crate::states::{bits, PseudoEdgeSet};
use crate::{Count, CountAlgebra, Weight};

/// Value of the leaf relaxation at `i > 0`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub enum LeafFill {
    /// `ζf^i[X] = 1` for every `i`.
    #[default]
    Canonical,
    /// `ζf^i[X] = [i = 0]`.
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineOptions {
    pub leaf_fill: LeafFill,
    /// Cap relaxation indices at the largest state size of the node.
    pub clamp: bool,
    /// Bounded memo of `(node, X, i)` results. Off by default.
    pub cache_capacity: Option<NonZeroUsize>,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions { leaf_fill: LeafFill::Canonical, clamp: true, cache_capacity: None }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct EngineStats {
    /// Recursive evaluations performed (cache hits excluded).
    pub strand_count: u64,
    /// Most values alive at once, in scalar coefficients.
    pub peak_live_values: usize,
    pub max_frame_depth: usize,
    /// Distinct child calls per forget evaluation → occurrences.
    pub forget_branchings: BTreeMap<usize, u64>,
    /// Distinct child calls per pseudo-edge term → occurrences.
    pub term_fanout: BTreeMap<usize, u64>,
    pub cache_hits: u64,
    /// Values held by the cache at the end of the run, in coefficients.
    pub cached_values: usize,
}

impl EngineStats {
    pub fn max_term_fanout(&self) -> usize {
        self.term_fanout.keys().next_back().copied().unwrap_or(0)
    }

    pub fn max_forget_branching(&self) -> usize {
        self.forget_branchings.keys().next_back().copied().unwrap_or(0)
    }
}

/// Key of one child call: set, index.
type Call = (u64, i64);

pub struct ZetaEngine<'a, A: PathAlgebra> {
    alg: &'a A,
    layout: Vec<NodeLayout>,
    realizable: Vec<u64>,
    cap: Vec<i64>,
    options: EngineOptions,
    cache: Option<LruCache<(usize, u64, i64), A::Value>>,
    stats: EngineStats,
    depth: usize,
    live: usize,
}

fn bag_capacity(k: usize) -> usize {
    match k {
        0 | 1 => 0,
        2 => 1,
        k => k,
    }
}

impl<'a, A: PathAlgebra> ZetaEngine<'a, A> {
    /// `g` is the split graph `ntd` decomposes.
    pub fn new(alg: &'a A, g: &Graph, ntd: &NiceTreeDecomposition, options: EngineOptions) -> Result<Self> {
        let layout = layout::build(g, ntd)?;
        let mut realizable = vec![0u64; layout.len()];
        for (x, node) in layout.iter().enumerate() {
            realizable[x] = match &node.link {
                Link::Leaf => 0,
                Link::Join { left, right } => realizable[*left] | realizable[*right],
                Link::Introduce { child, to_child } => {
                    let r = realizable[*child];
                    to_child
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c != layout::NO_BIT && r >> c & 1 == 1)
                        .fold(0, |m, (b, _)| m | 1 << b)
                }
                Link::Forget { child, to_child, through } => {
                    let r = realizable[*child];
                    let mut m = 0u64;
                    for (b, t) in through.iter().enumerate() {
                        let kept = r >> to_child[b] & 1 == 1;
                        let uv = t.cost_uv.is_some() || r >> t.uv & 1 == 1;
                        let vw = t.cost_vw.is_some() || r >> t.vw & 1 == 1;
                        if kept || (uv && vw) {
                            m |= 1 << b;
                        }
                    }
                    m
                }
            };
        }
        let cap = layout
            .iter()
            .zip(&realizable)
            .map(|(node, r)| bag_capacity(node.pairs.bag().len()).min(r.count_ones() as usize) as i64)
            .collect();
        let cache = options.cache_capacity.map(|_| LruCache::unbounded());
        Ok(ZetaEngine {
            alg,
            layout,
            realizable,
            cap,
            options,
            cache,
            stats: EngineStats::default(),
            depth: 0,
            live: 0,
        })
    }

    pub fn stats(&self) -> &EngineStats {
        &self.stats
    }

    pub fn into_stats(mut self) -> EngineStats {
        self.stats.cached_values = self.cache.as_ref().map_or(0, |c| c.len()) * self.alg.value_width();
        self.stats
    }

    /// `ζf_x^i[X]` for a state over node `x`'s bag.
    pub fn eval(&mut self, x: usize, state: &PseudoEdgeSet, i: usize) -> Result<A::Value> {
        let node = self.layout.get(x).ok_or_else(|| Error::Defect(format!("node {x} out of range")))?;
        let mask = node
            .pairs
            .to_mask(state)
            .ok_or_else(|| Error::Defect(format!("state {state} is not over the bag of node {x}")))?;
        Ok(self.eval_mask(x, mask, i as i64))
    }

    fn canonical(&self, x: usize, mask: u64, i: i64) -> (u64, i64) {
        let i = if self.options.clamp { i.min(self.cap[x]) } else { i };
        (mask & self.realizable[x], i)
    }

    fn hold(&mut self, values: usize) {
        self.live += values;
        let w = self.alg.value_width();
        self.stats.peak_live_values = self.stats.peak_live_values.max((self.live + 1) * w);
    }

    fn eval_mask(&mut self, x: usize, mask: u64, i: i64) -> A::Value {
        if i < 0 {
            return A::Value::zero();
        }
        let (mask, i) = self.canonical(x, mask, i);
        if let Some(hit) = self.cache.as_mut().and_then(|c| c.get(&(x, mask, i))) {
            self.stats.cache_hits += 1;
            return hit.clone();
        }
        self.stats.strand_count += 1;
        self.depth += 1;
        self.stats.max_frame_depth = self.stats.max_frame_depth.max(self.depth);
        self.hold(0);
        let value = match &self.layout[x].link {
            Link::Leaf => match self.options.leaf_fill {
                LeafFill::Zero if i > 0 => A::Value::zero(),
                _ => A::Value::one(),
            },
            Link::Introduce { child, to_child } => {
                let (c, m) = (*child, map_mask(mask, to_child));
                self.eval_mask(c, m, i)
            }
            &Link::Join { left, right } => self.eval_join(x, left, right, mask, i),
            Link::Forget { .. } => self.eval_forget(x, mask, i),
        };
        self.depth -= 1;
        if let (Some(c), Some(cap)) = (self.cache.as_mut(), self.options.cache_capacity) {
            if c.len() >= cap.get() {
                c.pop_lru();
            }
            c.put((x, mask, i), value.clone());
        }
        value
    }

    fn eval_join(&mut self, _x: usize, left: usize, right: usize, mask: u64, i: i64) -> A::Value {
        let (lo, hi) = if self.options.clamp { ((i - self.cap[right]).max(0), i.min(self.cap[left])) } else { (0, i) };
        let mut acc = A::Value::zero();
        self.hold(1);
        for j in lo..=hi {
            let a = self.eval_mask(left, mask, j);
            if a.is_zero() {
                continue;
            }
            self.hold(1);
            let b = self.eval_mask(right, mask, i - j);
            self.live -= 1;
            acc += &self.alg.mul(&a, &b);
        }
        self.live -= 1;
        acc
    }

    /// Child calls of one forget evaluation with their merged coefficients
    /// `Σ k·edge(cost)`, as `(cost, k)` lists.
    fn forget_calls(&mut self, x: usize, mask: u64, i: i64) -> BTreeMap<Call, BTreeMap<Weight, i64>> {
        let Link::Forget { child, to_child, through } = &self.layout[x].link else { unreachable!() };
        let c = *child;
        let mut calls: BTreeMap<Call, BTreeMap<Weight, i64>> = BTreeMap::new();
        for b in bits(mask) {
            let t = &through[b];
            let rest = map_mask(mask & !(1 << b), to_child);
            let (uv, vw) = (1u64 << t.uv, 1u64 << t.vw);
            let mut term: Vec<(u64, i64, Weight, i64)> = vec![
                (rest | uv | vw, i + 1, 0, 1),
                (rest | uv, i + 1, 0, -1),
                (rest | vw, i + 1, 0, -1),
                (rest, i + 1, 0, 1),
            ];
            if let Some(cvw) = t.cost_vw {
                term.push((rest | uv, i, cvw, 1));
                term.push((rest, i, cvw, -1));
            }
            if let Some(cuv) = t.cost_uv {
                term.push((rest | vw, i, cuv, 1));
                term.push((rest, i, cuv, -1));
            }
            if let (Some(cuv), Some(cvw)) = (t.cost_uv, t.cost_vw) {
                term.push((rest, i - 1, cuv + cvw, 1));
            }
            let mut merged: BTreeMap<Call, BTreeMap<Weight, i64>> = BTreeMap::new();
            for (m, ci, cost, k) in term {
                if ci < 0 {
                    continue;
                }
                *merged.entry(self.canonical(c, m, ci)).or_default().entry(cost).or_default() += k;
            }
            merged.retain(|_, coef| {
                coef.retain(|_, k| *k != 0);
                !coef.is_empty()
            });
            *self.stats.term_fanout.entry(merged.len()).or_default() += 1;
            for (call, coef) in merged {
                let slot = calls.entry(call).or_default();
                for (cost, k) in coef {
                    *slot.entry(cost).or_default() += k;
                }
            }
        }
        calls.retain(|_, coef| {
            coef.retain(|_, k| *k != 0);
            !coef.is_empty()
        });
        *self.stats.forget_branchings.entry(calls.len()).or_default() += 1;
        calls
    }

    fn eval_forget(&mut self, x: usize, mask: u64, i: i64) -> A::Value {
        let Link::Forget { child, .. } = &self.layout[x].link else { unreachable!() };
        let c = *child;
        let calls = self.forget_calls(x, mask, i);
        let mut acc = A::Value::zero();
        self.hold(1);
        for ((m, ci), coef) in calls {
            let value = self.eval_mask(c, m, ci);
            if value.is_zero() {
                continue;
            }
            let mut factor = A::Value::zero();
            for (cost, k) in coef {
                factor += &self.alg.scale(&self.alg.edge(cost), k);
            }
            acc += &self.alg.mul(&factor, &value);
        }
        self.live -= 1;
        acc
    }
}

/// Evaluate the anchored root and read out `f_root[{⟨s1,s2⟩}]`.
pub fn evaluate<A: PathAlgebra>(
    alg: &A,
    g: &Graph,
    ntd: &NiceTreeDecomposition,
    options: EngineOptions,
) -> Result<(RootValue<A::Value>, EngineStats)> {
    if ntd.anchor().is_none() {
        return Err(Error::Defect("decomposition is not anchored".into()));
    }
    let root = ntd.root();
    if ntd.node(root).bag.len() != 2 {
        return Err(Error::Defect("root bag is not the anchor pair".into()));
    }
    let mut engine = ZetaEngine::new(alg, g, ntd, options)?;
    let with_pair = engine.eval_mask(root, 1, 1);
    engine.hold(1);
    let without = engine.eval_mask(root, 0, 1);
    engine.live -= 1;
    let raw = with_pair - without;
    Ok((calibrate(alg, raw)?, engine.into_stats()))
}

/// Hamiltonian cycles of the graph `g` was split from.
pub fn count_hamiltonian(g: &Graph, ntd: &NiceTreeDecomposition, options: EngineOptions) -> Result<(Count, EngineStats)> {
    let (root, stats) = evaluate(&CountAlgebra::new(), g, ntd, options)?;
    let count = root.cycles.to_biguint().ok_or_else(|| Error::Defect("negative count".into()))?;
    Ok((count, stats))
}

/// Space and branching measurements of one run against the claimed bounds.
#[derive(Debug, Clone, Serialize)]
pub struct SpaceReport {
    pub peak_live_values: usize,
    pub node_path_length: usize,
    pub value_width: usize,
    /// `8 × node_path_length × value_width`.
    pub peak_bound: usize,
    pub width: usize,
    pub depth: usize,
    pub vertices: usize,
    pub strand_count: u64,
    /// `log10((4(w+2))^(d+2) · n)`.
    pub strand_bound_log10: f64,
    pub max_term_fanout: usize,
    pub max_forget_branching: usize,
}

impl SpaceReport {
    pub fn peak_ok(&self) -> bool {
        self.peak_live_values <= self.peak_bound
    }

    pub fn strands_ok(&self) -> bool {
        (self.strand_count.max(1) as f64).log10() <= self.strand_bound_log10
    }

    /// At most three child calls per pseudo-edge term.
    pub fn fanout_ok(&self) -> bool {
        self.max_term_fanout <= 3
    }

    /// Errors on the hard bounds (peak values, strand count).
    pub fn check(&self) -> Result<()> {
        if !self.peak_ok() {
            return Err(Error::Defect(format!(
                "peak of {} live values exceeds {}",
                self.peak_live_values, self.peak_bound
            )));
        }
        if !self.strands_ok() {
            return Err(Error::Defect(format!(
                "{} strands exceed 10^{:.1}",
                self.strand_count, self.strand_bound_log10
            )));
        }
        Ok(())
    }
}

pub fn verify_space_profile(stats: &EngineStats, ntd: &NiceTreeDecomposition, value_width: usize) -> SpaceReport {
    let node_path_length = ntd.node_path_length();
    let width = ntd.width();
    let depth = ntd.depth();
    let vertices = ntd.nodes().iter().flat_map(|n| n.bag.iter().copied()).max().map_or(0, |v| v as usize + 1);
    let strand_bound_log10 = (depth + 2) as f64 * ((4 * (width + 2)) as f64).log10() + (vertices.max(1) as f64).log10();
    SpaceReport {
        peak_live_values: stats.peak_live_values,
        node_path_length,
        value_width,
        peak_bound: 8 * node_path_length * value_width,
        width,
        depth,
        vertices,
        strand_count: stats.strand_count,
        strand_bound_log10,
        max_term_fanout: stats.max_term_fanout(),
        max_forget_branching: stats.max_forget_branching(),
    }
}
