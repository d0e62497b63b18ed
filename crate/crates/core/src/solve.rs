//! End-to-end pipeline: anchor, decompose, make nice, run an engine.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use crate::decomposition::{
    anchor_bags, default_root, lift_to_split, make_nice, min_fill_decomposition, validate_decomposition,
    NiceTreeDecomposition, TreeDecomposition,
};
use crate::error::{Error, Result};
use crate::graph::{choose_anchor, split_anchor, AnchorInfo, Graph};
use crate::poly::{CostPolynomial, TspSolution};
use crate::reference::{self, ReferenceStats};
use crate::scalar::{PathAlgebra, RootValue};
use crate::zeta::{self, EngineOptions, EngineStats};
use crate::{Count, CountAlgebra, SignedCount, TspAlgebra, Weight};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    #[default]
    Zeta,
    Reference,
}

/// An instance ready for either engine.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub split: Graph,
    pub info: AnchorInfo,
    pub ntd: NiceTreeDecomposition,
    /// Total weight of the original graph.
    pub total_weight: Weight,
}

/// Anchors `g` and builds the anchored nice decomposition, from `td` (a
/// decomposition of `g`, validated here) or from the min-fill heuristic.
/// `root` is a node of `td`. Returns `None` when `g` trivially has no
/// Hamiltonian cycle (fewer than 3 vertices, or disconnected).
pub fn prepare(g: &Graph, td: Option<&TreeDecomposition>, root: Option<usize>) -> Result<Option<Prepared>> {
    if let Some(td) = td {
        let report = validate_decomposition(g, td);
        if !report.is_valid() {
            return Err(Error::InvalidDecomposition(report.violations));
        }
    }
    if g.vertex_count() < 3 || !g.is_connected() {
        return Ok(None);
    }
    let s = choose_anchor(g).expect("graph has vertices");
    let (split, info) = split_anchor(g, s)?;
    let base = match td {
        Some(td) => td.clone(),
        None => min_fill_decomposition(g),
    };
    let lifted = lift_to_split(&base, &info);
    let root = match root {
        Some(r) if r >= lifted.node_count() => {
            return Err(Error::Defect(format!("root {r} out of range ({} nodes)", lifted.node_count())))
        }
        Some(r) => r,
        None => default_root(&lifted, &info),
    };
    let ntd = anchor_bags(&make_nice(&lifted, root)?, &info);
    ntd.check()?;
    Ok(Some(Prepared { split, info, ntd, total_weight: g.total_weight() }))
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RunStats {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zeta: Option<EngineStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<ReferenceStats>,
}

pub fn run<A: PathAlgebra>(
    alg: &A,
    p: &Prepared,
    engine: Engine,
    options: EngineOptions,
) -> Result<(RootValue<A::Value>, RunStats)> {
    match engine {
        Engine::Zeta => {
            let (v, s) = zeta::evaluate(alg, &p.split, &p.ntd, options)?;
            Ok((v, RunStats { zeta: Some(s), reference: None }))
        }
        Engine::Reference => {
            let (v, s) = reference::evaluate(alg, &p.split, &p.ntd)?;
            Ok((v, RunStats { zeta: None, reference: Some(s) }))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountReport {
    #[serde(serialize_with = "crate::decimal::one")]
    pub count: Count,
    /// Root value before halving; `None` if the instance was short-circuited.
    #[serde(serialize_with = "crate::decimal::optional")]
    pub raw_root: Option<SignedCount>,
    pub stats: RunStats,
}

pub fn count_cycles(
    g: &Graph,
    td: Option<&TreeDecomposition>,
    root: Option<usize>,
    engine: Engine,
    options: EngineOptions,
) -> Result<CountReport> {
    let Some(p) = prepare(g, td, root)? else {
        return Ok(CountReport { count: BigUint::zero(), raw_root: None, stats: RunStats::default() });
    };
    count_prepared(&p, engine, options)
}

pub fn count_prepared(p: &Prepared, engine: Engine, options: EngineOptions) -> Result<CountReport> {
    let (root, stats) = run(&CountAlgebra::new(), p, engine, options)?;
    let count = root.cycles.to_biguint().ok_or_else(|| Error::Defect("negative count".into()))?;
    Ok(CountReport { count, raw_root: Some(root.raw), stats })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TspReport {
    #[serde(flatten)]
    pub solution: TspSolution,
    #[serde(skip)]
    pub raw_root: Option<CostPolynomial<SignedCount>>,
    pub stats: RunStats,
}

pub fn tsp(
    g: &Graph,
    td: Option<&TreeDecomposition>,
    root: Option<usize>,
    engine: Engine,
    options: EngineOptions,
) -> Result<TspReport> {
    let Some(p) = prepare(g, td, root)? else {
        let solution = TspSolution::from_histogram(&CostPolynomial::zero(), g.total_weight())?;
        return Ok(TspReport { solution, raw_root: None, stats: RunStats::default() });
    };
    tsp_prepared(&p, engine, options)
}

pub fn tsp_prepared(p: &Prepared, engine: Engine, options: EngineOptions) -> Result<TspReport> {
    let alg = TspAlgebra::new(p.total_weight);
    let (root, stats) = run(&alg, p, engine, options)?;
    let solution = TspSolution::from_histogram(&root.cycles, p.total_weight)?;
    Ok(TspReport { solution, raw_root: Some(root.raw), stats })
}
