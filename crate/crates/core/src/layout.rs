//! Per-node pair numbering shared by both engines: each nice node gets its
//! [`BagPairs`] and the bit maps to its children's numbering.

use crate::decomposition::{NiceTreeDecomposition, NodeKind};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::states::{bits, BagPairs, Pair};
use crate::Weight;

pub(crate) const NO_BIT: u8 = u8::MAX;

/// Forgetting `v` below parent pair `⟨u,w⟩`: child bits of `⟨u,v⟩` and
/// `⟨v,w⟩`, and the graph edges `{u,v}`, `{v,w}` if present.
#[derive(Debug, Clone)]
pub(crate) struct Through {
    pub uv: u8,
    pub vw: u8,
    pub cost_uv: Option<Weight>,
    pub cost_vw: Option<Weight>,
}

#[derive(Debug, Clone)]
pub(crate) enum Link {
    Leaf,
    /// `to_child[b]`: child bit of parent pair `b`, `NO_BIT` if it touches `v`.
    Introduce { child: usize, to_child: Vec<u8> },
    Forget { child: usize, to_child: Vec<u8>, through: Vec<Through> },
    Join { left: usize, right: usize },
}

#[derive(Debug, Clone)]
pub(crate) struct NodeLayout {
    pub pairs: BagPairs,
    pub link: Link,
}

pub(crate) fn map_mask(mask: u64, to_child: &[u8]) -> u64 {
    bits(mask).fold(0u64, |m, b| match to_child[b] {
        NO_BIT => m,
        c => m | 1 << c,
    })
}

fn bit(bp: &BagPairs, p: Pair) -> Result<u8> {
    bp.index(p).map(|i| i as u8).ok_or_else(|| Error::Defect(format!("pair {p} missing from child bag")))
}

pub(crate) fn build(g: &Graph, ntd: &NiceTreeDecomposition) -> Result<Vec<NodeLayout>> {
    let mut out: Vec<NodeLayout> = Vec::with_capacity(ntd.len());
    for node in ntd.nodes() {
        let pairs = BagPairs::new(&node.bag)?;
        let link = match node.kind {
            NodeKind::Leaf => Link::Leaf,
            NodeKind::Join => Link::Join { left: node.children[0], right: node.children[1] },
            NodeKind::Introduce(v) => {
                let child = node.children[0];
                let cp = &out[child].pairs;
                let to_child = pairs
                    .pairs()
                    .iter()
                    .map(|&p| if p.touches(v) { Ok(NO_BIT) } else { bit(cp, p) })
                    .collect::<Result<_>>()?;
                Link::Introduce { child, to_child }
            }
            NodeKind::Forget(v) => {
                let child = node.children[0];
                let cp = &out[child].pairs;
                let to_child = pairs.pairs().iter().map(|&p| bit(cp, p)).collect::<Result<_>>()?;
                let through = pairs
                    .pairs()
                    .iter()
                    .map(|&p| {
                        let (u, w) = (p.lo(), p.hi());
                        Ok(Through {
                            uv: bit(cp, Pair::new(u, v))?,
                            vw: bit(cp, Pair::new(v, w))?,
                            cost_uv: g.weight(u, v),
                            cost_vw: g.weight(v, w),
                        })
                    })
                    .collect::<Result<_>>()?;
                Link::Forget { child, to_child, through }
            }
        };
        out.push(NodeLayout { pairs, link });
    }
    Ok(out)
}
