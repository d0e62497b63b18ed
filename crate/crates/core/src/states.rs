//! Pseudo-edge sets: the dynamic-programming state over a bag.
//!
//! A pseudo-edge `⟨u,v⟩` stands for a path between bag vertices `u` and `v`
//! whose interior has been forgotten. A state is a set of such pairs in
//! which every vertex has at most two incident pairs.
//!
//! The engines work on bitmasks over the pairs of one bag ([`BagPairs`]);
//! [`PseudoEdgeSet`] is the vertex-level view used at the API boundary.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::Vertex;

/// Unordered pair, stored smaller id first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pair(Vertex, Vertex);

impl Pair {
    pub fn new(u: Vertex, v: Vertex) -> Self {
        assert_ne!(u, v, "a pseudo-edge joins two distinct vertices");
        if u < v {
            Pair(u, v)
        } else {
            Pair(v, u)
        }
    }

    pub fn lo(self) -> Vertex {
        self.0
    }

    pub fn hi(self) -> Vertex {
        self.1
    }

    pub fn touches(self, v: Vertex) -> bool {
        self.0 == v || self.1 == v
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{},{}⟩", self.0, self.1)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PseudoEdgeSet {
    pairs: Vec<Pair>,
}

impl PseudoEdgeSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = Pair>) -> Self {
        let mut pairs: Vec<Pair> = pairs.into_iter().collect();
        pairs.sort_unstable();
        pairs.dedup();
        PseudoEdgeSet { pairs }
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, p: Pair) -> bool {
        self.pairs.binary_search(&p).is_ok()
    }

    /// `S_X`: vertices incident to some pair, sorted.
    pub fn endpoints(&self) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = self.pairs.iter().flat_map(|p| [p.0, p.1]).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn incidence(&self, v: Vertex) -> usize {
        self.pairs.iter().filter(|p| p.touches(v)).count()
    }

    /// Every vertex lies on at most two pairs.
    pub fn is_feasible(&self) -> bool {
        self.endpoints().into_iter().all(|v| self.incidence(v) <= 2)
    }

    /// Sorted pairs as big-endian `(min, max)` words.
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.pairs.len() * 8);
        for p in &self.pairs {
            out.extend_from_slice(&p.0.to_be_bytes());
            out.extend_from_slice(&p.1.to_be_bytes());
        }
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<Self> {
        if !bytes.len().is_multiple_of(8) {
            return Err(Error::Defect(format!("state encoding of {} bytes", bytes.len())));
        }
        let word = |c: &[u8]| Vertex::from_be_bytes([c[0], c[1], c[2], c[3]]);
        let pairs: Vec<Pair> = bytes
            .chunks_exact(8)
            .map(|c| (word(&c[..4]), word(&c[4..])))
            .map(|(u, v)| if u < v { Ok(Pair(u, v)) } else { Err(Error::Defect(format!("pair ({u},{v}) not canonical"))) })
            .collect::<Result<_>>()?;
        if pairs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Defect("pairs not strictly sorted".into()));
        }
        Ok(PseudoEdgeSet { pairs })
    }
}

impl fmt::Display for PseudoEdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.pairs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

/// `X_v`: the pairs of `x` touching `v`.
pub fn pairs_incident(x: &PseudoEdgeSet, v: Vertex) -> PseudoEdgeSet {
    PseudoEdgeSet { pairs: x.pairs.iter().copied().filter(|p| p.touches(v)).collect() }
}

/// Hashable key of a table entry: node, encoded state, relaxation index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateKey {
    pub node: usize,
    pub state: Vec<u8>,
    pub index: usize,
}

impl StateKey {
    pub fn new(node: usize, x: &PseudoEdgeSet, index: usize) -> Self {
        StateKey { node, state: x.encode(), index }
    }
}

/// All feasible states over `bag`, by size and then lexicographically.
pub fn enumerate_states(bag: &[Vertex]) -> Vec<PseudoEdgeSet> {
    let mut sorted = bag.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let bp = BagPairs::new(&sorted).expect("bag small enough to enumerate");
    let mut out: Vec<PseudoEdgeSet> = local_states(sorted.len()).iter().map(|&m| bp.to_set(m)).collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Most pairs a bag may have; states are `u64` masks.
pub const MAX_BAG_PAIRS: usize = 64;

/// Pairs over one sorted bag, numbered lexicographically, with
/// mask conversions.
#[derive(Debug, Clone)]
pub struct BagPairs {
    bag: Vec<Vertex>,
    pairs: Vec<Pair>,
    /// `incident[i]`: mask of pairs touching the `i`-th bag vertex.
    incident: Vec<u64>,
}

impl BagPairs {
    pub fn new(bag: &[Vertex]) -> Result<Self> {
        let k = bag.len();
        let count = k * k.saturating_sub(1) / 2;
        if count > MAX_BAG_PAIRS {
            return Err(Error::UniverseTooLarge { size: count, cap: MAX_BAG_PAIRS });
        }
        let mut pairs = Vec::with_capacity(count);
        let mut incident = vec![0u64; k];
        for i in 0..k {
            for j in i + 1..k {
                incident[i] |= 1 << pairs.len();
                incident[j] |= 1 << pairs.len();
                pairs.push(Pair::new(bag[i], bag[j]));
            }
        }
        Ok(BagPairs { bag: bag.to_vec(), pairs, incident })
    }

    pub fn bag(&self) -> &[Vertex] {
        &self.bag
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    pub fn full_mask(&self) -> u64 {
        if self.pairs.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.pairs.len()) - 1
        }
    }

    pub fn position(&self, v: Vertex) -> Option<usize> {
        self.bag.binary_search(&v).ok()
    }

    pub fn index(&self, p: Pair) -> Option<usize> {
        self.pairs.binary_search(&p).ok()
    }

    /// Mask of pairs touching `v`; 0 if `v` is not in the bag.
    pub fn incident_mask(&self, v: Vertex) -> u64 {
        self.position(v).map_or(0, |i| self.incident[i])
    }

    pub fn is_feasible(&self, mask: u64) -> bool {
        self.incident.iter().all(|&inc| (mask & inc).count_ones() <= 2)
    }

    pub fn to_set(&self, mask: u64) -> PseudoEdgeSet {
        PseudoEdgeSet { pairs: bits(mask).map(|b| self.pairs[b]).collect() }
    }

    /// `None` if some pair is not over this bag.
    pub fn to_mask(&self, x: &PseudoEdgeSet) -> Option<u64> {
        x.pairs.iter().try_fold(0u64, |m, &p| self.index(p).map(|i| m | 1 << i))
    }
}

/// Indices of set bits, ascending.
pub fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            return None;
        }
        let b = mask.trailing_zeros() as usize;
        mask &= mask - 1;
        Some(b)
    })
}

/// Feasible masks over a bag of `k` vertices, ascending, shared per `k`.
pub fn local_states(k: usize) -> std::sync::Arc<Vec<u64>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, std::sync::Arc<Vec<u64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(&k) {
        return v.clone();
    }
    let bag: Vec<Vertex> = (0..k as Vertex).collect();
    let bp = BagPairs::new(&bag).expect("bag small enough to enumerate");
    let mut out = Vec::new();
    extend_states(&bp, 0, 0, &mut vec![0u8; k], &mut out);
    out.sort_unstable();
    let out = std::sync::Arc::new(out);
    cache.lock().unwrap().insert(k, out.clone());
    out
}

fn extend_states(bp: &BagPairs, next: usize, mask: u64, deg: &mut [u8], out: &mut Vec<u64>) {
    if next == bp.pairs.len() {
        out.push(mask);
        return;
    }
    extend_states(bp, next + 1, mask, deg, out);
    let p = bp.pairs[next];
    let (a, b) = (p.0 as usize, p.1 as usize);
    if deg[a] < 2 && deg[b] < 2 {
        deg[a] += 1;
        deg[b] += 1;
        extend_states(bp, next + 1, mask | 1 << next, deg, out);
        deg[a] -= 1;
        deg[b] -= 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_bags() {
        assert_eq!(enumerate_states(&[]), vec![PseudoEdgeSet::new()]);
        let two = enumerate_states(&[4, 9]);
        assert_eq!(two, vec![PseudoEdgeSet::new(), PseudoEdgeSet::from_pairs([Pair::new(4, 9)])]);
        let three = enumerate_states(&[0, 1, 2]);
        assert_eq!(three.len(), 8);
        assert_eq!(three.iter().map(|x| x.len()).collect::<Vec<_>>(), vec![0, 1, 1, 1, 2, 2, 2, 3]);
        assert!(three.iter().all(|x| x.is_feasible()));
    }

    #[test]
    fn counts_match_filtering() {
        for k in 0..=5usize {
            let bag: Vec<Vertex> = (0..k as Vertex).collect();
            let bp = BagPairs::new(&bag).unwrap();
            let filtered = (0..=bp.full_mask()).filter(|&m| bp.to_set(m).is_feasible()).count();
            assert_eq!(enumerate_states(&bag).len(), filtered, "k = {k}");
        }
        // graphs of max degree 2 on k labeled vertices
        assert_eq!(local_states(5).len(), 253);
    }

    #[test]
    fn incident_pairs() {
        let x = PseudoEdgeSet::from_pairs([Pair::new(0, 1), Pair::new(2, 3)]);
        assert_eq!(pairs_incident(&x, 0), PseudoEdgeSet::from_pairs([Pair::new(0, 1)]));
        assert!(pairs_incident(&x, 7).is_empty());
        let y = PseudoEdgeSet::from_pairs([Pair::new(0, 1), Pair::new(1, 2)]);
        assert_eq!(pairs_incident(&y, 1), y);
    }

    #[test]
    fn encoding_round_trips() {
        for x in enumerate_states(&[3, 5, 8, 13]) {
            let bytes = x.encode();
            assert_eq!(PseudoEdgeSet::decode(&bytes).unwrap(), x);
            assert_eq!(StateKey::new(1, &x, 2).state, bytes);
        }
        assert!(PseudoEdgeSet::decode(&[0, 0, 0, 2, 0, 0, 0, 1]).is_err());
    }
}
