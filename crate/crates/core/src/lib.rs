//! Counting Hamiltonian cycles and solving TSP exactly on graphs with a tree
//! decomposition.
//!
//! Two engines evaluate the same path-system recurrences over a nice,
//! anchored tree decomposition: [`reference`] fills a table per node, and
//! [`zeta`] evaluates zeta-transformed relaxations top-down without tables.
//! Both are generic over a [`PathAlgebra`]; [`CountAlgebra`] counts cycles and
//! [`TspAlgebra`] builds the cost histogram used by [`poly::solve_tsp`].

mod decimal;
pub mod decomposition;
pub mod error;
pub mod generators;
pub mod graph;
mod layout;
pub mod oracle;
pub mod poly;
pub mod reference;
pub mod scalar;
pub mod solve;
pub mod states;
pub mod transforms;
pub mod zeta;

pub use error::{Error, ParseErrorKind, Result};
pub use graph::{parse_edge_list, split_anchor, AnchorInfo, Graph};
pub use poly::{CostPolynomial, CostPolynomials};
pub use scalar::{Counting, PathAlgebra, Ring, Scalar};
pub use solve::{count_cycles, tsp, Engine, Prepared};

pub type Vertex = u32;
pub type Weight = u64;

/// Hamiltonian-cycle counts.
pub type Count = num_bigint::BigUint;
/// Intermediate values; zeta-transformed relaxations go negative.
pub type SignedCount = num_bigint::BigInt;
pub type CostPoly = CostPolynomial<SignedCount>;
pub type CountAlgebra = Counting<SignedCount>;
pub type TspAlgebra = CostPolynomials<SignedCount>;
