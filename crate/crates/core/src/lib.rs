//! Matching measures of finite graphs and infinite lattices, computed exactly from
//! trees of self-avoiding walks, and monomer-dimer thermodynamics with certified
//! error bounds.

pub mod approx;
pub mod canon;
pub mod corpus;
pub mod density;
pub mod error;
pub mod graph;
pub mod interval;
pub mod lattice;
pub mod matching;
pub mod moments;
pub mod poly;
pub mod reference;
pub mod saw;
pub mod thermo;

pub use error::{Error, Result};

/// Library version, embedded in every artifact.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use graph::{Graph, RootedGraph};
pub use lattice::{LatticeSpec, Site};
pub use matching::{MatchingPolynomial, RootMeasure};
pub use moments::{MomentSequence, MomentSource};
