//! Combinatorics of polyhedral products.
//!
//! The crate provides a small symbolic engine built around finite
//! simplicial complexes: polyhedral join products with their substitution
//! and composition specializations, vertex folds and maximal unfolding
//! complexes, expression trees for (nested, folded) higher Whitehead maps
//! with Koszul signs and a triviality classifier, identity complexes with
//! their relation families, and a brute-force verification suite that
//! checks everything against independent oracles at small scale.

pub mod complex;
pub mod error;
pub mod folds;
pub mod io;
pub mod polyjoin;
pub mod relations;
pub mod verify;
pub mod vertex;
pub mod whitehead;

pub use complex::{Face, SimplicialComplex, SimplicialPair};
pub use error::{Error, Result};
pub use vertex::VertexId;
