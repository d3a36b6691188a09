//! Chip-firing combinatorics for the Betti numbers of the toppling ideal of
//! a multigraph: divisors and linear systems, connected partitions and their
//! boundary divisors, acyclic orientations, simplicial homology of linear
//! systems over the rationals, and extension cycles.

pub mod corpus;
pub mod cycles;
pub mod divisor;
pub mod error;
pub mod graph;
pub mod homology;
pub mod linalg;
pub mod orientation;
pub mod partition;
pub mod set;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{load_graph, Multigraph};
pub use set::VertexSet;
