//! Single-particle, bipartite and tripartite measures for multi-qubit states,
//! the complementarity relations that tie them together, and a best separable
//! approximation solver for two qubits.

pub mod error;
pub mod linalg;
pub mod ls;
pub mod measures;
pub mod rng;
pub mod relations;
mod search;
pub mod states;

pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
pub use states::{DensityMatrix, PureState, State};
