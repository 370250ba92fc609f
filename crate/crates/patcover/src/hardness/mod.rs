//! Binary CSP to Hamiltonian path, by local gadgets in a grid.

pub mod csp;
pub mod gadgets;
pub mod layout;
pub mod oracle;
pub mod reduce;

pub use csp::CspInstance;
pub use gadgets::{ModeEdge, TwoChain};
pub use reduce::{construct_witness_path, reduce_csp, ReductionOutput};
