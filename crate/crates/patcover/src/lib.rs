//! Randomized low-treedepth pattern covering on graphs of polynomial
//! growth, with everything needed to use and audit it:
//!
//! - graph primitives, growth checking, generators and file formats
//!   ([`graph`], [`growth`], [`gen`], [`io`]);
//! - the two randomized carving passes and their caps ([`clustering`]);
//! - the composed cover with its elimination-forest treedepth witness and
//!   Monte Carlo coverage estimation ([`cover`]);
//! - exact Long Path solvers and the randomized driver ([`longpath`]),
//!   plus empirical calibration of the trial budget ([`fit`]);
//! - a binary-CSP to Hamiltonian-path gadget reduction embedded in a grid,
//!   with brute-force verifiers for every gadget claim ([`hardness`]).
//!
//! All randomness flows from one master seed through named substreams
//! ([`rng::Substream`]), so every experiment is replayable.

pub mod clustering;
pub mod cover;
pub mod embed;
pub mod error;
pub mod fit;
pub mod gen;
pub mod graph;
pub mod growth;
pub mod hardness;
pub mod io;
pub mod longpath;
pub mod rng;

pub use embed::GridEmbedding;
pub use error::{Error, Result};
pub use graph::{Graph, VertexSet};
pub use growth::GrowthBound;
pub use rng::Substream;
