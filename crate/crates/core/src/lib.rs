//! Toolkit for the linear-programming formulation complexity of the maximum
//! stable set problem.
//!
//! * [`graphs`]: labeled graphs, exact stability numbers, the subdivision
//!   gadget and its canonical stable sets.
//! * [`problems`]: maximization problems, slack matrices, unique-disjointness
//!   matrices and the gadget embedding.
//! * [`nnrank`]: both directions of the factorization theorem and
//!   nonnegative-rank bounds.
//! * [`randgraph`]: Erdős–Rényi sampling, induced-subgraph search,
//!   Monte-Carlo checks and the regime calculators.
//! * [`cli`]: the `xfc` command-line front end.

pub mod cli;
pub mod error;
pub mod graphs;
pub mod nnrank;
pub mod problems;
pub mod randgraph;

pub use error::{Error, Result};
