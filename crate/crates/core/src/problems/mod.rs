//! Maximization problems, slack matrices, unique disjointness and its
//! gadget embedding.

pub mod embed;
pub mod matrix;
pub mod problem;
pub mod udisj;

pub use embed::{embed_udisj_via_gadget, gadget_embedding, EmbeddingEntry, GadgetEmbedding};
pub use matrix::{parse_rational, pretty, Entry, MatrixJson, PartialMatrix, Rational, UNDEFINED_TOKEN};
pub use problem::{
    slack_matrix, stab_nu_problem, stab_u_problem, uniform_objective_value, MaxProblem, Objective,
    DEFAULT_SOLUTION_BUDGET,
};
pub use udisj::{
    build_udisj, complete_family_example, rank1_shift, shift_matrix, uniform_model_toy, ToyFamily,
    UniformToy, UDISJ_DENSE_CAP, UDISJ_ENTRY_CAP,
};
