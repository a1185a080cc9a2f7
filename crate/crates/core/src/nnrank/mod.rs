//! Nonnegative factorizations of slack matrices, the translation between
//! factorizations and LP formulations, and bounds on nonnegative rank.

pub mod factorization;
pub mod interval;
pub mod lp;
pub mod nmf;
pub mod rectangles;
pub mod simplex;
pub mod theory;

pub use factorization::{trivial_factorization, verify_factorization, FactorizationCheck, NonnegFactorization, Scalar};
pub use interval::{
    defined_submatrix_rank, exact_nnegrk_small, LowerMethod, RankInterval, RankOptions, UpperMethod, SMALL_RANK_SIDE_CAP,
};
pub use lp::{
    check_conditions, edge_relaxation_lp, factorization_to_lp, linear_rank, lp_to_factorization, solution_simplex_lp,
    LpCheck, LpFormulation,
};
pub use nmf::{nmf_fit, nmf_upper, NmfFit, NmfOptions, NMF_FLOOR, NMF_SUCCESS_TOL};
pub use rectangles::{rectangle_cover_bound, Rectangle, RectangleCover, DEFAULT_RECT_NODE_BUDGET, RECT_SIDE_CAP, RECT_SUPPORT_CAP};
pub use simplex::{maximize_free, solve_standard, LpOutcome};
pub use theory::{
    binary_entropy, corlb_exponent, corlb_integer_bound, corollary_rho_max, udisj_fraction_exponent, uniform_model_exponent,
    ExponentBound, UniformModelBound, OMITTED_TERM_FLAG,
};
