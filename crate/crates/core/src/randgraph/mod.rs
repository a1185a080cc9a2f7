//! Random graphs: sampling, induced-subgraph search, Monte-Carlo checks of
//! the containment and stability-number estimates, and the parameter and
//! bound calculators for `xc(STAB(G(n, p)))`.

pub mod experiments;
pub mod gnp;
pub mod induced;
pub mod params;
pub mod rng;
pub mod stats;

pub use experiments::{
    alpha_tail_experiment, containment_probability_mc, gadget_degree_cap, run_trials,
    stable_count_check, AlphaTailReport, ContainmentReport, DegreeChoice, McOptions,
    StableCountCheck,
};
pub use gnp::{sample_gnp, sample_gnp_stream, sample_gnp_with, GnpConfig};
pub use induced::{find_induced, verify_induced, InducedSearch};
pub use params::{
    check_sweep, corollary_table, default_sweep_grid, nominal_regime, select_parameters, sweep,
    upper_exponent, xc_bound_report, CorollaryRow, Regime, RegimeOptions, RegimeParams,
    SweepCheck, SweepRow, XcBoundReport,
};
pub use rng::trial_rng;
pub use stats::{c0, g_statistic, lambert_w0, wilson_interval, McEstimate, Z95};
