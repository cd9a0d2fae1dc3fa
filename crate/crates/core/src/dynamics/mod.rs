//! Log-linear learning, its Gibbs stationary law, and bounds on the mass the
//! law puts on the optimal profile.

mod bounds;
mod gibbs;
mod lll;

pub use bounds::{
    beta_bound_closed_form, gibbs_lower_bound, log_gibbs_lower_bound, optimal_normalized_potential,
};
pub use gibbs::{
    beta_min, expected_potential, g_of_beta_k, gibbs_exact, GibbsModel, GibbsTable, LogSumExp,
    OptimalMass, OptimalProfile, BETA_MIN_WIDTH, PER_STATE_MAX_N,
};
pub use lll::{
    lll_step, replica_rng, revision_probability, simulate, total_variation, transition_matrix,
    InitialProfile, LllConfig, TrajectoryStats, EMPIRICAL_MAX_N, TRANSITION_MAX_N,
};
