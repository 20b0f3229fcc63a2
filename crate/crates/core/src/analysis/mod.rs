//! Distance bounds and collapse detection for noisy circuits.

mod bound;
mod distance;
mod levels;
mod noise_action;
mod suites;
mod worthless;

pub use bound::{
    analytic_bound, f_series, min_worthless_depth, theta_and_threshold, BoundSeries, DepthSearch, Threshold,
    DEPTH_SEARCH_CAP,
};
pub use distance::{
    distance_profile, empirical_d, index_pairs, pairwise_level_profiles, profile_from_marginals, SubsetMarginals,
    ENUMERATION_CAP,
};
pub use levels::{
    check_bounds, level_bounds, recursion_rhs, BoundCheck, DistanceRecord, DistanceReport, RecursionRecord, REPORT_TOL,
};
pub use noise_action::{check_noise_action, noise_action_mixture, NOISE_ACTION_CAP};
pub use suites::{
    contractivity_suite, convexity_suite, kraus_suite, noise_action_suite, SuiteOutcome, NOISE_ACTION_RATES,
};
pub use worthless::{
    practically_worthless, practically_worthless_with, probe_outputs, worthless, worthless_with, Certainty, Probe,
    ProbeSpec, Verdict, BASIS_PROBE_CAP, DEFAULT_RANDOM_PROBES,
};
