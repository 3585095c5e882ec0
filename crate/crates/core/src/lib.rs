//! Good-Turing total-probability estimation in the unlikely-symbols regime.
//!
//! The crate is organised around the quantities attached to a length-`n`
//! i.i.d. string drawn from a label-free distribution:
//!
//! - [`shadow`]: distributions as `(probability, multiplicity)` pairs, their
//!   shadows, scaled shadows, and families `{P_n}` with a declared limiting
//!   mixing distribution `Q`.
//! - [`sampling`]: seeded string sampling, count-of-counts `φ_k`, and the
//!   true total probabilities `ξ_k`.
//! - [`estimator`]: the Good-Turing totals `ζ_k = (k+1)φ_{k+1}/n`, kept as
//!   exact rationals.
//! - [`limits`]: binomial/Poisson kernels, the Poisson-mixture limit `λ`,
//!   exact finite-`n` expectations, and the concentration bounds.
//! - [`harness`]: Monte Carlo experiments, L1 diagnostics and the
//!   brute-force enumeration oracle.
//! - [`io`]: the CSV and JSON exchange formats used by the `gt` binary.

pub mod error;
pub mod estimator;
pub mod harness;
pub mod io;
pub mod limits;
pub mod numeric;
pub mod sampling;
pub mod shadow;

pub use error::{Error, Result};
pub use estimator::{good_turing_per_symbol, good_turing_totals, missing_mass, GoodTuringVector};
pub use harness::{
    brute_force_expectations, l1_distance, run_experiment, run_trial, ExperimentConfig,
    ExperimentReport, TrialResult,
};
pub use limits::{
    azuma_bound_xi, azuma_bound_zeta, expected_xi, expected_zeta, g_binomial, g_poisson,
    poisson_mixture, truncation_bound, PoissonMixtureVector, TruncationBound,
};
pub use sampling::{
    count_frequencies, sample_string, true_total_probabilities, FrequencyTable, SampleString,
    SymbolId, TotalProbabilityVector,
};
pub use shadow::{
    make_distribution, scaled_shadow, shadow_of, DistributionSpec, Family, FamilyKind,
    MixingDistribution, Shadow,
};
