//! Numerical laboratory for the entropic normalization of smoothed lattice sums.
//!
//! A continuous noise variable `X` is added to a normalized sum of i.i.d. integer
//! lattice steps, `Z_n = (X + X_1 + ... + X_n) / sqrt(n)`, and the crate measures —
//! by exact construction rather than simulation — how close the law of `Z_n` gets to
//! the standard normal: differential entropy, relative entropy (KL), L² distance,
//! quadratic transport distance, and a catalog of explicit inequalities connecting
//! them, each checked numerically over randomized corpora.
//!
//! | module | contents |
//! |-----------|-------------------------------------------------------------|
//! | [`special`] | erf/erfc, normal quantile, log-gamma, digamma, summation |
//! | [`grid`]    | cell-centered grid densities and their quadrature rules   |
//! | [`model`]   | noise families, lattice step laws, scenarios               |
//! | [`spectral`]| characteristic functions, inversion, exact mixtures, L²    |
//! | [`entropy`] | entropies, KL identities and decomposition, W₂, MC oracle  |
//! | [`bounds`]  | inequality checkers and the randomized verification corpus |
//! | [`lab`]     | sweeps, the convergence/stall dichotomy, file emission      |
//!
//! All logarithms are natural; entropies are in nats. Computations are
//! deterministic: quadrature reductions use fixed-order pairwise summation and all
//! randomized corpora derive from explicit seeds.

pub mod bounds;
pub mod entropy;
pub mod grid;
// TEMP-STUB pub mod lab;
pub mod model;
pub mod special;
pub mod spectral;

pub use grid::{GridDensity, GridSpec};
pub use model::{make_noise, third_abs_moment, LatticeLaw, NoiseFamily, NoiseModel, Scenario};
pub use spectral::{
    cf_integrability, exact_mixture_density, invert_pointwise, invert_to_density, l2_distance,
    l2_distance_plancherel, smoothed_sum_cf, zero_condition, CharFnCurve,
};
pub use entropy::{
    differential_entropy, discrete_entropy, kl_decomposition, kl_direct_quadrature,
    kl_to_std_normal, moment_summary, shape_penalty, spacing_entropy_estimate, staircase,
    w2_to_std_normal, KlDecomposition, MomentSummary, SpacingEstimate, StaircaseDensity,
};
pub use bounds::{
    entropy_ceiling_check, entropy_ceiling_trend, gaussian_tail_bounds, kl_l2_lower_bound,
    kl_l2_upper_bound, kl_simplified_bound, kl_truncation_bound, mixture_entropy_check,
    moment_kl_bounds, run_bound_corpus, staircase_gaussian_max_check, talagrand_check,
    weighted_tail_bound, BoundReport, CorpusReport,
};
// TEMP-STUB pub use lab::{dichotomy_experiment, run_sweep, ScenarioConfig, SweepResult, SweepRow};

/// Errors shared by every module in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A construction or operation received an argument outside its domain.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// Grid mass drifted further from 1 than the construction tolerates.
    #[error("grid mass drift {drift:.3e} exceeds tolerance {tolerance:.1e}")]
    MassDrift { drift: f64, tolerance: f64 },
    /// A density value was more negative than quadrature noise can explain.
    #[error("density value {value:.3e} at node {index} below the -1e-12 clamp floor")]
    NegativeDensity { value: f64, index: usize },
    /// Two grids that must match (same window and step) do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    /// A numerical consistency cross-check failed.
    #[error("numerical inconsistency: {0}")]
    Inconsistent(String),
    /// Configuration file could not be parsed or failed validation.
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
