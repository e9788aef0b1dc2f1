//! Gowers uniformity norms, analytic rank, rank witnesses, Fourier analysis
//! and conditional expectations on `F_p^n`.

pub mod arank;
pub mod condexp;
pub mod explore;
pub mod function;
pub mod norm;
pub mod props;
pub mod walsh;
pub mod witness;

pub use arank::{analytic_rank, analytic_rank_with_budget, AnalyticRank};
pub use condexp::{conditional_expectation, conditional_expectation_exact, inner_product_exact, Atoms};
pub use explore::{correlation, inverse_explore, Exploration};
pub use function::{BoundedFunction, FunctionJson, ValueJson};
pub use norm::{gowers_norm, gowers_power_direct, gowers_power_exact, gowers_power_recursive, DEFAULT_NORM_BUDGET};
pub use props::{verify_gowers_properties, PropertyOutcome};
pub use walsh::{max_coefficient, walsh_fourier};
pub use witness::{rank_witness_check, RankWitness, WitnessJson};
