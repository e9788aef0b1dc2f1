//! Periodic maps `Z^m -> T` graded by initial degrees `D_1, ..., D_m`, where
//! the shift `p^j e_i` carries weight `D_i + j(p - 1)`.

pub mod factor;
pub mod periodicity;
pub mod poly;
pub mod table;

pub use factor::{poly_from_numerators, ChainJson, Factor, FactorChain, FactorJson};
pub use periodicity::{periodicity_check, PeriodCheck, PeriodicityReport, TopCoefficient};
pub use poly::{binomial_expand, multi_indices, random_weighted, WeightedJson, WeightedPoly, WeightedTermJson};
pub use table::PeriodicTable;
