//! Classical symmetric multilinear forms and the multilinear parts `d^k P`
//! of polynomials.

pub mod bias;
pub mod csm;
pub mod dkp;
pub mod extract;
pub mod ops;
pub mod table;

pub use bias::{bias, bias_cost, bias_with_budget, naive_bias_counter, Bias, DEFAULT_BIAS_BUDGET};
pub use csm::{multisets, CsmForm, CsmJson};
pub use dkp::{check_dkp_exhaustive, check_dkp_random, DkpReport};
pub use extract::{dk_direct, dk_extract, iterated_derivative_at, DkForm};
pub use ops::{antiderivative, binomial_lift_power, concat, sym_power};
pub use table::MultilinearTable;
