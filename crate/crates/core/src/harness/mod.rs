//! Named verification suites. Each runs a fixed, seeded family of exact
//! checks and returns a report that is identical across thread counts.

mod analysis;
mod identities;
mod report;
mod roots;
mod structures;

pub use report::{Check, CheckRecord, SuiteParams, SuiteReport};
pub use roots::value_count_bound;

use crate::error::{Error, Result};

pub const SUITE_NAMES: &[&str] =
    &["lucas", "lam", "df", "symprod", "gowers-props", "dkp", "roots", "weighted", "cubes", "decomposition"];

pub fn run_suite(name: &str, params: &SuiteParams) -> Result<SuiteReport> {
    match name {
        "lucas" => identities::lucas(params),
        "lam" => identities::lam(params),
        "df" => identities::df(params),
        "symprod" => identities::symprod(params),
        "dkp" => identities::dkp(params),
        "gowers-props" => analysis::gowers_props(params),
        "decomposition" => analysis::decomposition(params),
        "roots" => roots::roots(params),
        "weighted" => structures::weighted(params),
        "cubes" => structures::cubes(params),
        other => Err(Error::UnknownSuite(other.into())),
    }
}
