//! Non-classical polynomials `F_p^n -> T`.

pub mod canonical;
pub mod enumerate;
pub mod poly;
pub mod text;

pub use canonical::{format_degree, interpolate, CanonicalForm, Degree, PolyJson, Term, TermJson};
pub use enumerate::{enumerate_polys, random_poly, PolyEnumeration};
pub use poly::NCPoly;
pub use text::{format_form, parse_poly};
