pub mod binom;
pub mod counter;
pub mod field;
pub mod space;
pub mod torus;

pub use counter::{CyclotomicMean, UnityCounter};
pub use field::PrimeField;
pub use space::{FVec, Space};
pub use torus::{char_eval, TorusValue};
