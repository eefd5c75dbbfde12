//! Generalized Apéry series `S_k(z) = sum_{n>=1} n^k z^n / C(2n,n)`: exact
//! rational parts, arbitrary-precision evaluation and independent checks.

pub mod asymptotics;
pub mod closed_form;
pub mod error;
pub mod exact;
pub mod genfunc;
pub mod hp;
pub mod series;
pub mod verify;

pub use closed_form::ClosedForm;
pub use error::{Error, Result};
pub use genfunc::TaylorSeries;
pub use hp::{HPReal, Precision};
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
pub use series::SeriesResult;
pub use verify::{Check, Suite};
