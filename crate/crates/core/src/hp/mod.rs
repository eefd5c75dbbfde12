//! Arbitrary-precision real arithmetic.

mod funcs;
pub mod quad;
mod real;

pub use funcs::{
    acos, asin, atan, exp, irrational_factor, ln, ln2_prec, pi, pi_prec, pow_rational, sqrt, Precision,
};
pub use real::{parse_decimal_rational, HPReal};
