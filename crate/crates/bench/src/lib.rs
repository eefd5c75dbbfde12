//! Shared fixtures for the benchmarks.

use apery_core::exact::parse_rational;
use apery_core::{BigRational, Precision};

/// Points spanning the disc of convergence on the positive axis.
pub const Z_POINTS: [&str; 5] = ["1/2", "1", "2", "3", "7/2"];

pub fn z(s: &str) -> BigRational {
    parse_rational(s).expect("fixture")
}

pub fn bits(b: u32) -> Precision {
    Precision::new(b).expect("fixture")
}
