//! Exact integer and rational combinatorics.
//!
//! Everything here is backed by `num-bigint` / `num-rational`; `BigRational`
//! is always stored in lowest terms with a positive denominator, so `==` on
//! results is structural equality of canonical forms.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use num_rational::BigRational;

/// `n!` as a big integer.
pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Binomial coefficient `C(n, m)`, zero outside `0 <= m <= n`.
pub fn binomial(n: u64, m: i64) -> BigInt {
    if m < 0 || m as u64 > n {
        return BigInt::zero();
    }
    let m = (m as u64).min(n - m as u64);
    let mut acc = BigUint::one();
    for i in 0..m {
        // acc * (n - i) is divisible by (i + 1) at every step.
        acc = acc * (n - i) / (i + 1);
    }
    BigInt::from(acc)
}

/// `C(2n, n)`.
pub fn central_binomial(n: u64) -> BigInt {
    binomial(2 * n, n as i64)
}

/// Row `k` of the Stirling triangle of the second kind: `[S(k,0), ..., S(k,k)]`.
pub fn stirling2_row(k: u32) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for i in 1..=k as usize {
        let mut next = vec![BigInt::zero(); i + 1];
        for j in 1..=i {
            let carry = if j < i { &row[j] * j } else { BigInt::zero() };
            next[j] = carry + &row[j - 1];
        }
        row = next;
    }
    row
}

/// Stirling number of the second kind `S(k, j)`.
pub fn stirling2(k: u32, j: u32) -> BigInt {
    if j > k {
        return BigInt::zero();
    }
    stirling2_row(k).swap_remove(j as usize)
}

/// Rising factorial `(1/2)_p`.
pub fn pochhammer_half(p: u32) -> BigRational {
    // (1/2)_p = (2p-1)!! / 2^p
    let num = (0..p).fold(BigInt::one(), |acc, i| acc * (2 * i + 1));
    BigRational::new(num, BigInt::one() << p)
}

/// Euler beta value `B(n, 1/2) = (n-1)! / (1/2)_n`, rational for integer `n >= 1`.
pub fn beta_half(n: u32) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::domain("beta_half", "B(0, 1/2) is at a pole of Gamma(0)"));
    }
    Ok(BigRational::from_integer(factorial(n - 1)) / pochhammer_half(n))
}

/// `x^e` for any integer exponent; `0^e` with `e < 0` is a domain error.
pub fn rational_pow(x: &BigRational, e: i64) -> Result<BigRational> {
    if e < 0 && x.is_zero() {
        return Err(Error::domain("rational_pow", "zero to a negative power"));
    }
    let mag = e.unsigned_abs();
    let r = BigRational::new(
        num_traits::pow(x.numer().clone(), mag as usize),
        num_traits::pow(x.denom().clone(), mag as usize),
    );
    Ok(if e < 0 { r.recip() } else { r })
}

/// Integer power of a rational with a non-negative exponent.
pub(crate) fn rpow(x: &BigRational, e: u32) -> BigRational {
    BigRational::new(
        num_traits::pow(x.numer().clone(), e as usize),
        num_traits::pow(x.denom().clone(), e as usize),
    )
}

pub(crate) fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"`, `"-7/2"` or a bare integer `"5"` into a canonical rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let err = || Error::Parse { what: "rational", input: s.to_string() };
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = parse_int(n).ok_or_else(err)?;
    let d: BigInt = parse_int(d).ok_or_else(err)?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(BigRational::new(n, d))
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Parses a decimal integer string.
pub fn parse_bigint(s: &str) -> Result<BigInt> {
    parse_int(s.trim()).ok_or_else(|| Error::Parse { what: "integer", input: s.to_string() })
}

/// `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// `|x|` compared to an integer bound, used for open-interval domain checks.
pub(crate) fn in_open_interval(x: &BigRational, lo: i64, hi: i64) -> bool {
    *x > BigRational::from_integer(lo.into()) && *x < BigRational::from_integer(hi.into())
}

pub(crate) fn abs_lt(x: &BigRational, bound: i64) -> bool {
    x.abs() < BigRational::from_integer(bound.into())
}
