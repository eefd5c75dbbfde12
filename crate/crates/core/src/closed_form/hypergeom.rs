//! Closed forms of `F_n(X) = 2F1(-1/2, n; n+1/2; -X)` for integer `n >= 1`.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::assemble;
use super::ratfunc::RatFn;
use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, pochhammer_half, rat, rpow};
use crate::hp::{HPReal, Precision};

fn check_x(func: &'static str, n: u32, x: &BigRational) -> Result<bool> {
    if n == 0 {
        return Err(Error::domain(func, "n must be at least 1"));
    }
    if x.is_negative() {
        return Err(Error::domain(func, format!("X = {x} must be positive")));
    }
    Ok(x.is_zero())
}

// sqrt(X) * asin(sqrt(X/(1+X)))
fn t_factor(x: &BigRational, w: u32) -> Result<HPReal> {
    let arg = HPReal::from_rational(&(x / (x + BigRational::one())), w + 8).sqrt()?;
    let root = HPReal::from_rational(x, w + 8).sqrt()?;
    Ok((root * arg.asin()?).with_prec(w))
}

// asin(sqrt(X/(1+X))) / sqrt(X)
fn e_factor(x: &BigRational, w: u32) -> Result<HPReal> {
    let arg = HPReal::from_rational(&(x / (x + BigRational::one())), w + 8).sqrt()?;
    let root = HPReal::from_rational(x, w + 8).sqrt()?;
    Ok((arg.asin()? / root).with_prec(w))
}

/// `F_n(X)` from the explicit finite sum
/// `(1/2)_n [1/n! + 1/(n-1)! sum_{j<n} (-1)^j (1/2)_j/(j+1)! C(n-1,j) Y^{j+1}
///   (T - 1/2 sum_{l=1}^{j} (l-1)!/(1/2)_l Y^{-l})]`, `Y = (X+1)/X`.
///
/// `X = 0` gives 1; negative `X` is outside the real branch.
pub fn f21_special(n: u32, x: &BigRational, p: Precision) -> Result<HPReal> {
    if check_x("f21_special", n, x)? {
        return Ok(HPReal::one(p.bits()));
    }
    let y = (x + BigRational::one()) / x;
    let y_inv = x / (x + BigRational::one());
    let lead = pochhammer_half(n);
    let outer = &lead / BigRational::from_integer(factorial(n - 1));
    let mut a = &lead / BigRational::from_integer(factorial(n));
    let mut b = BigRational::zero();
    let mut lam = BigRational::zero();
    for j in 0..n {
        if j >= 1 {
            lam += BigRational::from_integer(factorial(j - 1)) / pochhammer_half(j) * rpow(&y_inv, j);
        }
        let sign = if j % 2 == 0 { rat(1, 1) } else { rat(-1, 1) };
        let c = sign * pochhammer_half(j) / BigRational::from_integer(factorial(j + 1))
            * BigRational::from_integer(binomial(n as u64 - 1, j as i64))
            * rpow(&y, j + 1)
            * &outer;
        a -= &c * &lam / rat(2, 1);
        b += c;
    }
    assemble("f21_special", &a, &b, |w| t_factor(x, w), p)
}

/// `F_n(X)` as `A(X) + B(X) E(X)`, `E = asin(sqrt(X/(1+X)))/sqrt(X)`, built by
/// exact differentiation of rational functions.
///
/// Starts from `F_1 = (1 + (1+X) E)/2` and steps with
/// `F_{k+1} = (2k+1)/(2k(k+1)) (1+X)^{1-k} d/dX[(1+X)^k F_k]`, using
/// `E' = 1/(2X(1+X)) - E/(2X)`.
pub fn f21_contiguity(n: u32, x: &BigRational, p: Precision) -> Result<HPReal> {
    if check_x("f21_contiguity", n, x)? {
        return Ok(HPReal::one(p.bits()));
    }
    let (a, b) = contiguity_parts(n);
    assemble("f21_contiguity", &a.eval(x), &b.eval(x), |w| e_factor(x, w), p)
}

/// Rational-function coefficients `(A, B)` of `F_n = A + B E`.
pub fn contiguity_parts(n: u32) -> (RatFn, RatFn) {
    let half = rat(1, 2);
    let mut a = RatFn::constant(half.clone());
    let mut b = RatFn::constant(half.clone()).mul_one_plus_x_pow(1);
    let de_rational = RatFn::constant(half.clone()).mul_x_pow(-1).mul_one_plus_x_pow(-1);
    for k in 1..n {
        let ha = a.mul_one_plus_x_pow(k as i32);
        let hb = b.mul_one_plus_x_pow(k as i32);
        // (ha + hb E)' = ha' + hb E' + hb' E
        let da = ha.derivative().add(&hb.mul(&de_rational));
        let db = hb.derivative().sub(&hb.scale(&half).mul_x_pow(-1));
        let c = rat(2 * k as i64 + 1, 2 * k as i64 * (k as i64 + 1));
        let shift = 1 - k as i32;
        a = da.scale(&c).mul_one_plus_x_pow(shift);
        b = db.scale(&c).mul_one_plus_x_pow(shift);
    }
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_rational;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    fn p(bits: u32) -> Precision {
        Precision::new(bits).unwrap()
    }

    fn rel(a: &HPReal, b: &HPReal) -> f64 {
        let d = (a - b).abs();
        if d.is_zero() {
            f64::NEG_INFINITY
        } else {
            d.log2_abs() - b.log2_abs()
        }
    }

    // term ratio of 2F1(-1/2, n; n+1/2; -X): (m - 1/2)(m + n) / ((m + n + 1/2)(m + 1)) * (-X)
    fn direct(n: u32, x: &BigRational, w: u32) -> HPReal {
        let mut term = BigRational::one();
        let mut sum = BigRational::zero();
        let tol = HPReal::pow2(-(w as i64) - 8, w);
        for m in 0.. {
            sum += &term;
            let mm = m as i64;
            term = term
                * rat(2 * mm - 1, 2)
                * rat(mm + n as i64, 1)
                * rat(2, 2 * (mm + n as i64) + 1)
                * rat(1, mm + 1)
                * -x;
            if HPReal::from_rational(&term, w).abs() < tol {
                break;
            }
        }
        HPReal::from_rational(&sum, w)
    }

    #[test]
    fn base_case_examples() {
        // 1/2 + pi/4 and 1/2 (1 + 4 pi / (3 sqrt 3)), mpmath
        let v = f21_special(1, &q("1"), p(256)).unwrap();
        let want = HPReal::parse("1.2853981633974483096156608458198757210492923498437764552437361480769541015715522", 300).unwrap();
        assert!(rel(&v, &want) < -250.0);
        let v = f21_special(1, &q("3"), p(256)).unwrap();
        let want = HPReal::parse("1.7091995761561452337293855050947704881893774987284937170465899569254154540842359", 300).unwrap();
        assert!(rel(&v, &want) < -250.0, "{v}");
        let c = f21_contiguity(1, &q("3"), p(256)).unwrap();
        assert!(rel(&c, &want) < -250.0, "{c}");
    }

    #[test]
    fn zero_and_negative_arguments() {
        assert_eq!(f21_special(4, &q("0"), p(128)).unwrap(), HPReal::one(128));
        assert_eq!(f21_contiguity(4, &q("0"), p(128)).unwrap(), HPReal::one(128));
        assert!(matches!(f21_special(2, &q("-1/2"), p(128)), Err(Error::Domain { .. })));
        assert!(matches!(f21_contiguity(2, &q("-1/2"), p(128)), Err(Error::Domain { .. })));
        assert!(matches!(f21_special(0, &q("1"), p(128)), Err(Error::Domain { .. })));
    }

    #[test]
    fn paths_agree() {
        for n in 1..=8 {
            for x in ["1/3", "1/5", "1", "3", "7", "1/100"] {
                let s = f21_special(n, &q(x), p(200)).unwrap();
                let c = f21_contiguity(n, &q(x), p(200)).unwrap();
                assert!(rel(&s, &c) < -194.0, "n={n} X={x}: {s} vs {c}");
            }
            for x in ["1/3", "1/5", "1/2"] {
                let s = f21_special(n, &q(x), p(160)).unwrap();
                let d = direct(n, &q(x), 200);
                assert!(rel(&s, &d) < -154.0, "n={n} X={x}: {s} vs {d}");
            }
        }
    }

    #[test]
    fn contiguity_parts_are_proper_rational_functions() {
        let (a, b) = contiguity_parts(2);
        let x = q("2/7");
        assert!(!a.is_zero() && !b.is_zero());
        let e = e_factor(&x, 200).unwrap();
        let v = HPReal::from_rational(&a.eval(&x), 200) + e.mul_rational(&b.eval(&x));
        let s = f21_special(2, &x, p(192)).unwrap();
        assert!(rel(&v, &s) < -180.0);
    }
}
