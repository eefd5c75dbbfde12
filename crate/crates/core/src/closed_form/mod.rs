//! Exact `R1`, `R2` and the assembled value `S_k(z) = R1 + R2 * sqrt(z/(4-z)) * asin(sqrt(z)/2)`.
//!
//! Three independent numeric paths are provided: the rational pair plus one
//! transcendental factor, the sum over `2F1(-1/2, n; n+1/2; -X)` special values,
//! and (for `z = 1`) the Borwein–Girgensohn formula.

mod hypergeom;
pub mod ratfunc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{beta_half, binomial, factorial, pochhammer_half, rat, rpow, stirling2_row};
use crate::hp::{irrational_factor, pi_prec, HPReal, Precision};

pub use hypergeom::{f21_contiguity, f21_special};

/// `S_k(z)` for one `(z, k)` in the form `r1 + r2 * irrational_factor(z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedForm {
    pub z: BigRational,
    pub k: u32,
    pub r1: BigRational,
    pub r2: BigRational,
}

pub(crate) fn check_z(func: &'static str, z: &BigRational) -> Result<()> {
    if crate::exact::in_open_interval(z, 0, 4) {
        Ok(())
    } else {
        Err(Error::domain(func, format!("z = {z} must lie in (0, 4)")))
    }
}

impl ClosedForm {
    pub fn new(z: &BigRational, k: u32) -> Result<Self> {
        check_z("ClosedForm", z)?;
        let (r1, r2) = pair(z, k);
        Ok(ClosedForm { z: z.clone(), k, r1, r2 })
    }

    /// `X = z / (4 - z)`.
    pub fn x(&self) -> BigRational {
        &self.z / (rat(4, 1) - &self.z)
    }

    pub fn value(&self, p: Precision) -> Result<HPReal> {
        let z = self.z.clone();
        assemble("s_k_closed", &self.r1, &self.r2, |w| irrational_factor(&z, Precision::new(w)?), p)
    }
}

// Both rational parts in O(k^2) rational operations:
//   R1 = sum_n n! S(k+1,n) X^n [1/n - 1/2 sum_{p>=1} c_p C(n-1,p) L_p]
//   R2 = sum_n n! S(k+1,n) X^n  sum_{p>=0} c_p C(n-1,p)
// with c_p = (-1)^p (1/2)_p/(p+1)! (4/z)^{p+1} and L_p = sum_{l=1}^{p} (l-1)!/(1/2)_l (z/4)^l.
fn pair(z: &BigRational, k: u32) -> (BigRational, BigRational) {
    let x = z / (rat(4, 1) - z);
    let four_over_z = rat(4, 1) / z;
    let z_over_4 = z / rat(4, 1);
    let top = k as usize + 1;
    let mut c = Vec::with_capacity(top);
    let mut lam = Vec::with_capacity(top);
    let mut acc = BigRational::zero();
    for p in 0..top as u32 {
        let sign = if p % 2 == 0 { rat(1, 1) } else { rat(-1, 1) };
        c.push(sign * pochhammer_half(p) / BigRational::from_integer(factorial(p + 1)) * rpow(&four_over_z, p + 1));
        if p >= 1 {
            acc += BigRational::from_integer(factorial(p - 1)) / pochhammer_half(p) * rpow(&z_over_4, p);
        }
        lam.push(acc.clone());
    }
    let row = stirling2_row(k + 1);
    let half = rat(1, 2);
    let mut r1 = BigRational::zero();
    let mut r2 = BigRational::zero();
    let mut xn = BigRational::one();
    for n in 1..=top {
        xn *= &x;
        let mut s1 = rat(1, n as i64);
        let mut s2 = BigRational::zero();
        for p in 0..n {
            let cb = &c[p] * BigRational::from_integer(binomial(n as u64 - 1, p as i64));
            if p >= 1 {
                s1 -= &half * &cb * &lam[p];
            }
            s2 += cb;
        }
        let w = BigRational::from_integer(factorial(n as u32) * &row[n]) * &xn;
        r1 += &w * s1;
        r2 += w * s2;
    }
    (r1, r2)
}

/// Exact rational part `R1(z, k)`.
pub fn r1(z: &BigRational, k: u32) -> Result<BigRational> {
    Ok(ClosedForm::new(z, k)?.r1)
}

/// Exact coefficient `R2(z, k)` of the transcendental factor.
pub fn r2(z: &BigRational, k: u32) -> Result<BigRational> {
    Ok(ClosedForm::new(z, k)?.r2)
}

pub fn s_k_closed(z: &BigRational, k: u32, p: Precision) -> Result<HPReal> {
    ClosedForm::new(z, k)?.value(p)
}

/// `a + b * t` where `t` is a transcendental evaluated at `w` bits by `t(w)`.
///
/// Retries at a wider precision when the two parts cancel, so the result keeps
/// `p.bits()` correct bits regardless of how close `a` and `-b t` are.
pub(crate) fn assemble<F>(func: &'static str, a: &BigRational, b: &BigRational, t: F, p: Precision) -> Result<HPReal>
where
    F: Fn(u32) -> Result<HPReal>,
{
    if b.is_zero() {
        return Ok(HPReal::from_rational(a, p.bits()));
    }
    let need = p.bits() as f64 + 4.0;
    let mut w = p.working();
    for _ in 0..6 {
        let bt = t(w)?.mul_rational(b);
        let av = HPReal::from_rational(a, w);
        let sum = &av + &bt;
        let scale = if a.is_zero() { bt.log2_abs() } else { av.log2_abs().max(bt.log2_abs()) };
        if !sum.is_zero() {
            let lost = (scale - sum.log2_abs()).max(0.0);
            if w as f64 - lost >= need {
                return Ok(sum.with_prec(p.bits()));
            }
            w = p.working() + lost.ceil() as u32 + 16;
        } else {
            w *= 2;
        }
    }
    Err(Error::precision(func, "rational and transcendental parts cancel beyond the precision budget"))
}

/// Sum over the `2F1(-1/2, n; n+1/2; -X)` special values.
pub fn s_k_via_2f1(z: &BigRational, k: u32, p: Precision) -> Result<HPReal> {
    check_z("s_k_via_2f1", z)?;
    let x = z / (rat(4, 1) - z);
    // positive terms, so only rounding accumulates; widen by log2 of the term count
    let extra = 32 - (k + 1).leading_zeros();
    let inner = p.widen(extra + 8);
    let w = inner.working();
    let row = stirling2_row(k + 1);
    let mut total = HPReal::zero(w);
    for n in 1..=k + 1 {
        let coef = BigRational::from_integer(factorial(n) * &row[n as usize]) * beta_half(n)? * rpow(&x, n);
        let f = f21_special(n, &x, inner)?;
        total = total + f.with_prec(w).mul_rational(&coef);
    }
    Ok(total.with_prec(p.bits()))
}

/// `S_k(1)` from the Borwein–Girgensohn formula:
/// `S_k(1) = 1/2 (-1)^{k+1} sum_{j=1}^{k+1} (-1)^j j! S(k+1,j) 3^{-j} C(2j,j)
///   (sum_{i=0}^{j-1} 3^i/((2i+1) C(2i,i)) + 2 pi/(3 sqrt 3))`.
pub fn s_k_z1_borwein(k: u32, p: Precision) -> Result<HPReal> {
    let row = stirling2_row(k + 1);
    let mut a = BigRational::zero();
    let mut b = BigRational::zero();
    let mut inner = BigRational::zero();
    for j in 1..=k + 1 {
        let i = j - 1;
        inner += BigRational::new(
            num_traits::pow(BigInt::from(3), i as usize),
            BigInt::from(2 * i + 1) * binomial(2 * i as u64, i as i64),
        );
        let sign = if j % 2 == 0 { 1 } else { -1 };
        let w = BigRational::new(
            factorial(j) * &row[j as usize] * binomial(2 * j as u64, j as i64) * sign,
            num_traits::pow(BigInt::from(3), j as usize),
        );
        a += &w * &inner;
        b += w;
    }
    let outer = if (k + 1) % 2 == 0 { rat(1, 2) } else { rat(-1, 2) };
    let (a, b) = (a * &outer, b * outer);
    // 2 pi / (3 sqrt 3)
    let t = |w: u32| -> Result<HPReal> {
        let s3 = HPReal::from_i64(3, w + 8).sqrt()?;
        Ok((pi_prec(w + 8).mul_pow2(1) / s3.mul_bigint(&BigInt::from(3))).with_prec(w))
    };
    assemble("s_k_z1_borwein", &a, &b, t, p)
}
