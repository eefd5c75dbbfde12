//! Elementary transcendental functions on [`HPReal`].
//!
//! Each function evaluates in fixed point with at least 64 bits beyond the
//! target precision and rounds once at the end, which keeps results inside
//! the 2-ulp contract.

use std::sync::RwLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::real::HPReal;
use crate::error::{Error, Result};

const EXTRA: u32 = 64;

/// Target precision of a computation plus the guard bits used for composite expressions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Precision {
    bits: u32,
    guard_bits: u32,
}

impl Precision {
    pub const MIN_BITS: u32 = 64;
    pub const DEFAULT_GUARD: u32 = 32;

    pub fn new(bits: u32) -> Result<Self> {
        Self::with_guard(bits, Self::DEFAULT_GUARD)
    }

    pub fn with_guard(bits: u32, guard_bits: u32) -> Result<Self> {
        if bits < Self::MIN_BITS {
            return Err(Error::domain("Precision", format!("{bits} bits is below the minimum of 64")));
        }
        Ok(Precision { bits, guard_bits })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn guard_bits(&self) -> u32 {
        self.guard_bits
    }

    /// Bits carried through intermediate steps of composite expressions.
    pub fn working(&self) -> u32 {
        self.bits + self.guard_bits
    }

    /// Decimal digits printed for reports at this precision.
    pub fn report_digits(&self) -> usize {
        (self.bits as f64 * 0.301).floor() as usize
    }

    /// Same target with `extra` more bits.
    pub fn widen(&self, extra: u32) -> Self {
        Precision { bits: self.bits + extra, guard_bits: self.guard_bits }
    }
}

/// Fixed-point constant grown on demand. Readers take the shared lock; the
/// first caller needing more bits recomputes under the write lock.
struct ConstCache {
    slot: RwLock<Option<(u32, BigInt)>>,
    compute: fn(u32) -> BigInt,
}

impl ConstCache {
    const fn new(compute: fn(u32) -> BigInt) -> Self {
        ConstCache { slot: RwLock::new(None), compute }
    }

    fn get(&self, frac_bits: u32) -> BigInt {
        if let Some((bits, v)) = self.slot.read().unwrap().as_ref() {
            if *bits >= frac_bits {
                return v >> (bits - frac_bits) as usize;
            }
        }
        let mut slot = self.slot.write().unwrap();
        if let Some((bits, v)) = slot.as_ref() {
            if *bits >= frac_bits {
                return v >> (bits - frac_bits) as usize;
            }
        }
        let target = frac_bits.next_multiple_of(256);
        let v = (self.compute)(target);
        let out = &v >> (target - frac_bits) as usize;
        *slot = Some((target, v));
        out
    }
}

static PI: ConstCache = ConstCache::new(compute_pi);
static LN2: ConstCache = ConstCache::new(compute_ln2);

fn one_fixed(f: u32) -> BigInt {
    BigInt::one() << f as usize
}

// sum_{j>=0} (-1)^j / ((2j+1) n^(2j+1)) at f fraction bits
fn atan_inv(n: u32, f: u32) -> BigInt {
    let n2 = BigInt::from(n) * n;
    let mut power = one_fixed(f) / n;
    let mut sum = BigInt::zero();
    let mut j = 0u32;
    while !power.is_zero() {
        let term = &power / (2 * j + 1);
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &n2;
        j += 1;
    }
    sum
}

// sum_{j>=0} 1 / ((2j+1) n^(2j+1))
fn atanh_inv(n: u32, f: u32) -> BigInt {
    let n2 = BigInt::from(n) * n;
    let mut power = one_fixed(f) / n;
    let mut sum = BigInt::zero();
    let mut j = 0u32;
    while !power.is_zero() {
        sum += &power / (2 * j + 1);
        power /= &n2;
        j += 1;
    }
    sum
}

fn compute_pi(f: u32) -> BigInt {
    // Machin: pi = 16 atan(1/5) - 4 atan(1/239)
    let g = f + 16;
    let v = atan_inv(5, g) * 16 - atan_inv(239, g) * 4;
    v >> 16usize
}

fn compute_ln2(f: u32) -> BigInt {
    let g = f + 16;
    (atanh_inv(3, g) * 2) >> 16usize
}

pub(crate) fn pi_fixed(f: u32) -> BigInt {
    PI.get(f)
}

fn ln2_fixed(f: u32) -> BigInt {
    LN2.get(f)
}

/// pi rounded to `prec` bits.
pub fn pi_prec(prec: u32) -> HPReal {
    let f = prec + EXTRA;
    HPReal::from_fixed(&pi_fixed(f), f, prec)
}

/// pi at the target precision of `p`.
pub fn pi(p: Precision) -> HPReal {
    pi_prec(p.bits())
}

pub fn ln2_prec(prec: u32) -> HPReal {
    let f = prec + EXTRA;
    HPReal::from_fixed(&ln2_fixed(f), f, prec)
}

// truncates toward zero so series on negative arguments terminate
fn fmul(a: &BigInt, b: &BigInt, f: u32) -> BigInt {
    let p = a * b;
    if p.is_negative() {
        -((-p) >> f as usize)
    } else {
        p >> f as usize
    }
}

fn fdiv(a: &BigInt, b: &BigInt, f: u32) -> BigInt {
    (a << f as usize) / b
}

fn fsqrt(a: &BigInt, f: u32) -> BigInt {
    (a << f as usize).sqrt()
}

impl HPReal {
    /// `e^x` at the precision of `self`.
    pub fn exp(&self) -> Result<HPReal> {
        let prec = self.prec();
        if self.is_zero() {
            return Ok(HPReal::one(prec));
        }
        if self.magnitude_exp().unwrap_or(0) > 40 {
            return Err(Error::domain("exp", format!("argument {} overflows", self.to_sci_string(12))));
        }
        let n = (self.to_f64() / std::f64::consts::LN_2).round() as i64;
        let halvings = ((prec as f64).sqrt() as u32 / 2).max(4);
        let nbits = 64 - n.unsigned_abs().leading_zeros();
        let f = prec + EXTRA + halvings + nbits;
        let r = self.to_fixed(f) - ln2_fixed(f) * n;
        let r = r >> halvings as usize;
        let one = one_fixed(f);
        let mut sum = one.clone();
        let mut term = one;
        let mut j = 1u32;
        loop {
            term = fmul(&term, &r, f) / j;
            if term.is_zero() {
                break;
            }
            sum += &term;
            j += 1;
        }
        for _ in 0..halvings {
            sum = fmul(&sum, &sum, f);
        }
        Ok(HPReal::from_fixed(&sum, f, prec).mul_pow2(n))
    }

    /// Natural logarithm at the precision of `self`.
    pub fn ln(&self) -> Result<HPReal> {
        if !self.is_positive() {
            return Err(Error::domain("ln", format!("non-positive argument {}", self.to_sci_string(12))));
        }
        let prec = self.prec();
        // self = m * 2^e with m in [0.75, 1.5)
        let mut e = self.magnitude_exp().unwrap();
        let mut m = self.mul_pow2(-e);
        if m < HPReal::from_rational(&BigRational::new(3.into(), 4.into()), 8) {
            m = m.mul_pow2(1);
            e -= 1;
        }
        let f0 = prec + EXTRA;
        let d0 = m.to_fixed(f0) - one_fixed(f0);
        let lost = if d0.is_zero() { 0 } else { f0.saturating_sub(d0.bits() as u32) };
        let ebits = 64 - e.unsigned_abs().leading_zeros();
        let f = f0 + lost + ebits;
        let mf = m.to_fixed(f);
        let one = one_fixed(f);
        let u = fdiv(&(&mf - &one), &(&mf + &one), f);
        let u2 = fmul(&u, &u, f);
        let mut power = u;
        let mut sum = BigInt::zero();
        let mut j = 0u32;
        while !power.is_zero() {
            sum += &power / (2 * j + 1);
            power = fmul(&power, &u2, f);
            j += 1;
        }
        let total = sum * 2 + ln2_fixed(f) * e;
        Ok(HPReal::from_fixed(&total, f, prec))
    }

    /// Arctangent at the precision of `self`.
    pub fn atan(&self) -> HPReal {
        let prec = self.prec();
        if self.is_zero() {
            return self.clone();
        }
        let neg = self.is_negative();
        let a = self.abs();
        let one = HPReal::one(prec);
        let v = if a > one {
            let f = prec + EXTRA;
            let inv = HPReal::one(prec + EXTRA) / &a;
            let t = atan_fixed_small(&inv, f);
            HPReal::from_fixed(&((pi_fixed(f) >> 1usize) - t), f, prec)
        } else {
            let lead = (-a.magnitude_exp().unwrap()).max(0) as u32;
            let f = prec + EXTRA + lead;
            HPReal::from_fixed(&atan_fixed_small(&a, f), f, prec)
        };
        if neg { -v } else { v }
    }

    /// Arcsine on `[-1, 1]`.
    pub fn asin(&self) -> Result<HPReal> {
        let prec = self.prec();
        let one = HPReal::one(prec);
        let a = self.abs();
        if a > one {
            return Err(Error::domain("asin", format!("argument {} outside [-1, 1]", self.to_sci_string(20))));
        }
        if a == one {
            let h = pi_prec(prec).mul_pow2(-1);
            return Ok(if self.is_negative() { -h } else { h });
        }
        let w = prec + EXTRA;
        let x = self.with_prec(w);
        let onew = HPReal::one(w);
        let c = ((&onew - &x) * (&onew + &x)).sqrt()?;
        Ok((x / c).atan().with_prec(prec))
    }

    /// Arccosine on `[-1, 1]`.
    pub fn acos(&self) -> Result<HPReal> {
        let prec = self.prec();
        let one = HPReal::one(prec);
        if self.abs() > one {
            return Err(Error::domain("acos", format!("argument {} outside [-1, 1]", self.to_sci_string(20))));
        }
        if *self == -one {
            return Ok(pi_prec(prec));
        }
        // acos x = 2 atan(sqrt((1-x)/(1+x))), well conditioned near x = 1
        let w = prec + EXTRA;
        let x = self.with_prec(w);
        let onew = HPReal::one(w);
        let r = ((&onew - &x) / (&onew + &x)).sqrt()?;
        Ok(r.atan().mul_pow2(1).with_prec(prec))
    }
}

// atan(x) for 0 < x <= 1 in fixed point with f fraction bits.
fn atan_fixed_small(x: &HPReal, f: u32) -> BigInt {
    const HALVINGS: u32 = 8;
    let f2 = f + HALVINGS + 8;
    let one = one_fixed(f2);
    let mut y = x.to_fixed(f2);
    for _ in 0..HALVINGS {
        // atan y = 2 atan(y / (1 + sqrt(1 + y^2)))
        let s = fsqrt(&(&one + fmul(&y, &y, f2)), f2);
        y = fdiv(&y, &(&one + s), f2);
    }
    let y2 = fmul(&y, &y, f2);
    let mut power = y;
    let mut sum = BigInt::zero();
    let mut j = 0u32;
    while !power.is_zero() {
        let term = &power / (2 * j + 1);
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power = fmul(&power, &y2, f2);
        j += 1;
    }
    (sum << HALVINGS as usize) >> (f2 - f) as usize
}

fn at(x: &HPReal, p: Precision) -> HPReal {
    x.with_prec(x.prec().max(p.bits()) + 2)
}

pub fn sqrt(x: &HPReal, p: Precision) -> Result<HPReal> {
    Ok(at(x, p).sqrt()?.with_prec(p.bits()))
}

pub fn exp(x: &HPReal, p: Precision) -> Result<HPReal> {
    Ok(at(x, p).exp()?.with_prec(p.bits()))
}

pub fn ln(x: &HPReal, p: Precision) -> Result<HPReal> {
    Ok(at(x, p).ln()?.with_prec(p.bits()))
}

pub fn asin(x: &HPReal, p: Precision) -> Result<HPReal> {
    Ok(at(x, p).asin()?.with_prec(p.bits()))
}

pub fn acos(x: &HPReal, p: Precision) -> Result<HPReal> {
    Ok(at(x, p).acos()?.with_prec(p.bits()))
}

pub fn atan(x: &HPReal, p: Precision) -> HPReal {
    at(x, p).atan().with_prec(p.bits())
}

/// `x^e` for `x > 0` and rational `e`; integer exponents avoid the exp/ln route.
pub fn pow_rational(x: &HPReal, e: &BigRational, prec: u32) -> Result<HPReal> {
    if e.is_integer() {
        let n = e.numer();
        let mag: u32 = n.abs().try_into().map_err(|_| Error::domain("pow_rational", "exponent too large"))?;
        let r = x.with_prec(prec + 16).powi(mag);
        return Ok(if n.is_negative() { r.recip() } else { r }.with_prec(prec));
    }
    if !x.is_positive() {
        return Err(Error::domain("pow_rational", "non-integer power of a non-positive base"));
    }
    let w = prec + 32;
    let l = x.with_prec(w).ln()?;
    Ok(l.mul_rational(e).exp()?.with_prec(prec))
}

/// `sqrt(z/(4-z)) * asin(sqrt(z)/2)`, the transcendental factor multiplying `R_2`.
pub fn irrational_factor(z: &BigRational, p: Precision) -> Result<HPReal> {
    if !crate::exact::in_open_interval(z, 0, 4) {
        return Err(Error::domain("irrational_factor", format!("z = {z} must lie in (0, 4)")));
    }
    let w = p.working();
    let four = BigRational::from_integer(4.into());
    let ratio = HPReal::from_rational(&(z / (&four - z)), w).sqrt()?;
    let half_root = HPReal::from_rational(z, w).sqrt()?.mul_pow2(-1);
    Ok((ratio * half_root.asin()?).with_prec(p.bits()))
}
