use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Binary floating-point number with an arbitrary-precision mantissa.
///
/// The value is `±mag · 2^exp`. A non-zero `mag` always has exactly `prec`
/// significant bits, so one ulp is `2^exp`. Every arithmetic result is
/// rounded to nearest at the precision of the wider operand.
#[derive(Clone)]
pub struct HPReal {
    neg: bool,
    mag: BigUint,
    exp: i64,
    prec: u32,
}

impl HPReal {
    pub fn zero(prec: u32) -> Self {
        HPReal { neg: false, mag: BigUint::zero(), exp: 0, prec }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self::round(v < 0, BigUint::from(v.unsigned_abs()), 0, prec)
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Self {
        Self::round(v.sign() == Sign::Minus, v.magnitude().clone(), 0, prec)
    }

    /// Nearest value to `p/q` at `prec` bits.
    pub fn from_rational(v: &BigRational, prec: u32) -> Self {
        let num = v.numer();
        if num.is_zero() {
            return Self::zero(prec);
        }
        let n = num.magnitude();
        let d = v.denom().magnitude();
        let shift = prec as i64 + 2 + d.bits() as i64 - n.bits() as i64;
        Self::div_mags(num.sign() == Sign::Minus, n, d, shift.max(0), prec)
    }

    /// Exact `m · 2^e`, rounded to `prec`.
    pub fn from_parts(m: &BigInt, e: i64, prec: u32) -> Self {
        Self::round(m.sign() == Sign::Minus, m.magnitude().clone(), e, prec)
    }

    pub(crate) fn from_f64_exact(v: f64, prec: u32) -> Self {
        if v == 0.0 || !v.is_finite() {
            return Self::zero(prec);
        }
        let bits = v.abs().to_bits();
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 { (frac, -1074) } else { (frac | (1 << 52), raw_exp - 1075) };
        Self::round(v < 0.0, BigUint::from(m), e, prec)
    }

    fn div_mags(neg: bool, n: &BigUint, d: &BigUint, shift: i64, prec: u32) -> Self {
        let (mut q, r) = (n << shift as usize).div_rem(d);
        let mut exp = -shift;
        if !r.is_zero() {
            // sticky bit keeps round-to-nearest honest below the last kept bit
            q = (q << 1usize) | BigUint::one();
            exp -= 1;
        }
        Self::round(neg, q, exp, prec)
    }

    fn round(neg: bool, mag: BigUint, exp: i64, prec: u32) -> Self {
        let n = mag.bits();
        if n == 0 {
            return Self::zero(prec);
        }
        let p = prec as u64;
        if n > p {
            let sh = n - p;
            let mut q = &mag >> sh as usize;
            let mut e = exp + sh as i64;
            if mag.bit(sh - 1) {
                q += 1u32;
                if q.bits() > p {
                    q >>= 1usize;
                    e += 1;
                }
            }
            HPReal { neg, mag: q, exp: e, prec }
        } else {
            let sh = p - n;
            HPReal { neg, mag: mag << sh as usize, exp: exp - sh as i64, prec }
        }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Same value re-rounded to `prec` bits.
    pub fn with_prec(&self, prec: u32) -> Self {
        Self::round(self.neg, self.mag.clone(), self.exp, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.mag.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.neg && !self.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        !self.neg && !self.is_zero()
    }

    pub fn abs(&self) -> Self {
        HPReal { neg: false, ..self.clone() }
    }

    /// Exponent `e` with `2^(e-1) <= |x| < 2^e`; `None` for zero.
    pub fn magnitude_exp(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.exp + self.prec as i64)
    }

    /// One unit in the last place of `self`. For zero, `2^-prec`.
    pub fn ulp(&self) -> Self {
        let e = if self.is_zero() { -(self.prec as i64) } else { self.exp };
        Self::pow2(e, self.prec)
    }

    pub fn pow2(e: i64, prec: u32) -> Self {
        HPReal::round(false, BigUint::one(), e, prec)
    }

    /// Exact multiplication by `2^k`.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        HPReal { exp: self.exp + k, ..self.clone() }
    }

    pub fn mul_rational(&self, r: &BigRational) -> Self {
        let n = self.mul_bigint(r.numer());
        n.div_bigint(r.denom())
    }

    pub fn mul_bigint(&self, v: &BigInt) -> Self {
        let neg = self.neg ^ (v.sign() == Sign::Minus);
        Self::round(neg, &self.mag * v.magnitude(), self.exp, self.prec)
    }

    pub fn div_bigint(&self, v: &BigInt) -> Self {
        assert!(!v.is_zero(), "HPReal division by zero");
        if self.is_zero() {
            return self.clone();
        }
        let neg = self.neg ^ (v.sign() == Sign::Minus);
        let d = v.magnitude();
        let shift = self.prec as i64 + 2 + d.bits() as i64 - self.mag.bits() as i64;
        let q = Self::div_mags(neg, &self.mag, d, shift.max(0), self.prec);
        q.mul_pow2(self.exp)
    }

    pub fn add_rational(&self, r: &BigRational) -> Self {
        self + &HPReal::from_rational(r, self.prec + 8)
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = HPReal::one(self.prec + 16);
        let mut base = self.with_prec(self.prec + 16);
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            base = base.square();
            n >>= 1;
        }
        acc.with_prec(self.prec)
    }

    pub fn recip(&self) -> Self {
        &HPReal::one(self.prec) / self
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.is_negative() {
            return Err(Error::domain("sqrt", format!("negative argument {}", self.to_sci_string(20))));
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let want = 2 * (self.prec as i64 + 2);
        let mut shift = (want - self.mag.bits() as i64).max(0);
        if (self.exp - shift) % 2 != 0 {
            shift += 1;
        }
        let m = &self.mag << shift as usize;
        let mut r = m.sqrt();
        let mut e = (self.exp - shift) / 2;
        if &r * &r != m {
            r = (r << 1usize) | BigUint::one();
            e -= 1;
        }
        Ok(Self::round(false, r, e, self.prec))
    }

    /// Truncated fixed-point image `trunc(self · 2^frac_bits)`.
    pub(crate) fn to_fixed(&self, frac_bits: u32) -> BigInt {
        let sh = self.exp + frac_bits as i64;
        let m = if sh >= 0 { &self.mag << sh as usize } else { &self.mag >> (-sh) as usize };
        let v = BigInt::from(m);
        if self.neg { -v } else { v }
    }

    pub(crate) fn from_fixed(v: &BigInt, frac_bits: u32, prec: u32) -> Self {
        Self::from_parts(v, -(frac_bits as i64), prec)
    }

    /// Exact rational value of this float.
    pub fn to_rational(&self) -> BigRational {
        let m = BigInt::from_biguint(if self.neg { Sign::Minus } else { Sign::Plus }, self.mag.clone());
        if self.exp >= 0 {
            BigRational::from_integer(m << self.exp as usize)
        } else {
            BigRational::new(m, BigInt::one() << (-self.exp) as usize)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let keep = 64u64.min(self.mag.bits());
        let drop = self.mag.bits() - keep;
        let top = (&self.mag >> drop as usize).to_u64().unwrap_or(0) as f64;
        let e = self.exp + drop as i64;
        let v = if e > 2000 {
            f64::INFINITY
        } else if e < -2200 {
            0.0
        } else {
            top * 2f64.powi(e as i32)
        };
        if self.neg { -v } else { v }
    }

    /// Base-2 logarithm of `|x|`, to double precision; `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let keep = 64u64.min(self.mag.bits());
        let drop = self.mag.bits() - keep;
        let top = (&self.mag >> drop as usize).to_u64().unwrap_or(1) as f64;
        top.log2() + (self.exp + drop as i64) as f64
    }

    pub fn signum(&self) -> i32 {
        if self.is_zero() {
            0
        } else if self.neg {
            -1
        } else {
            1
        }
    }

    fn add_impl(&self, other: &HPReal, negate_other: bool) -> HPReal {
        let prec = self.prec.max(other.prec);
        let oneg = other.neg ^ negate_other;
        if other.is_zero() {
            return self.with_prec(prec);
        }
        if self.is_zero() {
            return HPReal::round(oneg, other.mag.clone(), other.exp, prec);
        }
        let ta = self.exp + self.mag.bits() as i64;
        let tb = other.exp + other.mag.bits() as i64;
        let gap = prec as i64 + 4;
        if ta - tb > gap {
            return self.with_prec(prec);
        }
        if tb - ta > gap {
            return HPReal::round(oneg, other.mag.clone(), other.exp, prec);
        }
        let e = self.exp.min(other.exp);
        let a = BigInt::from_biguint(
            if self.neg { Sign::Minus } else { Sign::Plus },
            &self.mag << (self.exp - e) as usize,
        );
        let b = BigInt::from_biguint(
            if oneg { Sign::Minus } else { Sign::Plus },
            &other.mag << (other.exp - e) as usize,
        );
        HPReal::from_parts(&(a + b), e, prec)
    }

    fn mul_impl(&self, other: &HPReal) -> HPReal {
        let prec = self.prec.max(other.prec);
        HPReal::round(self.neg ^ other.neg, &self.mag * &other.mag, self.exp + other.exp, prec)
    }

    fn div_impl(&self, other: &HPReal) -> HPReal {
        assert!(!other.is_zero(), "HPReal division by zero");
        let prec = self.prec.max(other.prec);
        if self.is_zero() {
            return HPReal::zero(prec);
        }
        let shift = prec as i64 + 2 + other.mag.bits() as i64 - self.mag.bits() as i64;
        let q = HPReal::div_mags(self.neg ^ other.neg, &self.mag, &other.mag, shift.max(0), prec);
        q.mul_pow2(self.exp - other.exp)
    }

    /// Decimal string with `digits` significant digits, correctly rounded from
    /// the binary value. Plain notation for moderate exponents, scientific otherwise.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        let (neg, ds, e10) = match self.decimal_digits(digits) {
            None => return "0".to_string(),
            Some(v) => v,
        };
        let sign = if neg { "-" } else { "" };
        if (-6..=40).contains(&e10) {
            if e10 >= 0 {
                let int_len = e10 as usize + 1;
                if ds.len() <= int_len {
                    format!("{sign}{ds}{}", "0".repeat(int_len - ds.len()))
                } else {
                    format!("{sign}{}.{}", &ds[..int_len], &ds[int_len..])
                }
            } else {
                format!("{sign}0.{}{}", "0".repeat((-e10 - 1) as usize), ds)
            }
        } else {
            format!("{sign}{}", sci(&ds, e10))
        }
    }

    /// Always scientific notation, `digits` significant digits.
    pub fn to_sci_string(&self, digits: usize) -> String {
        match self.decimal_digits(digits) {
            None => "0".to_string(),
            Some((neg, ds, e10)) => format!("{}{}", if neg { "-" } else { "" }, sci(&ds, e10)),
        }
    }

    // (sign, digit string of length `digits`, decimal exponent of the first digit)
    fn decimal_digits(&self, digits: usize) -> Option<(bool, String, i64)> {
        if self.is_zero() {
            return None;
        }
        let digits = digits.max(1);
        let x = self.to_rational();
        let x = if self.neg { -x } else { x };
        let mut e10 = (self.log2_abs() * std::f64::consts::LOG10_2).floor() as i64;
        loop {
            let scale = digits as i64 - 1 - e10;
            let scaled = if scale >= 0 {
                &x * BigRational::from_integer(num_traits::pow(BigInt::from(10), scale as usize))
            } else {
                &x / BigRational::from_integer(num_traits::pow(BigInt::from(10), (-scale) as usize))
            };
            let n = round_half_up(&scaled);
            let s = n.to_string();
            if s.len() > digits {
                e10 += 1;
                continue;
            }
            if s.len() < digits {
                e10 -= 1;
                continue;
            }
            return Some((self.neg, s, e10));
        }
    }

    /// Parses a decimal literal (`"1e-30"`, `"-2.5"`, `"17"`) or a rational `"p/q"`.
    pub fn parse(s: &str, prec: u32) -> Result<Self> {
        parse_decimal_rational(s).map(|r| HPReal::from_rational(&r, prec))
    }
}

fn sci(ds: &str, e10: i64) -> String {
    let tail = ds[1..].trim_end_matches('0');
    if tail.is_empty() {
        format!("{}e{}", &ds[..1], e10)
    } else {
        format!("{}.{}e{}", &ds[..1], tail, e10)
    }
}

fn round_half_up(x: &BigRational) -> BigInt {
    let two = BigInt::from(2);
    (x.numer() * &two + x.denom()).div_floor(&(x.denom() * &two))
}

/// Exact rational value of a decimal literal or `"p/q"` string.
pub fn parse_decimal_rational(s: &str) -> Result<BigRational> {
    let err = || Error::Parse { what: "decimal number", input: s.to_string() };
    let t = s.trim();
    if t.contains('/') {
        return crate::exact::parse_rational(t);
    }
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i64>().map_err(|_| err())?),
        None => (t, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(err());
    }
    if !ip.bytes().chain(fp.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(err());
    }
    let digits: BigInt = format!("{ip}{fp}").parse().map_err(|_| err())?;
    let e = exp - fp.len() as i64;
    if e.unsigned_abs() > 100_000 {
        return Err(err());
    }
    let ten = BigInt::from(10);
    let mut v = if e >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, e as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-e) as usize))
    };
    if neg {
        v = -v;
    }
    Ok(v)
}

impl fmt::Display for HPReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(((self.prec as f64) * std::f64::consts::LOG10_2) as usize);
        f.write_str(&self.to_decimal_string(digits))
    }
}

impl fmt::Debug for HPReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HPReal({}, prec={})", self.to_sci_string(30), self.prec)
    }
}

impl PartialEq for HPReal {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for HPReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let d = self.add_impl(other, true);
        Some(d.signum().cmp(&0))
    }
}

impl Neg for HPReal {
    type Output = HPReal;
    fn neg(mut self) -> HPReal {
        if !self.is_zero() {
            self.neg = !self.neg;
        }
        self
    }
}

impl Neg for &HPReal {
    type Output = HPReal;
    fn neg(self) -> HPReal {
        -self.clone()
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&HPReal> for &HPReal {
            type Output = HPReal;
            fn $m(self, rhs: &HPReal) -> HPReal {
                $body(self, rhs)
            }
        }
        impl $tr<HPReal> for HPReal {
            type Output = HPReal;
            fn $m(self, rhs: HPReal) -> HPReal {
                $body(&self, &rhs)
            }
        }
        impl $tr<&HPReal> for HPReal {
            type Output = HPReal;
            fn $m(self, rhs: &HPReal) -> HPReal {
                $body(&self, rhs)
            }
        }
        impl $tr<HPReal> for &HPReal {
            type Output = HPReal;
            fn $m(self, rhs: HPReal) -> HPReal {
                $body(self, &rhs)
            }
        }
    };
}

binop!(Add, add, |a: &HPReal, b: &HPReal| a.add_impl(b, false));
binop!(Sub, sub, |a: &HPReal, b: &HPReal| a.add_impl(b, true));
binop!(Mul, mul, |a: &HPReal, b: &HPReal| a.mul_impl(b));
binop!(Div, div, |a: &HPReal, b: &HPReal| a.div_impl(b));
