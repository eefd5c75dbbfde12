//! Rational functions of the form `P(X) / (X^a (1+X)^b)` with rational coefficients.
//!
//! This is the only denominator shape that appears when differentiating the
//! `2F1(-1/2, n; n+1/2; -X)` family, so no general polynomial gcd is needed.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFn {
    /// Ascending coefficients of the numerator.
    num: Vec<BigRational>,
    x_pow: u32,
    one_plus_x_pow: u32,
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] += y;
    }
    out
}

fn one_plus_x_power(k: u32) -> Vec<BigRational> {
    (0..=k as i64)
        .map(|j| BigRational::from_integer(crate::exact::binomial(k as u64, j)))
        .collect()
}

fn x_power(k: u32) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); k as usize];
    v.push(BigRational::one());
    v
}

impl RatFn {
    pub fn constant(c: BigRational) -> Self {
        RatFn { num: vec![c], x_pow: 0, one_plus_x_pow: 0 }.normalized()
    }

    pub fn poly(coeffs: Vec<BigRational>) -> Self {
        RatFn { num: coeffs, x_pow: 0, one_plus_x_pow: 0 }.normalized()
    }

    pub fn zero() -> Self {
        RatFn { num: Vec::new(), x_pow: 0, one_plus_x_pow: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    /// Multiplies by `(1+X)^k` for any integer `k`.
    pub fn mul_one_plus_x_pow(&self, k: i32) -> Self {
        if k >= 0 {
            RatFn {
                num: poly_mul(&self.num, &one_plus_x_power(k as u32)),
                ..self.clone()
            }
            .normalized()
        } else {
            RatFn { one_plus_x_pow: self.one_plus_x_pow + k.unsigned_abs(), ..self.clone() }.normalized()
        }
    }

    /// Multiplies by `X^k` for any integer `k`.
    pub fn mul_x_pow(&self, k: i32) -> Self {
        if k >= 0 {
            RatFn { num: poly_mul(&self.num, &x_power(k as u32)), ..self.clone() }.normalized()
        } else {
            RatFn { x_pow: self.x_pow + k.unsigned_abs(), ..self.clone() }.normalized()
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        RatFn { num: self.num.iter().map(|v| v * c).collect(), ..self.clone() }.normalized()
    }

    pub fn mul(&self, other: &RatFn) -> Self {
        RatFn {
            num: poly_mul(&self.num, &other.num),
            x_pow: self.x_pow + other.x_pow,
            one_plus_x_pow: self.one_plus_x_pow + other.one_plus_x_pow,
        }
        .normalized()
    }

    pub fn add(&self, other: &RatFn) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let a = self.x_pow.max(other.x_pow);
        let b = self.one_plus_x_pow.max(other.one_plus_x_pow);
        let lift = |f: &RatFn| {
            let n = poly_mul(&f.num, &x_power(a - f.x_pow));
            poly_mul(&n, &one_plus_x_power(b - f.one_plus_x_pow))
        };
        RatFn { num: poly_add(&lift(self), &lift(other)), x_pow: a, one_plus_x_pow: b }.normalized()
    }

    pub fn sub(&self, other: &RatFn) -> Self {
        self.add(&other.scale(&-BigRational::one()))
    }

    /// d/dX.
    pub fn derivative(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        // (P/(X^a (1+X)^b))' = (P' X (1+X) - P (a (1+X) + b X)) / (X^{a+1} (1+X)^{b+1})
        let dp: Vec<BigRational> = self
            .num
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
            .collect();
        let x_one_plus_x = vec![BigRational::zero(), BigRational::one(), BigRational::one()];
        let a = BigRational::from_integer(self.x_pow.into());
        let b = BigRational::from_integer(self.one_plus_x_pow.into());
        let lin = vec![a.clone(), &a + &b];
        let first = poly_mul(&dp, &x_one_plus_x);
        let second: Vec<BigRational> = poly_mul(&self.num, &lin).into_iter().map(|c| -c).collect();
        RatFn {
            num: poly_add(&first, &second),
            x_pow: self.x_pow + 1,
            one_plus_x_pow: self.one_plus_x_pow + 1,
        }
        .normalized()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.num.iter().rev() {
            acc = acc * x + c;
        }
        let d = crate::exact::rpow(x, self.x_pow)
            * crate::exact::rpow(&(x + BigRational::one()), self.one_plus_x_pow);
        acc / d
    }

    fn normalized(mut self) -> Self {
        while self.num.last().is_some_and(|c| c.is_zero()) {
            self.num.pop();
        }
        if self.num.is_empty() {
            return Self::zero();
        }
        while self.x_pow > 0 && self.num[0].is_zero() {
            self.num.remove(0);
            self.x_pow -= 1;
        }
        while self.one_plus_x_pow > 0 && self.num.len() > 1 && eval_poly(&self.num, &-BigRational::one()).is_zero() {
            self.num = divide_by_x_plus_one(&self.num);
            self.one_plus_x_pow -= 1;
        }
        self
    }
}

fn eval_poly(p: &[BigRational], x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

// synthetic division by (X + 1); caller guarantees P(-1) = 0
fn divide_by_x_plus_one(p: &[BigRational]) -> Vec<BigRational> {
    let n = p.len() - 1;
    let mut q = vec![BigRational::zero(); n];
    let mut carry = BigRational::zero();
    for i in (1..=n).rev() {
        carry = &p[i] - &carry;
        q[i - 1] = carry.clone();
    }
    q
}
