//! Truncated power series in `t` and the exponential generating functions
//! `G(z,t) = sum_k S_k(z) t^k/k!` and its parts `rho1`, `rho2`.
//!
//! With `w = z e^t`:
//!   G    = w/(4-w) + 4 sqrt(w) (4-w)^{-3/2} asin(sqrt(w)/2)
//!   rho1 = w/(4-w) + 4 sqrt(w) (4-w)^{-3/2} (asin(sqrt(w)/2) - asin(sqrt(z)/2))
//!   rho2 = 4 sqrt(4-z) e^{t/2} (4-w)^{-3/2}

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::closed_form::check_z;
use crate::error::{Error, Result};
use crate::exact::rat;
use crate::hp::{pi_prec, pow_rational, HPReal, Precision};

/// Coefficients `c_0 .. c_{order-1}` of a power series truncated at `order`.
///
/// `budget` is a coarse count of rounding steps (in ulps of the working
/// precision) that each coefficient may have accumulated.
#[derive(Clone, Debug)]
pub struct TaylorSeries {
    coeffs: Vec<HPReal>,
    budget: u64,
    prec: u32,
}

impl TaylorSeries {
    pub fn from_coeffs(coeffs: Vec<HPReal>, prec: u32) -> Self {
        let coeffs = coeffs.into_iter().map(|c| c.with_prec(prec)).collect();
        TaylorSeries { coeffs, budget: 1, prec }
    }

    pub fn constant(c: HPReal, order: usize) -> Self {
        let prec = c.prec();
        let mut coeffs = vec![HPReal::zero(prec); order];
        if order > 0 {
            coeffs[0] = c;
        }
        TaylorSeries { coeffs, budget: 0, prec }
    }

    /// The series `t`.
    pub fn variable(order: usize, prec: u32) -> Self {
        let mut s = Self::constant(HPReal::zero(prec), order);
        if order > 1 {
            s.coeffs[1] = HPReal::one(prec);
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[HPReal] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> &HPReal {
        &self.coeffs[j]
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    fn with(&self, coeffs: Vec<HPReal>, budget: u64) -> Self {
        TaylorSeries { coeffs, budget, prec: self.prec }
    }

    fn check_orders(&self, other: &Self) {
        assert_eq!(self.order(), other.order(), "series orders differ");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_orders(other);
        let c = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        self.with(c, self.budget + other.budget + 4)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_orders(other);
        let c = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        self.with(c, self.budget + other.budget + 4)
    }

    pub fn scale(&self, s: &HPReal) -> Self {
        let s = s.with_prec(self.prec);
        self.with(self.coeffs.iter().map(|c| c * &s).collect(), self.budget + 4)
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        self.with(self.coeffs.iter().map(|c| c.mul_rational(r)).collect(), self.budget + 4)
    }

    pub fn add_constant(&self, r: &BigRational) -> Self {
        let mut c = self.coeffs.clone();
        if let Some(c0) = c.first_mut() {
            *c0 = c0.add_rational(r);
        }
        self.with(c, self.budget + 4)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_orders(other);
        let n = self.order();
        let mut out = vec![HPReal::zero(self.prec); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n - i).enumerate() {
                out[i + j] = &out[i + j] + a * b;
            }
        }
        self.with(out, self.budget + other.budget + 4)
    }

    pub fn reciprocal(&self) -> Result<Self> {
        self.pow_rational(&rat(-1, 1))
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.order() > 0 && !self.coeffs[0].is_positive() {
            return Err(Error::domain("TaylorSeries::sqrt", "constant term must be positive"));
        }
        self.pow_rational(&rat(1, 2))
    }

    /// `self^alpha` by the recurrence `n a0 b_n = sum_{j=1}^{n} ((alpha+1) j - n) a_j b_{n-j}`.
    ///
    /// Integer powers accept any nonzero constant term; other powers need it positive.
    pub fn pow_rational(&self, alpha: &BigRational) -> Result<Self> {
        let n = self.order();
        if n == 0 {
            return Ok(self.clone());
        }
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::domain("TaylorSeries::pow_rational", "constant term is zero"));
        }
        let b0 = pow_rational(a0, alpha, self.prec)?;
        let inv_a0 = a0.recip();
        let mut b = vec![b0];
        let alpha1 = alpha + BigRational::one();
        for m in 1..n {
            let mut acc = HPReal::zero(self.prec);
            for j in 1..=m {
                let f = &alpha1 * rat(j as i64, 1) - rat(m as i64, 1);
                if f.is_zero() || self.coeffs[j].is_zero() {
                    continue;
                }
                acc = acc + (&self.coeffs[j] * &b[m - j]).mul_rational(&f);
            }
            b.push((acc * &inv_a0).div_bigint(&BigInt::from(m)));
        }
        Ok(self.with(b, self.budget + 4 * n as u64 + 8))
    }

    /// `exp(self)` by `n b_n = sum_{j=1}^{n} j a_j b_{n-j}`.
    pub fn exp(&self) -> Result<Self> {
        let n = self.order();
        if n == 0 {
            return Ok(self.clone());
        }
        let mut b = vec![self.coeffs[0].exp()?];
        for m in 1..n {
            let mut acc = HPReal::zero(self.prec);
            for j in 1..=m {
                acc = acc + (&self.coeffs[j] * &b[m - j]).mul_bigint(&BigInt::from(j));
            }
            b.push(acc.div_bigint(&BigInt::from(m)));
        }
        Ok(self.with(b, self.budget + 4 * n as u64 + 8))
    }

    /// Antiderivative with zero constant term, same order (the top coefficient is dropped).
    pub fn integrate(&self) -> Self {
        let n = self.order();
        let mut out = vec![HPReal::zero(self.prec); n];
        for j in 1..n {
            out[j] = self.coeffs[j - 1].div_bigint(&BigInt::from(j));
        }
        self.with(out, self.budget + 4)
    }

    /// Derivative; the result has one order less.
    pub fn derivative(&self) -> Self {
        let out = self.coeffs.iter().enumerate().skip(1).map(|(j, c)| c.mul_bigint(&BigInt::from(j))).collect();
        self.with(out, self.budget + 4)
    }

    fn truncate(&self, order: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.truncate(order);
        self.with(c, self.budget)
    }

    fn pad(&self, order: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.resize(order, HPReal::zero(self.prec));
        self.with(c, self.budget)
    }

    /// `k! c_k` for every coefficient, rounded to `bits`.
    pub fn egf_values(&self, bits: u32) -> Vec<HPReal> {
        let mut fact = BigInt::one();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if k > 0 {
                    fact *= k;
                }
                c.mul_bigint(&fact).with_prec(bits)
            })
            .collect()
    }
}

/// `e^{ct}`: coefficients `c^j / j!`.
pub fn series_exp_t(c: &BigRational, order: usize, p: Precision) -> TaylorSeries {
    let w = p.working();
    let mut coeffs = Vec::with_capacity(order);
    let mut r = BigRational::one();
    for j in 0..order {
        if j > 0 {
            r = r * c / rat(j as i64, 1);
        }
        coeffs.push(HPReal::from_rational(&r, w));
    }
    TaylorSeries { coeffs, budget: 1, prec: w }
}

/// `asin(u(t))` as `asin(u0) + int_0^t u'(s) / sqrt(1 - u(s)^2) ds`.
pub fn asin_compose(u: &TaylorSeries) -> Result<TaylorSeries> {
    let n = u.order();
    if n == 0 {
        return Ok(u.clone());
    }
    let u0 = &u.coeffs[0];
    if u0.abs() >= HPReal::one(u.prec) {
        return Err(Error::domain("asin_compose", format!("|u(0)| = {} is not below 1", u0.abs().to_sci_string(8))));
    }
    let c0 = u0.asin()?;
    if n == 1 {
        return Ok(TaylorSeries::constant(c0, 1));
    }
    let du = u.derivative();
    let one_minus = TaylorSeries::constant(HPReal::one(u.prec), n - 1).sub(&u.truncate(n - 1).mul(&u.truncate(n - 1)));
    let rs = one_minus.pow_rational(&rat(-1, 2))?;
    let mut out = du.mul(&rs).pad(n).integrate();
    out.coeffs[0] = c0;
    out.budget += 4;
    Ok(out)
}

struct Parts {
    // w/(4-w)
    rational: TaylorSeries,
    // 4 sqrt(w) (4-w)^{-3/2}
    front: TaylorSeries,
    // asin(sqrt(w)/2)
    arc: TaylorSeries,
}

fn working(p: Precision, order: usize) -> Precision {
    // coefficient sums of length `order` lose about log2(order) bits each step
    p.widen(2 * (usize::BITS - order.leading_zeros()) + 16)
}

fn parts(z: &BigRational, order: usize, p: Precision) -> Result<Parts> {
    let w_ = p.working();
    let e_t = series_exp_t(&rat(1, 1), order, p);
    let w = e_t.scale_rational(z);
    let four_minus = w.scale_rational(&rat(-1, 1)).add_constant(&rat(4, 1));
    let rational = w.mul(&four_minus.reciprocal()?);
    let root_z = HPReal::from_rational(z, w_ + 8).sqrt()?.with_prec(w_);
    let root_w = series_exp_t(&rat(1, 2), order, p).scale(&root_z);
    let front = root_w.mul(&four_minus.pow_rational(&rat(-3, 2))?).scale_rational(&rat(4, 1));
    let arc = asin_compose(&root_w.scale_rational(&rat(1, 2)))?;
    Ok(Parts { rational, front, arc })
}

/// `[S_0(z), S_1(z), ..., S_kmax(z)]` from the Taylor coefficients of `G(z, t)`.
pub fn g_coeffs(z: &BigRational, kmax: usize, p: Precision) -> Result<Vec<HPReal>> {
    check_z("g_coeffs", z)?;
    let order = kmax + 1;
    let pr = parts(z, order, working(p, order))?;
    Ok(pr.rational.add(&pr.front.mul(&pr.arc)).egf_values(p.bits()))
}

/// `[R1(z,0), ..., R1(z,kmax)]` from the Taylor coefficients of `rho1(z, t)`.
pub fn rho1_coeffs(z: &BigRational, kmax: usize, p: Precision) -> Result<Vec<HPReal>> {
    check_z("rho1_coeffs", z)?;
    let order = kmax + 1;
    let pr = parts(z, order, working(p, order))?;
    // asin(sqrt(w)/2) - asin(sqrt(z)/2): the constants cancel exactly
    let mut diff = pr.arc.clone();
    diff.coeffs[0] = HPReal::zero(diff.prec);
    Ok(pr.rational.add(&pr.front.mul(&diff)).egf_values(p.bits()))
}

/// `[R2(z,0), ..., R2(z,kmax)]` from the Taylor coefficients of `rho2(z, t)`.
pub fn rho2_coeffs(z: &BigRational, kmax: usize, p: Precision) -> Result<Vec<HPReal>> {
    check_z("rho2_coeffs", z)?;
    let order = kmax + 1;
    let wp = working(p, order);
    let w_ = wp.working();
    let four_minus = series_exp_t(&rat(1, 1), order, wp).scale_rational(&-z.clone()).add_constant(&rat(4, 1));
    let root = HPReal::from_rational(&(rat(4, 1) - z), w_ + 8).sqrt()?.with_prec(w_);
    let s = series_exp_t(&rat(1, 2), order, wp)
        .mul(&four_minus.pow_rational(&rat(-3, 2))?)
        .scale(&root)
        .scale_rational(&rat(4, 1));
    Ok(s.egf_values(p.bits()))
}

/// `rho1(z, t)` at a point, in the simplified form used by [`rho1_coeffs`].
pub fn rho1_point(z: &BigRational, t: &BigRational, p: Precision) -> Result<HPReal> {
    let (w, front, _) = rho1_point_parts(z, t, p)?;
    let arc_w = w.sqrt()?.mul_pow2(-1).asin()?;
    let arc_z = HPReal::from_rational(z, front.prec()).sqrt()?.mul_pow2(-1).asin()?;
    let four = HPReal::from_i64(4, w.prec());
    Ok((&w / (&four - &w) + front.mul_bigint(&BigInt::from(4)) * (arc_w - arc_z)).with_prec(p.bits()))
}

/// `rho1(z, t)` at a point, in the acos/asin product form
/// `w/(4-w) + (8/pi) sqrt(w)/(4-w)^{3/2} (asin(sqrt(w)/2) acos(sqrt(z)/2) - acos(sqrt(w)/2) asin(sqrt(z)/2))`
/// (radical read as `sqrt(w) / (4-w)^{3/2}`).
pub fn rho1_point_mixed(z: &BigRational, t: &BigRational, p: Precision) -> Result<HPReal> {
    let (w, front, wp) = rho1_point_parts(z, t, p)?;
    let hw = w.sqrt()?.mul_pow2(-1);
    let hz = HPReal::from_rational(z, wp).sqrt()?.mul_pow2(-1);
    let bracket = hw.asin()? * hz.acos()? - hw.acos()? * hz.asin()?;
    let four = HPReal::from_i64(4, wp);
    let pre = front.mul_bigint(&BigInt::from(8)) / pi_prec(wp);
    Ok((&w / (&four - &w) + pre * bracket).with_prec(p.bits()))
}

// (w, sqrt(w) (4-w)^{-3/2}, working bits)
fn rho1_point_parts(z: &BigRational, t: &BigRational, p: Precision) -> Result<(HPReal, HPReal, u32)> {
    check_z("rho1_point", z)?;
    let wp = p.working() + 16;
    let w = HPReal::from_rational(t, wp).exp()?.mul_rational(z);
    let four = HPReal::from_i64(4, wp);
    if w >= four {
        return Err(Error::domain("rho1_point", "z e^t must stay below 4"));
    }
    let front = w.sqrt()? * pow_rational(&(&four - &w), &rat(-3, 2), wp)?;
    Ok((w, front, wp))
}
