//! Large-`k` behaviour of `R1`, `R2`, the limit of `R1/R2`, and the decay rate
//! of `|R1/R2 - limit|`.

use num_rational::BigRational;

use crate::closed_form::{check_z, ClosedForm};
use crate::error::{Error, Result};
use crate::exact::{factorial, rat};
use crate::hp::{pi_prec, HPReal, Precision};

/// An exact value next to its asymptotic estimate.
#[derive(Clone, Debug)]
pub struct AsymRow {
    pub k: u32,
    pub exact: HPReal,
    pub estimate: HPReal,
    /// `exact / estimate`
    pub ratio: HPReal,
}

/// `k! / s0^{k+1}` with `s0 = ln(4/z)`.
fn growth(z: &BigRational, k: u32, w: u32) -> Result<HPReal> {
    let s0 = HPReal::from_rational(&(rat(4, 1) / z), w).ln()?;
    Ok(HPReal::from_bigint(&factorial(k), w) / s0.powi(k + 1))
}

fn check_k(func: &'static str, z: &BigRational, k: u32) -> Result<()> {
    check_z(func, z)?;
    if k == 0 {
        return Err(Error::domain(func, "k must be at least 1"));
    }
    Ok(())
}

// sqrt(e/(e-1))
fn c_e(w: u32) -> Result<HPReal> {
    let e = HPReal::one(w).exp()?;
    (&e / (&e - HPReal::one(w))).sqrt()
}

/// `k!/ln(4/z)^{k+1} * (2/pi) * sqrt(e(4-z)/(z(e-1)))`.
pub fn r2_asym(z: &BigRational, k: u32, p: Precision) -> Result<HPReal> {
    check_k("r2_asym", z, k)?;
    let w = p.working();
    let pi = pi_prec(w);
    let c = c_e(w)? * HPReal::from_rational(&((rat(4, 1) - z) / z), w).sqrt()?;
    Ok((growth(z, k, w)? * c.mul_pow2(1) / pi).with_prec(p.bits()))
}

/// `k!/ln(4/z)^{k+1} * (sqrt2 + (2/pi)(sqrt(e/(e-1)) - sqrt2) acos(sqrt(z)/2) - (2^{3/2}/pi) asin(sqrt(z)/2))`.
pub fn r1_asym(z: &BigRational, k: u32, p: Precision) -> Result<HPReal> {
    check_k("r1_asym", z, k)?;
    Ok((growth(z, k, p.working())? * r1_asym_constant(z, p.working())?).with_prec(p.bits()))
}

fn r1_asym_constant(z: &BigRational, w: u32) -> Result<HPReal> {
    let pi = pi_prec(w);
    let sqrt2 = HPReal::from_i64(2, w).sqrt()?;
    let h = HPReal::from_rational(z, w).sqrt()?.mul_pow2(-1);
    let first = (c_e(w)? - &sqrt2).mul_pow2(1) * h.acos()? / &pi;
    let second = sqrt2.mul_pow2(1) * h.asin()? / &pi;
    Ok(&sqrt2 + first - second)
}

/// Exact `R2(z,k)` against [`r2_asym`] for each `k`.
pub fn r2_asym_rows(z: &BigRational, ks: &[u32], p: Precision) -> Result<Vec<AsymRow>> {
    ks.iter()
        .map(|&k| {
            let exact = HPReal::from_rational(&ClosedForm::new(z, k)?.r2, p.bits());
            let estimate = r2_asym(z, k, p)?;
            let ratio = &exact / &estimate;
            Ok(AsymRow { k, exact, estimate, ratio })
        })
        .collect()
}

/// Exact `R1(z,k)` against [`r1_asym`] for each `k`.
pub fn r1_asym_rows(z: &BigRational, ks: &[u32], p: Precision) -> Result<Vec<AsymRow>> {
    ks.iter()
        .map(|&k| {
            let exact = HPReal::from_rational(&ClosedForm::new(z, k)?.r1, p.bits());
            let estimate = r1_asym(z, k, p)?;
            let ratio = &exact / &estimate;
            Ok(AsymRow { k, exact, estimate, ratio })
        })
        .collect()
}

/// Limit of `R1/R2` and the right-hand side of the limit relation.
#[derive(Clone, Debug)]
pub struct RatioLimit {
    /// `sqrt(z/(4-z)) acos(sqrt(z)/2)`
    pub limit: HPReal,
    /// `limit - sqrt(z/(4-z)) asin(sqrt(z)/2) = sqrt(z/(4-z)) (acos - asin)`
    pub rhs: HPReal,
}

pub fn ratio_limit(z: &BigRational, p: Precision) -> Result<RatioLimit> {
    check_z("ratio_limit", z)?;
    let w = p.working();
    let root = HPReal::from_rational(&(z / (rat(4, 1) - z)), w).sqrt()?;
    let h = HPReal::from_rational(z, w).sqrt()?.mul_pow2(-1);
    let ac = h.acos()?;
    let rhs = &root * (&ac - h.asin()?);
    Ok(RatioLimit { limit: (root * ac).with_prec(p.bits()), rhs: rhs.with_prec(p.bits()) })
}

/// `|R1(z,k)/R2(z,k) - limit|` evaluated from the exact rationals.
pub fn ratio_residual(z: &BigRational, k: u32, p: Precision) -> Result<HPReal> {
    let cf = ClosedForm::new(z, k)?;
    let w = p.working();
    let limit = ratio_limit(z, Precision::new(w)?)?.limit;
    let r = HPReal::from_rational(&(&cf.r1 / &cf.r2), w);
    let res = (r - &limit).abs();
    if res.is_zero() || res.log2_abs() < limit.log2_abs() - (p.bits() as f64 - 16.0) {
        return Err(Error::precision(
            "ratio_residual",
            format!("residual at k = {k} is below the resolution of {} bits; raise the precision", p.bits()),
        ));
    }
    Ok(res.with_prec(p.bits()))
}

/// Residuals over a `k` window and their fitted geometric decay rate.
#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub zvalue: BigRational,
    pub rows: Vec<(u32, HPReal)>,
    /// `e^{-slope}` of the regression of ln(residual) on `k` over the envelope points.
    pub fitted_rate: HPReal,
    /// Same regression over every point.
    pub plain_rate: HPReal,
    /// `sqrt(s0^2 + 4 pi^2)/s0`, `s0 = ln(4/z)`.
    pub target_rate: HPReal,
    /// `k` values of the envelope points used by `fitted_rate`.
    pub envelope_ks: Vec<u32>,
    /// Set when `z != 2`, where the target rate is a generalisation of the `z = 2` statement.
    pub extrapolated: bool,
}

/// `sqrt(s0^2 + 4 pi^2)/s0`: ratio of the moduli of the nearest singularities `s0` and `s0 +- 2 pi i`.
pub fn target_rate(z: &BigRational, p: Precision) -> Result<HPReal> {
    check_z("target_rate", z)?;
    let w = p.working();
    let s0 = HPReal::from_rational(&(rat(4, 1) / z), w).ln()?;
    let two_pi = pi_prec(w).mul_pow2(1);
    Ok(((s0.square() + two_pi.square()).sqrt()? / s0).with_prec(p.bits()))
}

fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Points whose residual is at least every later residual: the upper envelope
/// of a decaying sequence with oscillating phase.
fn envelope(rows: &[(u32, f64)]) -> Vec<(u32, f64)> {
    let mut out = Vec::new();
    let mut best = f64::NEG_INFINITY;
    for &(k, v) in rows.iter().rev() {
        if v >= best {
            best = v;
            out.push((k, v));
        }
    }
    out.reverse();
    out
}

pub fn dyson_rate_fit(z: &BigRational, kmin: u32, kmax: u32, p: Precision) -> Result<ConvergenceReport> {
    check_z("dyson_rate_fit", z)?;
    if kmin < 2 || kmax <= kmin {
        return Err(Error::domain("dyson_rate_fit", format!("need 2 <= kmin < kmax, got {kmin}..{kmax}")));
    }
    let rows: Vec<(u32, HPReal)> =
        (kmin..=kmax).map(|k| Ok((k, ratio_residual(z, k, p)?))).collect::<Result<_>>()?;
    let logs: Vec<(u32, f64)> = rows.iter().map(|(k, r)| (*k, r.log2_abs() * std::f64::consts::LN_2)).collect();
    let env = envelope(&logs);
    let as_points = |v: &[(u32, f64)]| v.iter().map(|&(k, y)| (k as f64, y)).collect::<Vec<_>>();
    let plain_rate = (-slope(&as_points(&logs))).exp();
    let env_rate = if env.len() >= 2 { (-slope(&as_points(&env))).exp() } else { plain_rate };
    let to_hp = |x: f64| HPReal::from_f64_exact(x, 64);
    Ok(ConvergenceReport {
        zvalue: z.clone(),
        rows,
        fitted_rate: to_hp(env_rate),
        plain_rate: to_hp(plain_rate),
        target_rate: target_rate(z, p)?,
        envelope_ks: env.iter().map(|e| e.0).collect(),
        extrapolated: *z != rat(2, 1),
    })
}

/// `r1_asym / r2_asym`, which does not depend on `k`.
pub fn asym_ratio(z: &BigRational, k: u32, p: Precision) -> Result<HPReal> {
    let w = Precision::new(p.working())?;
    Ok((r1_asym(z, k, w)? / r2_asym(z, k, w)?).with_prec(p.bits()))
}
