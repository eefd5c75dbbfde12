//! Double-exponential (tanh-sinh) quadrature on `[-1, 1]`.
//!
//! Abscissae carry `1 - x` and `1 + x` computed directly from the substitution,
//! so integrands with algebraic endpoint behaviour never see the cancellation
//! in `1 - x` near the ends of the interval.

use super::funcs::pi_prec;
use super::real::HPReal;
use crate::error::{Error, Result};

/// One quadrature node.
#[derive(Clone, Debug)]
pub struct Abscissa {
    pub x: HPReal,
    pub one_minus_x: HPReal,
    pub one_plus_x: HPReal,
}

impl Abscissa {
    /// `1 - x^2` without cancellation.
    pub fn one_minus_x2(&self) -> HPReal {
        &self.one_minus_x * &self.one_plus_x
    }
}

#[derive(Clone, Debug)]
pub struct QuadResult {
    pub value: HPReal,
    /// Difference between the last two refinement levels.
    pub error_estimate: HPReal,
    pub levels: u32,
    pub evaluations: usize,
}

const MAX_LEVEL: u32 = 12;
const MAX_T: f64 = 7.0;

struct Node {
    weight: HPReal,
    plus: Abscissa,
    minus: Abscissa,
}

fn node(t: &HPReal, half_pi: &HPReal, w: u32) -> Result<Node> {
    let one = HPReal::one(w);
    let et = t.exp()?;
    let inv = et.recip();
    let sinh_t = (&et - &inv).mul_pow2(-1);
    let cosh_t = (&et + &inv).mul_pow2(-1);
    let u = half_pi * &sinh_t;
    let big = u.mul_pow2(1).exp()?; // e^{2u}
    let denom = &big + &one;
    let one_minus = HPReal::from_i64(2, w) / &denom;
    let one_plus = big.mul_pow2(1) / &denom;
    let x = (&big - &one) / &denom;
    // (pi/2) cosh t / cosh^2 u, cosh^2 u = (e^{2u} + 1)^2 / (4 e^{2u})
    let weight = half_pi * &cosh_t * big.mul_pow2(2) / denom.square();
    Ok(Node {
        weight,
        plus: Abscissa { x: x.clone(), one_minus_x: one_minus.clone(), one_plus_x: one_plus.clone() },
        minus: Abscissa { x: -x, one_minus_x: one_plus, one_plus_x: one_minus },
    })
}

/// Integrates `f` over `[-1, 1]` until two successive levels agree to `tol`.
///
/// `prec` is the working precision of the nodes and the running sums.
pub fn tanh_sinh<F>(mut f: F, prec: u32, tol: &HPReal) -> Result<QuadResult>
where
    F: FnMut(&Abscissa) -> Result<HPReal>,
{
    let w = prec;
    let half_pi = pi_prec(w).mul_pow2(-1);
    let zero = HPReal::zero(w);
    let centre = Abscissa { x: zero.clone(), one_minus_x: HPReal::one(w), one_plus_x: HPReal::one(w) };
    let mut evaluations = 1usize;
    // level-0 raw sum with h = 1
    let mut raw = &half_pi * f(&centre)?;
    let mut add_nodes = |raw: &mut HPReal, start: i64, step: i64, h_exp: i64, evals: &mut usize| -> Result<()> {
        let mut j = start;
        let mut quiet = 0;
        loop {
            let t = HPReal::from_i64(j, w).mul_pow2(h_exp);
            if t.to_f64() > MAX_T {
                break;
            }
            let nd = node(&t, &half_pi, w)?;
            let term = &nd.weight * (f(&nd.plus)? + f(&nd.minus)?);
            *evals += 2;
            let small = term.is_zero()
                || (!raw.is_zero() && term.log2_abs() < raw.log2_abs() - (w as f64 + 8.0));
            *raw = &*raw + &term;
            if small && t.to_f64() > 1.0 {
                quiet += 1;
                if quiet >= 2 {
                    break;
                }
            } else {
                quiet = 0;
            }
            j += step;
        }
        Ok(())
    };
    add_nodes(&mut raw, 1, 1, 0, &mut evaluations)?;
    let mut prev = raw.clone();
    for level in 1..=MAX_LEVEL {
        // raw holds sum over nodes at spacing 2^-(level-1); add the odd multiples of 2^-level
        add_nodes(&mut raw, 1, 2, -(level as i64), &mut evaluations)?;
        let value = raw.mul_pow2(-(level as i64));
        let err = (&value - &prev).abs();
        if level >= 3 && err <= *tol {
            return Ok(QuadResult { value, error_estimate: err, levels: level, evaluations });
        }
        prev = value;
    }
    Err(Error::precision(
        "tanh_sinh",
        format!("no convergence to {} after {MAX_LEVEL} levels", tol.to_sci_string(6)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn polynomial_and_rational_integrands() {
        let w = 160;
        let tol = HPReal::pow2(-140, w);
        // int_{-1}^{1} x^2 dx = 2/3
        let r = tanh_sinh(|a| Ok(a.x.square()), w, &tol).unwrap();
        let want = HPReal::from_rational(&rat(2, 3), w);
        assert!((&r.value - &want).abs().log2_abs() < -130.0);
        // int_{-1}^{1} dx / (1 + x^2) = pi/2
        let r = tanh_sinh(|a| Ok((HPReal::one(w) + a.x.square()).recip()), w, &tol).unwrap();
        let want = pi_prec(w).mul_pow2(-1);
        assert!((&r.value - &want).abs().log2_abs() < -130.0);
    }

    #[test]
    fn endpoint_singularity() {
        // int_{-1}^{1} dx / sqrt(1 - x^2) = pi
        let w = 128;
        let tol = HPReal::pow2(-100, w);
        let r = tanh_sinh(|a| a.one_minus_x2().sqrt().map(|s| s.recip()), w, &tol).unwrap();
        assert!((&r.value - &pi_prec(w)).abs().log2_abs() < -95.0);
    }

    #[test]
    fn unreachable_tolerance_is_reported() {
        let w = 64;
        let tol = HPReal::pow2(-400, w);
        let e = tanh_sinh(|a| Ok(a.x.abs()), w, &tol).unwrap_err();
        assert!(matches!(e, Error::Precision { func: "tanh_sinh", .. }));
    }
}
